#ifndef SWARMSTAB_OBJECTIVE_HPP
#define SWARMSTAB_OBJECTIVE_HPP

#include <string>

#include "swarmstab/control.hpp"
#include "swarmstab/decision.hpp"
#include "swarmstab/lti.hpp"
#include "swarmstab/plant.hpp"

namespace swarmstab {

/// J = integral of t (|d_omega| + gamma1 |d_vm| + gamma2 |d_vdc|) over [0, t_sim].
struct ObjectiveWeights {
    double gamma1 = 1.0;
    double gamma2 = 0.5;
    double t_sim = 20.0;  ///< s
};

enum class DisturbanceKind { step, pulse, initial_condition };

struct Disturbance {
    DisturbanceKind kind = DisturbanceKind::step;
    std::string channel = "delta_pm";  ///< closed-loop input for step and pulse
    double magnitude = 0.1;            ///< pu
    double start = 1.0;                ///< s
    double duration = 0.0;             ///< s, pulse only
    std::string state = "x_omega";     ///< perturbed state for initial_condition
};

struct Scenario {
    std::string label;
    std::string plant_config_ref;
    PlantConfig plant;
    Disturbance disturbance;
    ObjectiveWeights weights;
    double dt = 1e-3;
    /// Controller used when nothing is tuned; also supplies the fixed
    /// constants (n_filter, tw, t2c, t4c) for tuned candidates.
    PidGains pid;
    StabilizerParams stabilizer;
    LoopWiring wiring;
    ControlLimits limits;
};

inline constexpr double penalty_cost = 1e6;
inline constexpr double divergence_limit = 1e6;

/// Throws ConfigError naming the offending field.
void check(const ObjectiveWeights& w);
void check(const Disturbance& d);
void check(const Scenario& s);

/// Tuned coordinates from the vector, fixed constants from the scenario.
std::pair<PidGains, StabilizerParams> controllers_from(const VectorX<double>& x, const Scenario& s);
VectorX<double> decision_from(const PidGains& pid, const StabilizerParams& stab);

/// Closed-loop external input signal for the scenario's disturbance.
LoopInput disturbance_input(const Disturbance& d, const std::vector<std::string>& input_names);

/// Closed-loop response of the scenario under the given controllers.
SimTrace<double> simulate(const Scenario& s, const StateSpace<double>& plant, const PidGains& pid,
                          const StabilizerParams& stab);

/// Trapezoidal ITAE of a trace holding delta_omega, delta_vm and delta_vdc.
double itae(const SimTrace<double>& trace, const ObjectiveWeights& w);

struct Evaluation {
    double cost = penalty_cost;
    double max_re_eig = 0.0;
    bool stable = false;
    bool diverged = false;
};

/// Cached plant; callable as a cost function. Thread-safe (no mutable state).
class ItaeObjective {
public:
    explicit ItaeObjective(Scenario scenario);

    double operator()(const VectorX<double>& x) const { return evaluate(x).cost; }
    Evaluation evaluate(const VectorX<double>& x) const;
    Evaluation evaluate(const PidGains& pid, const StabilizerParams& stab) const;

    const Scenario& scenario() const { return scenario_; }
    const StateSpace<double>& plant() const { return plant_; }

private:
    Scenario scenario_;
    StateSpace<double> plant_;
};

/// Penalized ITAE of a decision vector; throws std::invalid_argument if out of bounds.
double evaluate(const DecisionVector& dv, const Scenario& s);

}  // namespace swarmstab

#endif  // SWARMSTAB_OBJECTIVE_HPP
