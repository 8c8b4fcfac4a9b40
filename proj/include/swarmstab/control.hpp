#ifndef SWARMSTAB_CONTROL_HPP
#define SWARMSTAB_CONTROL_HPP

#include <functional>
#include <optional>
#include <string>

#include "swarmstab/lti.hpp"

namespace swarmstab {

/// kp + ki/s + kd s / (1 + s/n_filter)
struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double n_filter = 100.0;
};

/// kc * (s tw / (1 + s tw)) * ((1 + s t1c) / (1 + s t2c)) * ((1 + s t3c) / (1 + s t4c))
struct StabilizerParams {
    double kc = 0.0;
    double tw = 10.0;
    double t1c = 0.2;
    double t2c = 0.05;
    double t3c = 0.2;
    double t4c = 0.05;
};

/// Throw ConfigError on a violated invariant.
void check(const PidGains& g);
void check(const StabilizerParams& s);

/// States [pid_integral, pid_filter]; one input (the error), one output.
StateSpace<double> pid_realize(const PidGains& g, std::string input = "pid_error_in",
                               std::string output = "u_pid");

/// States [stab_washout, stab_lead1, stab_lead2]; one input, one output.
StateSpace<double> stabilizer_realize(const StabilizerParams& s, std::string input = "stab_in",
                                      std::string output = "u_stab");

/// Which plant signals the two controllers read and drive.
struct LoopWiring {
    std::string pid_input = "delta_vm";         ///< plant output regulated by the PID
    std::string stabilizer_input = "delta_omega";
    std::string pid_drives = "delta_c";         ///< plant input
    std::string stabilizer_drives = "delta_phi";
    /// Multiplies the stabilizer output before it reaches the plant.
    double stabilizer_sign = -1.0;
    /// Block order inside the composite (changes state order only).
    bool stabilizer_first = false;
};

/// Optional symmetric output limits; unset means unlimited.
struct ControlLimits {
    std::optional<double> pid;
    std::optional<double> stabilizer;

    bool any() const { return pid.has_value() || stabilizer.has_value(); }
};

namespace loop_signals {
inline constexpr const char* vm_ref = "delta_vm_ref";
inline constexpr const char* u_pid = "u_pid";
inline constexpr const char* u_stab = "u_stab";
}  // namespace loop_signals

/// Closed loop with pid_drives = PID(delta_vm_ref - pid_input) and
/// stabilizer_drives = sign * Stabilizer(stabilizer_input). External inputs
/// are the plant's remaining inputs followed by delta_vm_ref; outputs are the
/// plant outputs followed by u_pid and u_stab. The static loop through the
/// PID feedthrough is eliminated exactly.
StateSpace<double> assemble_closed_loop(const StateSpace<double>& plant, const PidGains& pid,
                                        const StabilizerParams& stab, const LoopWiring& wiring = {});

/// External input vector of the closed loop at time t.
using LoopInput = std::function<void(double, VectorX<double>&)>;

/// Simulates the closed loop. Without limits this is integrate() on
/// assemble_closed_loop(); with limits the controller outputs are clipped and
/// the loop is stepped with RK4 on the nonlinear field. Channel names match
/// in both cases.
SimTrace<double> simulate_closed_loop(const StateSpace<double>& plant, const PidGains& pid,
                                      const StabilizerParams& stab, const LoopWiring& wiring,
                                      const ControlLimits& limits, const VectorX<double>& x0, const LoopInput& input,
                                      double t_sim, double dt, const IntegrateOptions<double>& opts = {});

}  // namespace swarmstab

#endif  // SWARMSTAB_CONTROL_HPP
