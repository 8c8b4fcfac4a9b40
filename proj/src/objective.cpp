#include "swarmstab/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "swarmstab/errors.hpp"
#include "swarmstab/metrics.hpp"

namespace swarmstab {

void check(const ObjectiveWeights& w) {
    if (!(w.gamma1 >= 0.0) || !std::isfinite(w.gamma1)) throw ConfigError("weights.gamma1", "must be >= 0");
    if (!(w.gamma2 >= 0.0) || !std::isfinite(w.gamma2)) throw ConfigError("weights.gamma2", "must be >= 0");
    if (!(w.t_sim > 0.0) || !std::isfinite(w.t_sim)) throw ConfigError("weights.t_sim", "must be positive");
}

void check(const Disturbance& d) {
    if (!std::isfinite(d.magnitude)) throw ConfigError("disturbance.magnitude", "must be finite");
    if (!std::isfinite(d.start) || d.start < 0.0) throw ConfigError("disturbance.start", "must be >= 0");
    if (d.kind == DisturbanceKind::pulse && !(d.duration > 0.0 && std::isfinite(d.duration)))
        throw ConfigError("disturbance.duration", "must be positive for a pulse");
}

void check(const Scenario& s) {
    check(s.weights);
    check(s.disturbance);
    check(s.pid);
    check(s.stabilizer);
    if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw ConfigError("dt", "must be positive");
    if (s.weights.t_sim < s.dt) throw ConfigError("weights.t_sim", "must be at least dt");
}

std::pair<PidGains, StabilizerParams> controllers_from(const VectorX<double>& x, const Scenario& s) {
    if (x.size() != decision_dim) throw std::invalid_argument("decision vector must have 6 entries");
    PidGains pid = s.pid;
    pid.kp = x(0);
    pid.ki = x(1);
    pid.kd = x(2);
    StabilizerParams stab = s.stabilizer;
    stab.kc = x(3);
    stab.t1c = x(4);
    stab.t3c = x(5);
    return {pid, stab};
}

VectorX<double> decision_from(const PidGains& pid, const StabilizerParams& stab) {
    VectorX<double> x(decision_dim);
    x << pid.kp, pid.ki, pid.kd, stab.kc, stab.t1c, stab.t3c;
    return x;
}

LoopInput disturbance_input(const Disturbance& d, const std::vector<std::string>& input_names) {
    if (d.kind == DisturbanceKind::initial_condition) return [](double, VectorX<double>& u) { u.setZero(); };
    const auto idx = detail::find_name(input_names, d.channel);
    if (idx < 0) throw ConfigError("disturbance.channel", "no closed-loop input named '" + d.channel + "'");
    const double mag = d.magnitude;
    const double t0 = d.start;
    if (d.kind == DisturbanceKind::step)
        return [=](double t, VectorX<double>& u) {
            u.setZero();
            if (t >= t0) u(idx) = mag;
        };
    const double t1 = d.start + d.duration;
    return [=](double t, VectorX<double>& u) {
        u.setZero();
        if (t >= t0 && t < t1) u(idx) = mag;
    };
}

namespace {

VectorX<double> initial_state(const Scenario& s, const StateSpace<double>& closed) {
    VectorX<double> x0 = VectorX<double>::Zero(closed.states());
    if (s.disturbance.kind == DisturbanceKind::initial_condition) {
        const auto i = closed.state_index(s.disturbance.state);
        if (i < 0) throw ConfigError("disturbance.state", "no closed-loop state named '" + s.disturbance.state + "'");
        x0(i) = s.disturbance.magnitude;
    }
    return x0;
}

SimTrace<double> run(const Scenario& s, const StateSpace<double>& plant, const StateSpace<double>& closed,
                     const PidGains& pid, const StabilizerParams& stab) {
    const auto input = disturbance_input(s.disturbance, closed.input_names);
    IntegrateOptions<double> opts;
    opts.divergence_limit = divergence_limit;
    return simulate_closed_loop(plant, pid, stab, s.wiring, s.limits, initial_state(s, closed), input,
                                s.weights.t_sim, s.dt, opts);
}

}  // namespace

SimTrace<double> simulate(const Scenario& s, const StateSpace<double>& plant, const PidGains& pid,
                          const StabilizerParams& stab) {
    check(s);
    const auto closed = assemble_closed_loop(plant, pid, stab, s.wiring);
    return run(s, plant, closed, pid, stab);
}

double itae(const SimTrace<double>& trace, const ObjectiveWeights& w) {
    const VectorX<double> combined = trace.channel(plant_signals::delta_omega).cwiseAbs() +
                                     w.gamma1 * trace.channel(plant_signals::delta_vm).cwiseAbs() +
                                     w.gamma2 * trace.channel(plant_signals::delta_vdc).cwiseAbs();
    return time_weighted_abs_integral(combined, trace.dt());
}

ItaeObjective::ItaeObjective(Scenario scenario) : scenario_(std::move(scenario)) {
    check(scenario_);
    plant_ = build_plant(scenario_.plant);
}

Evaluation ItaeObjective::evaluate(const VectorX<double>& x) const {
    const auto [pid, stab] = controllers_from(x, scenario_);
    return evaluate(pid, stab);
}

Evaluation ItaeObjective::evaluate(const PidGains& pid, const StabilizerParams& stab) const {
    Evaluation ev;
    try {
        const auto closed = assemble_closed_loop(plant_, pid, stab, scenario_.wiring);
        ev.max_re_eig = spectral_abscissa(closed.a, "closed-loop state matrix");
        ev.stable = ev.max_re_eig < 0.0;
        if (!ev.stable) return ev;
        const auto trace = run(scenario_, plant_, closed, pid, stab);
        const double j = itae(trace, scenario_.weights);
        ev.cost = std::isfinite(j) ? std::min(j, penalty_cost) : penalty_cost;
    } catch (const DivergedError&) {
        ev.diverged = true;
        ev.cost = penalty_cost;
    } catch (const AlgebraicLoopError&) {
        ev.stable = false;
        ev.cost = penalty_cost;
    } catch (const ConvergenceError&) {
        ev.stable = false;
        ev.cost = penalty_cost;
    }
    return ev;
}

double evaluate(const DecisionVector& dv, const Scenario& s) {
    if (!dv.bounds.contains(dv.values)) throw std::invalid_argument("decision vector outside its bounds");
    return ItaeObjective(s)(dv.values);
}

}  // namespace swarmstab
