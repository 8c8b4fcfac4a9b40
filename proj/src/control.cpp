#include "swarmstab/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "swarmstab/errors.hpp"

namespace swarmstab {

namespace {

void require_finite(const char* field, double v) {
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

void require_positive(const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive and finite");
}

Eigen::Index plant_output(const StateSpace<double>& plant, const std::string& name) {
    const auto i = plant.output_index(name);
    if (i < 0) throw ConfigError("wiring", "plant has no output named '" + name + "'");
    return i;
}

Eigen::Index plant_input(const StateSpace<double>& plant, const std::string& name) {
    const auto i = plant.input_index(name);
    if (i < 0) throw ConfigError("wiring", "plant has no input named '" + name + "'");
    return i;
}

double clip(double v, const std::optional<double>& limit) {
    return limit ? std::clamp(v, -*limit, *limit) : v;
}

}  // namespace

void check(const PidGains& g) {
    require_finite("pid.kp", g.kp);
    require_finite("pid.ki", g.ki);
    require_finite("pid.kd", g.kd);
    require_positive("pid.n_filter", g.n_filter);
}

void check(const StabilizerParams& s) {
    require_finite("stabilizer.kc", s.kc);
    require_positive("stabilizer.tw", s.tw);
    require_positive("stabilizer.t1c", s.t1c);
    require_positive("stabilizer.t2c", s.t2c);
    require_positive("stabilizer.t3c", s.t3c);
    require_positive("stabilizer.t4c", s.t4c);
}

StateSpace<double> pid_realize(const PidGains& g, std::string input, std::string output) {
    check(g);
    const double n = g.n_filter;
    // x_i' = e, x_f' = n (e - x_f);  kd s n/(s + n) = kd n - kd n^2/(s + n)
    Eigen::MatrixXd a(2, 2), b(2, 1), c(1, 2), d(1, 1);
    a << 0.0, 0.0, 0.0, -n;
    b << 1.0, n;
    c << g.ki, -g.kd * n;
    d << g.kp + g.kd * n;
    return make_state_space<double>(std::move(a), std::move(b), std::move(c), std::move(d),
                                    {"pid_integral", "pid_filter"}, {std::move(input)}, {std::move(output)});
}

StateSpace<double> stabilizer_realize(const StabilizerParams& s, std::string input, std::string output) {
    check(s);
    auto first_order = [](double a, double b, double c, double d, const char* state) {
        return make_state_space<double>(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, b),
                                        Eigen::MatrixXd::Constant(1, 1, c), Eigen::MatrixXd::Constant(1, 1, d),
                                        {state}, {"in"}, {"out"});
    };
    // (1 + s t1)/(1 + s t2) = t1/t2 + (1 - t1/t2)/(1 + s t2)
    auto lead_lag = [&](double t1, double t2, const char* state) {
        return first_order(-1.0 / t2, 1.0 / t2, 1.0 - t1 / t2, t1 / t2, state);
    };
    const auto washout = first_order(-1.0 / s.tw, 1.0 / s.tw, -1.0, 1.0, "stab_washout");
    auto g = series(series(washout, lead_lag(s.t1c, s.t2c, "stab_lead1")), lead_lag(s.t3c, s.t4c, "stab_lead2"));
    g.c *= s.kc;
    g.d *= s.kc;
    g.input_names = {std::move(input)};
    g.output_names = {std::move(output)};
    validate(g);
    return g;
}

StateSpace<double> assemble_closed_loop(const StateSpace<double>& plant, const PidGains& pid,
                                        const StabilizerParams& stab, const LoopWiring& wiring) {
    validate(plant);
    plant_output(plant, wiring.pid_input);
    plant_output(plant, wiring.stabilizer_input);
    plant_input(plant, wiring.pid_drives);
    plant_input(plant, wiring.stabilizer_drives);
    if (wiring.pid_drives == wiring.stabilizer_drives)
        throw ConfigError("wiring", "both controllers drive the same plant input");
    require_finite("wiring.stabilizer_sign", wiring.stabilizer_sign);

    // e = delta_vm_ref - measurement
    Eigen::MatrixXd sum(1, 2);
    sum << 1.0, -1.0;
    const auto junction = static_gain<double>(sum, {loop_signals::vm_ref, "pid_measurement"}, {"pid_error"});

    auto pid_block = pid_realize(pid, "pid_error_in", loop_signals::u_pid);
    auto stab_block = stabilizer_realize(stab, "stab_in", loop_signals::u_stab);
    stab_block.c *= wiring.stabilizer_sign;
    stab_block.d *= wiring.stabilizer_sign;

    std::vector<StateSpace<double>> blocks{plant, junction};
    if (wiring.stabilizer_first) {
        blocks.push_back(std::move(stab_block));
        blocks.push_back(std::move(pid_block));
    } else {
        blocks.push_back(std::move(pid_block));
        blocks.push_back(std::move(stab_block));
    }
    const std::vector<Connection> wires{
        {"pid_measurement", wiring.pid_input},
        {"pid_error_in", "pid_error"},
        {"stab_in", wiring.stabilizer_input},
        {wiring.pid_drives, loop_signals::u_pid},
        {wiring.stabilizer_drives, loop_signals::u_stab},
    };
    InterconnectOptions opts;
    opts.loops = AlgebraicLoops::solve;
    opts.outputs = plant.output_names;
    opts.outputs.push_back(loop_signals::u_pid);
    opts.outputs.push_back(loop_signals::u_stab);
    return feedback_interconnect(blocks, wires, opts);
}

SimTrace<double> simulate_closed_loop(const StateSpace<double>& plant, const PidGains& pid,
                                      const StabilizerParams& stab, const LoopWiring& wiring,
                                      const ControlLimits& limits, const VectorX<double>& x0, const LoopInput& input,
                                      double t_sim, double dt, const IntegrateOptions<double>& opts) {
    for (const auto& [field, lim] : {std::pair{"limits.pid", limits.pid}, std::pair{"limits.stabilizer", limits.stabilizer}})
        if (lim && !(*lim > 0.0)) throw ConfigError(field, "must be positive");

    const auto closed = assemble_closed_loop(plant, pid, stab, wiring);
    if (!limits.any()) return integrate(closed, x0, input, t_sim, dt, opts);

    // Saturated loop. The closed-loop model fixes the state layout and the
    // external input order; the field below re-evaluates the controllers with
    // clipped outputs.
    if (wiring.stabilizer_first)
        throw ConfigError("wiring.stabilizer_first", "not supported together with output limits");
    if (x0.size() != closed.states()) throw std::invalid_argument("initial state length differs from state count");
    const auto steps = step_count(t_sim, dt);

    const auto pid_block = pid_realize(pid);
    auto stab_block = stabilizer_realize(stab);
    stab_block.c *= wiring.stabilizer_sign;
    stab_block.d *= wiring.stabilizer_sign;

    const auto np = plant.states();
    const auto i_vm = plant_output(plant, wiring.pid_input);
    const auto i_w = plant_output(plant, wiring.stabilizer_input);
    const auto j_c = plant_input(plant, wiring.pid_drives);
    const auto j_phi = plant_input(plant, wiring.stabilizer_drives);
    if (plant.d(i_w, j_c) != 0.0 || plant.d(i_w, j_phi) != 0.0)
        throw ConfigError("wiring.stabilizer_input", "must not have feedthrough from the controlled inputs when limits are set");

    // External inputs of the closed loop: the plant's unconnected inputs, then the reference.
    std::vector<Eigen::Index> ext_to_plant;
    for (Eigen::Index j = 0; j < plant.inputs(); ++j)
        if (j != j_c && j != j_phi) ext_to_plant.push_back(j);
    const auto i_ref = static_cast<Eigen::Index>(ext_to_plant.size());

    const double kv = plant.d(i_vm, j_c);
    const double dp = pid_block.d(0, 0);
    const double loop_gain = dp * kv;
    if (!(1.0 + loop_gain > 0.0))
        throw AlgebraicLoopError({"pid_error", loop_signals::u_pid, wiring.pid_input, "pid_error"});

    struct Signals {
        VectorX<double> u_plant;
        double e = 0, u_pid = 0, u_stab = 0, y_w = 0;
    };
    VectorX<double> w(closed.inputs());
    auto evaluate = [&](const VectorX<double>& z, const VectorX<double>& ext) {
        Signals s;
        s.u_plant = VectorX<double>::Zero(plant.inputs());
        for (std::size_t e = 0; e < ext_to_plant.size(); ++e) s.u_plant(ext_to_plant[e]) = ext(static_cast<Eigen::Index>(e));
        const auto xp = z.head(np);
        const auto xc = z.segment(np, 2);
        const auto xs = z.tail(3);

        s.y_w = plant.c.row(i_w).dot(xp) + plant.d.row(i_w).dot(s.u_plant);
        s.u_stab = clip(stab_block.c.row(0).dot(xs) + stab_block.d(0, 0) * s.y_w, limits.stabilizer);
        s.u_plant(j_phi) = s.u_stab;

        // u = sat(g - k u) with 1 + k > 0 is solved by clipping the unsaturated root.
        const double vm_base = plant.c.row(i_vm).dot(xp) + plant.d.row(i_vm).dot(s.u_plant);
        const double g = pid_block.c.row(0).dot(xc) + dp * (ext(i_ref) - vm_base);
        const double u = clip(g / (1.0 + loop_gain), limits.pid);
        s.u_pid = u;
        s.u_plant(j_c) = u;
        s.e = ext(i_ref) - (vm_base + kv * u);
        return s;
    };
    auto field = [&](double t, const VectorX<double>& z) {
        input(t, w);
        const auto s = evaluate(z, w);
        VectorX<double> dz(z.size());
        dz.head(np) = plant.a * z.head(np) + plant.b * s.u_plant;
        dz.segment(np, 2) = pid_block.a * z.segment(np, 2) + pid_block.b.col(0) * s.e;
        dz.tail(3) = stab_block.a * z.tail(3) + stab_block.b.col(0) * s.y_w;
        return dz;
    };

    std::vector<std::string> names = closed.state_names;
    names.insert(names.end(), closed.output_names.begin(), closed.output_names.end());
    SimTrace<double> trace(dt, steps + 1, std::move(names));
    auto& out = trace.values();
    const auto n = closed.states();
    VectorX<double> z = x0;
    auto record = [&](Eigen::Index k) {
        if (!z.allFinite() || (n > 0 && z.cwiseAbs().maxCoeff() > opts.divergence_limit))
            throw DivergedError(static_cast<std::size_t>(k));
        input(static_cast<double>(k) * dt, w);
        const auto s = evaluate(z, w);
        out.row(k).head(n) = z.transpose();
        VectorX<double> y(closed.outputs());
        y.head(plant.outputs()) = plant.c * z.head(np) + plant.d * s.u_plant;
        y(plant.outputs()) = s.u_pid;
        y(plant.outputs() + 1) = s.u_stab;
        out.row(k).tail(y.size()) = y.transpose();
    };
    record(0);
    for (Eigen::Index k = 0; k < steps; ++k) {
        z = rk4_step(field, static_cast<double>(k) * dt, z, dt);
        record(k + 1);
    }
    return trace;
}

}  // namespace swarmstab
