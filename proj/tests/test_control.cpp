#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "swarmstab/config_io.hpp"
#include "swarmstab/control.hpp"
#include "swarmstab/errors.hpp"
#include "swarmstab/plant.hpp"

using namespace swarmstab;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

StateSpace<double> nominal_plant() { return build_plant(load_plant_config(SWARMSTAB_CONFIG_DIR "/nominal.json")); }
StateSpace<double> heavy_plant() { return build_plant(load_plant_config(SWARMSTAB_CONFIG_DIR "/heavy.json")); }

const PidGains baseline_pid{1.0, 5.0, 0.0, 100.0};
const StabilizerParams baseline_stab{1.0, 10.0, 0.2, 0.05, 0.2, 0.05};

std::vector<cd> spectrum(const Mat& a) {
    const auto ev = eigenvalues(a);
    return {ev.data(), ev.data() + ev.size()};
}

cd tf(const StateSpace<double>& g, cd s) { return oracle::transfer(g.a, g.b, g.c, g.d, s); }

auto unit_step = [](double, Vec& u) { u.setConstant(1.0); };

auto pm_step(double t0 = 0.5, double mag = 0.1) {
    return [=](double t, Vec& u) {
        u.setZero();
        if (t >= t0) u(0) = mag;
    };
}

}  // namespace

TEST_CASE("proportional-only PID is a pure gain") {
    const auto g = pid_realize({1.0, 0.0, 0.0});
    const auto tr = integrate(g, Vec::Zero(2).eval(), [](double, Vec& u) { u(0) = 0.5; }, 2.0, 1e-3);
    CHECK(tr.channel("u_pid").cwiseAbs().maxCoeff() == doctest::Approx(0.5));
    CHECK(tr.channel("u_pid").minCoeff() == doctest::Approx(0.5));
}

TEST_CASE("integral-only PID ramps") {
    const auto g = pid_realize({0.0, 2.0, 0.0});
    const auto tr = integrate(g, Vec::Zero(2).eval(), unit_step, 3.0, 1e-3);
    CHECK(std::abs(tr.channel("u_pid")(tr.samples() - 1) - 6.0) <= 1e-4);
}

TEST_CASE("zero error gives zero PID output") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> ud(0, 100);
    for (int k = 0; k < 10; ++k) {
        const auto g = pid_realize({ud(gen), ud(gen), ud(gen)});
        const auto tr = integrate(g, Vec::Zero(2).eval(), zero_input, 1.0, 1e-3);
        CHECK(tr.channel("u_pid").isZero(0.0));
    }
}

TEST_CASE("PID realization has the filtered-derivative transfer function") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> ud(0, 100);
    for (int k = 0; k < 20; ++k) {
        const PidGains p{ud(gen), ud(gen), ud(gen), 10 + ud(gen)};
        const auto g = pid_realize(p);
        for (double w : {0.1, 1.0, 7.0, 50.0}) {
            const cd s(0, w);
            const cd expected = p.kp + p.ki / s + p.kd * s * p.n_filter / (s + p.n_filter);
            CHECK(std::abs(tf(g, s) - expected) <= 1e-9 * std::abs(expected));
        }
    }
}

TEST_CASE("filtered derivative matches kd s within 1% up to a tenth of the filter corner") {
    for (double n : {20.0, 100.0, 1000.0}) {
        const auto g = pid_realize({0.0, 0.0, 3.0, n});
        for (int i = 0; i < 20; ++i) {
            const double w = 0.01 * std::pow(n / 10 / 0.01, i / 19.0);
            const double ratio = std::abs(tf(g, cd(0, w))) / (3.0 * w);
            CHECK(ratio <= 1.0);
            CHECK(ratio >= 0.99);
        }
    }
}

TEST_CASE("PID frequency response matches the ideal controller in the low band") {
    // kp = 1, ki = 5, kd = 0.5, n = 100 over [0.01, 1] rad/s
    const PidGains p{1.0, 5.0, 0.5, 100.0};
    const auto g = pid_realize(p);
    for (int i = 0; i < 20; ++i) {
        const double w = 0.01 * std::pow(100.0, i / 19.0);
        const cd s(0, w);
        const double ideal = std::abs(p.kp + p.ki / s + p.kd * s);
        CHECK(std::abs(std::abs(tf(g, s)) - ideal) <= 0.01 * ideal);
    }
}

TEST_CASE("PID frequency response approaches the ideal as the filter coefficient grows") {
    const cd s(0, 5.0);
    double prev = INFINITY;
    for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
        const PidGains p{2.0, 1.0, 4.0, n};
        const cd ideal = p.kp + p.ki / s + p.kd * s;
        const double err = std::abs(tf(pid_realize(p), s) - ideal) / std::abs(ideal);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("stabilizer transfer function") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> tc(0.01, 1.0);
    for (int k = 0; k < 20; ++k) {
        const StabilizerParams p{tc(gen) * 50, 10.0, tc(gen), tc(gen), tc(gen), tc(gen)};
        const auto g = stabilizer_realize(p);
        CHECK(g.states() == 3);
        for (double w : {0.01, 0.5, 3.0, 40.0}) {
            const cd s(0, w);
            const cd expected = p.kc * (s * p.tw / (1.0 + s * p.tw)) * ((1.0 + s * p.t1c) / (1.0 + s * p.t2c)) *
                                ((1.0 + s * p.t3c) / (1.0 + s * p.t4c));
            CHECK(std::abs(tf(g, s) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("stabilizer initial step response") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> tc(0.01, 1.0);
    std::vector<StabilizerParams> sets{baseline_stab};
    for (int k = 0; k < 20; ++k) sets.push_back({tc(gen) * 100, 10.0, tc(gen), tc(gen), tc(gen), tc(gen)});
    for (const auto& p : sets) {
        const auto tr = integrate(stabilizer_realize(p), Vec::Zero(3).eval(), unit_step, 0.01, 1e-4);
        const double expected = p.kc * (p.t1c / p.t2c) * (p.t3c / p.t4c);
        CHECK(std::abs(tr.channel("u_stab")(0) - expected) <= 1e-3);
    }
}

TEST_CASE("zero stabilizer gain gives zero output") {
    StabilizerParams p = baseline_stab;
    p.kc = 0.0;
    const auto tr = integrate(stabilizer_realize(p), Vec::Zero(3).eval(), unit_step, 5.0, 1e-3);
    CHECK(tr.channel("u_stab").isZero(0.0));
}

TEST_CASE("property: washout rejects a constant input") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> kc(0.0, 100.0);
    std::uniform_real_distribution<double> tc(0.01, 1.0);
    std::uniform_real_distribution<double> tw(2.0, 20.0);
    for (int k = 0; k < 100; ++k) {
        const StabilizerParams p{kc(gen), tw(gen), tc(gen), tc(gen), tc(gen), tc(gen)};
        const double horizon = 30.0 * p.tw;
        const auto tr = integrate(stabilizer_realize(p), Vec::Zero(3).eval(), unit_step, horizon, 0.005);
        CHECK(std::abs(tr.channel("u_stab")(tr.samples() - 1)) < 1e-4);
        // and the exact state agrees
        const auto g = stabilizer_realize(p);
        const Vec x = oracle::lti_hold(g.a, g.b, Vec::Zero(3), Vec::Ones(1), horizon);
        CHECK(std::abs((g.c * x)(0) + g.d(0, 0)) < 1e-4);
    }
}

TEST_CASE("controller parameter checks name the field") {
    try {
        pid_realize({1, 1, 1, 0.0});
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "pid.n_filter");
    }
    try {
        stabilizer_realize({1, 10, 0.2, -0.05, 0.2, 0.05});
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "stabilizer.t2c");
    }
    CHECK_THROWS_AS(pid_realize({NAN, 0, 0}), ConfigError);
}

TEST_CASE("closed loop has ten states and the documented signals") {
    const auto cl = assemble_closed_loop(nominal_plant(), baseline_pid, baseline_stab);
    CHECK(cl.states() == 10);
    CHECK(cl.input_names == std::vector<std::string>{"delta_pm", "delta_vref", "delta_vm_ref"});
    CHECK(cl.output_names ==
          std::vector<std::string>{"delta_omega", "delta_vm", "delta_vdc", "delta_delta", "u_pid", "u_stab"});
}

TEST_CASE("zero controller gains keep the plant eigenvalues") {
    for (const auto& plant : {nominal_plant(), heavy_plant()}) {
        const PidGains pid{0, 0, 0, 100};
        StabilizerParams stab = baseline_stab;
        stab.kc = 0.0;
        stab.t4c = 0.04;  // t2c = t4c would give a defective double pole
        const auto cl = assemble_closed_loop(plant, pid, stab);
        auto expected = spectrum(plant.a);
        for (double z : {0.0, -100.0, -1.0 / stab.tw, -1.0 / stab.t2c, -1.0 / stab.t4c}) expected.push_back(z);
        CHECK(oracle::multiset_distance(spectrum(cl.a), expected) < 1e-8);
    }
}

TEST_CASE("baseline controller stabilizes both shipped plants") {
    for (const auto& plant : {nominal_plant(), heavy_plant()})
        CHECK(spectral_abscissa(assemble_closed_loop(plant, baseline_pid, baseline_stab).a) < 0.0);
}

TEST_CASE("closed-loop spectrum does not depend on block order") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> g(0, 20);
    std::uniform_real_distribution<double> tc(0.01, 1.0);
    const auto plant = nominal_plant();
    for (int k = 0; k < 20; ++k) {
        const PidGains pid{g(gen), g(gen), g(gen) / 10};
        const StabilizerParams stab{g(gen), 10, tc(gen), 0.05, tc(gen), 0.05};
        LoopWiring w;
        const auto a = assemble_closed_loop(plant, pid, stab, w);
        w.stabilizer_first = true;
        const auto b = assemble_closed_loop(plant, pid, stab, w);
        const auto ea = spectrum(a.a);
        double scale = 1.0;
        for (const auto& z : ea) scale = std::max(scale, std::abs(z));
        CHECK(oracle::multiset_distance(ea, spectrum(b.a)) <= 1e-9 * scale);
    }
}

TEST_CASE("zero stabilizer gain reduces the loop to PID-only dynamics") {
    const auto plant = nominal_plant();
    StabilizerParams stab = baseline_stab;
    stab.kc = 0.0;
    const auto tr = simulate_closed_loop(plant, baseline_pid, stab, {}, {}, Vec::Zero(10), pm_step(), 10.0, 1e-3);
    CHECK(tr.channel("u_stab").isZero(0.0));

    // plant + PID alone, wired by hand
    Mat sum(1, 2);
    sum << 1, -1;
    const auto junction = static_gain<double>(sum, {"ref", "meas"}, {"err"});
    InterconnectOptions opts;
    opts.loops = AlgebraicLoops::solve;
    const auto pid_only = feedback_interconnect<double>(
        {plant, junction, pid_realize(baseline_pid, "e_in", "u")},
        {{"meas", "delta_vm"}, {"e_in", "err"}, {"delta_c", "u"}}, opts);
    // remaining inputs: delta_pm, delta_vref, delta_phi, ref
    const auto ref = integrate(pid_only, Vec::Zero(7).eval(), pm_step(), 10.0, 1e-3);
    for (const char* ch : {"delta_omega", "delta_vm", "delta_vdc", "delta_delta"}) {
        const Vec d = tr.channel(ch) - ref.channel(ch);
        CHECK(d.cwiseAbs().maxCoeff() <= 1e-12 + 1e-9 * ref.channel(ch).cwiseAbs().maxCoeff());
    }
}

TEST_CASE("controls that do not reach the plant leave the open-loop response") {
    auto plant = nominal_plant();
    for (const char* in : {"delta_c", "delta_phi"}) {
        plant.b.col(plant.input_index(in)).setZero();
        plant.d.col(plant.input_index(in)).setZero();
    }
    const auto open = integrate(plant, Vec::Zero(5).eval(), pm_step(), 10.0, 1e-3);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> g(0, 50);
    for (int k = 0; k < 5; ++k) {
        const PidGains pid{g(gen), g(gen), g(gen)};
        const StabilizerParams stab{g(gen), 10, 0.3, 0.05, 0.4, 0.05};
        const auto cl = simulate_closed_loop(plant, pid, stab, {}, {}, Vec::Zero(10), pm_step(), 10.0, 1e-3);
        for (const char* ch : {"delta_omega", "delta_vm", "delta_vdc", "delta_delta"}) {
            const Vec d = cl.channel(ch) - open.channel(ch);
            CHECK(d.cwiseAbs().maxCoeff() <= 1e-9 * open.channel(ch).cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("wide output limits reproduce the linear loop") {
    const auto plant = nominal_plant();
    const auto linear =
        simulate_closed_loop(plant, baseline_pid, baseline_stab, {}, {}, Vec::Zero(10), pm_step(), 10.0, 1e-3);
    const ControlLimits wide{1e6, 1e6};
    const auto sat =
        simulate_closed_loop(plant, baseline_pid, baseline_stab, {}, wide, Vec::Zero(10), pm_step(), 10.0, 1e-3);
    REQUIRE(sat.names() == linear.names());
    const Mat d = sat.values() - linear.values();
    CHECK(d.cwiseAbs().maxCoeff() <= 1e-9 * linear.values().cwiseAbs().maxCoeff());
}

TEST_CASE("tight output limits clip the controller outputs") {
    const auto plant = nominal_plant();
    const ControlLimits lim{0.002, 0.001};
    const PidGains pid{20, 50, 0};
    const StabilizerParams stab{30, 10, 0.5, 0.05, 0.5, 0.05};
    const auto tr = simulate_closed_loop(plant, pid, stab, {}, lim, Vec::Zero(10), pm_step(0.5, 0.5), 5.0, 1e-3);
    CHECK(tr.channel("u_pid").cwiseAbs().maxCoeff() <= 0.002);
    CHECK(tr.channel("u_stab").cwiseAbs().maxCoeff() <= 0.001);
    CHECK(tr.channel("u_stab").cwiseAbs().maxCoeff() == doctest::Approx(0.001));
    CHECK_THROWS_AS(simulate_closed_loop(plant, pid, stab, {}, ControlLimits{-1.0, {}}, Vec::Zero(10), pm_step(),
                                         1.0, 1e-3),
                    ConfigError);
}

TEST_CASE("closed-loop wiring errors") {
    const auto plant = nominal_plant();
    LoopWiring w;
    w.pid_input = "nope";
    CHECK_THROWS_AS(assemble_closed_loop(plant, baseline_pid, baseline_stab, w), ConfigError);
    w = {};
    w.stabilizer_drives = "delta_c";
    CHECK_THROWS_AS(assemble_closed_loop(plant, baseline_pid, baseline_stab, w), ConfigError);
}
