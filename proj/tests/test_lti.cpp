#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "swarmstab/errors.hpp"
#include "swarmstab/lti.hpp"

using namespace swarmstab;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace {

StateSpace<double> scalar_system(double a, double b = 0.0, double c = 1.0, double d = 0.0) {
    return make_state_space<double>(Mat::Constant(1, 1, a), Mat::Constant(1, 1, b), Mat::Constant(1, 1, c),
                                    Mat::Constant(1, 1, d), {"x"}, {"u"}, {"y"});
}

std::vector<std::complex<double>> as_list(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

StateSpace<double> random_system(std::mt19937_64& gen, int n, int m, int p) {
    std::normal_distribution<double> nd;
    Mat a(n, n), b(n, m), c(p, n), d(p, m);
    for (auto* mat : {&a, &b, &c, &d})
        for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = nd(gen);
    a -= 3.0 * Mat::Identity(n, n);
    return make_state_space<double>(a, b, c, d);
}

}  // namespace

TEST_CASE("rk4 on decay matches exp(-1) and converges at fourth order") {
    const auto ss = scalar_system(-1.0);
    const Vec x0 = Vec::Constant(1, 1.0);
    auto err_at = [&](double dt) {
        const auto tr = integrate(ss, x0, zero_input, 1.0, dt);
        CHECK(tr.samples() == std::llround(1.0 / dt) + 1);
        return std::abs(tr.channel("x")(tr.samples() - 1) - std::exp(-1.0));
    };
    const double e1 = err_at(0.01);
    const double e2 = err_at(0.005);
    CHECK(e1 <= 1e-6);
    CHECK(std::abs(std::exp(-1.0) - 0.3678794) < 1e-6);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("zero state and zero input stay exactly zero") {
    std::mt19937_64 gen(7);
    for (int k = 0; k < 10; ++k) {
        const auto ss = random_system(gen, 4, 2, 3);
        const auto tr = integrate(ss, Vec::Zero(4).eval(), zero_input, 1.0, 0.01);
        CHECK(tr.values().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("rotation returns to its start after one period") {
    Mat a(2, 2);
    a << 0, 1, -1, 0;
    const auto ss = make_state_space<double>(a, Mat::Zero(2, 1), Mat::Identity(2, 2), Mat::Zero(2, 1));
    const double period = 2 * std::numbers::pi;
    const auto tr = integrate(ss, Vec::Unit(2, 0).eval(), zero_input, period, period / 6283.0);
    const auto last = tr.samples() - 1;
    CHECK(tr.channel("x0")(last) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(tr.channel("x1")(last)) < 1e-5);
}

TEST_CASE("trace grid is uniform and names states then outputs") {
    const auto ss = scalar_system(-2.0, 1.0, 3.0, 0.5);
    const auto tr = integrate(ss, Vec::Constant(1, 1.0).eval(), [](double, Vec& u) { u(0) = 1.0; }, 0.5, 0.1);
    REQUIRE(tr.samples() == 6);
    for (Eigen::Index k = 0; k < tr.samples(); ++k) CHECK(tr.time(k) == static_cast<double>(k) * 0.1);
    CHECK(tr.names() == std::vector<std::string>{"x", "y"});
    for (Eigen::Index k = 0; k < tr.samples(); ++k)
        CHECK(tr.channel("y")(k) == doctest::Approx(3.0 * tr.channel("x")(k) + 0.5));
}

TEST_CASE("rk4 is exact for cubic inputs on an integrator") {
    const auto ss = scalar_system(0.0, 1.0);
    const auto tr = integrate(ss, Vec::Zero(1).eval(), [](double t, Vec& u) { u(0) = t * t * t; }, 1.0, 0.1);
    CHECK(tr.channel("x")(tr.samples() - 1) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("integrate agrees with the exact solution on random stable systems") {
    std::mt19937_64 gen(11);
    for (int k = 0; k < 20; ++k) {
        const auto ss = random_system(gen, 5, 2, 2);
        Vec x0 = Vec::Random(5);
        Vec u(2);
        u << 0.3, -0.7;
        const auto tr = integrate(ss, x0, [&](double, Vec& v) { v = u; }, 2.0, 1e-3);
        const Vec exact = oracle::lti_hold(ss.a, ss.b, x0, u, 2.0);
        for (int i = 0; i < 5; ++i)
            CHECK(tr.channel(ss.state_names[i])(tr.samples() - 1) == doctest::Approx(exact(i)).epsilon(1e-9));
    }
}

TEST_CASE("integrate rejects bad arguments") {
    const auto ss = scalar_system(-1.0);
    const Vec x0 = Vec::Constant(1, 1.0);
    CHECK_THROWS_AS(integrate(ss, x0, zero_input, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(ss, x0, zero_input, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(integrate(ss, x0, zero_input, 0.001, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(integrate(ss, Vec::Zero(2).eval(), zero_input, 1.0, 0.01), std::invalid_argument);
}

TEST_CASE("divergence is reported with the step index") {
    const auto ss = scalar_system(50.0);
    IntegrateOptions<double> opts;
    opts.divergence_limit = 1e6;
    try {
        integrate(ss, Vec::Constant(1, 1.0).eval(), zero_input, 10.0, 0.01, opts);
        FAIL("expected divergence");
    } catch (const DivergedError& e) {
        // e^{50 t} crosses 1e6 near t = 0.276 s
        CHECK(e.step() > 20);
        CHECK(e.step() < 40);
    }
    CHECK_THROWS_AS(integrate(ss, Vec::Constant(1, 1.0).eval(), zero_input, 100.0, 0.01), DivergedError);
}

TEST_CASE("eigenvalue examples") {
    Mat a(2, 2);
    a << 0, 1, -2, -3;
    CHECK(oracle::multiset_distance(as_list(eigenvalues(a)), {-1.0, -2.0}) < 1e-12);
    CHECK(oracle::multiset_distance(as_list(eigenvalues(Mat::Identity(3, 3))), {1.0, 1.0, 1.0}) < 1e-12);
    Mat r(2, 2);
    r << 0, 1, -1, 0;
    CHECK(oracle::multiset_distance(as_list(eigenvalues(r)), {{0, 1}, {0, -1}}) < 1e-12);
    CHECK_THROWS_AS(eigenvalues(Mat::Zero(2, 3)), std::invalid_argument);
    Mat bad = Mat::Zero(2, 2);
    bad(0, 0) = NAN;
    CHECK_THROWS_AS(eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("eigenvalues of 2x2 matrices match the characteristic polynomial") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ud(-5, 5);
    for (int k = 0; k < 100; ++k) {
        Mat a(2, 2);
        a << ud(gen), ud(gen), ud(gen), ud(gen);
        const auto roots = oracle::quadratic_roots(-a.trace(), a.determinant());
        CHECK(oracle::multiset_distance(as_list(eigenvalues(a)), roots) < 1e-9);
    }
}

TEST_CASE("eigenvalues recover known real roots of a 10x10 companion matrix") {
    const std::vector<double> roots{-1, -2, -3, -4, -5, -6, -7, -8, -9, -10};
    const auto ev = as_list(eigenvalues(oracle::companion(roots)));
    std::vector<std::complex<double>> expected(roots.begin(), roots.end());
    CHECK(oracle::multiset_distance(ev, expected) < 1e-6);
}

TEST_CASE("property: eigenvalues are invariant under permutation similarity") {
    std::mt19937_64 gen(5);
    for (int k = 0; k < 100; ++k) {
        const Mat a = Mat::Random(10, 10);
        Eigen::PermutationMatrix<Eigen::Dynamic> p(10);
        p.setIdentity();
        std::shuffle(p.indices().data(), p.indices().data() + 10, gen);
        const Mat b = p * a * p.transpose();
        const auto ea = as_list(eigenvalues(a));
        const auto eb = as_list(eigenvalues(b));
        double scale = 1.0;
        for (const auto& z : ea) scale = std::max(scale, std::abs(z));
        CHECK(oracle::multiset_distance(ea, eb) <= 1e-8 * scale);
    }
}

TEST_CASE("series of two integrators is a double integrator") {
    const auto g = scalar_system(0.0, 1.0, 1.0, 0.0);
    auto g2 = g;
    g2.state_names = {"x2"};
    const auto s = series(g, g2);
    REQUIRE(s.states() == 2);
    Mat a(2, 2);
    a << 0, 0, 1, 0;
    CHECK(s.a == a);
    CHECK(s.b == (Mat(2, 1) << 1, 0).finished());
    CHECK(s.c == (Mat(1, 2) << 0, 1).finished());
    CHECK(s.d(0, 0) == 0.0);
}

TEST_CASE("series transfer function is the product") {
    std::mt19937_64 gen(9);
    for (int k = 0; k < 20; ++k) {
        const auto g1 = random_system(gen, 3, 1, 1);
        auto g2 = random_system(gen, 2, 1, 1);
        g2.state_names = {"z0", "z1"};
        const auto s = series(g1, g2);
        const std::complex<double> z(0.3, 1.7);
        const auto expected = oracle::transfer(g1.a, g1.b, g1.c, g1.d, z) * oracle::transfer(g2.a, g2.b, g2.c, g2.d, z);
        const auto got = oracle::transfer(s.a, s.b, s.c, s.d, z);
        CHECK(std::abs(got - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
    }
    const auto two = make_state_space<double>(Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(2, 1), Mat::Zero(2, 1));
    CHECK_THROWS_AS(series(two, scalar_system(0.0)), std::invalid_argument);
}

TEST_CASE("zero-gain feedback keeps the union of block eigenvalues") {
    std::mt19937_64 gen(13);
    for (int k = 0; k < 20; ++k) {
        auto plant = random_system(gen, 4, 1, 1);
        plant.input_names = {"u"};
        plant.output_names = {"y"};
        auto ctrl = random_system(gen, 3, 1, 1);
        ctrl.c.setZero();
        ctrl.d.setZero();
        ctrl.state_names = {"c0", "c1", "c2"};
        ctrl.input_names = {"e"};
        ctrl.output_names = {"v"};
        const auto cl = feedback_interconnect<double>({plant, ctrl}, {{"u", "v"}, {"e", "y"}});
        CHECK(cl.states() == plant.states() + ctrl.states());
        auto expected = as_list(eigenvalues(plant.a));
        const auto ec = as_list(eigenvalues(ctrl.a));
        expected.insert(expected.end(), ec.begin(), ec.end());
        CHECK(oracle::multiset_distance(as_list(eigenvalues(cl.a)), expected) < 1e-8);
        CHECK(cl.inputs() == 0);
    }
}

TEST_CASE("feedback of an integrator with a gain") {
    // x' = u, u = -k x  ->  pole at -k
    const auto plant = scalar_system(0.0, 1.0);
    const auto gain = static_gain<double>(Mat::Constant(1, 1, -4.0), {"e"}, {"v"});
    auto p = plant;
    p.input_names = {"u"};
    const auto cl = feedback_interconnect<double>({p, gain}, {{"u", "v"}, {"e", "y"}});
    CHECK(cl.a(0, 0) == doctest::Approx(-4.0));
}

TEST_CASE("interconnection reports wiring errors") {
    auto a = scalar_system(-1.0, 1.0, 1.0, 0.0);
    auto b = scalar_system(-2.0, 1.0, 1.0, 0.0);
    b.state_names = {"xb"};
    b.input_names = {"ub"};
    b.output_names = {"yb"};
    CHECK_THROWS_AS(feedback_interconnect<double>({a, b}, {{"nope", "y"}}), std::invalid_argument);
    CHECK_THROWS_AS(feedback_interconnect<double>({a, b}, {{"u", "nope"}}), std::invalid_argument);
    CHECK_THROWS_AS(feedback_interconnect<double>({a, b}, {{"u", "yb"}, {"u", "y"}}), std::invalid_argument);
    // unconnected signals stay external
    const auto open = feedback_interconnect<double>({a, b}, {{"ub", "y"}});
    CHECK(open.input_names == std::vector<std::string>{"u"});
    CHECK(open.output_names == std::vector<std::string>{"y", "yb"});
}

TEST_CASE("direct-feedthrough loops are rejected with the cycle, or solved exactly") {
    auto a = scalar_system(-1.0, 1.0, 1.0, 0.5);
    auto b = static_gain<double>(Mat::Constant(1, 1, 0.8), {"ub"}, {"yb"});
    const std::vector<Connection> wires{{"u", "yb"}, {"ub", "y"}};
    try {
        feedback_interconnect<double>({a, b}, wires);
        FAIL("expected an algebraic loop");
    } catch (const AlgebraicLoopError& e) {
        const auto& c = e.cycle();
        REQUIRE(c.size() >= 3);
        CHECK(c.front() == c.back());
        CHECK(std::find(c.begin(), c.end(), "y") != c.end());
        CHECK(std::find(c.begin(), c.end(), "yb") != c.end());
    }
    InterconnectOptions opts;
    opts.loops = AlgebraicLoops::solve;
    const auto cl = feedback_interconnect<double>({a, b}, wires, opts);
    // u = 0.8 y, y = x + 0.5 u  =>  y = x / 0.6, x' = -x + 0.8 x / 0.6
    CHECK(cl.a(0, 0) == doctest::Approx(-1.0 + 0.8 / 0.6));
    CHECK(cl.c(0, 0) == doctest::Approx(1.0 / 0.6));

    auto singular = static_gain<double>(Mat::Constant(1, 1, 2.0), {"ub"}, {"yb"});
    CHECK_THROWS_AS(feedback_interconnect<double>({a, singular}, wires, opts), AlgebraicLoopError);
}

TEST_CASE("state-space validation") {
    CHECK_THROWS_AS(make_state_space<double>(Mat::Zero(2, 3), Mat::Zero(2, 1), Mat::Zero(1, 2), Mat::Zero(1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_state_space<double>(Mat::Zero(2, 2), Mat::Zero(3, 1), Mat::Zero(1, 2), Mat::Zero(1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_state_space<double>(Mat::Zero(2, 2), Mat::Zero(2, 1), Mat::Zero(1, 2), Mat::Zero(2, 1)),
                    std::invalid_argument);
    Mat inf = Mat::Zero(1, 1);
    inf(0, 0) = INFINITY;
    CHECK_THROWS_AS(make_state_space<double>(inf, Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_state_space<double>(Mat::Zero(2, 2), Mat::Zero(2, 1), Mat::Zero(1, 2), Mat::Zero(1, 1),
                                             {"a", "a"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_state_space<double>(Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1),
                                             {"s"}, {"u"}, {"s"}),
                    std::invalid_argument);
}

TEST_CASE("trace channel lookup") {
    SimTrace<double> tr(0.1, 3, {"a", "b"});
    CHECK(tr.has("a"));
    CHECK_FALSE(tr.has("c"));
    CHECK_THROWS_AS(tr.channel("c"), std::out_of_range);
    CHECK_THROWS_AS(SimTrace<double>(0.0, 3, {"a"}), std::invalid_argument);
    CHECK_THROWS_AS(SimTrace<double>(0.1, 3, {"a", "a"}), std::invalid_argument);
}

TEST_CASE("the integrator is generic in the scalar type") {
    StateSpace<float> ss{Eigen::MatrixXf::Constant(1, 1, -1.0f), Eigen::MatrixXf::Zero(1, 1),
                         Eigen::MatrixXf::Constant(1, 1, 1.0f), Eigen::MatrixXf::Zero(1, 1), {"x"}, {"u"}, {"y"}};
    validate(ss);
    const auto tr = integrate(ss, Eigen::VectorXf::Constant(1, 1.0f).eval(), zero_input, 1.0f, 0.01f);
    CHECK(tr.channel("x")(tr.samples() - 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
}
