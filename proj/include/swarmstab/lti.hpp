#ifndef SWARMSTAB_LTI_HPP
#define SWARMSTAB_LTI_HPP

// Continuous-time LTI systems: representation, composition, fixed-step RK4
// integration and dense eigenvalues. Everything is templated on the scalar.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "swarmstab/errors.hpp"

namespace swarmstab {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

inline Eigen::Index find_name(const std::vector<std::string>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? Eigen::Index{-1} : static_cast<Eigen::Index>(it - names.begin());
}

inline std::vector<std::string> default_names(std::string_view prefix, Eigen::Index n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
    return out;
}

inline void require_unique(const std::vector<std::string>& names, std::string_view what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second)
            throw std::invalid_argument(std::string(what) + " name '" + n + "' is not unique");
}

}  // namespace detail

/// x' = a x + b u,  y = c x + d u.
template <typename Scalar>
struct StateSpace {
    MatrixX<Scalar> a, b, c, d;
    std::vector<std::string> state_names, input_names, output_names;

    Eigen::Index states() const { return a.rows(); }
    Eigen::Index inputs() const { return b.cols(); }
    Eigen::Index outputs() const { return c.rows(); }

    Eigen::Index state_index(std::string_view n) const { return detail::find_name(state_names, n); }
    Eigen::Index input_index(std::string_view n) const { return detail::find_name(input_names, n); }
    Eigen::Index output_index(std::string_view n) const { return detail::find_name(output_names, n); }
};

/// Throws std::invalid_argument on inconsistent dimensions, non-finite
/// entries, or duplicate/colliding signal names.
template <typename Scalar>
void validate(const StateSpace<Scalar>& ss) {
    const auto n = ss.a.rows();
    const auto m = ss.b.cols();
    const auto p = ss.c.rows();
    if (ss.a.cols() != n) throw std::invalid_argument("state matrix is not square");
    if (ss.b.rows() != n) throw std::invalid_argument("input matrix row count differs from state count");
    if (ss.c.cols() != n) throw std::invalid_argument("output matrix column count differs from state count");
    if (ss.d.rows() != p || ss.d.cols() != m)
        throw std::invalid_argument("feedthrough matrix must be outputs x inputs");
    if (!ss.a.allFinite() || !ss.b.allFinite() || !ss.c.allFinite() || !ss.d.allFinite())
        throw std::invalid_argument("state-space matrices contain non-finite entries");
    if (static_cast<Eigen::Index>(ss.state_names.size()) != n ||
        static_cast<Eigen::Index>(ss.input_names.size()) != m ||
        static_cast<Eigen::Index>(ss.output_names.size()) != p)
        throw std::invalid_argument("signal name lists do not match matrix dimensions");
    detail::require_unique(ss.state_names, "state");
    detail::require_unique(ss.input_names, "input");
    detail::require_unique(ss.output_names, "output");
    for (const auto& s : ss.state_names)
        if (detail::find_name(ss.output_names, s) >= 0)
            throw std::invalid_argument("state and output share the name '" + s + "'");
}

/// Builds and validates a system. Empty name lists get x0.., u0.., y0.. defaults.
template <typename Scalar>
StateSpace<Scalar> make_state_space(MatrixX<Scalar> a, MatrixX<Scalar> b, MatrixX<Scalar> c, MatrixX<Scalar> d,
                                    std::vector<std::string> states = {}, std::vector<std::string> inputs = {},
                                    std::vector<std::string> outputs = {}) {
    if (states.empty()) states = detail::default_names("x", a.rows());
    if (inputs.empty()) inputs = detail::default_names("u", b.cols());
    if (outputs.empty()) outputs = detail::default_names("y", c.rows());
    StateSpace<Scalar> ss{std::move(a), std::move(b), std::move(c), std::move(d),
                          std::move(states), std::move(inputs), std::move(outputs)};
    validate(ss);
    return ss;
}

/// Memoryless y = d u.
template <typename Scalar>
StateSpace<Scalar> static_gain(MatrixX<Scalar> d, std::vector<std::string> inputs,
                               std::vector<std::string> outputs) {
    const auto p = d.rows();
    const auto m = d.cols();
    return make_state_space<Scalar>(MatrixX<Scalar>(0, 0), MatrixX<Scalar>(0, m), MatrixX<Scalar>(p, 0),
                                    std::move(d), {}, std::move(inputs), std::move(outputs));
}

// ---------------------------------------------------------------------------
// Simulation traces

/// Uniformly sampled named channels; sample k sits at time k * dt.
template <typename Scalar>
class SimTrace {
public:
    SimTrace(Scalar dt, Eigen::Index samples, std::vector<std::string> names)
        : dt_(dt), names_(std::move(names)), values_(MatrixX<Scalar>::Zero(samples, static_cast<Eigen::Index>(names_.size()))) {
        if (!(dt > Scalar(0))) throw std::invalid_argument("trace step must be positive");
        detail::require_unique(names_, "channel");
    }

    Scalar dt() const { return dt_; }
    Eigen::Index samples() const { return values_.rows(); }
    Scalar time(Eigen::Index k) const { return static_cast<Scalar>(k) * dt_; }
    Scalar t_end() const { return time(samples() - 1); }

    VectorX<Scalar> times() const {
        VectorX<Scalar> t(samples());
        for (Eigen::Index k = 0; k < samples(); ++k) t(k) = time(k);
        return t;
    }

    const std::vector<std::string>& names() const { return names_; }
    bool has(std::string_view name) const { return detail::find_name(names_, name) >= 0; }

    auto channel(std::string_view name) const { return values_.col(index(name)); }
    auto channel(std::string_view name) { return values_.col(index(name)); }

    const MatrixX<Scalar>& values() const { return values_; }
    MatrixX<Scalar>& values() { return values_; }

private:
    Eigen::Index index(std::string_view name) const {
        const auto i = detail::find_name(names_, name);
        if (i < 0) throw std::out_of_range("no channel named '" + std::string(name) + "'");
        return i;
    }

    Scalar dt_;
    std::vector<std::string> names_;
    MatrixX<Scalar> values_;
};

// ---------------------------------------------------------------------------
// Integration

/// Exact linear map of one classical RK4 step over x' = a x + b u with the
/// input sampled at the start, midpoint and end of the step:
///   x+ = phi x + g_start u(t) + g_mid u(t + h/2) + g_end u(t + h).
template <typename Scalar>
struct Rk4Propagator {
    MatrixX<Scalar> phi, g_start, g_mid, g_end;
};

template <typename Scalar>
Rk4Propagator<Scalar> rk4_propagator(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b, Scalar h) {
    const auto n = a.rows();
    const auto m = b.cols();
    // The textbook stages, evaluated on matrix-valued states and inputs.
    auto step = [&](const MatrixX<Scalar>& x, const MatrixX<Scalar>& u1, const MatrixX<Scalar>& u2,
                    const MatrixX<Scalar>& u3) -> MatrixX<Scalar> {
        const MatrixX<Scalar> k1 = a * x + b * u1;
        const MatrixX<Scalar> k2 = a * (x + (h / 2) * k1) + b * u2;
        const MatrixX<Scalar> k3 = a * (x + (h / 2) * k2) + b * u2;
        const MatrixX<Scalar> k4 = a * (x + h * k3) + b * u3;
        return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    const MatrixX<Scalar> zx = MatrixX<Scalar>::Zero(n, m);
    const MatrixX<Scalar> zu = MatrixX<Scalar>::Zero(m, m);
    const MatrixX<Scalar> iu = MatrixX<Scalar>::Identity(m, m);
    Rk4Propagator<Scalar> p;
    p.phi = step(MatrixX<Scalar>::Identity(n, n), MatrixX<Scalar>::Zero(m, n), MatrixX<Scalar>::Zero(m, n),
                 MatrixX<Scalar>::Zero(m, n));
    p.g_start = step(zx, iu, zu, zu);
    p.g_mid = step(zx, zu, iu, zu);
    p.g_end = step(zx, zu, zu, iu);
    return p;
}

/// One classical RK4 step of x' = f(t, x) for general (nonlinear) fields.
template <typename Scalar, typename Field>
VectorX<Scalar> rk4_step(Field&& f, Scalar t, const VectorX<Scalar>& x, Scalar h) {
    const VectorX<Scalar> k1 = f(t, x);
    const VectorX<Scalar> k2 = f(t + h / 2, VectorX<Scalar>(x + (h / 2) * k1));
    const VectorX<Scalar> k3 = f(t + h / 2, VectorX<Scalar>(x + (h / 2) * k2));
    const VectorX<Scalar> k4 = f(t + h, VectorX<Scalar>(x + h * k3));
    return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

/// Writes the input vector for time t into u (already sized to the input count).
template <typename F, typename Scalar>
concept InputFunction = std::invocable<F&, Scalar, VectorX<Scalar>&>;

inline constexpr auto zero_input = [](auto, auto& u) { u.setZero(); };

template <typename Scalar>
struct IntegrateOptions {
    /// Any |state| above this is treated as divergence.
    Scalar divergence_limit = std::numeric_limits<Scalar>::infinity();
};

/// Number of grid intervals for a horizon; rejects t_sim < dt.
template <typename Scalar>
Eigen::Index step_count(Scalar t_sim, Scalar dt) {
    if (!(dt > Scalar(0)) || !std::isfinite(static_cast<double>(dt)))
        throw std::invalid_argument("dt must be positive and finite");
    if (!(t_sim >= dt * (Scalar(1) - Scalar(1e-9))))
        throw std::invalid_argument("t_sim must be at least dt");
    return static_cast<Eigen::Index>(std::llround(static_cast<double>(t_sim / dt)));
}

/// Fixed-step classical RK4 from x0 over [0, t_sim]. The trace holds every
/// state (by state name) and every output y = c x + d u (by output name) at
/// t_k = k dt. Throws DivergedError on a non-finite or out-of-range state.
template <typename Scalar, InputFunction<Scalar> Input>
SimTrace<Scalar> integrate(const StateSpace<Scalar>& ss, const VectorX<Scalar>& x0, Input&& input, Scalar t_sim,
                           Scalar dt, const IntegrateOptions<Scalar>& opts = {}) {
    const auto n = ss.states();
    const auto m = ss.inputs();
    const auto p = ss.outputs();
    if (x0.size() != n) throw std::invalid_argument("initial state length differs from state count");
    const auto steps = step_count(t_sim, dt);

    std::vector<std::string> names = ss.state_names;
    names.insert(names.end(), ss.output_names.begin(), ss.output_names.end());
    SimTrace<Scalar> trace(dt, steps + 1, std::move(names));
    auto& out = trace.values();

    const auto prop = rk4_propagator<Scalar>(ss.a, ss.b, dt);
    VectorX<Scalar> x = x0;
    VectorX<Scalar> x_next(n);
    VectorX<Scalar> u_start(m), u_mid(m), u_end(m);
    input(Scalar(0), u_start);

    auto record = [&](Eigen::Index k) {
        out.row(k).head(n) = x.transpose();
        if (p > 0) out.row(k).tail(p) = (ss.c * x + ss.d * u_start).transpose();
    };
    auto check = [&](Eigen::Index k) {
        if (!x.allFinite()) throw DivergedError(static_cast<std::size_t>(k));
        if (n > 0 && x.cwiseAbs().maxCoeff() > opts.divergence_limit)
            throw DivergedError(static_cast<std::size_t>(k));
    };

    check(0);
    record(0);
    for (Eigen::Index k = 0; k < steps; ++k) {
        // Stage times are formed from the step index so t_{k+1} is bit-identical
        // to the next step's start time and u_end can be carried over.
        input((static_cast<Scalar>(k) + Scalar(0.5)) * dt, u_mid);
        input(static_cast<Scalar>(k + 1) * dt, u_end);
        x_next.noalias() = prop.phi * x;
        if (m > 0) {
            x_next.noalias() += prop.g_start * u_start;
            x_next.noalias() += prop.g_mid * u_mid;
            x_next.noalias() += prop.g_end * u_end;
        }
        x.swap(x_next);
        u_start.swap(u_end);
        check(k + 1);
        record(k + 1);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Eigenvalues

template <typename Derived>
VectorX<std::complex<typename Derived::Scalar>> eigenvalues(const Eigen::MatrixBase<Derived>& a,
                                                             std::string_view name = "matrix") {
    using Scalar = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw std::invalid_argument(std::string(name) + " is not square");
    if (!a.allFinite()) throw std::invalid_argument(std::string(name) + " has non-finite entries");
    if (a.rows() == 0) return {};
    Eigen::EigenSolver<MatrixX<Scalar>> solver(MatrixX<Scalar>(a), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigenvalue iteration did not converge for " + std::string(name));
    return solver.eigenvalues();
}

/// Largest real part of the spectrum; -inf for an empty matrix.
template <typename Derived>
typename Derived::Scalar spectral_abscissa(const Eigen::MatrixBase<Derived>& a, std::string_view name = "matrix") {
    using Scalar = typename Derived::Scalar;
    const auto ev = eigenvalues(a, name);
    if (ev.size() == 0) return -std::numeric_limits<Scalar>::infinity();
    return ev.real().maxCoeff();
}

// ---------------------------------------------------------------------------
// Composition

/// u -> g1 -> g2 -> y. Requires g1's output count to equal g2's input count.
template <typename Scalar>
StateSpace<Scalar> series(const StateSpace<Scalar>& g1, const StateSpace<Scalar>& g2) {
    if (g1.outputs() != g2.inputs())
        throw std::invalid_argument("series: output count of the first block differs from input count of the second");
    const auto n1 = g1.states();
    const auto n2 = g2.states();
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(n1 + n2, n1 + n2);
    a.topLeftCorner(n1, n1) = g1.a;
    a.bottomLeftCorner(n2, n1) = g2.b * g1.c;
    a.bottomRightCorner(n2, n2) = g2.a;
    MatrixX<Scalar> b(n1 + n2, g1.inputs());
    b.topRows(n1) = g1.b;
    b.bottomRows(n2) = g2.b * g1.d;
    MatrixX<Scalar> c(g2.outputs(), n1 + n2);
    c.leftCols(n1) = g2.d * g1.c;
    c.rightCols(n2) = g2.c;
    MatrixX<Scalar> d = g2.d * g1.d;
    auto states = g1.state_names;
    states.insert(states.end(), g2.state_names.begin(), g2.state_names.end());
    return make_state_space<Scalar>(std::move(a), std::move(b), std::move(c), std::move(d), std::move(states),
                                    g1.input_names, g2.output_names);
}

/// Feeds the named block output into the named block input.
struct Connection {
    std::string input;
    std::string output;
};

enum class AlgebraicLoops { reject, solve };

struct InterconnectOptions {
    AlgebraicLoops loops = AlgebraicLoops::reject;
    /// Outputs of the composite, in order. Empty keeps every block output.
    std::vector<std::string> outputs;
};

namespace detail {

/// Finds a cycle in the "output j feeds output k without dynamics" graph.
template <typename Scalar>
std::vector<std::string> feedthrough_cycle(const MatrixX<Scalar>& df, const std::vector<std::string>& names) {
    const auto p = df.rows();
    std::vector<int> color(static_cast<std::size_t>(p), 0);
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(p), -1);
    std::vector<std::string> cycle;

    auto dfs = [&](auto&& self, Eigen::Index j) -> bool {
        color[j] = 1;
        for (Eigen::Index k = 0; k < p; ++k) {
            if (df(k, j) == Scalar(0)) continue;
            if (color[k] == 1) {
                std::vector<std::string> rev{names[k]};
                for (Eigen::Index v = j; v != k; v = parent[v]) rev.push_back(names[v]);
                rev.push_back(names[k]);
                cycle.assign(rev.rbegin(), rev.rend());
                return true;
            }
            if (color[k] == 0) {
                parent[k] = j;
                if (self(self, k)) return true;
            }
        }
        color[j] = 2;
        return false;
    };
    for (Eigen::Index j = 0; j < p; ++j)
        if (color[j] == 0 && dfs(dfs, j)) break;
    return cycle;
}

}  // namespace detail

/// Connects blocks by signal name. The composite state is the concatenation of
/// block states in block order; its inputs are the unconnected block inputs.
/// Static loops either throw AlgebraicLoopError (reject) or are eliminated
/// through (I - D F)^-1 (solve), which throws when that matrix is singular.
template <typename Scalar>
StateSpace<Scalar> feedback_interconnect(const std::vector<StateSpace<Scalar>>& blocks,
                                         const std::vector<Connection>& wiring, const InterconnectOptions& opts = {}) {
    Eigen::Index n = 0, m = 0, p = 0;
    std::vector<std::string> states, inputs, outputs;
    for (const auto& blk : blocks) {
        validate(blk);
        n += blk.states();
        m += blk.inputs();
        p += blk.outputs();
        states.insert(states.end(), blk.state_names.begin(), blk.state_names.end());
        inputs.insert(inputs.end(), blk.input_names.begin(), blk.input_names.end());
        outputs.insert(outputs.end(), blk.output_names.begin(), blk.output_names.end());
    }
    detail::require_unique(inputs, "block input");
    detail::require_unique(outputs, "block output");

    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(n, n), b = MatrixX<Scalar>::Zero(n, m);
    MatrixX<Scalar> c = MatrixX<Scalar>::Zero(p, n), d = MatrixX<Scalar>::Zero(p, m);
    for (Eigen::Index xs = 0, us = 0, ys = 0; const auto& blk : blocks) {
        a.block(xs, xs, blk.states(), blk.states()) = blk.a;
        b.block(xs, us, blk.states(), blk.inputs()) = blk.b;
        c.block(ys, xs, blk.outputs(), blk.states()) = blk.c;
        d.block(ys, us, blk.outputs(), blk.inputs()) = blk.d;
        xs += blk.states();
        us += blk.inputs();
        ys += blk.outputs();
    }

    MatrixX<Scalar> f = MatrixX<Scalar>::Zero(m, p);
    std::vector<bool> connected(static_cast<std::size_t>(m), false);
    for (const auto& w : wiring) {
        const auto i = detail::find_name(inputs, w.input);
        const auto j = detail::find_name(outputs, w.output);
        if (i < 0) throw std::invalid_argument("dangling wire: no block input named '" + w.input + "'");
        if (j < 0) throw std::invalid_argument("dangling wire: no block output named '" + w.output + "'");
        if (connected[i]) throw std::invalid_argument("input '" + w.input + "' is wired more than once");
        connected[i] = true;
        f(i, j) = Scalar(1);
    }
    std::vector<std::string> external;
    std::vector<Eigen::Index> external_idx;
    for (Eigen::Index i = 0; i < m; ++i)
        if (!connected[i]) {
            external.push_back(inputs[i]);
            external_idx.push_back(i);
        }
    MatrixX<Scalar> g = MatrixX<Scalar>::Zero(m, static_cast<Eigen::Index>(external.size()));
    for (Eigen::Index e = 0; e < g.cols(); ++e) g(external_idx[e], e) = Scalar(1);

    // y = c x + d (f y + g w)  =>  (I - d f) y = c x + d g w
    const MatrixX<Scalar> df = d * f;
    const auto cycle = detail::feedthrough_cycle(df, outputs);
    if (!cycle.empty() && opts.loops == AlgebraicLoops::reject) throw AlgebraicLoopError(cycle);
    const MatrixX<Scalar> loop = MatrixX<Scalar>::Identity(p, p) - df;
    Eigen::FullPivLU<MatrixX<Scalar>> lu(loop);
    if (!lu.isInvertible()) throw AlgebraicLoopError(cycle);
    const MatrixX<Scalar> yc = lu.solve(c);
    const MatrixX<Scalar> ydg = lu.solve(MatrixX<Scalar>(d * g));

    MatrixX<Scalar> a_cl = a + b * f * yc;
    MatrixX<Scalar> b_cl = b * (f * ydg + g);

    std::vector<std::string> selected = opts.outputs.empty() ? outputs : opts.outputs;
    MatrixX<Scalar> c_cl(static_cast<Eigen::Index>(selected.size()), n);
    MatrixX<Scalar> d_cl(static_cast<Eigen::Index>(selected.size()), g.cols());
    for (Eigen::Index r = 0; r < c_cl.rows(); ++r) {
        const auto j = detail::find_name(outputs, selected[r]);
        if (j < 0) throw std::invalid_argument("no block output named '" + selected[r] + "'");
        c_cl.row(r) = yc.row(j);
        d_cl.row(r) = ydg.row(j);
    }
    return make_state_space<Scalar>(std::move(a_cl), std::move(b_cl), std::move(c_cl), std::move(d_cl),
                                    std::move(states), std::move(external), std::move(selected));
}

}  // namespace swarmstab

#endif  // SWARMSTAB_LTI_HPP
