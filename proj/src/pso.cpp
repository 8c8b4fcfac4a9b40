#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "swarmstab/errors.hpp"
#include "swarmstab/optim.hpp"

namespace swarmstab {

namespace {

VectorX<double> broadcast(const VectorX<double>& v, Eigen::Index dim, const char* field) {
    if (v.size() == 1) return VectorX<double>::Constant(dim, v(0));
    if (v.size() != dim) throw ConfigError(field, "length must be 1 or the problem dimension");
    return v;
}

VectorX<double> velocity_cap(const PsoConfig& cfg, const Bounds& b) {
    return cfg.v_max ? broadcast(*cfg.v_max, b.size(), "pso.v_max") : VectorX<double>(0.2 * (b.hi - b.lo));
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void check(const PsoConfig& cfg, const Bounds& bounds) {
    check(bounds);
    if (cfg.n_particles < 2) throw ConfigError("pso.n_particles", "must be at least 2");
    if (cfg.n_iters < 1) throw ConfigError("pso.n_iters", "must be at least 1");
    if (!(cfg.c1 >= 0.0) || !std::isfinite(cfg.c1)) throw ConfigError("pso.c1", "must be >= 0");
    if (!(cfg.c2 >= 0.0) || !std::isfinite(cfg.c2)) throw ConfigError("pso.c2", "must be >= 0");
    if (cfg.w && !std::isfinite(*cfg.w)) throw ConfigError("pso.w", "must be finite");
    if (!std::isfinite(cfg.w_start)) throw ConfigError("pso.w_start", "must be finite");
    if (!std::isfinite(cfg.w_end)) throw ConfigError("pso.w_end", "must be finite");
    const auto vmax = velocity_cap(cfg, bounds);
    if (!(vmax.array() > 0.0).all() || !vmax.allFinite()) throw ConfigError("pso.v_max", "must be positive");
    if (cfg.initial_velocity) {
        const auto v0 = broadcast(*cfg.initial_velocity, bounds.size(), "pso.initial_velocity");
        if (!v0.allFinite()) throw ConfigError("pso.initial_velocity", "must be finite");
    }
}

double pso_inertia(const PsoConfig& cfg, std::size_t iteration) {
    if (cfg.w) return *cfg.w;
    if (cfg.n_iters <= 1) return cfg.w_start;
    const double frac = static_cast<double>(iteration - 1) / static_cast<double>(cfg.n_iters - 1);
    return cfg.w_start + (cfg.w_end - cfg.w_start) * frac;
}

OptResult pso_run(const PsoConfig& cfg, const CostFunction& objective, const Bounds& bounds) {
    check(cfg, bounds);
    const auto dim = bounds.size();
    const auto n = cfg.n_particles;
    const VectorX<double> vmax = velocity_cap(cfg, bounds);
    const VectorX<double> v0 = cfg.initial_velocity ? broadcast(*cfg.initial_velocity, dim, "pso.initial_velocity")
                                                    : VectorX<double>::Zero(dim);
    Rng rng(cfg.seed);

    std::vector<VectorX<double>> x(n, VectorX<double>(dim)), v(n, v0);
    for (auto& xi : x)
        for (Eigen::Index d = 0; d < dim; ++d) xi(d) = rng.uniform(bounds.lo(d), bounds.hi(d));

    OptResult res;
    res.seed = cfg.seed;
    std::vector<double> cost;
    evaluate_batch(objective, x, cost, cfg.parallel);
    res.evaluations = n;

    std::vector<VectorX<double>> pbest = x;
    std::vector<double> pbest_cost = cost;
    std::size_t g = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pbest_cost[i] < pbest_cost[g]) g = i;
    VectorX<double> gbest = pbest[g];
    double gbest_cost = pbest_cost[g];

    for (std::size_t it = 1; it <= cfg.n_iters; ++it) {
        const double w = pso_inertia(cfg, it);
        for (std::size_t i = 0; i < n; ++i) {
            for (Eigen::Index d = 0; d < dim; ++d) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                double vd = w * v[i](d) + cfg.c1 * r1 * (pbest[i](d) - x[i](d)) + cfg.c2 * r2 * (gbest(d) - x[i](d));
                v[i](d) = std::clamp(vd, -vmax(d), vmax(d));
            }
            // x(t+1) = x(t) + v(t+1); the printed update labels the left side gbest, a misprint
            x[i] = clamp_to_bounds(VectorX<double>(x[i] + v[i]), bounds);
        }
        evaluate_batch(objective, x, cost, cfg.parallel);
        res.evaluations += n;
        for (std::size_t i = 0; i < n; ++i) {
            if (cost[i] < pbest_cost[i]) {
                pbest_cost[i] = cost[i];
                pbest[i] = x[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (pbest_cost[i] < gbest_cost) {
                gbest_cost = pbest_cost[i];
                gbest = pbest[i];
            }
        }
        res.history.push_back({it, gbest_cost, mean(cost), 0.0});
    }
    res.best = {gbest, bounds};
    res.best_cost = gbest_cost;
    return res;
}

}  // namespace swarmstab
