#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "swarmstab/errors.hpp"
#include "swarmstab/optim.hpp"

namespace swarmstab {

namespace {

VectorX<double> step_vector(const BfoConfig& cfg, Eigen::Index dim) {
    if (cfg.step_size.size() == 1) return VectorX<double>::Constant(dim, cfg.step_size(0));
    if (cfg.step_size.size() != dim) throw ConfigError("bfo.step_size", "length must be 1 or the problem dimension");
    return cfg.step_size;
}

}  // namespace

void check(const BfoConfig& cfg, const Bounds& bounds) {
    check(bounds);
    if (cfg.s_pop < 2 || cfg.s_pop % 2 != 0) throw ConfigError("bfo.s_pop", "must be even and at least 2");
    if (cfg.n_c < 1) throw ConfigError("bfo.n_c", "must be at least 1");
    if (cfg.n_s < 1) throw ConfigError("bfo.n_s", "must be at least 1");
    if (cfg.n_re < 1) throw ConfigError("bfo.n_re", "must be at least 1");
    if (cfg.n_ed < 1) throw ConfigError("bfo.n_ed", "must be at least 1");
    if (!(cfg.p_ed >= 0.0 && cfg.p_ed <= 1.0)) throw ConfigError("bfo.p_ed", "must lie in [0, 1]");
    const auto step = step_vector(cfg, bounds.size());
    if (!(step.array() > 0.0).all() || !step.allFinite()) throw ConfigError("bfo.step_size", "must be positive");
    const auto& sw = cfg.swarming;
    for (double v : {sw.d_attract, sw.w_attract, sw.h_repel, sw.w_repel})
        if (!std::isfinite(v)) throw ConfigError("bfo.swarming", "coefficients must be finite");
    if (cfg.j_min && std::isnan(*cfg.j_min)) throw ConfigError("bfo.j_min", "must be a number");
    if (cfg.max_evaluations && *cfg.max_evaluations < cfg.s_pop)
        throw ConfigError("bfo.max_evaluations", "must cover at least the initial population");
}

VectorX<double> tumble_direction(Rng& rng, Eigen::Index dim) {
    if (dim < 1) throw std::invalid_argument("tumble_direction: dim must be at least 1");
    VectorX<double> d(dim);
    for (;;) {
        for (Eigen::Index k = 0; k < dim; ++k) d(k) = rng.normal();
        const double norm = d.norm();
        if (norm > 0.0 && std::isfinite(norm)) return d / norm;
    }
}

double swarming_term(const VectorX<double>& x, const std::vector<VectorX<double>>& others, const SwarmingParams& p,
                     std::optional<std::size_t> self) {
    double j = 0.0;
    for (std::size_t k = 0; k < others.size(); ++k) {
        if (self && *self == k) continue;
        const double r2 = (x - others[k]).squaredNorm();
        j += -p.d_attract * std::exp(-p.w_attract * r2) + p.h_repel * std::exp(-p.w_repel * r2);
    }
    return j;
}

std::vector<std::size_t> reproduction_sources(const std::vector<double>& health) {
    const std::size_t s = health.size();
    if (s < 2 || s % 2 != 0) throw std::invalid_argument("reproduction needs an even population of at least 2");
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return health[a] < health[b]; });
    std::vector<std::size_t> src(s);
    for (std::size_t r = 0; r < s / 2; ++r) src[r] = src[r + s / 2] = order[r];
    return src;
}

OptResult bfo_run(const BfoConfig& cfg, const CostFunction& objective, const Bounds& bounds) {
    check(cfg, bounds);
    const auto dim = bounds.size();
    const auto s = cfg.s_pop;
    const VectorX<double> step = step_vector(cfg, dim);
    const auto& sw = cfg.swarming;
    Rng rng(cfg.seed);

    OptResult res;
    res.seed = cfg.seed;
    VectorX<double> best;
    double best_cost = std::numeric_limits<double>::infinity();
    auto track = [&](const VectorX<double>& x, double j) {
        if (j < best_cost) {
            best_cost = j;
            best = x;
        }
    };
    auto budget_allows = [&](std::size_t n) {
        return !cfg.max_evaluations || res.evaluations + n <= *cfg.max_evaluations;
    };
    auto reached_target = [&] { return cfg.j_min && best_cost <= *cfg.j_min; };

    std::vector<VectorX<double>> pos(s, VectorX<double>(dim));
    for (auto& p : pos)
        for (Eigen::Index d = 0; d < dim; ++d) p(d) = rng.uniform(bounds.lo(d), bounds.hi(d));
    std::vector<double> cost;
    evaluate_batch(objective, pos, cost, cfg.parallel);
    res.evaluations += s;
    for (std::size_t i = 0; i < s; ++i) track(pos[i], cost[i]);

    std::size_t iteration = 0;
    bool stop = reached_target();
    std::vector<VectorX<double>> trial(s);
    std::vector<double> trial_cost;
    for (std::size_t l = 0; l < cfg.n_ed && !stop; ++l) {
        for (std::size_t k = 0; k < cfg.n_re && !stop; ++k) {
            std::vector<double> health(s, 0.0);
            for (std::size_t j = 0; j < cfg.n_c; ++j) {
                if (!budget_allows(s * (1 + cfg.n_s))) {
                    stop = true;
                    break;
                }
                // Swarming is measured against the positions at the start of the sweep.
                const std::vector<VectorX<double>> snapshot = pos;
                auto jcc = [&](const VectorX<double>& x, std::size_t i) {
                    return sw.enabled ? swarming_term(x, snapshot, sw, i) : 0.0;
                };
                std::vector<VectorX<double>> dir(s);
                for (std::size_t i = 0; i < s; ++i) dir[i] = tumble_direction(rng, dim);

                std::vector<double> j_last(s);
                for (std::size_t i = 0; i < s; ++i) {
                    j_last[i] = cost[i] + jcc(pos[i], i);
                    trial[i] = clamp_to_bounds(VectorX<double>(pos[i] + step.cwiseProduct(dir[i])), bounds);
                }
                evaluate_batch(objective, trial, trial_cost, cfg.parallel);
                res.evaluations += s;
                std::vector<std::size_t> active;
                for (std::size_t i = 0; i < s; ++i) {
                    pos[i] = trial[i];
                    cost[i] = trial_cost[i];
                    track(pos[i], cost[i]);
                    active.push_back(i);
                }
                for (std::size_t m = 0; m < cfg.n_s && !active.empty(); ++m) {
                    std::vector<std::size_t> still;
                    for (std::size_t i : active) {
                        const double j_now = cost[i] + jcc(pos[i], i);
                        if (j_now < j_last[i]) {
                            j_last[i] = j_now;
                            still.push_back(i);
                        }
                    }
                    if (still.empty()) break;
                    std::vector<VectorX<double>> moves;
                    moves.reserve(still.size());
                    for (std::size_t i : still)
                        moves.push_back(clamp_to_bounds(VectorX<double>(pos[i] + step.cwiseProduct(dir[i])), bounds));
                    std::vector<double> move_cost;
                    evaluate_batch(objective, moves, move_cost, cfg.parallel);
                    res.evaluations += still.size();
                    for (std::size_t q = 0; q < still.size(); ++q) {
                        const auto i = still[q];
                        pos[i] = moves[q];
                        cost[i] = move_cost[q];
                        track(pos[i], cost[i]);
                    }
                    active = std::move(still);
                }
                for (std::size_t i = 0; i < s; ++i) health[i] += cost[i];

                ++iteration;
                const double mean = std::accumulate(cost.begin(), cost.end(), 0.0) / static_cast<double>(s);
                res.history.push_back({iteration, best_cost, mean, cfg.p_ed});
                if (reached_target()) {
                    stop = true;
                    break;
                }
            }
            if (stop) break;

            const auto src = reproduction_sources(health);
            const auto old_pos = pos;
            const auto old_cost = cost;
            for (std::size_t i = 0; i < s; ++i) {
                pos[i] = old_pos[src[i]];
                cost[i] = old_cost[src[i]];
            }
        }
        if (stop || !budget_allows(s)) break;

        std::vector<std::size_t> moved;
        std::vector<VectorX<double>> fresh;
        for (std::size_t i = 0; i < s; ++i) {
            if (rng.uniform() < cfg.p_ed) {
                VectorX<double> x(dim);
                for (Eigen::Index d = 0; d < dim; ++d) x(d) = rng.uniform(bounds.lo(d), bounds.hi(d));
                moved.push_back(i);
                fresh.push_back(std::move(x));
            }
        }
        std::vector<double> fresh_cost;
        evaluate_batch(objective, fresh, fresh_cost, cfg.parallel);
        res.evaluations += fresh.size();
        for (std::size_t q = 0; q < moved.size(); ++q) {
            pos[moved[q]] = fresh[q];
            cost[moved[q]] = fresh_cost[q];
            track(fresh[q], fresh_cost[q]);
        }
        stop = reached_target();
    }

    res.best = {best, bounds};
    res.best_cost = best_cost;
    return res;
}

}  // namespace swarmstab
