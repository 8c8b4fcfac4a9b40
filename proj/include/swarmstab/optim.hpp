#ifndef SWARMSTAB_OPTIM_HPP
#define SWARMSTAB_OPTIM_HPP

// Box-constrained population optimizers: PSO and Passino's bacterial
// foraging. All randomness comes from one seeded Rng owned by the run loop.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "swarmstab/decision.hpp"

namespace swarmstab {

/// mt19937_64 with fixed uniform and normal transforms, so a seed yields the
/// same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Marsaglia polar method.
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

using CostFunction = std::function<double(const VectorX<double>&)>;

struct HistoryRecord {
    std::size_t iteration = 0;
    double best_cost = 0;   ///< best so far
    double mean_cost = 0;   ///< current population
    double dispersal_probability_used = 0;
};

struct OptResult {
    DecisionVector best;
    double best_cost = 0;
    std::vector<HistoryRecord> history;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
};

/// costs[i] = f(xs[i]); with `parallel` the calls are spread over threads.
/// The result does not depend on the thread count.
void evaluate_batch(const CostFunction& f, const std::vector<VectorX<double>>& xs, std::vector<double>& costs,
                    bool parallel);

// ---------------------------------------------------------------------------
// PSO

struct PsoConfig {
    std::size_t n_particles = 20;
    std::size_t n_iters = 80;
    /// Constant inertia; unset uses the linear schedule w_start -> w_end.
    std::optional<double> w;
    double w_start = 0.9;
    double w_end = 0.4;
    double c1 = 2.0;
    double c2 = 2.0;
    /// Per-dimension (or one broadcast value); unset means 0.2 * (hi - lo).
    std::optional<VectorX<double>> v_max;
    /// Velocity at iteration 0; zero when unset.
    std::optional<VectorX<double>> initial_velocity;
    std::uint64_t seed = 1;
    bool parallel = false;
};

void check(const PsoConfig& cfg, const Bounds& bounds);

double pso_inertia(const PsoConfig& cfg, std::size_t iteration);

/// Synchronous global-best PSO. History has one row per iteration.
OptResult pso_run(const PsoConfig& cfg, const CostFunction& objective, const Bounds& bounds);

// ---------------------------------------------------------------------------
// BFO

struct SwarmingParams {
    bool enabled = false;
    double d_attract = 0.1;
    double w_attract = 0.2;
    double h_repel = 0.1;
    double w_repel = 10.0;
};

struct BfoConfig {
    std::size_t s_pop = 20;
    std::size_t n_c = 50;
    std::size_t n_s = 4;
    std::size_t n_re = 4;
    std::size_t n_ed = 2;
    double p_ed = 0.25;
    /// Per-dimension chemotactic step (or one broadcast value).
    VectorX<double> step_size = VectorX<double>::Constant(1, 0.1);
    SwarmingParams swarming;
    std::optional<double> j_min;
    /// Stop before a sweep that could exceed this many evaluations.
    std::optional<std::size_t> max_evaluations;
    std::uint64_t seed = 1;
    bool parallel = false;
};

void check(const BfoConfig& cfg, const Bounds& bounds);

/// Isotropic unit vector from normalized standard normals.
VectorX<double> tumble_direction(Rng& rng, Eigen::Index dim);

/// Cell-to-cell attraction/repulsion summed over `others`, skipping index `self` if given.
double swarming_term(const VectorX<double>& x, const std::vector<VectorX<double>>& others,
                     const SwarmingParams& p, std::optional<std::size_t> self = std::nullopt);

/// Source index for every slot after reproduction: the healthier half (lowest
/// accumulated cost, stable order) fills slots [0, S/2) and again [S/2, S).
std::vector<std::size_t> reproduction_sources(const std::vector<double>& health);

/// History has one row per chemotactic step.
OptResult bfo_run(const BfoConfig& cfg, const CostFunction& objective, const Bounds& bounds);

}  // namespace swarmstab

#endif  // SWARMSTAB_OPTIM_HPP
