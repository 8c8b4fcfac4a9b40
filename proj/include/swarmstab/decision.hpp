#ifndef SWARMSTAB_DECISION_HPP
#define SWARMSTAB_DECISION_HPP

#include "swarmstab/lti.hpp"

namespace swarmstab {

/// Decision coordinates, in order.
inline constexpr const char* decision_names[] = {"kp", "ki", "kd", "kc", "t1c", "t3c"};
inline constexpr Eigen::Index decision_dim = 6;

struct Bounds {
    VectorX<double> lo, hi;

    Eigen::Index size() const { return lo.size(); }
    bool contains(const VectorX<double>& x) const;

    /// kp, ki, kd, kc in [0, 100]; t1c, t3c in [0.01, 1].
    static Bounds controller_default();
    static Bounds uniform(Eigen::Index dim, double lo, double hi);
};

struct DecisionVector {
    VectorX<double> values;
    Bounds bounds;
};

void check(const Bounds& b);

VectorX<double> clamp_to_bounds(const VectorX<double>& x, const Bounds& b);
DecisionVector clamp_to_bounds(const DecisionVector& dv);

}  // namespace swarmstab

#endif  // SWARMSTAB_DECISION_HPP
