#include "swarmstab/decision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmstab/errors.hpp"

namespace swarmstab {

bool Bounds::contains(const VectorX<double>& x) const {
    return x.size() == size() && (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

Bounds Bounds::controller_default() {
    Bounds b;
    b.lo.resize(decision_dim);
    b.hi.resize(decision_dim);
    b.lo << 0, 0, 0, 0, 0.01, 0.01;
    b.hi << 100, 100, 100, 100, 1.0, 1.0;
    return b;
}

Bounds Bounds::uniform(Eigen::Index dim, double lo, double hi) {
    return {VectorX<double>::Constant(dim, lo), VectorX<double>::Constant(dim, hi)};
}

void check(const Bounds& b) {
    if (b.lo.size() == 0) throw ConfigError("bounds", "must have at least one dimension");
    if (b.lo.size() != b.hi.size()) throw ConfigError("bounds", "lo and hi differ in length");
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b.lo(i)) || !std::isfinite(b.hi(i)))
            throw ConfigError("bounds[" + std::to_string(i) + "]", "must be finite");
        if (!(b.lo(i) < b.hi(i)))
            throw ConfigError("bounds[" + std::to_string(i) + "]", "lo must be below hi");
    }
}

VectorX<double> clamp_to_bounds(const VectorX<double>& x, const Bounds& b) {
    if (x.size() != b.size()) throw std::invalid_argument("clamp_to_bounds: dimension mismatch");
    return x.cwiseMax(b.lo).cwiseMin(b.hi);
}

DecisionVector clamp_to_bounds(const DecisionVector& dv) {
    return {clamp_to_bounds(dv.values, dv.bounds), dv.bounds};
}

}  // namespace swarmstab
