#ifndef SWARMSTAB_METRICS_HPP
#define SWARMSTAB_METRICS_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmstab {

/// Smallest t such that |y(tau) - final_value| <= band * scale for every
/// sample tau >= t, with scale = max(|final_value|, max |y - final_value|).
/// A channel still outside the band at its last sample returns the horizon.
template <typename Derived>
typename Derived::Scalar settling_time(const Eigen::DenseBase<Derived>& y, typename Derived::Scalar dt,
                                       typename Derived::Scalar final_value,
                                       typename Derived::Scalar band = typename Derived::Scalar(0.02)) {
    using Scalar = typename Derived::Scalar;
    if (y.size() == 0) throw std::invalid_argument("settling_time: empty channel");
    if (!(band > Scalar(0))) throw std::invalid_argument("settling_time: band must be positive");
    const auto n = y.size();
    const Scalar scale = std::max(std::abs(final_value), (y.derived().array() - final_value).abs().maxCoeff());
    if (scale == Scalar(0)) return Scalar(0);
    const Scalar tol = band * scale;
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (std::abs(y(k) - final_value) > tol) {
            return static_cast<Scalar>(std::min(k + 1, n - 1)) * dt;
        }
    }
    return Scalar(0);
}

template <typename Scalar>
struct Overshoot {
    Scalar value = 0;      ///< fraction of the step, or pu when `absolute`
    Scalar peak_time = 0;
    bool absolute = false; ///< zero step magnitude: value is the raw excursion
};

/// Peak excursion beyond `reference`, relative to the step y(0) -> reference.
template <typename Derived>
Overshoot<typename Derived::Scalar> peak_overshoot(const Eigen::DenseBase<Derived>& y,
                                                   typename Derived::Scalar dt,
                                                   typename Derived::Scalar reference) {
    using Scalar = typename Derived::Scalar;
    if (y.size() == 0) throw std::invalid_argument("peak_overshoot: empty channel");
    Overshoot<Scalar> out;
    const Scalar step = reference - y(0);
    Eigen::Index k = 0;
    if (step == Scalar(0)) {
        out.value = (y.derived().array() - reference).abs().maxCoeff(&k);
        out.absolute = true;
    } else {
        const Scalar dir = step > Scalar(0) ? Scalar(1) : Scalar(-1);
        const Scalar excursion = (dir * (y.derived().array() - reference)).maxCoeff(&k);
        out.value = std::max(excursion, Scalar(0)) / std::abs(step);
    }
    out.peak_time = static_cast<Scalar>(k) * dt;
    return out;
}

/// Trapezoidal integral of t * |y(t)| over the sampled grid t_k = k dt.
template <typename Derived>
typename Derived::Scalar time_weighted_abs_integral(const Eigen::DenseBase<Derived>& y,
                                                    typename Derived::Scalar dt) {
    using Scalar = typename Derived::Scalar;
    Scalar sum = 0;
    Scalar prev = 0;  // t_0 * |y_0| = 0
    for (Eigen::Index k = 1; k < y.size(); ++k) {
        const Scalar cur = static_cast<Scalar>(k) * dt * std::abs(y(k));
        sum += prev + cur;
        prev = cur;
    }
    return sum * dt / 2;
}

template <typename Scalar>
struct ResponseMetrics {
    Scalar settling_time = 0;
    Scalar peak_overshoot = 0;
    Scalar peak_time = 0;
    Scalar itae_contribution = 0;
    bool overshoot_absolute = false;
};

/// Settling time about `final_value`, overshoot beyond `reference`, plus the
/// channel's unweighted t|y| integral.
template <typename Derived>
ResponseMetrics<typename Derived::Scalar> response_metrics(
    const Eigen::DenseBase<Derived>& y, typename Derived::Scalar dt, typename Derived::Scalar final_value,
    typename Derived::Scalar reference, typename Derived::Scalar band = typename Derived::Scalar(0.02)) {
    using Scalar = typename Derived::Scalar;
    ResponseMetrics<Scalar> m;
    m.settling_time = settling_time(y, dt, final_value, band);
    const auto os = peak_overshoot(y, dt, reference);
    m.peak_overshoot = os.value;
    m.peak_time = os.peak_time;
    m.overshoot_absolute = os.absolute;
    m.itae_contribution = time_weighted_abs_integral(y, dt);
    return m;
}

}  // namespace swarmstab

#endif  // SWARMSTAB_METRICS_HPP
