#include "bidisc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bidisc {

double normalize_angle(double t) {
    if (!std::isfinite(t)) throw RangeError("angle is not finite");
    t = std::fmod(t, 2.0 * M_PI);
    if (t <= -M_PI) t += 2.0 * M_PI;
    if (t > M_PI) t -= 2.0 * M_PI;
    return t;
}

DiscPoint::DiscPoint(Cx value) : z(value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || std::norm(value) >= 1.0)
        throw RangeError("point outside the open unit disc");
}

Horocycle::Horocycle(UnitBoundaryPoint t, double r) : tau(t), radius(r) {
    if (!std::isfinite(r) || r <= 0.0) throw RangeError("horocycle radius must be positive");
}

// log((1+rho)/(1-rho))/2 with rho = |z-w| / |1 - conj(z) w|, rewritten so that
// no cancellation occurs when rho -> 1:
//   (1+rho)/(1-rho) = (|1 - conj(z)w| + |z-w|)^2 / ((1-|z|^2)(1-|w|^2)).
double poincare_distance(DiscPoint zp, DiscPoint wp) {
    const Cx z = zp.z, w = wp.z;
    const double a = std::abs(1.0 - std::conj(z) * w) + std::abs(z - w);
    const double dz = 1.0 - std::norm(z);
    const double dw = 1.0 - std::norm(w);
    return std::log(a) - 0.5 * std::log(dz) - 0.5 * std::log(dw);
}

double kobayashi_distance(const BidiscPoint& p, const BidiscPoint& q) {
    return std::max(poincare_distance(p.x, q.x), poincare_distance(p.y, q.y));
}

double horocycle_value(UnitBoundaryPoint tau, DiscPoint z) {
    return horocycle_value_raw(tau.point(), z.z);
}

double horocycle_value_raw(Cx tau, Cx z) {
    const double d = 1.0 - std::norm(z);
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    return std::norm(tau - z) / d;
}

EuclideanDisc horocycle_euclidean(const Horocycle& h) {
    return {h.tau.point() / (1.0 + h.radius), h.radius / (1.0 + h.radius)};
}

double horosphere_margin(const BidiscBoundaryPoint& bp, double R, const BidiscPoint& p) {
    return horosphere_margin_raw(bp, R, p.x.z, p.y.z);
}

double horosphere_margin_raw(const BidiscBoundaryPoint& bp, double R, Cx x, Cx y) {
    if (!(R > 0.0)) throw RangeError("horosphere radius must be positive");
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SilovCorner>) {
                return std::max(horocycle_value_raw(b.tau1.point(), x),
                                horocycle_value_raw(b.tau2.point(), y)) -
                       R;
            } else if constexpr (std::is_same_v<T, VerticalFlat>) {
                return horocycle_value_raw(b.tau1.point(), x) - R;
            } else {
                return horocycle_value_raw(b.tau2.point(), y) - R;
            }
        },
        bp);
}

namespace {

// k(z, w) - k(0, w) for one disc factor, stable as |w| -> 1: the log(1-|w|^2)
// halves cancel exactly between the two distances.
double disc_distance_gap(Cx z, Cx w) {
    const double a = std::abs(1.0 - std::conj(z) * w) + std::abs(z - w);
    return std::log(a / (1.0 + std::abs(w))) - 0.5 * std::log(1.0 - std::norm(z));
}

} // namespace

double horosphere_limit_estimate(const BidiscBoundaryPoint& bp, const BidiscPoint& p,
                                 HorosphereMode mode) {
    constexpr int k_min = 8, k_max = 40, tail_from = 28;
    double tail_best = (mode == HorosphereMode::Small) ? -std::numeric_limits<double>::infinity()
                                                       : std::numeric_limits<double>::infinity();
    double tail_lo = std::numeric_limits<double>::infinity();
    double tail_hi = -std::numeric_limits<double>::infinity();

    for (int k = k_min; k <= k_max; ++k) {
        const double r = 1.0 - std::ldexp(1.0, -k);
        Cx w1, w2;
        std::visit(
            [&](const auto& b) {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, SilovCorner>) {
                    w1 = r * b.tau1.point();
                    w2 = r * b.tau2.point();
                } else if constexpr (std::is_same_v<T, VerticalFlat>) {
                    w1 = r * b.tau1.point();
                    w2 = b.y.z;
                } else {
                    w1 = b.x.z;
                    w2 = r * b.tau2.point();
                }
            },
            bp);

        // Write omega(z, w_i) = gap_i + omega(0, w_i) so the large common part
        // is computed once per factor and cancels exactly in the difference.
        const auto omega0 = [](Cx w) {
            return std::log(1.0 + std::abs(w)) - 0.5 * std::log(1.0 - std::norm(w));
        };
        const double o1 = omega0(w1), o2 = omega0(w2);
        const double dp = std::max(disc_distance_gap(p.x.z, w1) + o1, disc_distance_gap(p.y.z, w2) + o2);
        const double d0 = std::max(o1, o2);
        const double d = dp - d0;

        if (k >= tail_from) {
            tail_lo = std::min(tail_lo, d);
            tail_hi = std::max(tail_hi, d);
            tail_best = (mode == HorosphereMode::Small) ? std::max(tail_best, d)
                                                        : std::min(tail_best, d);
        }
    }

    if (tail_hi - tail_lo > 1e-4)
        throw NumericFailure("horosphere limit estimate did not stabilize over the tail window");
    return std::exp(2.0 * tail_best);
}

const char* boundary_kind_name(const BidiscBoundaryPoint& bp) {
    return std::visit(
        [](const auto& b) -> const char* {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SilovCorner>) return "corner";
            else if constexpr (std::is_same_v<T, VerticalFlat>) return "vflat";
            else return "hflat";
        },
        bp);
}

} // namespace bidisc
