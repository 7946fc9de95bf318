#pragma once

#include <complex>
#include <variant>

#include "bidisc/errors.hpp"

namespace bidisc {

using Cx = std::complex<double>;

// Normalize an angle to (-pi, pi].
double normalize_angle(double t);

// A point of the open unit disc.
struct DiscPoint {
    Cx z{0.0, 0.0};

    DiscPoint() = default;
    explicit DiscPoint(Cx value);
    DiscPoint(double re, double im) : DiscPoint(Cx{re, im}) {}

    double re() const { return z.real(); }
    double im() const { return z.imag(); }
};

struct BidiscPoint {
    DiscPoint x, y;
};

// A point of the unit circle, stored as an angle so the modulus never drifts.
struct UnitBoundaryPoint {
    double theta = 0.0;

    UnitBoundaryPoint() = default;
    explicit UnitBoundaryPoint(double angle) : theta(normalize_angle(angle)) {}

    Cx point() const { return std::polar(1.0, theta); }
};

// Boundary locations of the bidisc: a Shilov corner, or a point of one of the
// two kinds of flat faces ({tau} x disc and disc x {tau}).
struct SilovCorner {
    UnitBoundaryPoint tau1, tau2;
};
struct VerticalFlat {
    UnitBoundaryPoint tau1;
    DiscPoint y;
};
struct HorizontalFlat {
    DiscPoint x;
    UnitBoundaryPoint tau2;
};
using BidiscBoundaryPoint = std::variant<SilovCorner, VerticalFlat, HorizontalFlat>;

// Horocycle E(tau, R) of the unit disc, tangent to the circle at tau.
struct Horocycle {
    UnitBoundaryPoint tau;
    double radius = 1.0;

    Horocycle(UnitBoundaryPoint t, double r);
};

struct EuclideanDisc {
    Cx center;
    double radius;
};

// Poincare distance on the unit disc (= Kobayashi distance of the disc).
double poincare_distance(DiscPoint z, DiscPoint w);

// Kobayashi distance of the bidisc: max of the componentwise distances.
double kobayashi_distance(const BidiscPoint& p, const BidiscPoint& q);

// Horocycle membership function u(z) = |tau - z|^2 / (1 - |z|^2);
// z lies in E(tau, R) exactly when u(z) < R.
double horocycle_value(UnitBoundaryPoint tau, DiscPoint z);

// Same, on a raw complex value. Returns +inf when |z| >= 1, i.e. outside
// every horocycle. Used on map images that are not yet validated points.
double horocycle_value_raw(Cx tau, Cx z);

// E(tau, R) as a Euclidean disc: center tau/(1+R), radius R/(1+R).
EuclideanDisc horocycle_euclidean(const Horocycle& h);

// Signed membership margin of p in the horosphere of radius R at bp;
// negative means p is inside. Corners use the product horosphere
// E(tau1,R) x E(tau2,R); flat points use E(tau,R) x disc (one-sided).
double horosphere_margin(const BidiscBoundaryPoint& bp, double R, const BidiscPoint& p);

// Margin evaluated on raw image coordinates (may lie outside the closed bidisc).
double horosphere_margin_raw(const BidiscBoundaryPoint& bp, double R, Cx x, Cx y);

enum class HorosphereMode { Small, Big };

// Estimates the horosphere value at p directly from the defining boundary
// limit of k(p, w) - k(0, w), sampling w radially toward bp. Returns
// exp(2 * limit), comparable with horosphere_margin(bp, R, p) + R.
// Cross-validation oracle for the closed forms above.
double horosphere_limit_estimate(const BidiscBoundaryPoint& bp, const BidiscPoint& p,
                                 HorosphereMode mode);

// "corner", "vflat", or "hflat"; used by serializers.
const char* boundary_kind_name(const BidiscBoundaryPoint& bp);

} // namespace bidisc
