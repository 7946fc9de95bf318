#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bidisc/map_expr.hpp"

namespace bidisc {

// A holomorphic self-map of the disc given by evaluation callbacks. `dual`
// may be empty; derivatives then fall back to central differences.
struct OneVarMap {
    std::function<Cx(Cx)> value;
    std::function<DualValue(Cx)> dual;

    Cx operator()(Cx z) const { return value(z); }
    DualValue derivative(Cx z) const;

    // Treats the expression as a map of one variable: both x and y are bound
    // to the argument, so a pure-x or pure-y expression works either way and
    // a mixed expression becomes its diagonal restriction.
    static OneVarMap from_expr(const MapExpr& e);
};

// Orbit z0, g(z0), ..., g^n(z0) (length n + 1).
std::vector<Cx> iterate(const OneVarMap& g, DiscPoint z0, std::size_t n);

struct DenjoyWolffOptions {
    std::size_t budget = 100000;
    double delta_int = 0.02;  // orbit counts as settled-inside within |z| <= 1 - delta_int
    double delta_bd = 1e-4;   // |z| > 1 - delta_bd switches to boundary mode
    double cauchy_tol = 1e-10;
};

struct DenjoyWolffResult {
    enum class Kind { Interior, Boundary, IdentityMap };
    Kind kind = Kind::Interior;
    // Interior
    Cx point{};
    double multiplier_modulus = 0.0;
    // Boundary
    UnitBoundaryPoint tau{};
    double alpha = 0.0;
};

// Locates the Denjoy-Wolff point of an audited self-map: the interior fixed
// point (Newton-polished to |g(p) - p| < 1e-12) when one exists, otherwise
// the boundary point all orbits converge to, with its dilatation coefficient.
DenjoyWolffResult denjoy_wolff(const OneVarMap& g, const DenjoyWolffOptions& opt = {});

// Location step only; boundary results carry alpha = 0.
DenjoyWolffResult denjoy_wolff_locate(const OneVarMap& g, const DenjoyWolffOptions& opt = {});

struct DilatationEstimate {
    double lambda = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    std::vector<std::pair<double, double>> samples; // (r, ratio)
};

// Radial estimate of liminf (1 - |g(r tau)|) / (1 - r) as r -> 1, taking the
// minimum over the tail of the schedule r_k = 1 - 2^-k, k = 8..40.
DilatationEstimate boundary_dilatation(const OneVarMap& g, UnitBoundaryPoint tau);

struct JuliaCheck {
    bool pass = true;
    std::optional<Cx> witness;
    double witness_radius = 0.0;
    double witness_value = 0.0; // u_tau(g(witness))
};

// Samples E(sigma, R) for each R and checks g maps it into E(tau, alpha R).
JuliaCheck julia_containment(const OneVarMap& g, UnitBoundaryPoint sigma, UnitBoundaryPoint tau,
                             double alpha, std::span<const double> radii, std::size_t n_samples,
                             std::uint64_t seed);

struct MobiusProbeResult {
    enum class Kind { IsAutomorphism, IsIdentity, NotAutomorphism };
    Kind kind = Kind::NotAutomorphism;
    // normal form e^{i phi} (z - a) / (1 - conj(a) z) when kind == IsAutomorphism
    Cx a{};
    double phi = 0.0;
};

// Fits a Moebius transformation through g at three reference points, checks
// the fit against g at 50 seeded points, and tests whether the fit maps the
// unit circle to itself.
MobiusProbeResult mobius_probe(const OneVarMap& g);

struct PropernessResult {
    enum class Kind { Proper, NotProper };
    Kind kind = Kind::Proper;
    double witness_angle = 0.0;
    Cx interior_limit{};
};

// Radial |g| limits along n_angles boundary directions. NotProper when some
// direction's tail stays below 1 - 1e-3 (the radial limit is interior);
// Proper when every tail exceeds 1 - 1e-6; IndeterminateError in between.
PropernessResult properness_probe(const OneVarMap& g, std::size_t n_angles);

// Damped Newton iteration for g(p) = p. Returns the polished fixed point when
// it converges inside the open disc, otherwise nullopt.
std::optional<Cx> newton_fixed_point(const OneVarMap& g, Cx start, double tol = 1e-13,
                                     int max_steps = 60);

} // namespace bidisc
