#include "bidisc/disc_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>

#include "bidisc/rng.hpp"

namespace bidisc {

namespace {

constexpr int kScheduleMin = 8;
constexpr int kScheduleMax = 40;
constexpr int kScheduleTail = 28;

const Cx kIdentityProbes[3] = {{0.31, 0.07}, {-0.42, -0.11}, {0.12, 0.55}};

bool probes_identity(const OneVarMap& g, double tol = 5e-13) {
    for (const Cx p : kIdentityProbes)
        if (std::abs(g.value(p) - p) > tol) return false;
    return true;
}

} // namespace

DualValue OneVarMap::derivative(Cx z) const {
    if (dual) return dual(z);
    const double h = 1e-7;
    const Cx f = value(z);
    const Cx d = (value(z + h) - value(z - h)) / (2.0 * h);
    return {f, d};
}

OneVarMap OneVarMap::from_expr(const MapExpr& e) {
    OneVarMap m;
    m.value = [e](Cx z) { return e.eval(z, z); };
    m.dual = [e](Cx z) { return e.eval_dual(z, z, {1.0, 0.0}, {1.0, 0.0}); };
    return m;
}

std::vector<Cx> iterate(const OneVarMap& g, DiscPoint z0, std::size_t n) {
    std::vector<Cx> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(z0.z);
    Cx z = z0.z;
    for (std::size_t k = 0; k < n; ++k) {
        z = g.value(z);
        orbit.push_back(z);
    }
    return orbit;
}

std::optional<Cx> newton_fixed_point(const OneVarMap& g, Cx start, double tol, int max_steps) {
    const auto residual_at = [&](Cx z) -> std::optional<double> {
        try {
            return std::abs(g.value(z) - z);
        } catch (const PoleError&) {
            return std::nullopt;
        } catch (const ContinuationFailure&) {
            return std::nullopt;
        }
    };

    Cx z = start;
    auto res = residual_at(z);
    if (!res) return std::nullopt;
    for (int step = 0; step < max_steps; ++step) {
        DualValue d;
        try {
            d = g.derivative(z);
        } catch (const PoleError&) {
            return std::nullopt;
        } catch (const ContinuationFailure&) {
            return std::nullopt;
        }
        const Cx h = d.value - z;
        if (std::abs(h) < tol) break;
        const Cx denom = d.deriv - 1.0;
        if (std::abs(denom) < 1e-15) return std::nullopt;
        Cx delta = -h / denom;
        // damping: halve the step until the residual decreases; candidates
        // leaving the closed disc are rejected the same way
        bool moved = false;
        for (int half = 0; half < 30; ++half) {
            const Cx cand = z + delta;
            if (std::abs(cand) <= 1.0) {
                const auto cand_res = residual_at(cand);
                if (cand_res && *cand_res < *res) {
                    z = cand;
                    res = cand_res;
                    moved = true;
                    break;
                }
            }
            delta *= 0.5;
        }
        if (!moved) break;
    }
    const auto final_res = residual_at(z);
    if (final_res && *final_res < tol && std::abs(z) < 1.0 - 1e-14) return z;
    return std::nullopt;
}

DenjoyWolffResult denjoy_wolff(const OneVarMap& g, const DenjoyWolffOptions& opt) {
    DenjoyWolffResult r = denjoy_wolff_locate(g, opt);
    if (r.kind == DenjoyWolffResult::Kind::Boundary)
        r.alpha = boundary_dilatation(g, r.tau).lambda;
    return r;
}

DenjoyWolffResult denjoy_wolff_locate(const OneVarMap& g, const DenjoyWolffOptions& opt) {
    if (probes_identity(g)) {
        DenjoyWolffResult r;
        r.kind = DenjoyWolffResult::Kind::IdentityMap;
        return r;
    }

    const auto interior_result = [&](Cx p) {
        DenjoyWolffResult r;
        r.kind = DenjoyWolffResult::Kind::Interior;
        r.point = p;
        r.multiplier_modulus = std::abs(g.derivative(p).deriv);
        return r;
    };

    constexpr std::size_t window_len = 33;
    std::deque<Cx> window;
    std::optional<Cx> boundary_fp; // Newton limit that landed on the unit circle

    // Speculative Newton from an orbit point. A near-boundary result is only
    // trusted as a boundary-angle candidate: close to a multiple boundary
    // root the residual goes flat and Newton can stop at a point that is
    // measurably interior, so interior acceptance requires |p| <= 1 - delta_int.
    const auto try_newton = [&](Cx start, double accept_radius) -> std::optional<Cx> {
        if (auto p = newton_fixed_point(g, start, 1e-13)) {
            if (std::abs(*p) <= accept_radius) return p;
            if (std::abs(std::abs(*p) - 1.0) < 1e-6) boundary_fp = *p;
            return std::nullopt;
        }
        // undamped crawl toward a boundary fixed point polishes the angle
        Cx z = start;
        for (int i = 0; i < 60; ++i) {
            DualValue d;
            try {
                d = g.derivative(z);
            } catch (const PoleError&) {
                return std::nullopt;
            } catch (const ContinuationFailure&) {
                return std::nullopt;
            }
            const Cx denom = d.deriv - 1.0;
            if (std::abs(denom) < 1e-15) break;
            const Cx step = -(d.value - z) / denom;
            if (std::abs(step) > 0.5 || std::abs(z + step) > 1.0) break;
            z += step;
            if (std::abs(step) < 1e-14) break;
        }
        double res = 1.0;
        try {
            res = std::abs(g.value(z) - z);
        } catch (const PoleError&) {
        } catch (const ContinuationFailure&) {
        }
        if (res < 1e-6 && std::abs(std::abs(z) - 1.0) < 1e-6) boundary_fp = z;
        return std::nullopt;
    };

    const double speculative_radius = 1.0 - opt.delta_int;
    const auto window_still = [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < window.size(); ++i)
            worst = std::max(worst, std::abs(window[i + 1] - window[i]));
        return worst < opt.cauchy_tol;
    };

    Cx z{0.0, 0.0};
    window.push_back(z);
    bool boundary_mode = false;
    std::size_t next_newton = 1;

    for (std::size_t k = 1; k <= opt.budget; ++k) {
        z = g.value(z);
        window.push_back(z);
        if (window.size() > window_len) window.pop_front();

        if (std::abs(z) > 1.0 - opt.delta_bd) {
            boundary_mode = true;
            break;
        }

        if (k == next_newton) {
            next_newton = (next_newton < 8192) ? next_newton * 2 : next_newton + 8192;
            if (auto p = try_newton(z, speculative_radius)) return interior_result(*p);
        }

        // a Cauchy orbit well clear of the boundary shell has converged;
        // Newton then pins the fixed point it settled at
        if (window.size() == window_len && std::abs(z) <= 1.0 - 1e-3 && window_still()) {
            if (auto p = try_newton(z, 1.0 - 1e-6)) return interior_result(*p);
        }
    }

    if (!boundary_mode) {
        // budget exhausted: either the orbit converged inside a shell the
        // settle check does not cover, or it is crawling toward the boundary
        // (parabolic approach never reaches the delta_bd shell in budget)
        if (window_still()) {
            if (auto p = try_newton(z, 1.0 - 1e-6)) return interior_result(*p);
        } else {
            double mean_mod = 0.0;
            for (const Cx& w : window) mean_mod += std::abs(w);
            mean_mod /= static_cast<double>(window.size());
            const bool drifting = std::abs(window.back()) >= std::abs(window.front()) - 1e-12;
            if (mean_mod > 0.9 && drifting) boundary_mode = true;
        }
    }

    if (!boundary_mode)
        throw IndeterminateError(
            "orbit neither settled at an interior point nor approached the boundary within budget");

    // run a few more steps so the window hugs the boundary, then average angles
    for (std::size_t k = 0; k < window_len && std::abs(z) < 1.0 - 1e-9; ++k) {
        try {
            const Cx w = g.value(z);
            if (std::abs(w) >= 1.0) break;
            z = w;
            window.push_back(z);
            if (window.size() > window_len) window.pop_front();
        } catch (const PoleError&) {
            break;
        } catch (const ContinuationFailure&) {
            break;
        }
    }
    Cx mean{0.0, 0.0};
    for (const Cx& w : window)
        if (std::abs(w) > 1e-12) mean += w / std::abs(w);
    if (std::abs(mean) < 1e-9)
        throw IndeterminateError("boundary orbit has no stable direction");
    double theta = std::arg(mean);

    if (!boundary_fp) try_newton(z, 0.0);
    if (boundary_fp && std::abs(normalize_angle(std::arg(*boundary_fp) - theta)) < 0.1)
        theta = std::arg(*boundary_fp);

    DenjoyWolffResult r;
    r.kind = DenjoyWolffResult::Kind::Boundary;
    r.tau = UnitBoundaryPoint(theta);
    return r;
}

DilatationEstimate boundary_dilatation(const OneVarMap& g, UnitBoundaryPoint tau) {
    DilatationEstimate est;
    est.samples.reserve(kScheduleMax - kScheduleMin + 1);
    const Cx t = tau.point();

    double window_min = std::numeric_limits<double>::infinity();
    double window_max = -std::numeric_limits<double>::infinity();
    bool increasing = true, decreasing = true;
    double prev = 0.0;
    bool have_prev = false;

    for (int k = kScheduleMin; k <= kScheduleMax; ++k) {
        const double one_minus_r = std::ldexp(1.0, -k);
        const double r = 1.0 - one_minus_r;
        const Cx w = g.value(r * t);
        const double ratio = (1.0 - std::abs(w)) / one_minus_r;
        est.samples.emplace_back(r, ratio);
        if (k >= kScheduleTail) {
            window_min = std::min(window_min, ratio);
            window_max = std::max(window_max, ratio);
            if (have_prev) {
                if (ratio > prev + 1e-12) decreasing = false;
                if (ratio < prev - 1e-12) increasing = false;
            }
            prev = ratio;
            have_prev = true;
        }
    }

    if (!(window_min > 0.0))
        throw NumericFailure("radial dilatation ratios are not positive");
    if ((window_max - window_min) > 0.10 * window_min && !increasing && !decreasing)
        throw NumericFailure("radial dilatation ratios oscillate across the tail window");

    est.lambda = window_min;
    est.window_min = window_min;
    est.window_max = window_max;
    return est;
}

JuliaCheck julia_containment(const OneVarMap& g, UnitBoundaryPoint sigma, UnitBoundaryPoint tau,
                             double alpha, std::span<const double> radii, std::size_t n_samples,
                             std::uint64_t seed) {
    if (!(alpha > 0.0)) throw RangeError("julia containment requires alpha > 0");
    SplitMix64 rng(seed);
    const Cx tpoint = tau.point();
    JuliaCheck result;
    double worst = -std::numeric_limits<double>::infinity();
    for (const double R : radii) {
        const EuclideanDisc d = horocycle_euclidean(Horocycle(sigma, R));
        for (std::size_t i = 0; i < n_samples; ++i) {
            Cx z = rng.disc(d.center, d.radius);
            while (std::abs(z) >= 1.0 - 1e-12) z = rng.disc(d.center, d.radius);
            const double u = horocycle_value_raw(tpoint, g.value(z));
            worst = std::max(worst, u - alpha * R);
            if (u > alpha * R + 1e-9) {
                result.pass = false;
                result.witness = z;
                result.witness_radius = R;
                result.witness_value = u;
                return result;
            }
        }
    }
    result.witness_value = worst;
    return result;
}

namespace {

struct Mobius {
    Cx a{1.0}, b{0.0}, c{0.0}, d{1.0};
    Cx operator()(Cx z) const { return (a * z + b) / (c * z + d); }
};

// Least-structured fit: solve a z_i + b - c z_i w_i - d w_i = 0 for the
// one-dimensional nullspace of the 3x4 system.
std::optional<Mobius> fit_mobius(const Cx z[3], const Cx w[3]) {
    Cx m[3][4];
    for (int i = 0; i < 3; ++i) {
        m[i][0] = z[i];
        m[i][1] = 1.0;
        m[i][2] = -z[i] * w[i];
        m[i][3] = -w[i];
    }
    int pivot_col[3] = {-1, -1, -1};
    int row = 0;
    for (int col = 0; col < 4 && row < 3; ++col) {
        int best = -1;
        double best_mag = 1e-12;
        for (int r = row; r < 3; ++r)
            if (std::abs(m[r][col]) > best_mag) {
                best_mag = std::abs(m[r][col]);
                best = r;
            }
        if (best < 0) continue;
        std::swap(m[row], m[best]);
        for (int r = 0; r < 3; ++r) {
            if (r == row) continue;
            const Cx factor = m[r][col] / m[row][col];
            for (int cc = col; cc < 4; ++cc) m[r][cc] -= factor * m[row][cc];
        }
        pivot_col[row] = col;
        ++row;
    }
    // free column = the one that never became a pivot
    bool is_pivot[4] = {false, false, false, false};
    for (int r = 0; r < row; ++r)
        if (pivot_col[r] >= 0) is_pivot[pivot_col[r]] = true;
    int free_col = -1;
    for (int c = 3; c >= 0; --c)
        if (!is_pivot[c]) {
            free_col = c;
            break;
        }
    if (free_col < 0) return std::nullopt;
    Cx sol[4] = {0.0, 0.0, 0.0, 0.0};
    sol[free_col] = 1.0;
    for (int r = row - 1; r >= 0; --r) {
        const int pc = pivot_col[r];
        Cx acc = 0.0;
        for (int c = pc + 1; c < 4; ++c) acc += m[r][c] * sol[c];
        sol[pc] = -acc / m[r][pc];
    }
    Mobius mob;
    mob.a = sol[0];
    mob.b = sol[1];
    mob.c = sol[2];
    mob.d = sol[3];
    return mob;
}

} // namespace

MobiusProbeResult mobius_probe(const OneVarMap& g) {
    MobiusProbeResult result;
    if (probes_identity(g, 1e-9)) {
        result.kind = MobiusProbeResult::Kind::IsIdentity;
        return result;
    }

    const Cx zs[3] = {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}};
    Cx ws[3];
    try {
        for (int i = 0; i < 3; ++i) ws[i] = g.value(zs[i]);
    } catch (const PoleError&) {
        return result;
    }
    const auto fit = fit_mobius(zs, ws);
    if (!fit) return result;

    SplitMix64 rng(0x6d6f6269757350ULL);
    for (int i = 0; i < 50; ++i) {
        const Cx z = rng.unit_disc(0.95);
        Cx gv, mv;
        try {
            gv = g.value(z);
            mv = (*fit)(z);
        } catch (const PoleError&) {
            return result;
        }
        if (std::abs(gv - mv) > 1e-9) return result;
    }

    // a Moebius self-map of the disc is an automorphism iff it keeps the circle
    for (const double t : {0.3, 1.7, 2.9, -2.3}) {
        const Cx boundary = std::polar(1.0, t);
        if (std::abs(fit->c * boundary + fit->d) < 1e-9) return result;
        if (std::abs(std::abs((*fit)(boundary)) - 1.0) > 1e-9) return result;
    }

    result.kind = MobiusProbeResult::Kind::IsAutomorphism;
    if (std::abs(fit->a) > 1e-12) {
        result.a = -fit->b / fit->a;
        const Cx ref = std::polar(1.0, 0.4);
        const Cx canonical = (ref - result.a) / (1.0 - std::conj(result.a) * ref);
        if (std::abs(canonical) > 1e-12) result.phi = std::arg((*fit)(ref) / canonical);
    }
    return result;
}

PropernessResult properness_probe(const OneVarMap& g, std::size_t n_angles) {
    if (n_angles == 0) throw RangeError("properness probe needs at least one angle");
    bool gap_band = false;
    double gap_angle = 0.0;
    for (std::size_t j = 0; j < n_angles; ++j) {
        const double theta = normalize_angle(2.0 * M_PI * static_cast<double>(j) /
                                             static_cast<double>(n_angles));
        const Cx dir = std::polar(1.0, theta);
        double tail = 0.0;
        int tail_count = 0;
        Cx last{};
        for (int k = kScheduleMin; k <= 30; ++k) {
            const double r = 1.0 - std::ldexp(1.0, -k);
            last = g.value(r * dir);
            if (k >= 28) {
                tail += std::abs(last);
                ++tail_count;
            }
        }
        tail /= static_cast<double>(tail_count);
        if (tail < 1.0 - 1e-3) {
            PropernessResult res;
            res.kind = PropernessResult::Kind::NotProper;
            res.witness_angle = theta;
            res.interior_limit = last;
            return res;
        }
        if (tail < 1.0 - 1e-6) {
            gap_band = true;
            gap_angle = theta;
        }
    }
    if (gap_band)
        throw IndeterminateError("radial modulus tail in the gap band at angle " +
                                 std::to_string(gap_angle));
    return {};
}

} // namespace bidisc
