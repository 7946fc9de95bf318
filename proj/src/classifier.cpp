#include "bidisc/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "bidisc/rng.hpp"

namespace bidisc {

namespace {

std::uint64_t hash_cx(Cx z) {
    const std::uint64_t a = std::bit_cast<std::uint64_t>(z.real());
    const std::uint64_t b = std::bit_cast<std::uint64_t>(z.imag());
    std::uint64_t h = a * 0x9e3779b97f4a7c15ULL;
    h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

OneVarMap slice_map(const MapExpr& component, SliceAxis axis, Cx t) {
    OneVarMap m;
    if (axis == SliceAxis::SliceInX) {
        m.value = [component, t](Cx z) { return component.eval(z, t); };
        m.dual = [component, t](Cx z) {
            return component.eval_dual(z, t, {1.0, 0.0}, {0.0, 0.0});
        };
    } else {
        m.value = [component, t](Cx z) { return component.eval(t, z); };
        m.dual = [component, t](Cx z) {
            return component.eval_dual(t, z, {0.0, 0.0}, {1.0, 0.0});
        };
    }
    return m;
}

} // namespace

// ── SliceCurve ───────────────────────────────────────────────────────────────

SliceCurve::SliceCurve(MapExpr component, SliceAxis axis, Cx anchor_param, Cx anchor_value)
    : state_(std::make_shared<State>()) {
    state_->component = std::move(component);
    state_->axis = axis;
    state_->anchor_param = anchor_param;
    state_->anchor_value = anchor_value;
}

Cx SliceCurve::operator()(Cx t) const {
    const State& s = *state_;
    const std::uint64_t key = hash_cx(t);
    if (auto it = s.cache.find(key); it != s.cache.end()) return it->second;

    const auto solve_at = [&](Cx param, Cx start) -> std::optional<Cx> {
        return newton_fixed_point(slice_map(s.component, s.axis, param), start, 1e-14);
    };

    std::optional<Cx> value;
    if (s.has_last) value = solve_at(t, s.last_value);
    if (!value) value = solve_at(t, s.anchor_value);
    if (!value) value = solve_at(t, {0.0, 0.0});
    if (!value) {
        // short continuation path from the anchor parameter
        Cx warm = s.anchor_value;
        bool ok = true;
        for (int step = 1; step <= 16 && ok; ++step) {
            const Cx param =
                s.anchor_param + (t - s.anchor_param) * (static_cast<double>(step) / 16.0);
            if (auto v = solve_at(param, warm)) warm = *v;
            else ok = false;
        }
        if (ok) value = warm;
    }
    if (!value) {
        // last resort: full Denjoy-Wolff location for this slice
        const auto dw = denjoy_wolff_locate(slice_map(s.component, s.axis, t));
        if (dw.kind == DenjoyWolffResult::Kind::Interior) value = dw.point;
    }
    if (!value)
        throw ContinuationFailure("slice fixed-point solve failed at parameter " +
                                  std::to_string(t.real()) + (t.imag() < 0 ? "-" : "+") +
                                  std::to_string(std::abs(t.imag())) + "i");

    s.cache.emplace(key, *value);
    s.has_last = true;
    s.last_param = t;
    s.last_value = *value;
    return *value;
}

DualValue SliceCurve::dual(Cx t) const {
    const Cx v = (*this)(t);
    const State& s = *state_;
    Cx d_slice, d_param;
    if (s.axis == SliceAxis::SliceInX) {
        d_slice = s.component.eval_dual(v, t, {1.0, 0.0}, {0.0, 0.0}).deriv;
        d_param = s.component.eval_dual(v, t, {0.0, 0.0}, {1.0, 0.0}).deriv;
    } else {
        d_slice = s.component.eval_dual(t, v, {0.0, 0.0}, {1.0, 0.0}).deriv;
        d_param = s.component.eval_dual(t, v, {1.0, 0.0}, {0.0, 0.0}).deriv;
    }
    const Cx denom = 1.0 - d_slice;
    if (std::abs(denom) < 1e-12)
        throw ContinuationFailure("implicit derivative is singular along the fixed-point curve");
    return {v, d_param / denom};
}

OneVarMap SliceCurve::as_map() const {
    SliceCurve self = *this;
    OneVarMap m;
    m.value = [self](Cx t) { return self(t); };
    m.dual = [self](Cx t) { return self.dual(t); };
    return m;
}

// ── slice analysis ──────────────────────────────────────────────────────────

std::vector<Cx> default_slice_grid() {
    static const double radii[] = {0.2, 0.5, 0.8};
    return slice_grid(radii, 4);
}

std::vector<Cx> slice_grid(std::span<const double> radii, std::size_t n_angles) {
    std::vector<Cx> grid;
    grid.reserve(radii.size() * n_angles);
    for (const double r : radii)
        for (std::size_t j = 0; j < n_angles; ++j)
            grid.push_back(std::polar(r, 2.0 * M_PI * static_cast<double>(j) /
                                             static_cast<double>(n_angles)));
    return grid;
}

HerveComponentResult slice_analysis(const MapExpr& component, SliceAxis axis,
                                    std::span<const Cx> grid) {
    if (grid.empty()) throw RangeError("slice analysis needs a nonempty grid");

    std::vector<std::pair<Cx, Cx>> interior;
    std::vector<double> boundary;
    for (const Cx t : grid) {
        const auto dw = denjoy_wolff_locate(slice_map(component, axis, t));
        switch (dw.kind) {
        case DenjoyWolffResult::Kind::IdentityMap:
            throw IndeterminateError("identity slice: component degenerates to a projection");
        case DenjoyWolffResult::Kind::Interior: interior.emplace_back(t, dw.point); break;
        case DenjoyWolffResult::Kind::Boundary: boundary.push_back(dw.tau.theta); break;
        }
    }

    if (!interior.empty() && !boundary.empty())
        throw InconsistentSlices("slice probes split: " + std::to_string(interior.size()) +
                                 " interior fixed points vs " + std::to_string(boundary.size()) +
                                 " boundary Wolff points");

    HerveComponentResult result;
    if (interior.empty()) {
        double spread = 0.0;
        for (std::size_t i = 0; i < boundary.size(); ++i)
            for (std::size_t j = i + 1; j < boundary.size(); ++j)
                spread = std::max(spread, std::abs(normalize_angle(boundary[i] - boundary[j])));
        if (spread > 1e-4)
            throw InconsistentSlices("slice Wolff points depend on the parameter (spread " +
                                     std::to_string(spread) + " rad)");
        Cx mean{0.0, 0.0};
        for (const double th : boundary) mean += std::polar(1.0, th);
        result.kind = HerveComponentResult::Kind::WolffIndependent;
        result.theta = std::arg(mean);
        result.spread = spread;
        return result;
    }

    result.kind = HerveComponentResult::Kind::FixedPointCurve;
    SliceCurve curve(component, axis, interior.front().first, interior.front().second);
    result.samples = interior;
    result.curve = curve;
    return result;
}

std::optional<DiscPoint> solve_slice_fixed_point(const MapExpr& f1, DiscPoint y) {
    const auto dw = denjoy_wolff_locate(slice_map(f1, SliceAxis::SliceInX, y.z));
    switch (dw.kind) {
    case DenjoyWolffResult::Kind::IdentityMap:
        throw IndeterminateError("identity slice: every point is fixed");
    case DenjoyWolffResult::Kind::Interior: return DiscPoint(dw.point);
    case DenjoyWolffResult::Kind::Boundary: return std::nullopt;
    }
    return std::nullopt;
}

// ── composed dynamics ───────────────────────────────────────────────────────

ComposedDynamics composed_dynamics(const SliceCurve& F1, const SliceCurve& F2) {
    OneVarMap g12, g21;
    g12.value = [F1, F2](Cx z) { return F1(F2(z)); };
    g12.dual = [F1, F2](Cx z) {
        const DualValue inner = F2.dual(z);
        const DualValue outer = F1.dual(inner.value);
        return DualValue{outer.value, outer.deriv * inner.deriv};
    };
    g21.value = [F1, F2](Cx z) { return F2(F1(z)); };
    g21.dual = [F1, F2](Cx z) {
        const DualValue inner = F1.dual(z);
        const DualValue outer = F2.dual(inner.value);
        return DualValue{outer.value, outer.deriv * inner.deriv};
    };

    ComposedDynamics cd;
    const auto dw12 = denjoy_wolff_locate(g12);
    if (dw12.kind == DenjoyWolffResult::Kind::Interior) {
        cd.interior_fixed_of_f1f2 = dw12.point;
        return cd;
    }
    if (dw12.kind == DenjoyWolffResult::Kind::IdentityMap) {
        cd.interior_fixed_of_f1f2 = F1(F2({0.0, 0.0}));
        return cd;
    }
    const auto dw21 = denjoy_wolff_locate(g21);
    if (dw21.kind != DenjoyWolffResult::Kind::Boundary) {
        cd.interior_fixed_of_f1f2 =
            dw21.kind == DenjoyWolffResult::Kind::Interior ? F1(dw21.point) : F1(F2({0.0, 0.0}));
        return cd;
    }

    cd.theta1 = dw12.tau.theta;
    cd.theta2 = dw21.tau.theta;
    cd.lambda1 = boundary_dilatation(F1.as_map(), UnitBoundaryPoint(cd.theta2)).lambda;
    cd.lambda2 = boundary_dilatation(F2.as_map(), UnitBoundaryPoint(cd.theta1)).lambda;
    cd.lambda12 = boundary_dilatation(g12, UnitBoundaryPoint(cd.theta1)).lambda;
    cd.lambda21 = boundary_dilatation(g21, UnitBoundaryPoint(cd.theta2)).lambda;

    const double prod = cd.lambda1 * cd.lambda2;
    const double rel12 = std::abs(cd.lambda12 - prod) / cd.lambda12;
    const double rel21 = std::abs(cd.lambda21 - prod) / cd.lambda21;
    if (std::max(rel12, rel21) > 0.02)
        throw ProductIdentityViolation(
            "composed dilatations disagree with lambda1*lambda2 beyond 2% (lambda12=" +
            std::to_string(cd.lambda12) + ", lambda21=" + std::to_string(cd.lambda21) +
            ", product=" + std::to_string(prod) + ")");
    return cd;
}

// ── fixed-point locus ───────────────────────────────────────────────────────

std::optional<BidiscPoint> newton2d_fixed_point(const BidiscMap& f, Cx x0, Cx y0, double tol,
                                                int max_steps) {
    Cx x = x0, y = y0;
    const auto residual = [&](Cx a, Cx b) -> std::optional<double> {
        try {
            const Cx r1 = f.f1.eval(a, b) - a;
            const Cx r2 = f.f2.eval(a, b) - b;
            return std::max(std::abs(r1), std::abs(r2));
        } catch (const PoleError&) {
            return std::nullopt;
        }
    };
    auto res = residual(x, y);
    if (!res) return std::nullopt;

    for (int step = 0; step < max_steps && *res >= tol; ++step) {
        Cx a11, a12, a21, a22, h1, h2;
        try {
            const DualValue f1x = f.f1.eval_dual(x, y, {1.0, 0.0}, {0.0, 0.0});
            const DualValue f1y = f.f1.eval_dual(x, y, {0.0, 0.0}, {1.0, 0.0});
            const DualValue f2x = f.f2.eval_dual(x, y, {1.0, 0.0}, {0.0, 0.0});
            const DualValue f2y = f.f2.eval_dual(x, y, {0.0, 0.0}, {1.0, 0.0});
            a11 = f1x.deriv - 1.0;
            a12 = f1y.deriv;
            a21 = f2x.deriv;
            a22 = f2y.deriv - 1.0;
            h1 = f1x.value - x;
            h2 = f2y.value - y;
        } catch (const PoleError&) {
            return std::nullopt;
        }
        const Cx det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-15) return std::nullopt;
        Cx dx = -(h1 * a22 - a12 * h2) / det;
        Cx dy = -(a11 * h2 - h1 * a21) / det;

        bool moved = false;
        for (int half = 0; half < 30; ++half) {
            const auto cand = residual(x + dx, y + dy);
            if (cand && *cand < *res) {
                x += dx;
                y += dy;
                res = cand;
                moved = true;
                break;
            }
            dx *= 0.5;
            dy *= 0.5;
        }
        if (!moved) break;
    }

    if (*res < tol && std::abs(x) < 1.0 - 1e-9 && std::abs(y) < 1.0 - 1e-9)
        return BidiscPoint{DiscPoint(x), DiscPoint(y)};
    return std::nullopt;
}

FixCurve::FixCurve(BidiscMap f, bool transposed, Cx anchor_param, Cx anchor_value)
    : state_(std::make_shared<State>()) {
    state_->f = std::move(f);
    state_->transposed = transposed;
    state_->anchor_param = anchor_param;
    state_->anchor_value = anchor_value;
}

Cx FixCurve::operator()(Cx t) const {
    const State& s = *state_;
    const MapExpr& solve_comp = s.transposed ? s.f.f2 : s.f.f1;
    const MapExpr& check_comp = s.transposed ? s.f.f1 : s.f.f2;
    const SliceAxis axis = s.transposed ? SliceAxis::SliceInY : SliceAxis::SliceInX;

    const auto solve_at = [&](Cx param, Cx start) {
        return newton_fixed_point(slice_map(solve_comp, axis, param), start, 1e-14);
    };

    std::optional<Cx> value;
    if (s.has_last) value = solve_at(t, s.last_value);
    if (!value) value = solve_at(t, s.anchor_value);
    if (!value) {
        Cx warm = s.anchor_value;
        bool ok = true;
        for (int step = 1; step <= 16 && ok; ++step) {
            const Cx param =
                s.anchor_param + (t - s.anchor_param) * (static_cast<double>(step) / 16.0);
            if (auto v = solve_at(param, warm)) warm = *v;
            else ok = false;
        }
        if (ok) value = warm;
    }
    if (!value) throw ContinuationFailure("fixed-point curve solve stalled");

    // the full system must hold, not just the solved component
    const Cx other = s.transposed ? check_comp.eval(t, *value) - t
                                  : check_comp.eval(*value, t) - t;
    if (std::abs(other) > 1e-8)
        throw ContinuationFailure("point left the fixed-point locus (residual " +
                                  std::to_string(std::abs(other)) + ")");

    s.has_last = true;
    s.last_param = t;
    s.last_value = *value;
    return *value;
}

OneVarMap FixCurve::as_map() const {
    FixCurve self = *this;
    OneVarMap m;
    m.value = [self](Cx t) { return self(t); };
    return m;
}

namespace {

bool probes_bidisc_identity(const BidiscMap& f) {
    SplitMix64 rng(0x69642d70726f6265ULL);
    for (int i = 0; i < 5; ++i) {
        const Cx x = rng.unit_disc(0.9), y = rng.unit_disc(0.9);
        try {
            if (std::abs(f.f1.eval(x, y) - x) > 1e-12) return false;
            if (std::abs(f.f2.eval(x, y) - y) > 1e-12) return false;
        } catch (const PoleError&) {
            return false;
        }
    }
    return true;
}

FixAnalysis classify_fix_curve(FixAnalysis analysis) {
    const OneVarMap g = analysis.curve->as_map();
    const auto mp = mobius_probe(g);
    if (mp.kind != MobiusProbeResult::Kind::NotAutomorphism) {
        analysis.g_class = FixAnalysis::GClass::AutomorphismOrIdentity;
        return analysis;
    }
    const auto pp = properness_probe(g, 16);
    if (pp.kind == PropernessResult::Kind::Proper) {
        analysis.g_class = FixAnalysis::GClass::ProperNotAut;
    } else {
        analysis.g_class = FixAnalysis::GClass::NotProper;
        analysis.not_proper_theta = pp.witness_angle;
        analysis.not_proper_c = pp.interior_limit;
    }
    return analysis;
}

std::vector<std::pair<Cx, Cx>> sample_fix_curve(const FixCurve& curve) {
    std::vector<std::pair<Cx, Cx>> samples;
    for (const Cx t : default_slice_grid()) samples.emplace_back(t, curve(t));
    return samples;
}

} // namespace

FixAnalysis fix_locus(const BidiscMap& f, const BidiscPoint& p0) {
    FixAnalysis analysis;
    analysis.base = p0;

    if (probes_bidisc_identity(f)) {
        analysis.dim = 2;
        return analysis;
    }

    const Cx deltas[] = {{0.04, 0.0}, {-0.04, 0.0}, {0.0, 0.04}, {0.0, -0.04}};
    for (const bool transposed : {false, true}) {
        const Cx anchor_param = transposed ? p0.x.z : p0.y.z;
        const Cx anchor_value = transposed ? p0.y.z : p0.x.z;
        FixCurve curve(f, transposed, anchor_param, anchor_value);
        std::size_t usable = 0, good = 0;
        for (const Cx d : deltas) {
            const Cx t = anchor_param + d;
            if (std::abs(t) >= 0.995) continue;
            ++usable;
            try {
                curve(t);
                ++good;
            } catch (const ContinuationFailure&) {
                break;
            }
        }
        if (usable >= 2 && good == usable) {
            analysis.dim = 1;
            analysis.curve = curve;
            analysis.curve_samples = sample_fix_curve(curve);
            return classify_fix_curve(std::move(analysis));
        }
    }

    // isolated: no nearby fixed point distinct from p0 on a small ring
    for (int j = 0; j < 4; ++j) {
        const Cx dir = std::polar(1e-3, 2.0 * M_PI * j / 4.0 + 0.4);
        for (const auto& [dx, dy] : {std::pair<Cx, Cx>{dir, 0.0}, std::pair<Cx, Cx>{0.0, dir}}) {
            const Cx sx = p0.x.z + dx, sy = p0.y.z + dy;
            if (std::abs(sx) >= 1.0 || std::abs(sy) >= 1.0) continue;
            if (auto q = newton2d_fixed_point(f, sx, sy)) {
                const double dist =
                    std::max(std::abs(q->x.z - p0.x.z), std::abs(q->y.z - p0.y.z));
                if (dist > 1e-6)
                    throw ContinuationFailure(
                        "fixed point is not isolated but no curve parametrization succeeded");
            }
        }
    }
    analysis.dim = 0;
    return analysis;
}

// ── classification ──────────────────────────────────────────────────────────

namespace {

struct ProjectionProbe {
    bool f1_is_pi1 = false;
    bool f2_is_pi2 = false;
};

ProjectionProbe probe_projections(const BidiscMap& f, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed ^ 0x70726f6a00ULL);
    ProjectionProbe probe{true, true};
    for (std::size_t i = 0; i < n && (probe.f1_is_pi1 || probe.f2_is_pi2); ++i) {
        const Cx x = rng.unit_disc(0.95), y = rng.unit_disc(0.95);
        try {
            if (probe.f1_is_pi1 && std::abs(f.f1.eval(x, y) - x) > 1e-12) probe.f1_is_pi1 = false;
            if (probe.f2_is_pi2 && std::abs(f.f2.eval(x, y) - y) > 1e-12) probe.f2_is_pi2 = false;
        } catch (const PoleError&) {
            probe.f1_is_pi1 = probe.f2_is_pi2 = false;
        }
    }
    return probe;
}

std::optional<BidiscPoint> search_interior_fixed_point(const BidiscMap& f) {
    // Near a multiple boundary root the residual flattens out and Newton can
    // stop at a measurably interior point, so speculative results are only
    // accepted comfortably inside; near-boundary fixed points must earn
    // acceptance through a converged orbit.
    const auto speculative = [&](Cx x0, Cx y0) -> std::optional<BidiscPoint> {
        auto p = newton2d_fixed_point(f, x0, y0);
        if (p && std::abs(p->x.z) <= 0.98 && std::abs(p->y.z) <= 0.98) return p;
        return std::nullopt;
    };
    if (auto p = speculative({0.0, 0.0}, {0.0, 0.0})) return p;

    Cx x{0.0, 0.0}, y{0.0, 0.0};
    Cx px = x, py = y;
    std::size_t still = 0;
    std::size_t next_attempt = 1;
    for (std::size_t k = 1; k <= 4000; ++k) {
        try {
            const Cx nx = f.f1.eval(x, y);
            const Cx ny = f.f2.eval(x, y);
            x = nx;
            y = ny;
        } catch (const PoleError&) {
            break;
        }
        if (std::abs(x) >= 1.0 || std::abs(y) >= 1.0) break;
        const double step = std::max(std::abs(x - px), std::abs(y - py));
        px = x;
        py = y;
        still = step < 1e-10 ? still + 1 : 0;
        if (still >= 16 && std::abs(x) <= 1.0 - 1e-3 && std::abs(y) <= 1.0 - 1e-3) {
            if (auto p = newton2d_fixed_point(f, x, y)) {
                if (std::abs(p->x.z) < 1.0 - 1e-6 && std::abs(p->y.z) < 1.0 - 1e-6) return p;
            }
            break;
        }
        if (k == next_attempt) {
            next_attempt *= 2;
            if (auto p = speculative(x, y)) return p;
        }
    }

    const Cx seeds[][2] = {{{0.3, 0.0}, {0.0, -0.2}}, {{-0.25, 0.1}, {0.35, 0.0}}};
    for (const auto& s : seeds)
        if (auto p = speculative(s[0], s[1])) return p;
    return std::nullopt;
}

// Second-type data for a Wolff-independent angle theta1 and the other
// component's curve: dilatation and boundary limit of the curve at
// e^{i theta1}. lambda2 = +inf when the curve never approaches the boundary.
void second_type_limits(const SliceCurve& curve, double theta1, SecondType& out) {
    const Cx dir = std::polar(1.0, theta1);
    const double r_probe = 1.0 - std::ldexp(1.0, -30);
    const Cx w = curve(r_probe * dir);
    if (1.0 - std::abs(w) > 1e-3) {
        out.lambda2 = std::numeric_limits<double>::infinity();
        out.theta2 = std::nullopt;
        return;
    }
    out.lambda2 = boundary_dilatation(curve.as_map(), UnitBoundaryPoint(theta1)).lambda;
    out.theta2 = std::arg(w);
}

} // namespace

MapTypeClassification classify(const BidiscMap& f, const ClassifyOptions& opt,
                               const AuditReport* audit) {
    AuditReport local;
    if (!audit) {
        local = self_map_audit(f, opt.audit_samples, opt.seed);
        audit = &local;
    }
    if (!audit->pass)
        throw AuditFailure("self-map audit failed: max modulus " +
                           std::to_string(audit->max_modulus_seen) + ", " +
                           std::to_string(audit->schwarz_pick_violations) +
                           " Schwarz-Pick violations, " + std::to_string(audit->pole_hits) +
                           " pole hits");

    if (probes_bidisc_identity(f)) {
        InteriorFixed fixed;
        fixed.fix.dim = 2;
        return fixed;
    }

    const auto proj = probe_projections(f, opt.projection_probes, opt.seed);
    if (proj.f1_is_pi1 || proj.f2_is_pi2) {
        const MapExpr& other = proj.f1_is_pi1 ? f.f2 : f.f1;
        const SliceAxis axis = proj.f1_is_pi1 ? SliceAxis::SliceInY : SliceAxis::SliceInX;
        const auto grid = default_slice_grid();
        const auto sa = slice_analysis(other, axis, grid);
        if (sa.kind == HerveComponentResult::Kind::WolffIndependent) {
            ProjectionDegenerate pd;
            pd.f1_is_pi1 = proj.f1_is_pi1;
            pd.other_wolff_theta = sa.theta;
            return pd;
        }
        // the other component has a fixed-point curve, so the map has a
        // one-dimensional interior fixed-point locus
        InteriorFixed fixed;
        const bool transposed = proj.f1_is_pi1; // locus (z, F2(z)) when f1 == pi1
        const Cx anchor_value = (*sa.curve)({0.0, 0.0});
        FixCurve curve(f, transposed, {0.0, 0.0}, anchor_value);
        fixed.fix.dim = 1;
        fixed.fix.base = transposed
                             ? BidiscPoint{DiscPoint(0.0, 0.0), DiscPoint(anchor_value)}
                             : BidiscPoint{DiscPoint(anchor_value), DiscPoint(0.0, 0.0)};
        fixed.fix.curve = curve;
        fixed.fix.curve_samples = sa.samples;
        fixed.fix = classify_fix_curve(std::move(fixed.fix));
        return fixed;
    }

    if (auto p0 = search_interior_fixed_point(f)) {
        InteriorFixed fixed;
        fixed.fix = fix_locus(f, *p0);
        return fixed;
    }

    const auto grid = default_slice_grid();
    const auto sa1 = slice_analysis(f.f1, SliceAxis::SliceInX, grid);
    const auto sa2 = slice_analysis(f.f2, SliceAxis::SliceInY, grid);
    const bool curve1 = sa1.kind == HerveComponentResult::Kind::FixedPointCurve;
    const bool curve2 = sa2.kind == HerveComponentResult::Kind::FixedPointCurve;

    if (curve1 && curve2) {
        const auto cd = composed_dynamics(*sa1.curve, *sa2.curve);
        if (cd.interior_fixed_of_f1f2) {
            const Cx x0 = *cd.interior_fixed_of_f1f2;
            const Cx y0 = (*sa2.curve)(x0);
            if (auto p0 = newton2d_fixed_point(f, x0, y0)) {
                InteriorFixed fixed;
                fixed.fix = fix_locus(f, *p0);
                return fixed;
            }
            throw IndeterminateError("composition has an interior fixed point but the full map "
                                     "fixed point could not be polished");
        }
        FirstType ft;
        ft.F1 = *sa1.curve;
        ft.F2 = *sa2.curve;
        ft.theta1 = cd.theta1;
        ft.theta2 = cd.theta2;
        ft.lambda1 = cd.lambda1;
        ft.lambda2 = cd.lambda2;
        ft.lambda12 = cd.lambda12;
        ft.lambda21 = cd.lambda21;
        const double band = opt.lambda_band;
        const bool decided_empty = ft.lambda1 > 1.0 + band || ft.lambda2 > 1.0 + band;
        const bool decided_corner = ft.lambda1 <= 1.0 - band && ft.lambda2 <= 1.0 - band;
        ft.lambda_flag = !decided_empty && !decided_corner;
        return ft;
    }

    if (curve1 != curve2) {
        SecondType st;
        st.transposed = curve1; // f2 carries the Wolff point when f1 has the curve
        st.theta1 = st.transposed ? sa2.theta : sa1.theta;
        st.F2 = st.transposed ? *sa1.curve : *sa2.curve;
        second_type_limits(st.F2, st.theta1, st);
        st.lambda_flag = std::isfinite(st.lambda2) &&
                         std::abs(st.lambda2 - 1.0) <= opt.lambda_band;
        return st;
    }

    ThirdType tt;
    tt.theta1 = sa1.theta;
    tt.theta2 = sa2.theta;
    return tt;
}

const char* classification_kind_name(const MapTypeClassification& c) {
    return std::visit(
        [](const auto& v) -> const char* {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FirstType>) return "first_type";
            else if constexpr (std::is_same_v<T, SecondType>) return "second_type";
            else if constexpr (std::is_same_v<T, ThirdType>) return "third_type";
            else if constexpr (std::is_same_v<T, InteriorFixed>) return "interior_fixed";
            else return "projection_degenerate";
        },
        c);
}

} // namespace bidisc
