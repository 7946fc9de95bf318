#include "bidisc/wolff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bidisc/rng.hpp"

namespace bidisc {

namespace {

std::string angle_str(double t) {
    std::ostringstream os;
    os.precision(6);
    os << t;
    return os.str();
}

} // namespace

std::string WolffSetDescription::describe() const {
    switch (kind) {
    case Kind::Empty: return "empty";
    case Kind::SilovPoint:
        return "corner (e^{i " + angle_str(theta1) + "}, e^{i " + angle_str(theta2) + "})";
    case Kind::FlatPlusCorner:
        return (transposed ? "flat disc x {e^{i " + angle_str(theta2) + "}}"
                           : "flat {e^{i " + angle_str(theta1) + "}} x disc") +
               " plus corner (e^{i " + angle_str(theta1) + "}, e^{i " + angle_str(theta2) + "})";
    case Kind::FlatOnly:
        return transposed ? "flat disc x {e^{i " + angle_str(theta1) + "}}"
                          : "flat {e^{i " + angle_str(theta1) + "}} x disc";
    case Kind::TwoFlatsPlusCorner:
        return "flats {e^{i " + angle_str(theta1) + "}} x disc and disc x {e^{i " +
               angle_str(theta2) + "}} plus their corner";
    case Kind::ProjectionDegenerateSet:
        return f1_is_pi1 ? "every vertical flat, disc x {e^{i " + angle_str(theta2) +
                               "}}, and all corners (., e^{i " + angle_str(theta2) + "})"
                         : "every horizontal flat, {e^{i " + angle_str(theta1) +
                               "}} x disc, and all corners (e^{i " + angle_str(theta1) + "}, .)";
    case Kind::FixBoundary:
        return full_boundary ? "the whole boundary (identity map)"
                             : "boundary of the fixed-point curve (corner arc)";
    case Kind::DisconnectedPair:
        return std::string("flats at angles +-") + angle_str(dp_theta) +
               (transposed ? " (horizontal)" : " (vertical)") + " [theorem-asserted]";
    case Kind::Indeterminate: return "indeterminate: " + indeterminate_reason;
    }
    return "?";
}

WolffSetDescription predict(const MapTypeClassification& c) {
    WolffSetDescription d;
    if (const auto* ft = std::get_if<FirstType>(&c)) {
        if (ft->lambda_flag) {
            d.kind = WolffSetDescription::Kind::Indeterminate;
            d.indeterminate_reason = "a deciding dilatation lies in the 1 +- 1e-3 band";
            return d;
        }
        if (ft->lambda1 > 1.0 || ft->lambda2 > 1.0) {
            d.kind = WolffSetDescription::Kind::Empty;
            return d;
        }
        d.kind = WolffSetDescription::Kind::SilovPoint;
        d.theta1 = ft->theta1;
        d.theta2 = ft->theta2;
        return d;
    }
    if (const auto* st = std::get_if<SecondType>(&c)) {
        if (st->lambda_flag) {
            d.kind = WolffSetDescription::Kind::Indeterminate;
            d.indeterminate_reason = "lambda2 lies in the 1 +- 1e-3 band";
            return d;
        }
        d.transposed = st->transposed;
        if (st->lambda2 > 1.0) {
            d.kind = WolffSetDescription::Kind::FlatOnly;
            d.theta1 = st->theta1;
            return d;
        }
        d.kind = WolffSetDescription::Kind::FlatPlusCorner;
        if (!st->transposed) {
            d.theta1 = st->theta1;
            d.theta2 = st->theta2.value_or(0.0);
        } else {
            d.theta1 = st->theta2.value_or(0.0);
            d.theta2 = st->theta1;
        }
        return d;
    }
    if (const auto* tt = std::get_if<ThirdType>(&c)) {
        d.kind = WolffSetDescription::Kind::TwoFlatsPlusCorner;
        d.theta1 = tt->theta1;
        d.theta2 = tt->theta2;
        return d;
    }
    if (const auto* pd = std::get_if<ProjectionDegenerate>(&c)) {
        d.kind = WolffSetDescription::Kind::ProjectionDegenerateSet;
        d.f1_is_pi1 = pd->f1_is_pi1;
        if (pd->f1_is_pi1) d.theta2 = pd->other_wolff_theta;
        else d.theta1 = pd->other_wolff_theta;
        return d;
    }

    const auto& fixed = std::get<InteriorFixed>(c).fix;
    switch (fixed.dim) {
    case 0: d.kind = WolffSetDescription::Kind::Empty; return d;
    case 2:
        d.kind = WolffSetDescription::Kind::FixBoundary;
        d.full_boundary = true;
        return d;
    default: break;
    }
    switch (fixed.g_class) {
    case FixAnalysis::GClass::AutomorphismOrIdentity:
        d.kind = WolffSetDescription::Kind::FixBoundary;
        d.fix_curve = fixed.curve;
        d.transposed = fixed.curve->transposed();
        return d;
    case FixAnalysis::GClass::ProperNotAut: d.kind = WolffSetDescription::Kind::Empty; return d;
    case FixAnalysis::GClass::NotProper:
        d.kind = WolffSetDescription::Kind::DisconnectedPair;
        d.dp_theta = fixed.not_proper_theta;
        d.dp_c = fixed.not_proper_c;
        d.transposed = fixed.curve->transposed();
        d.theorem_asserted = true;
        return d;
    case FixAnalysis::GClass::None: break;
    }
    d.kind = WolffSetDescription::Kind::Indeterminate;
    d.indeterminate_reason = "fixed-point curve could not be classified";
    return d;
}

void sample_fix_boundary(WolffSetDescription& desc, std::span<const double> angles) {
    if (desc.kind != WolffSetDescription::Kind::FixBoundary || desc.full_boundary ||
        !desc.fix_curve)
        return;
    const FixCurve& curve = *desc.fix_curve;
    for (const double t : angles) {
        const Cx dir = std::polar(1.0, t);
        Cx w{};
        bool ok = true;
        try {
            for (int k = 8; k <= 26; k += 2) w = curve((1.0 - std::ldexp(1.0, -k)) * dir);
        } catch (const ContinuationFailure&) {
            ok = false;
        }
        if (!ok || std::abs(w) < 1.0 - 1e-3) continue; // curve does not reach this corner
        const double dep = std::arg(w);
        if (!curve.transposed()) desc.curve_corners.emplace_back(dep, normalize_angle(t));
        else desc.curve_corners.emplace_back(normalize_angle(t), dep);
    }
}

namespace {

bool angles_match(double a, double b, double tol) {
    return std::abs(normalize_angle(a - b)) <= tol;
}

} // namespace

Membership predicted_membership(const WolffSetDescription& desc, const BidiscBoundaryPoint& bp,
                                double angle_tol) {
    const Membership in = desc.theorem_asserted ? Membership::AssertedIn : Membership::In;
    const auto* corner = std::get_if<SilovCorner>(&bp);
    const auto* vflat = std::get_if<VerticalFlat>(&bp);
    const auto* hflat = std::get_if<HorizontalFlat>(&bp);

    switch (desc.kind) {
    case WolffSetDescription::Kind::Empty: return Membership::Out;
    case WolffSetDescription::Kind::Indeterminate: return Membership::Out;
    case WolffSetDescription::Kind::SilovPoint:
        if (corner && angles_match(corner->tau1.theta, desc.theta1, angle_tol) &&
            angles_match(corner->tau2.theta, desc.theta2, angle_tol))
            return in;
        return Membership::Out;
    case WolffSetDescription::Kind::FlatPlusCorner:
        if (corner && angles_match(corner->tau1.theta, desc.theta1, angle_tol) &&
            angles_match(corner->tau2.theta, desc.theta2, angle_tol))
            return in;
        [[fallthrough]];
    case WolffSetDescription::Kind::FlatOnly:
        if (!desc.transposed && vflat && angles_match(vflat->tau1.theta, desc.theta1, angle_tol))
            return in;
        if (desc.transposed && hflat &&
            angles_match(hflat->tau2.theta,
                         desc.kind == WolffSetDescription::Kind::FlatOnly ? desc.theta1
                                                                          : desc.theta2,
                         angle_tol))
            return in;
        return Membership::Out;
    case WolffSetDescription::Kind::TwoFlatsPlusCorner:
        if (corner && angles_match(corner->tau1.theta, desc.theta1, angle_tol) &&
            angles_match(corner->tau2.theta, desc.theta2, angle_tol))
            return in;
        if (vflat && angles_match(vflat->tau1.theta, desc.theta1, angle_tol)) return in;
        if (hflat && angles_match(hflat->tau2.theta, desc.theta2, angle_tol)) return in;
        return Membership::Out;
    case WolffSetDescription::Kind::ProjectionDegenerateSet:
        if (desc.f1_is_pi1) {
            if (vflat) return in;
            if (hflat && angles_match(hflat->tau2.theta, desc.theta2, angle_tol)) return in;
            if (corner && angles_match(corner->tau2.theta, desc.theta2, angle_tol)) return in;
        } else {
            if (hflat) return in;
            if (vflat && angles_match(vflat->tau1.theta, desc.theta1, angle_tol)) return in;
            if (corner && angles_match(corner->tau1.theta, desc.theta1, angle_tol)) return in;
        }
        return Membership::Out;
    case WolffSetDescription::Kind::FixBoundary:
        if (desc.full_boundary) return in;
        if (!corner) return Membership::Out;
        for (const auto& [t1, t2] : desc.curve_corners)
            if (angles_match(corner->tau1.theta, t1, angle_tol) &&
                angles_match(corner->tau2.theta, t2, angle_tol))
                return in;
        return Membership::Out;
    case WolffSetDescription::Kind::DisconnectedPair:
        if (!desc.transposed && vflat &&
            (angles_match(vflat->tau1.theta, desc.dp_theta, angle_tol) ||
             angles_match(vflat->tau1.theta, -desc.dp_theta, angle_tol)))
            return in;
        if (desc.transposed && hflat &&
            (angles_match(hflat->tau2.theta, desc.dp_theta, angle_tol) ||
             angles_match(hflat->tau2.theta, -desc.dp_theta, angle_tol)))
            return in;
        return Membership::Out;
    }
    return Membership::Out;
}

// ── verification ────────────────────────────────────────────────────────────

VerificationVerdict verify_point(const BidiscMap& f, const BidiscBoundaryPoint& bp,
                                 std::span<const double> radii, std::size_t n_samples,
                                 std::uint64_t seed) {
    VerificationVerdict verdict;
    verdict.point = bp;
    verdict.radii.assign(radii.begin(), radii.end());
    verdict.samples_per_radius = n_samples;
    verdict.seed = seed;
    verdict.min_margin = std::numeric_limits<double>::infinity();

    SplitMix64 rng(seed);
    for (const double R : radii) {
        for (std::size_t i = 0; i < n_samples; ++i) {
            Cx x, y;
            std::visit(
                [&](const auto& b) {
                    using T = std::decay_t<decltype(b)>;
                    if constexpr (std::is_same_v<T, SilovCorner>) {
                        const auto d1 = horocycle_euclidean(Horocycle(b.tau1, R));
                        const auto d2 = horocycle_euclidean(Horocycle(b.tau2, R));
                        x = rng.disc(d1.center, d1.radius);
                        y = rng.disc(d2.center, d2.radius);
                    } else if constexpr (std::is_same_v<T, VerticalFlat>) {
                        const auto d1 = horocycle_euclidean(Horocycle(b.tau1, R));
                        x = rng.disc(d1.center, d1.radius);
                        y = rng.unit_disc(0.999);
                    } else {
                        const auto d2 = horocycle_euclidean(Horocycle(b.tau2, R));
                        x = rng.unit_disc(0.999);
                        y = rng.disc(d2.center, d2.radius);
                    }
                },
                bp);
            if (std::abs(x) >= 1.0 - 1e-12 || std::abs(y) >= 1.0 - 1e-12) continue;

            Cx w1, w2;
            try {
                w1 = f.f1.eval(x, y);
                w2 = f.f2.eval(x, y);
            } catch (const PoleError&) {
                continue;
            }
            const double margin = horosphere_margin_raw(bp, R, w1, w2);
            if (margin > 1e-9) {
                verdict.invariant = false;
                verdict.witness = BidiscPoint{DiscPoint(x), DiscPoint(y)};
                verdict.witness_radius = R;
                verdict.image_margin = margin;
                return verdict;
            }
            verdict.min_margin = std::min(verdict.min_margin, -margin);
        }
    }
    return verdict;
}

DilatationEstimate diagonal_dilatation(const MapExpr& f1, const SilovCorner& corner) {
    const Cx t1 = corner.tau1.point(), t2 = corner.tau2.point();
    OneVarMap diag;
    diag.value = [f1, t1, t2](Cx xi) { return std::conj(t1) * f1.eval(t1 * xi, t2 * xi); };
    diag.dual = [f1, t1, t2](Cx xi) {
        const DualValue d = f1.eval_dual(t1 * xi, t2 * xi, t1, t2);
        return DualValue{std::conj(t1) * d.value, std::conj(t1) * d.deriv};
    };
    return boundary_dilatation(diag, UnitBoundaryPoint(0.0));
}

ProductInvarianceCheck product_radius_invariance(const BidiscMap& f, double lambda2, double r2,
                                                 std::size_t n_samples, std::uint64_t seed,
                                                 std::optional<double> r1_override,
                                                 const SilovCorner& corner) {
    if (!(lambda2 > 0.0) || !(r2 > 0.0)) throw RangeError("lambda2 and R2 must be positive");
    ProductInvarianceCheck check;
    check.r2 = r2;
    check.r1 = r1_override.value_or(r2 / lambda2);

    const auto d1 = horocycle_euclidean(Horocycle(corner.tau1, check.r1));
    const auto d2 = horocycle_euclidean(Horocycle(corner.tau2, check.r2));
    const Cx t1 = corner.tau1.point(), t2 = corner.tau2.point();

    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Cx x = rng.disc(d1.center, d1.radius);
        const Cx y = rng.disc(d2.center, d2.radius);
        if (std::abs(x) >= 1.0 - 1e-12 || std::abs(y) >= 1.0 - 1e-12) continue;
        Cx w1, w2;
        try {
            w1 = f.f1.eval(x, y);
            w2 = f.f2.eval(x, y);
        } catch (const PoleError&) {
            continue;
        }
        const double e1 = horocycle_value_raw(t1, w1) - check.r1;
        const double e2 = horocycle_value_raw(t2, w2) - check.r2;
        if (e1 > 1e-9 || e2 > 1e-9) {
            check.pass = false;
            check.witness = BidiscPoint{DiscPoint(x), DiscPoint(y)};
            check.witness_component = e1 >= e2 ? 1 : 2;
            check.witness_excess = std::max(e1, e2);
            return check;
        }
    }
    return check;
}

// ── survey ──────────────────────────────────────────────────────────────────

std::vector<const SurveyProbe*> SurveyResult::candidates() const {
    std::vector<const SurveyProbe*> out;
    for (const auto& p : probes)
        if (p.verdict.invariant) out.push_back(&p);
    return out;
}

namespace {

bool same_probe(const BidiscBoundaryPoint& a, const BidiscBoundaryPoint& b) {
    if (a.index() != b.index()) return false;
    constexpr double tol = 1e-9;
    if (const auto* ca = std::get_if<SilovCorner>(&a)) {
        const auto& cb = std::get<SilovCorner>(b);
        return angles_match(ca->tau1.theta, cb.tau1.theta, tol) &&
               angles_match(ca->tau2.theta, cb.tau2.theta, tol);
    }
    if (const auto* va = std::get_if<VerticalFlat>(&a)) {
        const auto& vb = std::get<VerticalFlat>(b);
        return angles_match(va->tau1.theta, vb.tau1.theta, tol);
    }
    const auto& ha = std::get<HorizontalFlat>(a);
    const auto& hb = std::get<HorizontalFlat>(b);
    return angles_match(ha.tau2.theta, hb.tau2.theta, tol);
}

} // namespace

SurveyResult survey_boundary(const BidiscMap& f, std::size_t n_corner_angles,
                             std::size_t n_flat_probes, std::span<const double> radii,
                             std::size_t n_samples, std::uint64_t seed,
                             std::span<const BidiscBoundaryPoint> extra_probes) {
    SurveyResult result;
    result.radii.assign(radii.begin(), radii.end());
    result.samples_per_radius = n_samples;
    result.seed = seed;

    std::vector<BidiscBoundaryPoint> probes;
    const auto grid_angle = [](std::size_t j, std::size_t n) {
        return normalize_angle(-M_PI + 2.0 * M_PI * static_cast<double>(j) /
                                           static_cast<double>(n));
    };
    for (std::size_t i = 0; i < n_corner_angles; ++i)
        for (std::size_t j = 0; j < n_corner_angles; ++j)
            probes.push_back(SilovCorner{UnitBoundaryPoint(grid_angle(i, n_corner_angles)),
                                         UnitBoundaryPoint(grid_angle(j, n_corner_angles))});
    for (std::size_t j = 0; j < n_flat_probes; ++j) {
        probes.push_back(VerticalFlat{UnitBoundaryPoint(grid_angle(j, n_flat_probes)),
                                      DiscPoint(0.0, 0.0)});
        probes.push_back(HorizontalFlat{DiscPoint(0.0, 0.0),
                                        UnitBoundaryPoint(grid_angle(j, n_flat_probes))});
    }
    for (const auto& extra : extra_probes) {
        bool duplicate = false;
        for (const auto& p : probes)
            if (same_probe(p, extra)) {
                duplicate = true;
                break;
            }
        if (!duplicate) probes.push_back(extra);
    }

    result.probes.reserve(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        // probe-indexed seed keeps verdicts independent of probe order
        const std::uint64_t probe_seed = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
        result.probes.push_back({probes[i], verify_point(f, probes[i], radii, n_samples, probe_seed)});
    }
    return result;
}

// ── target set ──────────────────────────────────────────────────────────────

TargetSetReport target_set(const BidiscMap& f, std::size_t n_seeds, std::size_t n_iter,
                           std::uint64_t seed) {
    TargetSetReport report;
    report.seeds_used = n_seeds;
    SplitMix64 rng(seed);

    struct Limit {
        bool x_boundary = false, y_boundary = false;
        Cx x{}, y{};
        double x_theta = 0.0, y_theta = 0.0;
        bool resolved = false;
    };

    const auto classify_coord = [&](const std::vector<Cx>& tail, bool& boundary, Cx& value,
                                    double& theta) -> bool {
        const Cx last = tail.back();
        double var = 0.0;
        for (std::size_t i = 0; i + 1 < tail.size(); ++i)
            var = std::max(var, std::abs(tail[i + 1] - tail[i]));
        if (var < 1e-6 && std::abs(last) < 1.0 - 1e-4) {
            boundary = false;
            value = last;
            return true;
        }
        // boundary-bound: the modulus either reached the shell, or drifts
        // outward with a stable direction (slow parabolic approach); the
        // angle of the final point is the sharpest direction estimate
        const bool outward = std::abs(tail.back()) >= std::abs(tail.front()) - 1e-12;
        const std::size_t n8 = std::min<std::size_t>(8, tail.size());
        double drift8 = 0.0;
        for (std::size_t i = tail.size() - n8; i < tail.size(); ++i)
            if (std::abs(tail[i]) > 1e-12)
                drift8 = std::max(drift8,
                                  std::abs(normalize_angle(std::arg(tail[i]) - std::arg(last))));
        const double mod = std::abs(last);
        if ((mod > 1.0 - 1e-4) || (mod > 0.97 && outward && drift8 < 1e-3)) {
            boundary = true;
            theta = std::arg(last);
            value = last;
            return true;
        }
        return false;
    };

    std::vector<std::pair<Limit, std::size_t>> clusters;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        Cx x = rng.unit_disc(0.7), y = rng.unit_disc(0.7);
        constexpr std::size_t tail_len = 32;
        std::vector<Cx> tail_x, tail_y;
        bool dead = false;
        for (std::size_t k = 0; k < n_iter; ++k) {
            Cx nx, ny;
            try {
                nx = f.f1.eval(x, y);
                ny = f.f2.eval(x, y);
            } catch (const PoleError&) {
                dead = true;
                break;
            }
            x = nx;
            y = ny;
            tail_x.push_back(x);
            tail_y.push_back(y);
            if (tail_x.size() > tail_len) {
                tail_x.erase(tail_x.begin());
                tail_y.erase(tail_y.begin());
            }
            if (k > tail_len && std::abs(x) > 1.0 - 1e-6 && std::abs(y) > 1.0 - 1e-6) break;
        }
        if (dead || tail_x.size() < 2) {
            ++report.unresolved;
            continue;
        }

        Limit lim;
        const bool okx = classify_coord(tail_x, lim.x_boundary, lim.x, lim.x_theta);
        const bool oky = classify_coord(tail_y, lim.y_boundary, lim.y, lim.y_theta);
        if (!okx || !oky) {
            ++report.unresolved;
            continue;
        }
        lim.resolved = true;

        bool merged = false;
        for (auto& [existing, count] : clusters) {
            if (existing.x_boundary != lim.x_boundary || existing.y_boundary != lim.y_boundary)
                continue;
            bool same = true;
            if (lim.x_boundary)
                same = same && angles_match(existing.x_theta, lim.x_theta, 1e-4);
            else same = same && std::abs(existing.x - lim.x) < 1e-6;
            if (lim.y_boundary)
                same = same && angles_match(existing.y_theta, lim.y_theta, 1e-4);
            else same = same && std::abs(existing.y - lim.y) < 1e-6;
            if (same) {
                ++count;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.emplace_back(lim, 1);
    }

    if (report.unresolved > n_seeds / 2)
        throw IndeterminateError("most forward orbits failed to stabilize within budget");

    for (const auto& [lim, count] : clusters) {
        TargetCluster c;
        c.x_boundary = lim.x_boundary;
        c.y_boundary = lim.y_boundary;
        c.x = lim.x;
        c.y = lim.y;
        c.x_theta = lim.x_theta;
        c.y_theta = lim.y_theta;
        c.basin_count = count;
        report.clusters.push_back(c);
    }
    return report;
}

// ── reconcile ───────────────────────────────────────────────────────────────

bool DiscrepancyReport::all_documented() const {
    return std::all_of(items.begin(), items.end(),
                       [](const Discrepancy& d) { return d.documented; });
}

DiscrepancyReport reconcile(const WolffSetDescription& predicted, const SurveyResult& empirical,
                            double angle_tol) {
    DiscrepancyReport report;
    if (predicted.kind == WolffSetDescription::Kind::Indeterminate) {
        report.indeterminate_context = true;
        return report;
    }

    for (const auto& probe : empirical.probes) {
        const Membership m = predicted_membership(predicted, probe.point, angle_tol);
        const bool predicted_in = m != Membership::Out;
        if (predicted_in == probe.verdict.invariant) continue;

        Discrepancy d;
        d.probe = probe.point;
        d.predicted_in = predicted_in;
        d.empirically_invariant = probe.verdict.invariant;
        d.documented = predicted.theorem_asserted || m == Membership::AssertedIn;
        d.witness = probe.verdict.witness;
        d.witness_radius = probe.verdict.witness_radius;
        d.image_margin = probe.verdict.image_margin;
        d.note = predicted_in ? "predicted invariant but a violating witness was found"
                              : "sampled invariant outside the predicted set";
        report.items.push_back(std::move(d));
    }
    return report;
}

} // namespace bidisc
