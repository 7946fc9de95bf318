#include <doctest.h>

#include <cmath>

#include "bidisc/disc_dynamics.hpp"
#include "bidisc/rng.hpp"

using namespace bidisc;

namespace {

OneVarMap expr_map(const char* text) { return OneVarMap::from_expr(parse_map_dsl(text)); }

const double kDefaultRadii[] = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0};

} // namespace

TEST_CASE("iterate produces the full orbit") {
    const auto orbit = iterate(expr_map("x/2"), DiscPoint(0.8, 0.0), 3);
    REQUIRE(orbit.size() == 4);
    CHECK(orbit[0] == Cx{0.8, 0.0});
    CHECK(orbit[1] == Cx{0.4, 0.0});
    CHECK(orbit[2] == Cx{0.2, 0.0});
    CHECK(orbit[3] == Cx{0.1, 0.0});

    const auto tail = iterate(expr_map("(3*x+1)/(x+3)"), DiscPoint(0.0, 0.0), 60);
    CHECK(std::abs(tail.back() - Cx{1.0, 0.0}) < 1e-9);

    const auto constant = iterate(expr_map("x"), DiscPoint(0.3, -0.2), 5);
    for (const Cx& z : constant) CHECK(z == Cx{0.3, -0.2});
}

TEST_CASE("denjoy-wolff: superattracting interior fixed point") {
    const auto r = denjoy_wolff(expr_map("y^2"));
    REQUIRE(r.kind == DenjoyWolffResult::Kind::Interior);
    CHECK(std::abs(r.point) < 1e-12);
    CHECK(r.multiplier_modulus == doctest::Approx(0.0));
}

TEST_CASE("denjoy-wolff: hyperbolic boundary point with dilatation 1/2") {
    const auto r = denjoy_wolff(expr_map("(3*x+1)/(x+3)"));
    REQUIRE(r.kind == DenjoyWolffResult::Kind::Boundary);
    CHECK(std::abs(r.tau.theta) < 1e-9);
    CHECK(r.alpha == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("denjoy-wolff: parabolic boundary point with dilatation 1") {
    const auto r = denjoy_wolff(expr_map("(3*x^2+1)/(x^2+3)"));
    REQUIRE(r.kind == DenjoyWolffResult::Kind::Boundary);
    CHECK(std::abs(r.tau.theta) < 1e-6);
    CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("denjoy-wolff: identity probe") {
    const auto r = denjoy_wolff(expr_map("x"));
    CHECK(r.kind == DenjoyWolffResult::Kind::IdentityMap);
}

TEST_CASE("interior results are polished and contracting") {
    for (const char* text : {"y^2", "x/2", "(x + 0.3)/2", "x*(x+1)/3"}) {
        const OneVarMap g = expr_map(text);
        const auto r = denjoy_wolff(g);
        REQUIRE(r.kind == DenjoyWolffResult::Kind::Interior);
        CHECK(std::abs(g.value(r.point) - r.point) < 1e-12);
        CHECK(r.multiplier_modulus < 1.0);
    }
}

TEST_CASE("boundary dilatation estimates") {
    CHECK(boundary_dilatation(expr_map("y^2"), UnitBoundaryPoint(0.0)).lambda ==
          doctest::Approx(2.0).epsilon(1e-3));
    CHECK(boundary_dilatation(expr_map("(5*y+3)/(3*y+5)"), UnitBoundaryPoint(0.0)).lambda ==
          doctest::Approx(0.25).epsilon(1e-3));
    CHECK(boundary_dilatation(expr_map("x"), UnitBoundaryPoint(1.2)).lambda ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto est = boundary_dilatation(expr_map("y^2"), UnitBoundaryPoint(0.0));
    CHECK(est.window_min <= est.lambda);
    CHECK(est.lambda <= est.window_max);
    CHECK(est.samples.size() == 33);
}

TEST_CASE("wolff dilatation at the denjoy-wolff point never exceeds one") {
    for (const char* text : {"(3*x+1)/(x+3)", "(3*x^2+1)/(x^2+3)", "(5*y+3)/(3*y+5)"}) {
        const auto r = denjoy_wolff(expr_map(text));
        if (r.kind == DenjoyWolffResult::Kind::Boundary) CHECK(r.alpha <= 1.0 + 1e-3);
    }
}

TEST_CASE("julia containment checks") {
    const auto mobius = julia_containment(expr_map("(3*x+1)/(x+3)"), UnitBoundaryPoint(0.0),
                                          UnitBoundaryPoint(0.0), 0.5, kDefaultRadii, 256, 5);
    CHECK(mobius.pass);

    const auto square_ok = julia_containment(expr_map("y^2"), UnitBoundaryPoint(0.0),
                                             UnitBoundaryPoint(0.0), 2.0, kDefaultRadii, 256, 5);
    CHECK(square_ok.pass);

    const double small_radius[] = {0.1};
    const auto square_fail = julia_containment(expr_map("y^2"), UnitBoundaryPoint(0.0),
                                               UnitBoundaryPoint(0.0), 1.0, small_radius, 512, 5);
    REQUIRE_FALSE(square_fail.pass);
    REQUIRE(square_fail.witness.has_value());
    // the witness is self-checking: it sits inside E(1, R) and its image
    // escapes E(1, alpha R)
    const Cx w = *square_fail.witness;
    CHECK(horocycle_value_raw({1.0, 0.0}, w) < square_fail.witness_radius);
    CHECK(horocycle_value_raw({1.0, 0.0}, w * w) >
          1.0 * square_fail.witness_radius + 1e-9);
}

TEST_CASE("denjoy-wolff boundary data is consistent with julia containment") {
    for (const char* text : {"(3*x+1)/(x+3)", "(3*x^2+1)/(x^2+3)", "(5*y+3)/(3*y+5)"}) {
        const OneVarMap g = expr_map(text);
        const auto r = denjoy_wolff(g);
        REQUIRE(r.kind == DenjoyWolffResult::Kind::Boundary);
        const auto check =
            julia_containment(g, r.tau, r.tau, r.alpha * (1.0 + 1e-3), kDefaultRadii, 256, 5);
        CHECK(check.pass);
    }
}

TEST_CASE("orbit steps shrink in the hyperbolic metric") {
    for (const char* text : {"(3*x+1)/(x+3)", "y^2", "(x + 0.3)/2"}) {
        const auto orbit = iterate(expr_map(text), DiscPoint(0.31, 0.2), 40);
        for (std::size_t k = 0; k + 2 < orbit.size(); ++k) {
            // isometric steps are equal; past this depth the roundoff in the
            // distances exceeds the 1e-9 slack
            if (std::abs(orbit[k + 2]) >= 1.0 - 1e-6) break;
            const double d1 = poincare_distance(DiscPoint(orbit[k]), DiscPoint(orbit[k + 1]));
            const double d2 = poincare_distance(DiscPoint(orbit[k + 1]), DiscPoint(orbit[k + 2]));
            CHECK(d2 <= d1 + 1e-9);
        }
    }
}

TEST_CASE("moebius probe recognizes automorphisms, the identity, and the rest") {
    const auto aut = mobius_probe(expr_map("(3*x+1)/(x+3)"));
    CHECK(aut.kind == MobiusProbeResult::Kind::IsAutomorphism);

    const auto square = mobius_probe(expr_map("x^2"));
    CHECK(square.kind == MobiusProbeResult::Kind::NotAutomorphism);

    const auto id = mobius_probe(expr_map("x"));
    CHECK(id.kind == MobiusProbeResult::Kind::IsIdentity);

    // a Moebius self-map that is not an automorphism (image disc is smaller)
    const auto affine = mobius_probe(expr_map("(1-x)/2"));
    CHECK(affine.kind == MobiusProbeResult::Kind::NotAutomorphism);

    // rotated automorphism with an interior fixed point
    const auto elliptic = mobius_probe(expr_map("i*x"));
    CHECK(elliptic.kind == MobiusProbeResult::Kind::IsAutomorphism);
}

TEST_CASE("properness probe") {
    const auto aut = properness_probe(expr_map("(3*x+1)/(x+3)"), 16);
    CHECK(aut.kind == PropernessResult::Kind::Proper);

    const auto affine = properness_probe(expr_map("(1-y)/2"), 16);
    REQUIRE(affine.kind == PropernessResult::Kind::NotProper);
    CHECK(std::abs(affine.witness_angle) < 1e-12);
    CHECK(std::abs(affine.interior_limit) < 1e-6);

    const auto square = properness_probe(expr_map("x^2"), 16);
    CHECK(square.kind == PropernessResult::Kind::Proper);
}

TEST_CASE("properness probe: tails inside the gap band are indeterminate") {
    // |g| tends to 1 - 5e-5 along every ray: between the two thresholds
    CHECK_THROWS_AS(properness_probe(expr_map("0.99995*x"), 8), IndeterminateError);
}

TEST_CASE("newton fixed point solver is damped and domain-guarded") {
    const OneVarMap g = expr_map("(x + 0.3)/2");
    const auto p = newton_fixed_point(g, {0.0, 0.0});
    REQUIRE(p.has_value());
    CHECK(std::abs(*p - Cx{0.3, 0.0}) < 1e-12);

    // no interior fixed point: the solver must not fabricate one
    const auto none = newton_fixed_point(expr_map("(3*x+1)/(x+3)"), {0.0, 0.0});
    if (none) CHECK(std::abs(std::abs(*none) - 1.0) < 1e-6);
}
