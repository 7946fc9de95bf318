#include <doctest.h>

#include <cmath>
#include <map>

#include "bidisc/report.hpp"
#include "bidisc/rng.hpp"
#include "bidisc/wolff.hpp"
#include "fixtures.hpp"

using namespace bidisc;

namespace {

const double kRadii[] = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0};

const MapTypeClassification& classified(BidiscMap (*fixture)()) {
    static std::map<const void*, MapTypeClassification> cache;
    const auto key = reinterpret_cast<const void*>(fixture);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, classify(fixture())).first;
    return it->second;
}

SilovCorner corner00() { return {UnitBoundaryPoint(0.0), UnitBoundaryPoint(0.0)}; }

} // namespace

TEST_CASE("prediction follows the case table") {
    CHECK(predict(classified(fixtures::example_i)).kind == WolffSetDescription::Kind::Empty);
    CHECK(predict(classified(fixtures::example_ii)).kind ==
          WolffSetDescription::Kind::SilovPoint);
    const auto p3 = predict(classified(fixtures::example_iii));
    CHECK(p3.kind == WolffSetDescription::Kind::FlatPlusCorner);
    CHECK(std::abs(p3.theta1) < 1e-6);
    CHECK(std::abs(p3.theta2) < 1e-6);
    const auto p4 = predict(classified(fixtures::example_iv));
    CHECK(p4.kind == WolffSetDescription::Kind::FlatOnly);
    CHECK(predict(classified(fixtures::example_v)).kind ==
          WolffSetDescription::Kind::TwoFlatsPlusCorner);

    CHECK(predict(classified(fixtures::contraction)).kind == WolffSetDescription::Kind::Empty);
    const auto pd = predict(classified(fixtures::diagonal_mean));
    CHECK(pd.kind == WolffSetDescription::Kind::FixBoundary);
    CHECK_FALSE(pd.full_boundary);
    const auto pn = predict(classified(fixtures::shifted_projection));
    CHECK(pn.kind == WolffSetDescription::Kind::DisconnectedPair);
    CHECK(pn.theorem_asserted);
    const auto pp = predict(classified(fixtures::first_factor_identity));
    CHECK(pp.kind == WolffSetDescription::Kind::ProjectionDegenerateSet);
    CHECK(pp.f1_is_pi1);
}

TEST_CASE("verify_point: corner verdicts on the fixtures") {
    const auto v_ok = verify_point(fixtures::example_v(), corner00(), kRadii, 512, 42);
    CHECK(v_ok.invariant);
    CHECK(v_ok.min_margin > 0.0);

    const auto v_i = verify_point(fixtures::example_i(), corner00(), kRadii, 512, 42);
    REQUIRE_FALSE(v_i.invariant);
    REQUIRE(v_i.witness.has_value());

    const auto v_iv = verify_point(fixtures::example_iv(), corner00(), kRadii, 512, 42);
    REQUIRE_FALSE(v_iv.invariant);
    REQUIRE(v_iv.witness.has_value());
}

TEST_CASE("violated witnesses are self-checking") {
    for (auto* fixture : {fixtures::example_i, fixtures::example_iv}) {
        const BidiscMap f = fixture();
        const auto v = verify_point(f, corner00(), kRadii, 512, 42);
        REQUIRE_FALSE(v.invariant);
        const BidiscPoint w = *v.witness;
        // the witness lies inside the horosphere it was sampled from
        CHECK(horosphere_margin(BidiscBoundaryPoint(corner00()), v.witness_radius, w) < 0.0);
        // and its image escapes, by the recorded amount
        const Cx img_x = f.f1.eval(w.x.z, w.y.z);
        const Cx img_y = f.f2.eval(w.x.z, w.y.z);
        const double margin =
            horosphere_margin_raw(BidiscBoundaryPoint(corner00()), v.witness_radius, img_x, img_y);
        CHECK(margin == doctest::Approx(v.image_margin).epsilon(1e-12));
        CHECK(margin > 1e-9);
    }
}

TEST_CASE("diagonal dilatation screen") {
    const auto d_ii = diagonal_dilatation(fixtures::example_ii().f1);
    CHECK(d_ii.lambda <= 1.0 + 1e-3);
    CHECK(d_ii.lambda == doctest::Approx(0.625).epsilon(1e-3));

    const auto d_i = diagonal_dilatation(fixtures::example_i().f1);
    CHECK(d_i.lambda > 1.0 + 1e-3);
    CHECK(d_i.lambda == doctest::Approx(1.5).epsilon(1e-3));

    const auto d_id = diagonal_dilatation(parse_map_dsl("x"));
    CHECK(d_id.lambda == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("corner invariance implies the diagonal screen passes") {
    struct Case {
        BidiscMap (*fixture)();
    } cases[] = {{fixtures::example_ii}, {fixtures::example_iii}, {fixtures::example_v}};
    for (const auto& c : cases) {
        const BidiscMap f = c.fixture();
        const auto v = verify_point(f, corner00(), kRadii, 256, 17);
        REQUIRE(v.invariant);
        CHECK(diagonal_dilatation(f.f1).lambda <= 1.0 + 1e-3);
    }
}

TEST_CASE("product horosphere invariance with matched and mismatched radii") {
    // second type, lambda2 = 2: R1 = R2 / lambda2 = 0.5 keeps the product stable
    const auto matched = product_radius_invariance(fixtures::example_iv(), 2.0, 1.0, 512, 9);
    CHECK(matched.pass);
    CHECK(matched.r1 == doctest::Approx(0.5));

    // first type with lambda1 > 1: lambda2 = 1/2 gives R1 = 2
    const auto first = product_radius_invariance(fixtures::example_i(), 0.5, 1.0, 512, 9);
    CHECK(first.pass);
    CHECK(first.r1 == doctest::Approx(2.0));

    const auto mismatched =
        product_radius_invariance(fixtures::example_iv(), 2.0, 1.0, 512, 9, 1.0);
    REQUIRE_FALSE(mismatched.pass);
    REQUIRE(mismatched.witness.has_value());
    // witness is self-checking: a sampled point of the product horosphere
    // whose image leaves one factor
    const BidiscPoint w = *mismatched.witness;
    CHECK(horocycle_value(UnitBoundaryPoint(0.0), w.x) < mismatched.r1);
    CHECK(horocycle_value(UnitBoundaryPoint(0.0), w.y) < mismatched.r2);
    const BidiscMap f = fixtures::example_iv();
    const double e1 =
        horocycle_value_raw({1.0, 0.0}, f.f1.eval(w.x.z, w.y.z)) - mismatched.r1;
    const double e2 =
        horocycle_value_raw({1.0, 0.0}, f.f2.eval(w.x.z, w.y.z)) - mismatched.r2;
    CHECK(std::max(e1, e2) > 1e-9);
}

TEST_CASE("survey: fixture with two flats and the corner") {
    const auto survey = survey_boundary(fixtures::example_v(), 8, 8, kRadii, 256, 4);
    std::size_t corner_hits = 0, vflat_hits = 0, hflat_hits = 0;
    for (const auto* probe : survey.candidates()) {
        if (const auto* c = std::get_if<SilovCorner>(&probe->point)) {
            ++corner_hits;
            CHECK(std::abs(c->tau1.theta) < 1e-9);
            CHECK(std::abs(c->tau2.theta) < 1e-9);
        } else if (const auto* v = std::get_if<VerticalFlat>(&probe->point)) {
            ++vflat_hits;
            CHECK(std::abs(v->tau1.theta) < 1e-9);
        } else if (const auto* h = std::get_if<HorizontalFlat>(&probe->point)) {
            ++hflat_hits;
            CHECK(std::abs(h->tau2.theta) < 1e-9);
        }
    }
    CHECK(corner_hits == 1);
    CHECK(vflat_hits == 1);
    CHECK(hflat_hits == 1);
}

TEST_CASE("survey: no candidates for the fixture without Wolff points") {
    const auto survey = survey_boundary(fixtures::example_i(), 8, 8, kRadii, 256, 4);
    CHECK(survey.candidates().empty());
}

TEST_CASE("survey: first factor identity keeps every vertical flat") {
    const auto survey = survey_boundary(fixtures::first_factor_identity(), 8, 8, kRadii, 256, 4);
    for (const auto& probe : survey.probes) {
        if (const auto* v = std::get_if<VerticalFlat>(&probe.point)) {
            (void)v;
            CHECK(probe.verdict.invariant);
        } else if (const auto* h = std::get_if<HorizontalFlat>(&probe.point)) {
            CHECK(probe.verdict.invariant == (std::abs(h->tau2.theta) < 1e-9));
        } else if (const auto* c = std::get_if<SilovCorner>(&probe.point)) {
            CHECK(probe.verdict.invariant == (std::abs(c->tau2.theta) < 1e-9));
        }
    }
}

TEST_CASE("target set: boundary corner, interior point, diagonal family") {
    const auto tv = target_set(fixtures::example_v(), 12, 4000, 3);
    REQUIRE(tv.clusters.size() == 1);
    CHECK(tv.clusters[0].x_boundary);
    CHECK(tv.clusters[0].y_boundary);
    CHECK(std::abs(tv.clusters[0].x_theta) < 1e-4);
    CHECK(std::abs(tv.clusters[0].y_theta) < 1e-4);
    CHECK(tv.clusters[0].basin_count == 12);

    const auto tc = target_set(fixtures::contraction(), 12, 4000, 3);
    REQUIRE(tc.clusters.size() == 1);
    CHECK_FALSE(tc.clusters[0].x_boundary);
    CHECK(std::abs(tc.clusters[0].x) < 1e-6);
    CHECK(std::abs(tc.clusters[0].y) < 1e-6);

    const auto td = target_set(fixtures::diagonal_mean(), 12, 4000, 3);
    CHECK(td.clusters.size() > 1); // seed-dependent interior fixed points
    for (const auto& c : td.clusters) {
        CHECK_FALSE(c.x_boundary);
        CHECK(std::abs(c.x - c.y) < 1e-6); // limits sit on the diagonal
    }
}

TEST_CASE("reconcile: agreement on a correct prediction") {
    const auto desc = predict(classified(fixtures::example_v));
    std::vector<BidiscBoundaryPoint> extra = {corner00()};
    const auto survey = survey_boundary(fixtures::example_v(), 8, 8, kRadii, 256, 4, extra);
    const auto report = reconcile(desc, survey);
    CHECK(report.empty());
}

TEST_CASE("reconcile: a corrupted prediction yields hard discrepancies") {
    WolffSetDescription empty;
    empty.kind = WolffSetDescription::Kind::Empty;
    const auto survey = survey_boundary(fixtures::example_v(), 8, 8, kRadii, 256, 4);
    const auto report = reconcile(empty, survey);
    REQUIRE_FALSE(report.empty());
    CHECK_FALSE(report.all_documented());
    for (const auto& item : report.items) {
        CHECK_FALSE(item.predicted_in);
        CHECK(item.empirically_invariant);
    }
}

TEST_CASE("reconcile: theorem-asserted prediction downgrades to documented entries") {
    auto desc = predict(classified(fixtures::shifted_projection));
    REQUIRE(desc.kind == WolffSetDescription::Kind::DisconnectedPair);
    const auto survey = survey_boundary(fixtures::shifted_projection(), 8, 8, kRadii, 256, 4);
    const auto report = reconcile(desc, survey);
    REQUIRE_FALSE(report.empty());
    CHECK(report.all_documented());
}

TEST_CASE("reconcile: indeterminate predictions produce no discrepancies") {
    WolffSetDescription ind;
    ind.kind = WolffSetDescription::Kind::Indeterminate;
    ind.indeterminate_reason = "test";
    const auto survey = survey_boundary(fixtures::example_v(), 4, 4, kRadii, 128, 4);
    const auto report = reconcile(ind, survey);
    CHECK(report.empty());
    CHECK(report.indeterminate_context);
}

TEST_CASE("membership of the fix-boundary description") {
    auto desc = predict(classified(fixtures::diagonal_mean));
    REQUIRE(desc.kind == WolffSetDescription::Kind::FixBoundary);
    const double angles[] = {0.0, M_PI_2, M_PI, -M_PI_2};
    sample_fix_boundary(desc, angles);
    REQUIRE(desc.curve_corners.size() == 4);
    CHECK(predicted_membership(desc, SilovCorner{UnitBoundaryPoint(0.0), UnitBoundaryPoint(0.0)}) ==
          Membership::In);
    CHECK(predicted_membership(
              desc, SilovCorner{UnitBoundaryPoint(M_PI_2), UnitBoundaryPoint(M_PI_2)}) ==
          Membership::In);
    CHECK(predicted_membership(
              desc, SilovCorner{UnitBoundaryPoint(0.0), UnitBoundaryPoint(M_PI)}) ==
          Membership::Out);
    CHECK(predicted_membership(
              desc, VerticalFlat{UnitBoundaryPoint(0.0), DiscPoint(0.0, 0.0)}) == Membership::Out);
}

TEST_CASE("rotated third type: angles recovered to machine precision") {
    // the reference map conjugated by coordinate rotations pi/3 and -pi/4
    const BidiscMap rotated{
        parse_map_dsl("(0.5000000000000001+0.8660254037844386i)*"
                      "(3*(0.5000000000000001-0.8660254037844386i)*x+1)/"
                      "((0.5000000000000001-0.8660254037844386i)*x+3)"),
        parse_map_dsl("(0.7071067811865476-0.7071067811865475i)*"
                      "(3*(0.7071067811865476+0.7071067811865475i)*y+1)/"
                      "((0.7071067811865476+0.7071067811865475i)*y+3)")};
    const auto c = classify(rotated);
    REQUIRE(std::holds_alternative<ThirdType>(c));
    CHECK(std::get<ThirdType>(c).theta1 == doctest::Approx(M_PI / 3.0).epsilon(1e-9));
    CHECK(std::get<ThirdType>(c).theta2 == doctest::Approx(-M_PI / 4.0).epsilon(1e-9));
    const auto desc = predict(c);
    REQUIRE(desc.kind == WolffSetDescription::Kind::TwoFlatsPlusCorner);
    std::vector<BidiscBoundaryPoint> extra = {
        SilovCorner{UnitBoundaryPoint(desc.theta1), UnitBoundaryPoint(desc.theta2)},
        VerticalFlat{UnitBoundaryPoint(desc.theta1), DiscPoint(0.0, 0.0)},
        HorizontalFlat{DiscPoint(0.0, 0.0), UnitBoundaryPoint(desc.theta2)}};
    const auto survey = survey_boundary(rotated, 8, 8, kRadii, 256, 4, extra);
    CHECK(reconcile(desc, survey).empty());
}

TEST_CASE("transposed second type predicts the horizontal flat") {
    // f2 carries the Wolff point; the curve of f1 has dilatation 2 there
    const BidiscMap swapped{parse_map_dsl("(x + y^2)/2"), parse_map_dsl("(3*y+1)/(y+3)")};
    const auto desc = predict(classify(swapped));
    REQUIRE(desc.kind == WolffSetDescription::Kind::FlatOnly);
    CHECK(desc.transposed);
    CHECK(std::abs(desc.theta1) < 1e-6);
    CHECK(predicted_membership(desc, HorizontalFlat{DiscPoint(0.0, 0.0), UnitBoundaryPoint(0.0)}) ==
          Membership::In);
    CHECK(predicted_membership(desc, VerticalFlat{UnitBoundaryPoint(0.0), DiscPoint(0.0, 0.0)}) ==
          Membership::Out);
    const auto survey = survey_boundary(swapped, 8, 8, kRadii, 256, 4);
    CHECK(reconcile(desc, survey).empty());
}

TEST_CASE("a flagged classification predicts indeterminate") {
    // parabolic curve limit: lambda2 = 1 exactly, inside the decision band
    const BidiscMap parabolic{parse_map_dsl("(3*x+1)/(x+3)"),
                              parse_map_dsl("(y + (3*x^2+1)/(x^2+3))/2")};
    const auto desc = predict(classify(parabolic));
    CHECK(desc.kind == WolffSetDescription::Kind::Indeterminate);
    const auto survey = survey_boundary(parabolic, 4, 4, kRadii, 128, 4);
    const auto report = reconcile(desc, survey);
    CHECK(report.empty());
    CHECK(report.indeterminate_context);
}

TEST_CASE("identity map: full boundary prediction, every probe invariant") {
    const BidiscMap id{parse_map_dsl("x"), parse_map_dsl("y")};
    const auto c = classify(id);
    const auto desc = predict(c);
    REQUIRE(desc.kind == WolffSetDescription::Kind::FixBoundary);
    CHECK(desc.full_boundary);
    const auto survey = survey_boundary(id, 4, 4, kRadii, 128, 8);
    for (const auto& probe : survey.probes) CHECK(probe.verdict.invariant);
    CHECK(reconcile(desc, survey).empty());
}

TEST_CASE("division by the zero constant is a parse error") {
    CHECK_THROWS_AS(parse_map_dsl("x/0"), ParseError);
    CHECK_THROWS_AS(parse_map_dsl("x/(0)"), ParseError);
}

TEST_CASE("verification verdicts are deterministic for a fixed seed") {
    const auto a = verify_point(fixtures::example_ii(), corner00(), kRadii, 256, 1234);
    const auto b = verify_point(fixtures::example_ii(), corner00(), kRadii, 256, 1234);
    CHECK(to_json(a).dump() == to_json(b).dump());

    const auto sa = survey_boundary(fixtures::example_iii(), 4, 4, kRadii, 128, 77);
    const auto sb = survey_boundary(fixtures::example_iii(), 4, 4, kRadii, 128, 77);
    CHECK(to_json(sa).dump() == to_json(sb).dump());
}
