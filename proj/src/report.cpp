#include "bidisc/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bidisc {

namespace {

Json cx_json(Cx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

double parse_double_field(const std::string& text, std::size_t& pos, char delim) {
    const std::size_t end = delim == '\0' ? text.size() : text.find(delim, pos);
    if (end == std::string::npos) throw ParseError("missing field separator", pos);
    double value = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("malformed number in point spec", pos);
    pos = end + (delim == '\0' ? 0 : 1);
    return value;
}

} // namespace

BidiscBoundaryPoint parse_point_spec(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ParseError("expected '<kind>:' prefix", 0);
    const std::string kind = s.substr(0, colon);
    std::size_t pos = colon + 1;

    if (kind == "corner") {
        const double t1 = parse_double_field(s, pos, ',');
        const double t2 = parse_double_field(s, pos, '\0');
        return SilovCorner{UnitBoundaryPoint(t1), UnitBoundaryPoint(t2)};
    }
    if (kind == "vflat") {
        const double t1 = parse_double_field(s, pos, ',');
        const double re = parse_double_field(s, pos, ',');
        const double im = parse_double_field(s, pos, '\0');
        if (re * re + im * im >= 1.0)
            throw RangeError("vflat interior coordinate must lie in the open disc");
        return VerticalFlat{UnitBoundaryPoint(t1), DiscPoint(re, im)};
    }
    if (kind == "hflat") {
        const double re = parse_double_field(s, pos, ',');
        const double im = parse_double_field(s, pos, ',');
        const double t2 = parse_double_field(s, pos, '\0');
        if (re * re + im * im >= 1.0)
            throw RangeError("hflat interior coordinate must lie in the open disc");
        return HorizontalFlat{DiscPoint(re, im), UnitBoundaryPoint(t2)};
    }
    throw ParseError("unknown point kind '" + kind + "'", 0);
}

MapExpr expr_from_json(const Json& j) {
    if (j.is_string()) return parse_map_dsl(j.get<std::string>());
    if (j.is_number()) return MapExpr::constant({j.get<double>(), 0.0});
    if (!j.is_object() || !j.contains("op")) throw ParseError("expression node must be an object with 'op'", 0);
    const std::string op = j.at("op").get<std::string>();
    if (op == "const") {
        const double re = j.value("re", 0.0);
        const double im = j.value("im", 0.0);
        return MapExpr::constant({re, im});
    }
    if (op == "x") return MapExpr::var_x();
    if (op == "y") return MapExpr::var_y();
    if (op == "var") {
        const std::string name = j.at("name").get<std::string>();
        if (name == "x") return MapExpr::var_x();
        if (name == "y") return MapExpr::var_y();
        throw ParseError("unknown variable '" + name + "'", 0);
    }
    if (op == "pow") return MapExpr::int_pow(expr_from_json(j.at("a")), j.at("n").get<int>());
    const MapExpr a = expr_from_json(j.at("a"));
    const MapExpr b = expr_from_json(j.at("b"));
    if (op == "add") return MapExpr::add(a, b);
    if (op == "sub") return MapExpr::sub(a, b);
    if (op == "mul") return MapExpr::mul(a, b);
    if (op == "div") return MapExpr::div(a, b);
    throw ParseError("unknown expression op '" + op + "'", 0);
}

BidiscMap map_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("f1") || !j.contains("f2"))
        throw ParseError("map file must contain 'f1' and 'f2'", 0);
    return {expr_from_json(j.at("f1")), expr_from_json(j.at("f2"))};
}

BidiscMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RangeError("cannot open map file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("map file is not valid JSON: ") + e.what(), 0);
    }
    return map_from_json(j);
}

// ── serialization ───────────────────────────────────────────────────────────

Json to_json(const AuditReport& r) {
    return Json{{"samples_checked", r.samples_checked},
                {"max_modulus_seen", r.max_modulus_seen},
                {"schwarz_pick_violations", r.schwarz_pick_violations},
                {"pole_hits", r.pole_hits},
                {"verdict", r.pass ? "pass" : "fail"}};
}

Json to_json(const BidiscBoundaryPoint& bp) {
    return std::visit(
        [](const auto& b) -> Json {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SilovCorner>) {
                return Json{{"kind", "corner"}, {"theta1", b.tau1.theta}, {"theta2", b.tau2.theta}};
            } else if constexpr (std::is_same_v<T, VerticalFlat>) {
                return Json{{"kind", "vflat"}, {"theta1", b.tau1.theta}, {"y", cx_json(b.y.z)}};
            } else {
                return Json{{"kind", "hflat"}, {"x", cx_json(b.x.z)}, {"theta2", b.tau2.theta}};
            }
        },
        bp);
}

namespace {

Json samples_json(const std::vector<std::pair<Cx, Cx>>& samples) {
    Json arr = Json::array();
    for (const auto& [t, v] : samples)
        arr.push_back(Json{{"param", cx_json(t)}, {"value", cx_json(v)}});
    return arr;
}

} // namespace

Json to_json(const MapTypeClassification& c) {
    Json j;
    j["kind"] = classification_kind_name(c);
    if (const auto* ft = std::get_if<FirstType>(&c)) {
        j["theta1"] = ft->theta1;
        j["theta2"] = ft->theta2;
        j["lambda1"] = ft->lambda1;
        j["lambda2"] = ft->lambda2;
        j["lambda12"] = ft->lambda12;
        j["lambda21"] = ft->lambda21;
        j["lambda_flag"] = ft->lambda_flag;
    } else if (const auto* st = std::get_if<SecondType>(&c)) {
        j["theta1"] = st->theta1;
        if (st->theta2) j["theta2"] = *st->theta2;
        j["lambda2"] = std::isfinite(st->lambda2) ? Json(st->lambda2) : Json("inf");
        j["transposed"] = st->transposed;
        j["lambda_flag"] = st->lambda_flag;
    } else if (const auto* tt = std::get_if<ThirdType>(&c)) {
        j["theta1"] = tt->theta1;
        j["theta2"] = tt->theta2;
    } else if (const auto* fx = std::get_if<InteriorFixed>(&c)) {
        j["dim"] = fx->fix.dim;
        j["base"] = Json{{"x", cx_json(fx->fix.base.x.z)}, {"y", cx_json(fx->fix.base.y.z)}};
        if (fx->fix.dim == 1) {
            const char* gc = "none";
            switch (fx->fix.g_class) {
            case FixAnalysis::GClass::AutomorphismOrIdentity: gc = "automorphism_or_identity"; break;
            case FixAnalysis::GClass::ProperNotAut: gc = "proper_not_automorphism"; break;
            case FixAnalysis::GClass::NotProper: gc = "not_proper"; break;
            case FixAnalysis::GClass::None: break;
            }
            j["g_class"] = gc;
            j["transposed"] = fx->fix.curve ? fx->fix.curve->transposed() : false;
            if (fx->fix.g_class == FixAnalysis::GClass::NotProper) {
                j["not_proper_theta"] = fx->fix.not_proper_theta;
                j["not_proper_c"] = cx_json(fx->fix.not_proper_c);
            }
            j["curve_samples"] = samples_json(fx->fix.curve_samples);
        }
    } else if (const auto* pd = std::get_if<ProjectionDegenerate>(&c)) {
        j["which"] = pd->f1_is_pi1 ? "f1_is_pi1" : "f2_is_pi2";
        j["other_component_wolff"] = pd->other_wolff_theta;
    }
    return j;
}

Json to_json(const WolffSetDescription& d) {
    Json j;
    const char* kind = "?";
    switch (d.kind) {
    case WolffSetDescription::Kind::Empty: kind = "empty"; break;
    case WolffSetDescription::Kind::SilovPoint: kind = "silov_point"; break;
    case WolffSetDescription::Kind::FlatPlusCorner: kind = "flat_plus_corner"; break;
    case WolffSetDescription::Kind::FlatOnly: kind = "flat_only"; break;
    case WolffSetDescription::Kind::TwoFlatsPlusCorner: kind = "two_flats_plus_corner"; break;
    case WolffSetDescription::Kind::ProjectionDegenerateSet: kind = "projection_degenerate_set"; break;
    case WolffSetDescription::Kind::FixBoundary: kind = "fix_boundary"; break;
    case WolffSetDescription::Kind::DisconnectedPair: kind = "disconnected_pair"; break;
    case WolffSetDescription::Kind::Indeterminate: kind = "indeterminate"; break;
    }
    j["kind"] = kind;
    j["description"] = d.describe();
    switch (d.kind) {
    case WolffSetDescription::Kind::SilovPoint:
    case WolffSetDescription::Kind::TwoFlatsPlusCorner:
    case WolffSetDescription::Kind::FlatPlusCorner:
        j["theta1"] = d.theta1;
        j["theta2"] = d.theta2;
        j["transposed"] = d.transposed;
        break;
    case WolffSetDescription::Kind::FlatOnly:
        j["theta1"] = d.theta1;
        j["transposed"] = d.transposed;
        break;
    case WolffSetDescription::Kind::ProjectionDegenerateSet:
        j["which"] = d.f1_is_pi1 ? "f1_is_pi1" : "f2_is_pi2";
        j[d.f1_is_pi1 ? "theta2" : "theta1"] = d.f1_is_pi1 ? d.theta2 : d.theta1;
        break;
    case WolffSetDescription::Kind::FixBoundary: {
        j["full_boundary"] = d.full_boundary;
        Json corners = Json::array();
        for (const auto& [t1, t2] : d.curve_corners)
            corners.push_back(Json{{"theta1", t1}, {"theta2", t2}});
        j["curve_corners"] = corners;
        j["transposed"] = d.transposed;
        break;
    }
    case WolffSetDescription::Kind::DisconnectedPair:
        j["theta"] = d.dp_theta;
        j["c"] = cx_json(d.dp_c);
        j["transposed"] = d.transposed;
        break;
    case WolffSetDescription::Kind::Indeterminate:
        j["reason"] = d.indeterminate_reason;
        break;
    case WolffSetDescription::Kind::Empty: break;
    }
    j["theorem_asserted"] = d.theorem_asserted;
    return j;
}

Json to_json(const VerificationVerdict& v) {
    Json j;
    j["point"] = to_json(v.point);
    j["outcome"] = v.invariant ? "invariant" : "violated";
    if (v.invariant) {
        j["min_margin"] = std::isfinite(v.min_margin) ? v.min_margin : 0.0;
    } else {
        j["witness"] =
            Json{{"x", cx_json(v.witness->x.z)}, {"y", cx_json(v.witness->y.z)}};
        j["witness_radius"] = v.witness_radius;
        j["image_margin"] = v.image_margin;
    }
    j["radii"] = v.radii;
    j["samples_per_radius"] = v.samples_per_radius;
    j["seed"] = v.seed;
    return j;
}

Json to_json(const SurveyResult& s) {
    Json arr = Json::array();
    for (const auto& probe : s.probes) arr.push_back(to_json(probe.verdict));
    return Json{{"radii", s.radii},
                {"samples_per_radius", s.samples_per_radius},
                {"seed", s.seed},
                {"probes", arr}};
}

Json to_json(const TargetSetReport& t) {
    Json arr = Json::array();
    for (const auto& c : t.clusters) {
        Json cluster;
        cluster["x"] = c.x_boundary ? Json{{"theta", c.x_theta}} : cx_json(c.x);
        cluster["y"] = c.y_boundary ? Json{{"theta", c.y_theta}} : cx_json(c.y);
        cluster["basin_count"] = c.basin_count;
        arr.push_back(cluster);
    }
    return Json{{"clusters", arr}, {"seeds_used", t.seeds_used}, {"unresolved", t.unresolved}};
}

Json to_json(const DiscrepancyReport& d) {
    Json arr = Json::array();
    for (const auto& item : d.items) {
        Json j;
        j["probe"] = to_json(item.probe);
        j["predicted_in"] = item.predicted_in;
        j["empirically_invariant"] = item.empirically_invariant;
        j["documented"] = item.documented;
        j["note"] = item.note;
        if (item.witness) {
            j["witness"] =
                Json{{"x", cx_json(item.witness->x.z)}, {"y", cx_json(item.witness->y.z)}};
            j["witness_radius"] = item.witness_radius;
            j["image_margin"] = item.image_margin;
        }
        arr.push_back(j);
    }
    return Json{{"items", arr}, {"indeterminate_context", d.indeterminate_context}};
}

// ── pipeline ────────────────────────────────────────────────────────────────

namespace {

std::vector<double> survey_grid_angles(std::size_t n) {
    std::vector<double> angles;
    for (std::size_t j = 0; j < n; ++j)
        angles.push_back(normalize_angle(-M_PI + 2.0 * M_PI * static_cast<double>(j) /
                                                     static_cast<double>(n)));
    return angles;
}

std::vector<BidiscBoundaryPoint> prediction_probes(const WolffSetDescription& d) {
    std::vector<BidiscBoundaryPoint> probes;
    const auto corner = [&](double t1, double t2) {
        probes.push_back(SilovCorner{UnitBoundaryPoint(t1), UnitBoundaryPoint(t2)});
    };
    const auto vflat = [&](double t) {
        probes.push_back(VerticalFlat{UnitBoundaryPoint(t), DiscPoint(0.0, 0.0)});
    };
    const auto hflat = [&](double t) {
        probes.push_back(HorizontalFlat{DiscPoint(0.0, 0.0), UnitBoundaryPoint(t)});
    };
    switch (d.kind) {
    case WolffSetDescription::Kind::SilovPoint: corner(d.theta1, d.theta2); break;
    case WolffSetDescription::Kind::FlatPlusCorner:
        corner(d.theta1, d.theta2);
        if (!d.transposed) vflat(d.theta1);
        else hflat(d.theta2);
        break;
    case WolffSetDescription::Kind::FlatOnly:
        if (!d.transposed) vflat(d.theta1);
        else hflat(d.theta1);
        break;
    case WolffSetDescription::Kind::TwoFlatsPlusCorner:
        corner(d.theta1, d.theta2);
        vflat(d.theta1);
        hflat(d.theta2);
        break;
    case WolffSetDescription::Kind::ProjectionDegenerateSet:
        if (d.f1_is_pi1) {
            hflat(d.theta2);
            for (const double t : {0.0, M_PI_2, M_PI, -M_PI_2}) corner(t, d.theta2);
        } else {
            vflat(d.theta1);
            for (const double t : {0.0, M_PI_2, M_PI, -M_PI_2}) corner(d.theta1, t);
        }
        break;
    case WolffSetDescription::Kind::FixBoundary:
        for (const auto& [t1, t2] : d.curve_corners) corner(t1, t2);
        break;
    case WolffSetDescription::Kind::DisconnectedPair:
        if (!d.transposed) {
            vflat(d.dp_theta);
            vflat(-d.dp_theta);
        } else {
            hflat(d.dp_theta);
            hflat(-d.dp_theta);
        }
        break;
    default: break;
    }
    return probes;
}

std::string orbit_csv(const BidiscMap& f, std::size_t steps) {
    std::ostringstream os;
    os.precision(17);
    os << "step,re1,im1,re2,im2\n";
    Cx x{0.0, 0.0}, y{0.0, 0.0};
    for (std::size_t k = 0; k <= steps; ++k) {
        os << k << ',' << x.real() << ',' << x.imag() << ',' << y.real() << ',' << y.imag()
           << '\n';
        if (k == steps) break;
        const Cx nx = f.f1.eval(x, y);
        const Cx ny = f.f2.eval(x, y);
        x = nx;
        y = ny;
    }
    return os.str();
}

Json orbit_json(const BidiscMap& f, std::size_t steps) {
    Json arr = Json::array();
    Cx x{0.0, 0.0}, y{0.0, 0.0};
    for (std::size_t k = 0; k <= steps; ++k) {
        arr.push_back(Json{
            {"step", k}, {"x", cx_json(x)}, {"y", cx_json(y)}});
        if (k == steps) break;
        const Cx nx = f.f1.eval(x, y);
        const Cx ny = f.f2.eval(x, y);
        x = nx;
        y = ny;
    }
    return arr;
}

} // namespace

RunResult run(const PipelineConfig& cfg) {
    RunResult result;
    Json& doc = result.document;
    doc["tool_version"] = kToolVersion;
    doc["seed"] = cfg.seed;
    if (!cfg.tol_overrides.empty()) {
        Json tols;
        for (const auto& [k, v] : cfg.tol_overrides) tols[k] = v;
        doc["tol_overrides"] = tols;
    }
    const double angle_tol = cfg.tol_overrides.count("angle_tol")
                                 ? cfg.tol_overrides.at("angle_tol")
                                 : 1e-6;

    try {
        if (cfg.samples < 1) throw RangeError("samples must be at least 1");
        for (const double r : cfg.radii)
            if (!(r > 0.0)) throw RangeError("radii must be positive");

        const BidiscMap f = load_map_file(cfg.map_path);
        doc["map"] = Json{{"f1", f.f1.str()}, {"f2", f.f2.str()}};

        if (cfg.command == PipelineConfig::Command::Orbit) {
            if (cfg.format == PipelineConfig::Format::Csv) {
                result.is_csv = true;
                result.csv = orbit_csv(f, cfg.samples);
            } else {
                doc["orbit"] = orbit_json(f, cfg.samples);
            }
            return result;
        }
        if (cfg.format == PipelineConfig::Format::Csv)
            throw RangeError("csv output is only available for the orbit command");

        const AuditReport audit = self_map_audit(f, 384, cfg.seed);
        doc["audit"] = to_json(audit);
        if (!audit.pass) {
            doc["error"] = "self-map audit failed";
            result.exit_code = 2;
            return result;
        }

        if (cfg.command == PipelineConfig::Command::Verify) {
            if (!cfg.point_spec) throw RangeError("verify requires --point");
            const BidiscBoundaryPoint bp = parse_point_spec(*cfg.point_spec);
            const auto verdict = verify_point(f, bp, cfg.radii, cfg.samples, cfg.seed);
            doc["verification"] = Json::array({to_json(verdict)});
            return result;
        }
        if (cfg.command == PipelineConfig::Command::Survey) {
            const auto survey = survey_boundary(f, 8, 8, cfg.radii, cfg.samples, cfg.seed);
            doc["survey"] = to_json(survey);
            return result;
        }

        const auto classification = classify(f, ClassifyOptions{.seed = cfg.seed}, &audit);
        doc["classification"] = to_json(classification);
        if (cfg.command == PipelineConfig::Command::Classify) return result;

        WolffSetDescription prediction = predict(classification);
        const auto grid_angles = survey_grid_angles(8);
        sample_fix_boundary(prediction, grid_angles);
        doc["prediction"] = to_json(prediction);
        if (cfg.command == PipelineConfig::Command::Predict) return result;

        const auto extra = prediction_probes(prediction);
        const auto survey = survey_boundary(f, 8, 8, cfg.radii, cfg.samples, cfg.seed, extra);
        doc["verification"] = to_json(survey);

        const auto discrepancies = reconcile(prediction, survey, angle_tol);
        doc["discrepancies"] = to_json(discrepancies);

        const auto targets = target_set(f, 16, 20000, cfg.seed);
        doc["target_set"] = to_json(targets);

        if (!discrepancies.empty()) result.exit_code = 1;
        return result;
    } catch (const ParseError& e) {
        doc["error"] = e.what();
        result.exit_code = 2;
    } catch (const AuditFailure& e) {
        doc["error"] = e.what();
        result.exit_code = 2;
    } catch (const RangeError& e) {
        doc["error"] = e.what();
        result.exit_code = 2;
    } catch (const NumericFailure& e) {
        doc["error"] = e.what();
        result.exit_code = 3;
    } catch (const IndeterminateError& e) {
        doc["error"] = e.what();
        result.exit_code = 3;
    } catch (const InconsistentSlices& e) {
        doc["error"] = e.what();
        result.exit_code = 3;
    } catch (const ProductIdentityViolation& e) {
        doc["error"] = e.what();
        result.exit_code = 3;
    } catch (const ContinuationFailure& e) {
        doc["error"] = e.what();
        result.exit_code = 3;
    } catch (const PoleError& e) {
        doc["error"] = e.what();
        result.exit_code = 3;
    }
    return result;
}

} // namespace bidisc
