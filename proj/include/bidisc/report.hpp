#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "bidisc/wolff.hpp"

namespace bidisc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

struct PipelineConfig {
    enum class Command { Classify, Predict, Verify, Survey, Orbit, Report };
    enum class Format { Json, Csv };

    std::string map_path;
    Command command = Command::Report;
    std::optional<std::string> point_spec;
    std::vector<double> radii = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0};
    std::size_t samples = 512;
    std::uint64_t seed = 1729;
    std::map<std::string, double> tol_overrides;
    std::optional<std::string> out_path;
    Format format = Format::Json;
};

struct RunResult {
    Json document;
    std::string csv; // orbit export only
    bool is_csv = false;
    int exit_code = 0;
};

// `corner:<t1>,<t2>` | `vflat:<t1>,<re>,<im>` | `hflat:<re>,<im>,<t2>`,
// angles in radians (normalized to (-pi, pi]).
BidiscBoundaryPoint parse_point_spec(const std::string& s);

// Loads {"f1": ..., "f2": ...}; each component is a DSL string or an explicit
// expression-tree object.
BidiscMap load_map_file(const std::string& path);
BidiscMap map_from_json(const Json& j);
MapExpr expr_from_json(const Json& j);

// Executes the configured command. Exit codes: 2 input/parse/audit failure,
// 3 numeric failure or indeterminate state, 1 nonempty discrepancy list,
// 0 otherwise.
RunResult run(const PipelineConfig& cfg);

// serializers shared by run() and the tests
Json to_json(const AuditReport& r);
Json to_json(const BidiscBoundaryPoint& bp);
Json to_json(const MapTypeClassification& c);
Json to_json(const WolffSetDescription& d);
Json to_json(const VerificationVerdict& v);
Json to_json(const SurveyResult& s);
Json to_json(const TargetSetReport& t);
Json to_json(const DiscrepancyReport& d);

} // namespace bidisc
