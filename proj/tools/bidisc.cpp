#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bidisc/report.hpp"

namespace {

int emit(const bidisc::RunResult& result, const std::optional<std::string>& out_path) {
    const std::string payload =
        result.is_csv ? result.csv : result.document.dump(2) + "\n";
    if (out_path) {
        std::ofstream out(*out_path);
        if (!out) {
            std::cerr << "cannot write " << *out_path << "\n";
            return 2;
        }
        out << payload;
    } else {
        std::cout << payload;
    }
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"classification and numerical verification of Wolff-point sets "
                 "for holomorphic self-maps of the bidisc"};
    app.require_subcommand(1);

    bidisc::PipelineConfig cfg;
    std::string point_spec;
    std::vector<std::string> tol_kv;
    std::string out_path;
    std::string format = "json";

    const auto add_common = [&](CLI::App* sub, bool needs_point) {
        sub->add_option("--map", cfg.map_path, "map definition file (JSON)")->required();
        auto* point =
            sub->add_option("--point", point_spec,
                            "boundary point: corner:<t1>,<t2> | vflat:<t1>,<re>,<im> | "
                            "hflat:<re>,<im>,<t2>");
        if (needs_point) point->required();
        sub->add_option("--radii", cfg.radii, "horosphere radii to test")->delimiter(',');
        sub->add_option("--samples", cfg.samples, "samples per radius (orbit: step count)");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--tol", tol_kv, "tolerance override key=value")->delimiter(',');
        sub->add_option("--out", out_path, "write the report to a file instead of stdout");
        sub->add_option("--format", format, "json|csv (csv: orbit export only)");
    };

    using Cmd = bidisc::PipelineConfig::Command;
    add_common(app.add_subcommand("classify", "audit the map and classify its slice structure"),
               false);
    add_common(app.add_subcommand("predict", "classify and predict the Wolff-point set"), false);
    add_common(app.add_subcommand("verify", "test horosphere invariance at one boundary point"),
               true);
    add_common(app.add_subcommand("survey", "verify a grid of boundary points"), false);
    add_common(app.add_subcommand("orbit", "export the forward orbit of the origin"), false);
    add_common(app.add_subcommand("report",
                                  "full pipeline: audit, classify, predict, survey, reconcile, "
                                  "target set"),
               false);

    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "classify") cfg.command = Cmd::Classify;
    else if (sub == "predict") cfg.command = Cmd::Predict;
    else if (sub == "verify") cfg.command = Cmd::Verify;
    else if (sub == "survey") cfg.command = Cmd::Survey;
    else if (sub == "orbit") cfg.command = Cmd::Orbit;
    else cfg.command = Cmd::Report;

    if (!point_spec.empty()) cfg.point_spec = point_spec;
    if (!out_path.empty()) cfg.out_path = out_path;
    for (const auto& kv : tol_kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "--tol expects key=value, got '" << kv << "'\n";
            return 2;
        }
        try {
            cfg.tol_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            std::cerr << "--tol value is not a number: '" << kv << "'\n";
            return 2;
        }
    }
    if (format == "csv") cfg.format = bidisc::PipelineConfig::Format::Csv;
    else if (format != "json") {
        std::cerr << "--format must be json or csv\n";
        return 2;
    }

    const auto result = bidisc::run(cfg);
    return emit(result, cfg.out_path);
}
