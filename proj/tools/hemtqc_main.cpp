// Command-line front end: single-point evaluation, 2-D sweeps and the
// invariant self-check suite.
//
// Exit codes: 0 success, 1 config error, 2 numerical failure,
// 3 self-check failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hemtqc/hemtqc.hpp"

namespace {

std::vector<std::pair<std::string, double>>
parse_overrides(const std::vector<std::string>& raw) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(raw.size());
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw hemtqc::config_error("override must look like key=value: " + item);
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw hemtqc::config_error("override value is not a number: " + item);
        }
        out.emplace_back(key, value);
    }
    return out;
}

int run_point(const std::string& config_path, double f, double gn2,
              const std::vector<std::string>& sets) {
    auto doc = hemtqc::load_config_document(config_path);
    for (const auto& [key, value] : parse_overrides(sets))
        hemtqc::apply_override(doc, key, value);
    const auto cfg = hemtqc::parse_config(doc);
    const auto report = hemtqc::evaluate_point(cfg, f, gn2);
    std::cout << hemtqc::to_json(report).dump(2) << '\n';
    return 0;
}

int run_sweep_cmd(const std::string& config_path, hemtqc::SweepConfig sweep,
                  const std::vector<std::string>& sets) {
    const auto doc = hemtqc::load_config_document(config_path);
    sweep.overrides = parse_overrides(sets);
    const auto result = hemtqc::run_sweep(doc, sweep);
    hemtqc::write_sweep_output(result, sweep.output_path, sweep.format);
    std::cerr << "wrote " << result.rows.size() << " rows to "
              << sweep.output_path;
    if (!result.errors.empty())
        std::cerr << " (" << result.errors.size() << " cells failed, see errors.json)";
    std::cerr << '\n';
    if (result.rows.empty())
        throw hemtqc::numeric_error("all grid points failed");
    return 0;
}

int run_check(bool corrupt_pt_sign) {
    hemtqc::SelfCheckOptions opt;
    opt.corrupt_pt_sign = corrupt_pt_sign;
    const auto results = hemtqc::run_self_check(opt);
    bool all_pass = true;
    for (const auto& r : results) {
        nlohmann::ordered_json line{{"check", r.name},
                                    {"status", r.pass ? "pass" : "fail"}};
        if (!r.detail.empty()) line["detail"] = r.detail;
        std::cout << line.dump() << '\n';
        all_pass = all_pass && r.pass;
    }
    nlohmann::ordered_json summary{{"total", results.size()},
                                   {"status", all_pass ? "pass" : "fail"}};
    std::cout << summary.dump() << '\n';
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-mode microwave quantum correlation simulator for the "
                 "nonlinear cryogenic HEMT circuit"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;

    auto* point = app.add_subcommand("point", "evaluate one (f, gn2) point");
    double f = 0.0, gn2 = 0.0;
    point->add_option("--config", config_path, "JSON config file")->required();
    point->add_option("--f", f, "probe frequency (Hz)")->required();
    point->add_option("--gn2", gn2, "nonlinearity factor (A/V^2)")->required();
    point->add_option("--set", sets, "config override key=value");

    auto* sweep = app.add_subcommand("sweep", "evaluate a frequency x gn2 grid");
    hemtqc::SweepConfig sc;
    std::string format = "csv";
    sweep->add_option("--config", config_path, "JSON config file")->required();
    auto* fmin_opt = sweep->add_option("--f-min", sc.f_min, "probe range start (Hz)");
    auto* fmax_opt = sweep->add_option("--f-max", sc.f_max, "probe range end (Hz)");
    sweep->add_option("--f-points", sc.f_points, "frequency points (default 200)");
    sweep->add_option("--gn2-min", sc.gn2_min, "gn2 range start (default 0)");
    sweep->add_option("--gn2-max", sc.gn2_max, "gn2 range end (default 2)");
    sweep->add_option("--gn2-points", sc.gn2_points, "gn2 points (default 200)");
    sweep->add_option("--set", sets, "config override key=value");
    sweep->add_option("--out", sc.output_path, "output file")->required();
    sweep->add_option("--format", format, "csv|json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--workers", sc.workers,
                      "worker threads (default: hardware concurrency)");

    auto* check = app.add_subcommand("check", "run the invariant self-check suite");
    bool corrupt_pt = false;
    check->add_flag("--inject-pt-sign-flip", corrupt_pt,
                    "test hook: corrupt the partial-transpose sign")
        ->group("");   // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(point)) return run_point(config_path, f, gn2, sets);
        if (app.got_subcommand(sweep)) {
            sc.auto_f_range = !(fmin_opt->count() || fmax_opt->count());
            sc.format = format == "json" ? hemtqc::SweepConfig::Format::json
                                         : hemtqc::SweepConfig::Format::csv;
            return run_sweep_cmd(config_path, sc, sets);
        }
        return run_check(corrupt_pt);
    } catch (const hemtqc::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
