#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hemtqc/pipeline.hpp"

namespace hemtqc {

struct SweepConfig {
    double f_min = 0.0;
    double f_max = 0.0;
    int f_points = 200;
    double gn2_min = 0.0;
    double gn2_max = 2.0;
    int gn2_points = 200;
    std::vector<std::pair<std::string, double>> overrides;
    std::string output_path;
    enum class Format { csv, json } format = Format::csv;
    int workers = 0;   // 0 = hardware concurrency
    bool auto_f_range = true;   // derive f_min/f_max from the config resonances
};

struct SweepRow {
    double f_hz, gn2, d, c, i, nu_minus, nu_plus, d_tilde;
    double n1, n2, re_d12, im_d12, n_o1, n_o2, bath_n1, bath_n2, zeta12_abs;
};

struct CellError {
    double f_hz, gn2;
    std::string stage;
    std::string message;
};

struct SweepResult {
    int f_points = 0;
    int gn2_points = 0;
    std::vector<SweepRow> rows;        // row-major, f outer, gn2 inner
    std::vector<CellError> errors;     // singular/failed cells, same ordering
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k) v[k] = lo + step * k;
    v[n - 1] = hi;
    return v;
}

inline std::pair<std::string, std::string> split_stage(const std::string& what) {
    auto colon = what.find(": ");
    if (colon != std::string::npos && colon < 16)
        return {what.substr(0, colon), what.substr(colon + 2)};
    return {"numeric", what};
}

}  // namespace detail

/// Default probe range: the two resonances padded by three linewidths.
inline std::pair<double, double> default_frequency_range(const Config& cfg) {
    const auto d = derive_linear_constants(cfg.device, cfg.nonlinear);
    const double f1 = d.omega1 / (2.0 * pi);
    const double f2 = d.omega2 / (2.0 * pi);
    const double pad = 3.0 * std::max(cfg.device.kappa1, cfg.device.kappa2) / (2.0 * pi);
    return {std::min(f1, f2) - pad, std::max(f1, f2) + pad};
}

inline void validate(const SweepConfig& s) {
    if (!(s.f_min < s.f_max))
        throw config_error("sweep requires f_min < f_max");
    if (!(s.gn2_min <= s.gn2_max))
        throw config_error("sweep requires gn2_min <= gn2_max");
    if (s.f_points < 2 || s.gn2_points < 2)
        throw config_error("sweep requires at least 2 points per axis");
}

/// Evaluates the full grid. Rows come out in row-major order (f outer, gn2
/// inner) regardless of the worker count; failed cells are collected as
/// errors instead of aborting the sweep.
inline SweepResult run_sweep(const nlohmann::json& config_doc, SweepConfig sweep) {
    nlohmann::json doc = config_doc;
    for (const auto& [key, value] : sweep.overrides)
        apply_override(doc, key, value);
    const Config cfg = parse_config(doc);
    if (sweep.auto_f_range && sweep.f_min == 0.0 && sweep.f_max == 0.0) {
        auto [lo, hi] = default_frequency_range(cfg);
        sweep.f_min = lo;
        sweep.f_max = hi;
    }
    validate(sweep);

    const auto fs = detail::linspace(sweep.f_min, sweep.f_max, sweep.f_points);
    const auto gs = detail::linspace(sweep.gn2_min, sweep.gn2_max, sweep.gn2_points);

    // per-gn2 context, shared by all frequencies of that column
    struct ColumnSlot {
        std::optional<ColumnContext> ctx;
        std::string error;
    };
    std::vector<ColumnSlot> columns(gs.size());
    for (std::size_t k = 0; k < gs.size(); ++k) {
        try {
            columns[k].ctx = evaluate_column(cfg, gs[k]);
        } catch (const std::exception& e) {
            columns[k].error = e.what();
        }
    }

    const std::size_t n_cells = fs.size() * gs.size();
    std::vector<std::optional<SweepRow>> rows(n_cells);
    std::vector<std::optional<CellError>> errs(n_cells);

    auto eval_cell = [&](std::size_t idx) {
        const std::size_t i_f = idx / gs.size();
        const std::size_t i_g = idx % gs.size();
        const double f = fs[i_f];
        const double gn2 = gs[i_g];
        const auto& col = columns[i_g];
        if (!col.ctx) {
            auto [stage, msg] = detail::split_stage(col.error);
            errs[idx] = CellError{f, gn2, stage, msg};
            return;
        }
        try {
            const auto m = detail::run_stage("langevin", [&] {
                return fluctuation_moments(2.0 * pi * f, col.ctx->constants,
                                           col.ctx->rates, col.ctx->bath);
            });
            const auto corr = detail::run_stage("gaussian", [&] {
                return gaussian_discord(covariance_matrix(m));
            });
            const SweepRow row{f, gn2, corr.discord, corr.classical, corr.mutual,
                               corr.nu_minus, corr.nu_plus, corr.d_tilde,
                               m.n1, m.n2, m.d12.real(), m.d12.imag(),
                               m.n_o1, m.n_o2, col.ctx->bath.n1, col.ctx->bath.n2,
                               std::abs(col.ctx->squeezing.zeta12)};
            for (double v : {row.d, row.c, row.i, row.nu_minus, row.nu_plus,
                             row.d_tilde, row.n1, row.n2, row.re_d12, row.im_d12,
                             row.n_o1, row.n_o2}) {
                if (!std::isfinite(v))
                    throw numeric_error("gaussian: non-finite cell result");
            }
            rows[idx] = row;
        } catch (const std::exception& e) {
            auto [stage, msg] = detail::split_stage(e.what());
            errs[idx] = CellError{f, gn2, stage, msg};
        }
    };

    unsigned workers = sweep.workers > 0
        ? static_cast<unsigned>(sweep.workers)
        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, n_cells);
    if (workers <= 1) {
        for (std::size_t idx = 0; idx < n_cells; ++idx) eval_cell(idx);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t idx = next.fetch_add(1); idx < n_cells;
                     idx = next.fetch_add(1))
                    eval_cell(idx);
            });
        }
        for (auto& th : pool) th.join();
    }

    SweepResult out;
    out.f_points = sweep.f_points;
    out.gn2_points = sweep.gn2_points;
    out.rows.reserve(n_cells);
    for (std::size_t idx = 0; idx < n_cells; ++idx) {
        if (rows[idx]) out.rows.push_back(*rows[idx]);
        if (errs[idx]) out.errors.push_back(*errs[idx]);
    }
    return out;
}

inline constexpr const char* csv_header =
    "f_hz,gn2,D,C,I,nu_minus,nu_plus,d_tilde,n1,n2,re_d12,im_d12,"
    "n_o1,n_o2,N1,N2,zeta12_abs";

/// Stable CSV: fixed column order, 17-significant-digit scientific
/// formatting, LF line endings.
inline std::string to_csv(const SweepResult& r) {
    std::string out;
    out.reserve(64 + r.rows.size() * 430);
    out += csv_header;
    out += '\n';
    char buf[32];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.16e", v);
        out += buf;
        out += sep;
    };
    for (const auto& row : r.rows) {
        put(row.f_hz, ','); put(row.gn2, ','); put(row.d, ','); put(row.c, ',');
        put(row.i, ','); put(row.nu_minus, ','); put(row.nu_plus, ',');
        put(row.d_tilde, ','); put(row.n1, ','); put(row.n2, ',');
        put(row.re_d12, ','); put(row.im_d12, ','); put(row.n_o1, ',');
        put(row.n_o2, ','); put(row.bath_n1, ','); put(row.bath_n2, ',');
        put(row.zeta12_abs, '\n');
    }
    return out;
}

inline nlohmann::ordered_json to_json(const SweepResult& r) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"f_hz", row.f_hz}, {"gn2", row.gn2}, {"D", row.d},
                        {"C", row.c}, {"I", row.i}, {"nu_minus", row.nu_minus},
                        {"nu_plus", row.nu_plus}, {"d_tilde", row.d_tilde},
                        {"n1", row.n1}, {"n2", row.n2},
                        {"re_d12", row.re_d12}, {"im_d12", row.im_d12},
                        {"n_o1", row.n_o1}, {"n_o2", row.n_o2},
                        {"N1", row.bath_n1}, {"N2", row.bath_n2},
                        {"zeta12_abs", row.zeta12_abs}});
    }
    return {{"f_points", r.f_points}, {"gn2_points", r.gn2_points}, {"rows", rows}};
}

/// Writes the sweep output plus, when cells failed, an errors.json sidecar
/// next to it.
inline void write_sweep_output(const SweepResult& r, const std::string& path,
                               SweepConfig::Format format) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("cannot open output path: " + path);
    if (format == SweepConfig::Format::csv) {
        out << to_csv(r);
    } else {
        out << to_json(r).dump(2) << '\n';
    }
    if (!out)
        throw config_error("failed writing output: " + path);
    if (!r.errors.empty()) {
        const auto sidecar =
            std::filesystem::path(path).parent_path() / "errors.json";
        nlohmann::ordered_json errs = nlohmann::ordered_json::array();
        for (const auto& e : r.errors) {
            errs.push_back({{"f_hz", e.f_hz}, {"gn2", e.gn2},
                            {"stage", e.stage}, {"message", e.message}});
        }
        std::ofstream side(sidecar, std::ios::binary);
        side << errs.dump(2) << '\n';
    }
}

}  // namespace hemtqc
