#pragma once

#include <string>

#include <json.hpp>

#include "hemtqc/config.hpp"
#include "hemtqc/gaussian.hpp"
#include "hemtqc/langevin.hpp"
#include "hemtqc/params.hpp"
#include "hemtqc/perturbation.hpp"
#include "hemtqc/steady.hpp"

namespace hemtqc {

/// Everything computed at one nonlinearity value, independent of the probe
/// frequency: constants, operating point, rates, bath and squeezing.
struct ColumnContext {
    DerivedConstants constants;
    CouplingConstants coupling;
    SteadyState steady;
    GammaRates rates;
    BathSpec bath;
    SqueezingReport squeezing;
};

/// Full single-point evaluation record.
struct PointReport {
    double f_hz = 0.0;
    double gn2 = 0.0;
    double cn = 0.0;
    ColumnContext ctx;
    SpectralMoments moments;
    TwoModeCM cm;
    double c_signed = 0.0;   // 2 Re(d_o12) before taking |.|
    CorrelationReport corr;
    StateCorrection corr_state1;
    StateCorrection corr_state2;
    double mixedness1 = 0.0;
    double mixedness2 = 0.0;
    std::pair<cplx, cplx> energies0;   // level-0 energies
};

namespace detail {

template <typename F>
auto run_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw numeric_error(std::string(stage) + ": " + e.what());
    }
}

}  // namespace detail

/// Constants through squeezing at one gn2; the operating point is biased on
/// resonance (zero detuning).
inline ColumnContext evaluate_column(const Config& cfg, double gn2) {
    const NonlinearInputs n{gn2, cfg.nonlinear.cn};
    validate(n);
    ColumnContext ctx;
    ctx.constants = detail::run_stage("params", [&] {
        return derive_linear_constants(cfg.device, n);
    });
    ctx.coupling = detail::run_stage("params", [&] {
        return derive_coupling_constants(ctx.constants, n);
    });
    detail::run_stage("steady", [&] {
        const auto sys = build_steady_system(ctx.constants, cfg.device.kappa1,
                                             cfg.device.kappa2, 0.0, 0.0);
        ctx.steady = solve_steady_state(sys.matrix, sys.rhs);
        ctx.rates = langevin_rates(ctx.steady, ctx.coupling);
        return 0;
    });
    detail::run_stage("langevin", [&] {
        const double t2 = cfg.device.t2.value_or(cfg.device.t);
        ctx.bath = BathSpec{thermal_occupancy(ctx.constants.omega1, cfg.device.t),
                            thermal_occupancy(ctx.constants.omega2, t2),
                            cfg.device.kappa1, cfg.device.kappa2};
        return 0;
    });
    ctx.squeezing = squeezing_parameter(ctx.steady, ctx.coupling,
                                        cfg.device.kappa1, cfg.device.kappa2);
    return ctx;
}

/// Chains params -> steady -> langevin -> gaussian -> perturbation at one
/// (f, gn2) point.
inline PointReport evaluate_point(const Config& cfg, double f_hz, double gn2) {
    PointReport rep;
    rep.f_hz = f_hz;
    rep.gn2 = gn2;
    rep.cn = cfg.nonlinear.cn;
    rep.ctx = evaluate_column(cfg, gn2);
    rep.moments = detail::run_stage("langevin", [&] {
        return fluctuation_moments(2.0 * pi * f_hz, rep.ctx.constants,
                                   rep.ctx.rates, rep.ctx.bath);
    });
    rep.c_signed = 2.0 * rep.moments.d_o12.real();
    detail::run_stage("gaussian", [&] {
        rep.cm = covariance_matrix(rep.moments);
        rep.corr = gaussian_discord(rep.cm);
        return 0;
    });
    detail::run_stage("perturbation", [&] {
        const auto coeffs = perturbation_coefficients(rep.ctx.coupling, rep.ctx.steady);
        auto e1 = [&](int lvl) {
            return energy_levels(lvl, 0, rep.ctx.steady, rep.ctx.coupling,
                                 rep.ctx.constants.omega1, rep.ctx.constants.omega2).first;
        };
        auto e2 = [&](int lvl) {
            return energy_levels(0, lvl, rep.ctx.steady, rep.ctx.coupling,
                                 rep.ctx.constants.omega1, rep.ctx.constants.omega2).second;
        };
        rep.corr_state1 = first_order_state(1, 0, coeffs, e1);
        rep.corr_state2 = first_order_state(2, 0, coeffs, e2);
        rep.mixedness1 = mixedness_indicator(rep.corr_state1);
        rep.mixedness2 = mixedness_indicator(rep.corr_state2);
        rep.energies0 = energy_levels(0, 0, rep.ctx.steady, rep.ctx.coupling,
                                      rep.ctx.constants.omega1, rep.ctx.constants.omega2);
        return 0;
    });
    return rep;
}

namespace detail {

inline nlohmann::ordered_json json_cplx(const cplx& z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

inline nlohmann::ordered_json json_state(const StateCorrection& s, double mix) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : s.terms) {
        terms.push_back({{"offset", t.offset}, {"amplitude", json_cplx(t.amplitude)}});
    }
    return {{"base_level", s.base_level}, {"terms", terms}, {"mixedness", mix}};
}

}  // namespace detail

/// Deterministic JSON serialization of the full report.
inline nlohmann::ordered_json to_json(const PointReport& r) {
    using detail::json_cplx;
    const auto& d = r.ctx.constants;
    const auto& c = r.ctx.coupling;
    const auto& g = r.ctx.rates;
    nlohmann::ordered_json j;
    j["inputs"] = {{"f_hz", r.f_hz}, {"gn2", r.gn2}, {"cn", r.cn}};
    j["constants"] = {
        {"ca", d.ca}, {"cb", d.cb}, {"cc", d.cc}, {"ca_prime", d.ca_prime},
        {"cm2", d.cm2}, {"cm4", d.cm4},
        {"cq1", d.cq1}, {"cq2", d.cq2}, {"cq1q2", d.cq1q2},
        {"lp2", d.lp2}, {"l2_prime", d.l2_prime},
        {"g12", d.g12}, {"g22", d.g22},
        {"g12_prime", d.g12_prime}, {"g22_prime", d.g22_prime},
        {"vq1", d.vq1}, {"vq2", d.vq2}, {"ip2", d.ip2},
        {"igs_rms", d.igs_rms}, {"ids_rms", d.ids_rms},
        {"omega1", d.omega1}, {"omega2", d.omega2},
        {"z1", d.z1}, {"z2", d.z2}};
    j["coupling"] = {{"gn11", c.gn11}, {"gn21", c.gn21}, {"gn31", c.gn31},
                     {"gn41", c.gn41}, {"gn51", c.gn51}, {"gn61", c.gn61}};
    j["steady"] = {{"a1", json_cplx(r.ctx.steady.a1)},
                   {"a2", json_cplx(r.ctx.steady.a2)},
                   {"residual", r.ctx.steady.residual}};
    j["rates"] = {{"g_a11", json_cplx(g.a11)}, {"g_a12", json_cplx(g.a12)},
                  {"g_a13", json_cplx(g.a13)}, {"g_a21", json_cplx(g.a21)},
                  {"g_a22", json_cplx(g.a22)}, {"g_a23", json_cplx(g.a23)},
                  {"g_a24", json_cplx(g.a24)}};
    j["bath"] = {{"N1", r.ctx.bath.n1}, {"N2", r.ctx.bath.n2},
                 {"kappa1", r.ctx.bath.kappa1}, {"kappa2", r.ctx.bath.kappa2}};
    const auto& m = r.moments;
    j["moments"] = {{"n1", m.n1}, {"n2", m.n2}, {"d12", json_cplx(m.d12)},
                    {"n_o1", m.n_o1}, {"n_o2", m.n_o2},
                    {"d_o12", json_cplx(m.d_o12)}};
    const double im_re = r.moments.d12.real() != 0.0
        ? std::abs(r.moments.d12.imag() / r.moments.d12.real())
        : 0.0;
    j["covariance"] = {{"a", r.cm.a}, {"b", r.cm.b}, {"c", r.cm.c},
                       {"c_signed", r.c_signed},
                       {"tau", r.cm.tau}, {"eta", r.cm.eta},
                       {"im_re_ratio_d12", im_re}};
    j["correlations"] = {{"discord", r.corr.discord},
                         {"classical", r.corr.classical},
                         {"mutual", r.corr.mutual},
                         {"nu_minus", r.corr.nu_minus},
                         {"nu_plus", r.corr.nu_plus},
                         {"d_tilde", r.corr.d_tilde},
                         {"entangled", r.corr.entangled}};
    j["energies"] = {{"e1_level0", json_cplx(r.energies0.first)},
                     {"e2_level0", json_cplx(r.energies0.second)}};
    j["perturbation"] = {
        {"oscillator1", detail::json_state(r.corr_state1, r.mixedness1)},
        {"oscillator2", detail::json_state(r.corr_state2, r.mixedness2)}};
    j["squeezing"] = {{"zeta12", json_cplx(r.ctx.squeezing.zeta12)},
                      {"t_max", r.ctx.squeezing.t_max},
                      {"effective_r", r.ctx.squeezing.effective_r}};
    return j;
}

}  // namespace hemtqc
