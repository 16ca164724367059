#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hemtqc/pipeline.hpp"
#include "hemtqc/sweep.hpp"

namespace hemtqc {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelfCheckOptions {
    bool corrupt_pt_sign = false;   // test hook: flips the partial-transpose sign
};

/// Random physical standard-form CM: c^2 <= (max+1)(min-1) keeps nu- >= 1.
inline TwoModeCM random_physical_cm(std::mt19937_64& rng, double amax = 50.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TwoModeCM cm;
    cm.a = 1.0 + (amax - 1.0) * u(rng);
    cm.b = 1.0 + (amax - 1.0) * u(rng);
    const double hi = std::sqrt((std::max(cm.a, cm.b) + 1.0)
                                * (std::min(cm.a, cm.b) - 1.0));
    cm.c = hi * u(rng);
    if (cm.b > 1.0 + 1e-12) {
        cm.tau = cm.c * cm.c / (cm.b * cm.b - 1.0);
        cm.eta = cm.a - cm.tau * cm.b;
    } else {
        cm.c = 0.0;
        cm.eta = cm.a;
    }
    return cm;
}

namespace detail {

inline Config default_config() {
    return Config{};   // DeviceParams/NonlinearInputs defaults
}

template <typename F>
CheckResult run_check(const std::string& name, F&& body) {
    CheckResult r;
    r.name = name;
    try {
        std::string detail;
        r.pass = body(detail);
        r.detail = detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    return r;
}

}  // namespace detail

/// Runs the full invariant suite with fixed seeds. All checks are pure and
/// deterministic.
inline std::vector<CheckResult> run_self_check(const SelfCheckOptions& opt = {}) {
    using detail::run_check;
    std::vector<CheckResult> results;
    const Config cfg = detail::default_config();

    results.push_back(run_check("params.positivity", [&](std::string& det) {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        for (int k = 0; k < 200; ++k) {
            DeviceParams p = cfg.device;
            p.c2 *= u(rng);
            p.cgd *= u(rng);
            p.cin *= u(rng);
            p.vrf *= u(rng);
            NonlinearInputs n{2.0 * (u(rng) - 0.5), 0.0};
            const auto d = derive_linear_constants(p, n);
            if (!(d.cm4 > 0 && d.cq1 > 0 && d.cq2 > 0 && d.omega1 > 0 && d.omega2 > 0))
                return false;
        }
        det = "200 randomized inputs";
        return true;
    }));

    results.push_back(run_check("params.coupling_homogeneity", [&](std::string& det) {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            const double gn2 = u(rng);
            const double s = 1.0 + u(rng);
            const auto d = derive_linear_constants(cfg.device, {gn2, 0.0});
            const auto ca = derive_coupling_constants(d, {gn2, 0.0});
            const auto cb = derive_coupling_constants(d, {s * gn2, 0.0});
            for (auto [x, y] : {std::pair{ca.gn11, cb.gn11}, {ca.gn21, cb.gn21},
                                {ca.gn31, cb.gn31}, {ca.gn41, cb.gn41},
                                {ca.gn51, cb.gn51}, {ca.gn61, cb.gn61}}) {
                if (std::abs(s * x - y) > 1e-12 * std::max(1.0, std::abs(y)))
                    return false;
            }
        }
        det = "degree 1 in gn2";
        return true;
    }));

    results.push_back(run_check("steady.row_scaling", [&](std::string& det) {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(0.1, 10.0);
        const auto d = derive_linear_constants(cfg.device, {1.0, 0.0});
        const auto sys = build_steady_system(d, cfg.device.kappa1, cfg.device.kappa2,
                                             0.0, 0.0);
        const auto base = solve_steady_state(sys.matrix, sys.rhs);
        for (int k = 0; k < 50; ++k) {
            Eigen::Matrix4d m = sys.matrix;
            Eigen::Vector4d rhs = sys.rhs;
            for (int row = 0; row < 4; ++row) {
                const double s = u(rng);
                m.row(row) *= s;
                rhs(row) *= s;
            }
            const auto scaled = solve_steady_state(m, rhs);
            const double ref = std::max(std::abs(base.a1), std::abs(base.a2));
            if (std::abs(scaled.a1 - base.a1) > 1e-12 * ref) return false;
            if (std::abs(scaled.a2 - base.a2) > 1e-12 * ref) return false;
        }
        det = "invariant under row scaling";
        return true;
    }));

    results.push_back(run_check("steady.gamma_superposition", [&](std::string& det) {
        std::mt19937_64 rng(14);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            SteadyState st;
            st.a1 = cplx(u(rng), u(rng)) * 1e3;
            st.a2 = cplx(u(rng), u(rng)) * 1e3;
            CouplingConstants x{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
            CouplingConstants y{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
            const double alpha = u(rng), beta = u(rng);
            CouplingConstants z{alpha * x.gn11 + beta * y.gn11,
                                alpha * x.gn21 + beta * y.gn21,
                                alpha * x.gn31 + beta * y.gn31,
                                alpha * x.gn41 + beta * y.gn41,
                                alpha * x.gn51 + beta * y.gn51,
                                alpha * x.gn61 + beta * y.gn61};
            const auto gx = langevin_rates(st, x);
            const auto gy = langevin_rates(st, y);
            const auto gz = langevin_rates(st, z);
            auto close = [&](cplx lhs, cplx rhs) {
                return std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs));
            };
            if (!close(alpha * gx.a11 + beta * gy.a11, gz.a11)) return false;
            if (!close(alpha * gx.a12 + beta * gy.a12, gz.a12)) return false;
            if (!close(alpha * gx.a13 + beta * gy.a13, gz.a13)) return false;
            if (!close(alpha * gx.a21 + beta * gy.a21, gz.a21)) return false;
            if (!close(alpha * gx.a22 + beta * gy.a22, gz.a22)) return false;
            if (!close(alpha * gx.a23 + beta * gy.a23, gz.a23)) return false;
            if (!close(alpha * gx.a24 + beta * gy.a24, gz.a24)) return false;
        }
        det = "jointly linear in the six couplings";
        return true;
    }));

    results.push_back(run_check("steady.energy_monotonicity", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 1.0);
        for (int j = 0; j < 20; ++j) {
            const auto lo = energy_levels(j, j, ctx.steady, ctx.coupling,
                                          ctx.constants.omega1, ctx.constants.omega2);
            const auto hi = energy_levels(j + 1, j + 1, ctx.steady, ctx.coupling,
                                          ctx.constants.omega1, ctx.constants.omega2);
            if (!(hi.first.real() > lo.first.real())) return false;
            if (!(hi.second.real() > lo.second.real())) return false;
        }
        det = "real parts increase with level";
        return true;
    }));

    results.push_back(run_check("langevin.hermiticity", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 1.3);
        for (double f = 5.3e9; f < 15.7e9; f += 0.9e9) {
            const auto m = fluctuation_moments(2.0 * pi * f, ctx.constants,
                                               ctx.rates, ctx.bath);
            if (m.n1 < -1e-9 || m.n2 < -1e-9) return false;
        }
        det = "populations real and nonnegative";
        return true;
    }));

    results.push_back(run_check("langevin.zero_coupling", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 0.0);
        for (double f = 5.3e9; f < 15.7e9; f += 0.7e9) {
            const double omega = 2.0 * pi * f;
            const auto m = fluctuation_moments(omega, ctx.constants, ctx.rates,
                                               ctx.bath);
            if (m.d12 != cplx(0.0, 0.0)) return false;
            const double d1 = omega - ctx.constants.omega1;
            const double k1 = ctx.bath.kappa1;
            const double closed = 2.0 * k1 * ctx.bath.n1 / (d1 * d1 + k1 * k1 / 4.0);
            if (std::abs(m.n1 - closed) > 1e-12 * closed) return false;
        }
        det = "decoupled closed form reproduced";
        return true;
    }));

    results.push_back(run_check("langevin.continuity", [&](std::string& det) {
        // narrow collective resonances make fixed-step differences useless;
        // instead refine the worst step and require it to decay, which a
        // jump discontinuity never does
        const auto ctx = evaluate_column(cfg, 1.0);
        auto value = [&](double f) {
            return fluctuation_moments(2.0 * pi * f, ctx.constants, ctx.rates,
                                       ctx.bath).n1;
        };
        double lo = 5.2e9, hi = 5.9e9;
        double flo = value(lo), fhi = value(hi);
        const int coarse = 512;
        double worst = 0.0, wlo = lo, whi = hi, wflo = flo, wfhi = fhi;
        double prev_f = lo, prev_v = flo;
        for (int k = 1; k <= coarse; ++k) {
            const double f = lo + (hi - lo) * k / coarse;
            const double v = value(f);
            if (std::abs(v - prev_v) > worst) {
                worst = std::abs(v - prev_v);
                wlo = prev_f;
                whi = f;
                wflo = prev_v;
                wfhi = v;
            }
            prev_f = f;
            prev_v = v;
        }
        const double initial = worst;
        double step = worst;
        for (int round = 0; round < 60 && step > 0.05 * initial; ++round) {
            const double mid = 0.5 * (wlo + whi);
            if (mid == wlo || mid == whi) break;
            const double fmid = value(mid);
            if (std::abs(fmid - wflo) >= std::abs(wfhi - fmid)) {
                whi = mid;
                wfhi = fmid;
            } else {
                wlo = mid;
                wflo = fmid;
            }
            step = std::abs(wfhi - wflo);
        }
        std::ostringstream os;
        os << "worst step " << initial << " decayed to " << step;
        det = os.str();
        return step <= 0.05 * initial || initial == 0.0;
    }));

    results.push_back(run_check("langevin.bath_affinity", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 1.0);
        const double omega = 2.0 * pi * 5.45e9;
        auto n1_of = [&](double b1, double b2) {
            BathSpec bath{b1, b2, ctx.bath.kappa1, ctx.bath.kappa2};
            return fluctuation_moments(omega, ctx.constants, ctx.rates, bath).n1;
        };
        // three-point collinearity along each bath axis
        const double y0 = n1_of(0.0, 3.0), y1 = n1_of(5.0, 3.0), y2 = n1_of(10.0, 3.0);
        if (std::abs(y2 - 2.0 * y1 + y0) > 1e-9 * std::max(std::abs(y2), 1e-300))
            return false;
        const double z0 = n1_of(4.0, 0.0), z1 = n1_of(4.0, 6.0), z2 = n1_of(4.0, 12.0);
        if (std::abs(z2 - 2.0 * z1 + z0) > 1e-9 * std::max(std::abs(z2), 1e-300))
            return false;
        det = "n1 affine in (N1, N2)";
        return true;
    }));

    results.push_back(run_check("gaussian.identities", [&](std::string& det) {
        std::mt19937_64 rng(21);
        for (int k = 0; k < 10000; ++k) {
            const auto cm = random_physical_cm(rng);
            const auto r = gaussian_discord(cm);
            if (r.discord < 0.0 || r.classical < 0.0) return false;
            if (std::abs(r.discord + r.classical - r.mutual) > 1e-9) return false;
            const double prod = r.nu_minus * r.nu_plus;
            const double detv = std::abs(cm.a * cm.b - cm.c * cm.c);
            if (std::abs(prod - detv) > 1e-10 * detv) return false;
            if (r.nu_minus < 1.0 - 1e-9) return false;
        }
        det = "10^4 random CMs";
        return true;
    }));

    results.push_back(run_check("gaussian.monotone_in_c", [&](std::string& det) {
        for (double a : {2.0, 8.0, 30.0}) {
            for (double b : {3.0, 12.0}) {
                const double hi = std::sqrt((std::max(a, b) + 1.0)
                                            * (std::min(a, b) - 1.0));
                double last = -1.0;
                for (int k = 0; k <= 40; ++k) {
                    TwoModeCM cm;
                    cm.a = a;
                    cm.b = b;
                    cm.c = hi * k / 40.0;
                    const double d = gaussian_discord(cm).discord;
                    if (d < last - 1e-12) return false;
                    last = d;
                }
            }
        }
        det = "D nondecreasing in |c|";
        return true;
    }));

    results.push_back(run_check("gaussian.convention_roundtrip", [&](std::string& det) {
        std::mt19937_64 rng(22);
        for (int k = 0; k < 200; ++k) {
            const auto cm = random_physical_cm(rng);
            const auto adapted = cm_from_half_convention(cm.a / 2.0, cm.b / 2.0,
                                                         cm.c / 2.0);
            const auto r0 = gaussian_discord(cm);
            const auto r1 = gaussian_discord(adapted);
            if (r0.discord != r1.discord || r0.classical != r1.classical
                || r0.mutual != r1.mutual)
                return false;
        }
        det = "half-convention adapter is exact";
        return true;
    }));

    results.push_back(run_check("gaussian.pt_eigenvalue", [&](std::string& det) {
        for (double r : {0.1, 0.5, 1.0, 2.0}) {
            TwoModeCM cm;
            cm.a = cm.b = std::cosh(2.0 * r);
            cm.c = std::sinh(2.0 * r);
            double dt;
            if (opt.corrupt_pt_sign) {
                // injected fault: partial transpose applied with the wrong sign
                const double delta = cm.a * cm.a + cm.b * cm.b - 2.0 * cm.c * cm.c;
                const double detv = std::pow(cm.a * cm.b - cm.c * cm.c, 2);
                const double disc = std::max(delta * delta - 4.0 * detv, 0.0);
                dt = std::sqrt((delta - std::sqrt(disc)) / 2.0);
            } else {
                dt = pt_smaller_eigenvalue(cm);
            }
            if (std::abs(dt - std::exp(-2.0 * r)) > 1e-10) return false;
            const auto rep = gaussian_discord(cm);
            if (!rep.entangled) return false;
        }
        det = "TMSV partial transpose";
        return true;
    }));

    results.push_back(run_check("perturbation.vanish_at_zero", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 0.0);
        const auto coeffs = perturbation_coefficients(ctx.coupling, ctx.steady);
        auto e1 = [&](int lvl) {
            return energy_levels(lvl, 0, ctx.steady, ctx.coupling,
                                 ctx.constants.omega1, ctx.constants.omega2).first;
        };
        for (int j = 0; j < 6; ++j) {
            if (!first_order_state(1, j, coeffs, e1).terms.empty()) return false;
        }
        det = "pure states preserved";
        return true;
    }));

    results.push_back(run_check("perturbation.unit_norm", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 1.0);
        const auto coeffs = perturbation_coefficients(ctx.coupling, ctx.steady);
        for (int osc : {1, 2}) {
            auto energy = [&](int lvl) {
                const auto e = energy_levels(lvl, lvl, ctx.steady, ctx.coupling,
                                             ctx.constants.omega1,
                                             ctx.constants.omega2);
                return osc == 1 ? e.first : e.second;
            };
            for (int j = 0; j < 5; ++j) {
                const auto st = first_order_state(osc, j, coeffs, energy);
                double leak = 0.0;
                for (const auto& t : st.terms) leak += std::norm(t.amplitude);
                const double norm_factor = 1.0 / std::sqrt(1.0 + leak);
                double total = norm_factor * norm_factor;
                for (const auto& t : st.terms)
                    total += std::norm(t.amplitude * norm_factor);
                if (std::abs(total - 1.0) > 1e-12) return false;
            }
        }
        det = "renormalized corrected states";
        return true;
    }));

    results.push_back(run_check("perturbation.phase_invariance", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 1.0);
        const auto coeffs = perturbation_coefficients(ctx.coupling, ctx.steady);
        auto e2 = [&](int lvl) {
            return energy_levels(0, lvl, ctx.steady, ctx.coupling,
                                 ctx.constants.omega1, ctx.constants.omega2).second;
        };
        auto st = first_order_state(2, 3, coeffs, e2);
        const double base = mixedness_indicator(st);
        const cplx phase = std::polar(1.0, 0.7351);
        for (auto& t : st.terms) t.amplitude *= phase;
        if (std::abs(mixedness_indicator(st) - base) > 1e-12) return false;
        det = "mixedness invariant under global phase";
        return true;
    }));

    results.push_back(run_check("perturbation.r_vs_kappa", [&](std::string& det) {
        const auto ctx = evaluate_column(cfg, 1.0);
        double last = std::numeric_limits<double>::infinity();
        for (double kappa = 1e8; kappa < 2e9; kappa *= 2.0) {
            const auto r = squeezing_parameter(ctx.steady, ctx.coupling,
                                               kappa, kappa / 2.0);
            if (!(r.effective_r < last)) return false;
            last = r.effective_r;
        }
        det = "effective_r decreases with max decay rate";
        return true;
    }));

    results.push_back(run_check("sweep.determinism", [&](std::string& det) {
        nlohmann::json doc;
        doc["device"] = {{"rg", cfg.device.rg}, {"lg", cfg.device.lg},
                         {"ld", cfg.device.ld}, {"cgs", cfg.device.cgs},
                         {"cds", cfg.device.cds}, {"cgd", cfg.device.cgd},
                         {"ri", cfg.device.ri}, {"rj", cfg.device.rj},
                         {"gd", cfg.device.gd}, {"gm", cfg.device.gm},
                         {"vg", cfg.device.vg}, {"vd", cfg.device.vd}};
        SweepConfig sc;
        sc.f_min = 5.3e9;
        sc.f_max = 5.7e9;
        sc.f_points = 8;
        sc.gn2_points = 7;
        sc.auto_f_range = false;
        sc.workers = 1;
        const auto csv1 = to_csv(run_sweep(doc, sc));
        sc.workers = 3;
        const auto csv3 = to_csv(run_sweep(doc, sc));
        if (csv1 != csv3) return false;
        if (csv1.find(csv_header) != 0) return false;
        if (csv1.find('\r') != std::string::npos) return false;
        // override purity: set-and-revert reproduces baseline bytes
        sc.overrides = {{"c2", cfg.device.c2}};
        if (to_csv(run_sweep(doc, sc)) != csv3) return false;
        det = "bit-identical across workers and pure overrides";
        return true;
    }));

    return results;
}

}  // namespace hemtqc
