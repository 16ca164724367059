#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "hemtqc/constants.hpp"
#include "hemtqc/errors.hpp"

namespace hemtqc {

/// Full input record: transistor small-signal values, matching network and
/// bath parameters. Defaults are the 4x50 um InP HEMT values at cryogenic
/// bias plus matching elements calibrated so the bare resonances sit at
/// 5.5 GHz and 15.5 GHz.
struct DeviceParams {
    // transistor small-signal model
    double rg = 0.3;        // gate resistance (ohm)
    double lg = 75e-12;     // gate inductance (H)
    double ld = 70e-12;     // drain inductance (H)
    double cgs = 107e-15;   // gate-source capacitance (F)
    double cds = 51e-15;    // drain-source capacitance (F)
    double cgd = 60e-15;    // gate-drain capacitance (F)
    double ri = 0.07;       // gate-source resistance (ohm)
    double rj = 8.0;        // gate-drain resistance (ohm)
    double gd = 12e-3;      // drain-source conductance (S)
    double gm = 82e-3;      // intrinsic transconductance (S)
    double vg = 0.03;       // gate bias (V)
    double vd = 0.06;       // drain bias (V)

    // matching network
    double cin = 100e-15;   // input coupling capacitance (F)
    double c1 = 100e-15;    // first matching capacitance (F)
    double c2 = 1.0e-12;    // second matching capacitance (F)
    double l1 = 2.302960571099169e-09;   // first matching inductance (H)
    double l2 = 6.243992729728291e-10;   // second matching inductance (H)
    double vrf = 1e-3;      // RF drive amplitude (V)

    // bath
    double t = 4.2;                      // operating temperature (K)
    double td = 450.0;                   // drain-conductance noise temperature (K)
    std::optional<double> t2;            // second-port bath temperature override (K)
    double bn = 1e6;                     // noise bandwidth (Hz)
    double kappa1 = 2.0 * pi * 100e6;    // first oscillator decay rate (rad/s)
    double kappa2 = 2.0 * pi * 100e6;    // second oscillator decay rate (rad/s)
};

/// Nonlinearity inputs, swept directly rather than extracted from bias data.
struct NonlinearInputs {
    double gn2 = 0.0;   // nonlinearity factor (A/V^2)
    double cn = 0.0;    // nonlinear capacitance (F)
};

/// Throws config_error naming the offending field.
inline void validate(const DeviceParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw config_error(std::string("non-positive value for ") + name);
    };
    auto nonnegative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw config_error(std::string("negative value for ") + name);
    };
    positive(p.rg, "rg");
    positive(p.lg, "lg");
    positive(p.ld, "ld");
    positive(p.cgs, "cgs");
    positive(p.cds, "cds");
    positive(p.cgd, "cgd");
    positive(p.ri, "ri");
    positive(p.rj, "rj");
    nonnegative(p.gd, "gd");
    nonnegative(p.gm, "gm");
    positive(p.cin, "cin");
    positive(p.c1, "c1");
    positive(p.c2, "c2");
    positive(p.l1, "l1");
    positive(p.l2, "l2");
    positive(p.t, "t");
    positive(p.td, "td");
    if (p.t2) positive(*p.t2, "t2");
    positive(p.bn, "bn");
    positive(p.kappa1, "kappa1");
    positive(p.kappa2, "kappa2");
    if (!std::isfinite(p.vrf)) throw config_error("non-finite value for vrf");
    if (!std::isfinite(p.vg)) throw config_error("non-finite value for vg");
    if (!std::isfinite(p.vd)) throw config_error("non-finite value for vd");
}

inline void validate(const NonlinearInputs& n) {
    if (!(n.gn2 >= 0.0) || !std::isfinite(n.gn2))
        throw config_error("negative value for gn2");
    if (!(n.cn >= 0.0) || !std::isfinite(n.cn))
        throw config_error("negative value for cn");
}

/// Effective circuit constants of the two coupled oscillators.
///
/// cm2 is the capacitance aggregate C_B*(C_A + C_N) - C_c^2; every division
/// by the fourth-power aggregate uses cm4 = cm2^2, which keeps all derived
/// quantities (impedances, rates, drives) in plain SI units.
struct DerivedConstants {
    double ca = 0, cb = 0, cc = 0, ca_prime = 0;   // F
    double cm2 = 0;                                // F^2
    double cm4 = 0;                                // F^4
    double cq1 = 0, cq2 = 0, cq1q2 = 0;            // effective capacitances (F)
    double lp2 = 0, l2_prime = 0;                  // effective inductances (H)
    double g12 = 0, g22 = 0;                       // bare coupling rates (1/s)
    double g12_prime = 0, g22_prime = 0;           // drive-shifted rates (1/s)
    double vq1 = 0, vq2 = 0;                       // drive voltages (V)
    double ip2 = 0;                                // drive current (A)
    double igs_rms = 0, ids_rms = 0;               // RMS noise currents (A)
    double omega1 = 0, omega2 = 0;                 // resonances (rad/s)
    double z1 = 0, z2 = 0;                         // oscillator impedances (ohm)
    double gm = 0;                                 // transconductance carried through (S)
};

/// Evaluates the effective-circuit constants at one nonlinearity point.
/// Noise drive amplitudes follow the 4 k_B T G B_n form, with the drain
/// conductance counted at the drain noise temperature.
inline DerivedConstants derive_linear_constants(const DeviceParams& p,
                                                const NonlinearInputs& n) {
    DerivedConstants d;
    d.ca = p.cin + p.c1 + p.cgs + p.cgd;
    d.cb = p.cgd + p.c2;
    d.cc = p.cgd;
    d.ca_prime = d.ca + n.cn;
    d.cm2 = d.cb * d.ca_prime - d.cc * d.cc;
    if (!(d.cm2 > 0.0) || !std::isfinite(d.cm2))
        throw numeric_error("degenerate capacitance network: "
                            "cb*(ca + cn) - cc^2 must be positive");
    d.cm4 = d.cm2 * d.cm2;

    const double cb2 = d.cb * d.cb;
    const double cc2 = d.cc * d.cc;
    d.cq1 = d.cm4 / (cb2 * d.ca - cc2 * d.cb);
    d.cq2 = d.cm4 / (cc2 * d.ca + d.ca_prime * d.ca_prime * d.cb
                     - 2.0 * cc2 * d.ca_prime);
    d.cq1q2 = d.cm4 / (d.cb * d.cc * d.ca - cc2 * d.cc);
    d.lp2 = d.cm4 / (p.gm * p.gm * cb2 * d.ca - 2.0 * p.gm * p.gm * cc2 * d.cb);
    d.g12 = (-2.0 * p.gm * cb2 * d.ca + 3.0 * p.gm * cc2 * d.cb) / (2.0 * d.cm4);
    d.g22 = (-p.gm * d.cb * d.cc * d.ca + p.gm * d.cb * d.cc * d.ca_prime
             + p.gm * cc2 * d.cc) / d.cm4;
    d.vq1 = (cb2 * p.cin * d.ca * p.vrf - d.cb * p.cin * cc2 * p.vrf) / d.cm4;
    d.vq2 = (d.cb * d.cc * p.cin * d.ca * p.vrf
             + 0.5 * d.cb * d.cc * p.cin * d.ca_prime * p.vrf
             - p.cin * cc2 * d.cc * p.vrf) / d.cm4;

    // noise drives: RMS amplitudes combined in mean square
    const double ig2 = 4.0 * k_boltzmann * p.t * p.bn / p.ri;
    const double ij2 = 4.0 * k_boltzmann * p.t * p.bn / p.rj;
    const double id2 = 4.0 * k_boltzmann * p.t * p.bn * p.gd;
    const double ids2 = 4.0 * k_boltzmann * p.td * p.bn * p.gd;
    d.igs_rms = std::sqrt(std::max(ig2 - ij2, 0.0));
    d.ids_rms = std::sqrt(ids2 + id2 + ij2);
    d.ip2 = (-p.gm * cb2 * p.cin * d.ca * p.vrf
             + p.gm * d.cb * cc2 * p.cin * p.vrf) / d.cm4 - d.ids_rms;

    const double inv_l2p = 1.0 / (2.0 * p.l2) + 1.0 / (2.0 * d.lp2)
        - 2.0 * p.gm * n.gn2 * cb2 * p.cin * p.vrf / d.cm4;
    if (!(inv_l2p > 0.0) || !std::isfinite(inv_l2p))
        throw numeric_error("non-finite derived constant l2_prime: "
                            "drive term exceeds the inductive stiffness");
    d.l2_prime = 1.0 / inv_l2p;
    d.g12_prime = d.g12 + 2.0 * n.gn2 * cb2 * p.cin * p.vrf / d.cm4;
    d.g22_prime = d.g22 + 2.0 * n.gn2 * d.cb * d.cc * p.cin * p.vrf / d.cm4;

    d.omega1 = 1.0 / std::sqrt(p.l1 * d.cq1);
    d.omega2 = 1.0 / std::sqrt(d.l2_prime * d.cq2);
    d.z1 = std::sqrt(p.l1 / d.cq1);
    d.z2 = std::sqrt(d.l2_prime / d.cq2);
    d.gm = p.gm;
    for (auto [v, name] : {std::pair{d.omega1, "omega1"}, {d.omega2, "omega2"},
                           {d.z1, "z1"}, {d.z2, "z2"},
                           {d.cq1, "cq1"}, {d.cq2, "cq2"}}) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw numeric_error(std::string("non-finite derived constant ") + name);
    }
    return d;
}

/// Coupling rates of the nonlinear interaction written on ladder operators,
/// with one factor of hbar divided out so all six are plain rates. Each is
/// homogeneous of degree 1 in gn2.
struct CouplingConstants {
    double gn11 = 0, gn21 = 0, gn31 = 0, gn41 = 0, gn51 = 0, gn61 = 0;  // rad/s
};

inline CouplingConstants derive_coupling_constants(const DerivedConstants& d,
                                                   const NonlinearInputs& n) {
    if (!(d.cm4 > 0.0))
        throw numeric_error("degenerate capacitance network: cm4 <= 0");
    const double pref = n.gn2 / d.cm4;
    const double s2 = std::sqrt(hbar * d.z2 / 2.0);
    const double cb2 = d.cb * d.cb;
    CouplingConstants c;
    c.gn11 = pref * cb2 * s2 / (2.0 * d.z1);
    c.gn21 = pref * d.cc * d.cc * s2 / (2.0 * d.z2);
    c.gn31 = pref * d.gm * d.gm * cb2 * s2 * d.z2 / 2.0;
    c.gn41 = pref * d.gm * cb2 * d.z2 * std::sqrt(hbar / (2.0 * d.z1));
    c.gn51 = pref * d.gm * d.cb * d.cc * s2;
    c.gn61 = pref * d.gm * d.cb * d.cc * s2;
    return c;
}

}  // namespace hemtqc
