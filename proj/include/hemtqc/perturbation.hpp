#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "hemtqc/errors.hpp"
#include "hemtqc/params.hpp"
#include "hemtqc/steady.hpp"

namespace hemtqc {

/// Transition amplitudes feeding the first-order state corrections, hbar
/// divided out as in the coupling rates. jp11..jp13 act on the first
/// oscillator (second mode replaced by its operating-point amplitude);
/// jp21..jp212 on the second.
struct PerturbationCoefficients {
    cplx jp11{}, jp12{}, jp13{};
    cplx jp21{}, jp22{}, jp23{}, jp24{}, jp25{}, jp26{};
    cplx jp27{}, jp28{}, jp29{}, jp210{}, jp211{}, jp212{};
};

struct CorrectionTerm {
    int offset = 0;      // level shift relative to the base level
    cplx amplitude{};    // coefficient of |j + offset>
};

/// First-order corrected ket: |j> + sum_k amplitude_k |j + offset_k>
/// (unnormalized; see mixedness_indicator).
struct StateCorrection {
    int oscillator = 1;
    int base_level = 0;
    std::vector<CorrectionTerm> terms;
};

/// Two-mode squeezing produced by the nonlinear coupling.
struct SqueezingReport {
    cplx zeta12{};           // squeezing rate (rad/s)
    double t_max = 0.0;      // interaction time bound (s)
    double effective_r = 0;  // |zeta12| * t_max
};

inline PerturbationCoefficients perturbation_coefficients(const CouplingConstants& c,
                                                          const SteadyState& s) {
    const cplx i(0.0, 1.0);
    const double re2 = s.a2.real();
    PerturbationCoefficients j;
    // first oscillator: matrix elements of the interaction with the second
    // mode frozen at its operating point
    j.jp11 = -2.0 * re2 * (c.gn11 + i * c.gn61);
    j.jp12 = 2.0 * re2 * (-c.gn11 + i * c.gn61);
    j.jp13 = 4.0 * i * c.gn41 * re2 * re2;
    // second oscillator
    j.jp21 = c.gn21 + c.gn31 + i * c.gn51;
    j.jp22 = c.gn21 + c.gn31 - i * c.gn51;
    j.jp23 = -c.gn21 + 4.0 * c.gn61 * std::conj(s.a1) + i * c.gn51;
    j.jp24 = -c.gn21 + 4.0 * c.gn61 * std::conj(s.a1) - i * c.gn51;
    j.jp25 = c.gn21 + c.gn31 + i * c.gn51;
    j.jp26 = c.gn21 + c.gn31 - i * c.gn51;
    j.jp27 = c.gn31;
    j.jp28 = c.gn31 + 2.0 * i * c.gn51;
    j.jp29 = c.gn31;   // the duplicated coefficient line, read as jp29
    j.jp210 = c.gn31 - 2.0 * i * c.gn51;
    j.jp211 = -2.0 * c.gn41 * s.a1.imag();
    j.jp212 = -2.0 * c.gn41 * s.a1.imag();
    return j;
}

namespace detail {

inline double ladder(int j, int offset) {
    // sqrt factors of a^k / (a+)^k between |j> and |j + offset|
    auto fall = [](int from, int count) {
        double v = 1.0;
        for (int k = 0; k < count; ++k) v *= from - k;
        return v;
    };
    if (offset < 0) return std::sqrt(fall(j, -offset));
    return std::sqrt(fall(j + offset, offset));
}

}  // namespace detail

/// First-order correction for one oscillator level. `energy` maps a level
/// index to its (complex) energy; denominators use real parts only. Offsets
/// reaching negative levels are dropped, as are exactly-zero amplitudes.
inline StateCorrection first_order_state(int oscillator, int j,
                                         const PerturbationCoefficients& jp,
                                         const std::function<cplx(int)>& energy) {
    if (j < 0) throw numeric_error("level index must be nonnegative");
    StateCorrection out;
    out.oscillator = oscillator;
    out.base_level = j;
    const double ej = energy(j).real();
    auto add = [&](int offset, cplx core) {
        if (j + offset < 0) return;
        const double lf = detail::ladder(j, offset);
        const cplx amp_num = core * lf;
        if (amp_num == cplx(0.0, 0.0)) return;
        const double eo = energy(j + offset).real();
        const double den = eo - ej;
        const double scale = std::max({1.0, std::abs(ej), std::abs(eo)});
        if (std::abs(den) < 1e-18 * scale) {
            std::ostringstream os;
            os << "degenerate level: E(" << j + offset << ") - E(" << j
               << ") vanishes";
            throw numeric_error(os.str());
        }
        out.terms.push_back({offset, amp_num / den});
    };
    const cplx i(0.0, 1.0);
    if (oscillator == 1) {
        add(-2, jp.jp11);
        add(+2, jp.jp12);
        add(-1, jp.jp13);
        add(+1, -jp.jp13);
    } else if (oscillator == 2) {
        add(-3, jp.jp21);
        add(+3, jp.jp21);
        add(-1, jp.jp23 + jp.jp27 + i * (jp.jp26 + jp.jp27 + jp.jp28));
        add(+1, jp.jp24 + jp.jp25 + i * (jp.jp25 + jp.jp29 + jp.jp210));
        add(+2, jp.jp211);
        add(-2, jp.jp212);
    } else {
        throw numeric_error("oscillator index must be 1 or 2");
    }
    return out;
}

/// Population leaked out of the unperturbed level after renormalization:
/// sum |amp|^2 / (1 + sum |amp|^2), in [0, 1).
inline double mixedness_indicator(const StateCorrection& s) {
    double leak = 0.0;
    for (const auto& t : s.terms) leak += std::norm(t.amplitude);
    return leak / (1.0 + leak);
}

/// zeta12 = -2 gn11 Im(A1) + 2 gn41 Re(A2) + 2 gn61 Re(A1); the interaction
/// time bound carries a 0.9 safety factor inside t < min(1/kappa).
inline SqueezingReport squeezing_parameter(const SteadyState& s,
                                           const CouplingConstants& c,
                                           double kappa1, double kappa2) {
    SqueezingReport r;
    r.zeta12 = cplx(-2.0 * c.gn11 * s.a1.imag() + 2.0 * c.gn41 * s.a2.real()
                    + 2.0 * c.gn61 * s.a1.real(), 0.0);
    r.t_max = 0.9 * std::min(1.0 / kappa1, 1.0 / kappa2);
    r.effective_r = std::abs(r.zeta12) * r.t_max;
    return r;
}

}  // namespace hemtqc
