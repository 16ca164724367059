#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "hemtqc/errors.hpp"
#include "hemtqc/langevin.hpp"

namespace hemtqc {

/// Standard-form two-mode covariance matrix, vacuum = 1 convention:
/// diag blocks a*I and b*I, off-diagonal block diag(c, -c).
struct TwoModeCM {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;      // |off-diagonal|, sign kept in diagnostics upstream
    double tau = 0.0;    // phase-sensitive channel transmissivity
    double eta = 0.0;    // phase-sensitive channel noise
};

/// Correlation quantifiers in bits.
struct CorrelationReport {
    double discord = 0.0;
    double classical = 0.0;
    double mutual = 0.0;
    double nu_minus = 1.0;
    double nu_plus = 1.0;
    double d_tilde = 1.0;     // smaller symplectic eigenvalue after partial transpose
    bool entangled = false;   // d_tilde < 1
};

/// a = 2 n_o1 + 1, b = 2 n_o2 + 1, c = 2 Re(d_o12); tau and eta populated
/// when b > 1.
inline TwoModeCM covariance_matrix(const SpectralMoments& m) {
    auto occ = [](double v, const char* name) {
        if (v < -1e-9)
            throw numeric_error(std::string("negative output occupancy ") + name);
        return std::max(v, 0.0);
    };
    TwoModeCM cm;
    cm.a = 2.0 * occ(m.n_o1, "n_o1") + 1.0;
    cm.b = 2.0 * occ(m.n_o2, "n_o2") + 1.0;
    cm.c = std::abs(2.0 * m.d_o12.real());
    if (cm.b > 1.0 + 1e-12) {
        cm.tau = cm.c * cm.c / (cm.b * cm.b - 1.0);
        cm.eta = cm.a - cm.tau * cm.b;
    } else if (cm.c != 0.0) {
        throw numeric_error("degenerate channel parametrization: "
                            "b <= 1 with nonzero cross-correlation");
    } else {
        cm.tau = 0.0;
        cm.eta = cm.a;
    }
    return cm;
}

/// Adapter from the vacuum = 1/2 convention (a = n + 0.5) used by the raw
/// covariance definition; doubles every entry.
inline TwoModeCM cm_from_half_convention(double a_half, double b_half, double c_half) {
    SpectralMoments m;
    m.n_o1 = a_half - 0.5;
    m.n_o2 = b_half - 0.5;
    m.d_o12 = cplx(c_half, 0.0);
    return covariance_matrix(m);
}

/// Entropy of one symplectic value, vacuum = 1 convention:
///   f(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2)
/// evaluated as f = v log2(u/v) + log2(u) with u-v = 1, which avoids the
/// cancellation of the two O(x log x) terms at large x.
inline double entropy_h(double x) {
    if (x < 1.0 - 1e-6) {
        std::ostringstream os;
        os << "entropy argument below vacuum: " << x;
        throw std::domain_error(os.str());
    }
    if (x <= 1.0) return 0.0;
    static const double ln2 = std::log(2.0);
    const double v = (x - 1.0) / 2.0;
    return v * std::log1p(2.0 / (x - 1.0)) / ln2 + std::log2((x + 1.0) / 2.0);
}

namespace detail {

// nu_plus from the additive root, nu_minus through the determinant product
// law; the discriminant is kept factored so near-degenerate (a ~ b, c ~ 0)
// states do not lose precision to cancellation.
inline std::pair<double, double> symplectic_pair(double a, double b, double c,
                                                 bool partial_transpose) {
    const double sum = a + b;
    const double dif = a - b;
    const double c2 = c * c;
    double disc;
    double delta;
    if (partial_transpose) {
        delta = a * a + b * b + 2.0 * c2;
        disc = (dif * dif + 4.0 * c2) * sum * sum;
    } else {
        delta = a * a + b * b - 2.0 * c2;
        const double gap = sum * sum - 4.0 * c2;
        if (gap < -1e-12 * sum * sum)
            throw numeric_error("non-physical CM: complex symplectic spectrum");
        disc = dif * dif * std::max(gap, 0.0);
    }
    const double nu_p = std::sqrt((delta + std::sqrt(disc)) / 2.0);
    const double nu_m = std::abs(a * b - c2) / nu_p;
    return {nu_m, nu_p};
}

}  // namespace detail

/// (nu_minus, nu_plus); product equals sqrt(det V) = |ab - c^2| by
/// construction.
inline std::pair<double, double> symplectic_eigenvalues(const TwoModeCM& cm) {
    if (cm.c == 0.0)
        return {std::min(cm.a, cm.b), std::max(cm.a, cm.b)};
    return detail::symplectic_pair(cm.a, cm.b, cm.c, false);
}

/// Smaller symplectic eigenvalue of the partially transposed CM; below 1
/// certifies entanglement.
inline double pt_smaller_eigenvalue(const TwoModeCM& cm) {
    if (cm.c == 0.0)
        return std::min(cm.a, cm.b);
    return detail::symplectic_pair(cm.a, cm.b, cm.c, true).first;
}

/// Gaussian discord, one-way classical correlation, and mutual information
/// for the standard-form CM, measurement on the second mode:
///   D = f(b) - f(nu-) - f(nu+) + f(tau+eta)
///   C = f(a) - f(tau+eta)
///   I = f(a) + f(b) - f(nu-) - f(nu+)
/// For c = 0 the product state gives exact zeros. Negative rounding residue
/// above -1e-12 is clamped to zero; the compact form is nonnegative for
/// physical inputs.
inline CorrelationReport gaussian_discord(const TwoModeCM& cm) {
    CorrelationReport r;
    if (cm.c == 0.0) {
        r.nu_minus = std::min(cm.a, cm.b);
        r.nu_plus = std::max(cm.a, cm.b);
        r.d_tilde = r.nu_minus;
        r.entangled = r.d_tilde < 1.0;
        return r;
    }
    auto [nu_m, nu_p] = detail::symplectic_pair(cm.a, cm.b, cm.c, false);
    r.nu_minus = nu_m;
    r.nu_plus = nu_p;
    r.d_tilde = detail::symplectic_pair(cm.a, cm.b, cm.c, true).first;
    r.entangled = r.d_tilde < 1.0;

    // tau+eta = a - c^2/(b+1), algebraically a - tau*(b-1)
    const double cond = cm.a - cm.c * cm.c / (cm.b + 1.0);
    const double fa = entropy_h(cm.a);
    const double fb = entropy_h(cm.b);
    const double fm = entropy_h(nu_m);
    const double fp = entropy_h(nu_p);
    const double fc = entropy_h(cond);
    auto clamp0 = [](double v) {
        return (v < 0.0 && v > -1e-12) ? 0.0 : v;
    };
    r.discord = clamp0(fb - fm - fp + fc);
    r.classical = clamp0(fa - fc);
    r.mutual = clamp0(fa + fb - fm - fp);
    return r;
}

}  // namespace hemtqc
