#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "hemtqc/constants.hpp"
#include "hemtqc/errors.hpp"
#include "hemtqc/params.hpp"
#include "hemtqc/steady.hpp"

namespace hemtqc {

/// Bath occupancies and decay rates seen by the two ports.
struct BathSpec {
    double n1 = 0.0;      // mean thermal occupancy, port 1
    double n2 = 0.0;      // mean thermal occupancy, port 2
    double kappa1 = 0.0;  // rad/s
    double kappa2 = 0.0;  // rad/s
};

/// Per-frequency second moments of the fluctuations and the corresponding
/// input-output corrected values.
struct SpectralMoments {
    double n1 = 0.0;          // <a1+ a1>
    double n2 = 0.0;          // <a2+ a2>
    cplx d12{0.0, 0.0};       // <a1 a2>
    double n_o1 = 0.0;        // output occupancy, port 1
    double n_o2 = 0.0;        // output occupancy, port 2
    cplx d_o12{0.0, 0.0};     // output cross-correlation
};

/// Bose-Einstein occupancy. T = 0 returns exactly 0.
inline double thermal_occupancy(double omega, double t) {
    if (!(omega > 0.0))
        throw std::domain_error("thermal occupancy requires omega > 0");
    if (t < 0.0)
        throw std::domain_error("thermal occupancy requires T >= 0");
    if (t == 0.0) return 0.0;
    return 1.0 / std::expm1(hbar * omega / (k_boltzmann * t));
}

/// Frequency-domain system matrix over (a1, a1+, a2, a2+). Rows 1 and 3 are
/// the transformed fluctuation equations; rows 2 and 4 their Hermitian
/// conjugates, so the scattering matrix pairs rows under conjugation and the
/// populations assemble real.
inline Eigen::Matrix4cd build_fluctuation_matrix(double omega,
                                                 const DerivedConstants& d,
                                                 const GammaRates& g,
                                                 const BathSpec& bath) {
    const double d1 = omega - d.omega1;
    const double d2 = omega - d.omega2;
    const cplx i(0.0, 1.0);
    Eigen::Matrix4cd m;
    m(0, 0) = i * d1 + bath.kappa1 / 2.0 - g.a11;
    m(0, 1) = -(g.a11 + g.a13);
    m(0, 2) = -g.a12;
    m(0, 3) = -g.a12;
    m(2, 0) = -(g.a21 + g.a24);
    m(2, 1) = g.a21 - g.a24;
    m(2, 2) = i * d2 + bath.kappa2 / 2.0 - (g.a22 + g.a23);
    m(2, 3) = -(g.a22 + g.a23);
    // conjugate equations: exact element-wise conjugates with the dagger
    // column swap, so populations assemble real by construction
    for (int row : {0, 2}) {
        m(row + 1, 0) = std::conj(m(row, 1));
        m(row + 1, 1) = std::conj(m(row, 0));
        m(row + 1, 2) = std::conj(m(row, 3));
        m(row + 1, 3) = std::conj(m(row, 2));
    }
    return m;
}

/// Solves the fluctuation equations at one probe frequency and assembles the
/// second moments with vacuum-plus-thermal inputs (per-port correlators
/// N and N+1, cross-port zero). Output values follow the input-output form
/// n_o = 2 kappa n + N, d_o12 = 2 sqrt(kappa1 kappa2) d12.
inline SpectralMoments fluctuation_moments(double omega,
                                           const DerivedConstants& d,
                                           const GammaRates& g,
                                           const BathSpec& bath) {
    const Eigen::Matrix4cd m = build_fluctuation_matrix(omega, d, g, bath);
    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(m);
    if (!(lu.rcond() > 1e-12)) {
        std::ostringstream os;
        os << "fluctuation resonance singularity at omega = " << omega;
        throw numeric_error(os.str());
    }
    Eigen::Matrix4cd drive = Eigen::Matrix4cd::Zero();
    drive(0, 0) = drive(1, 1) = std::sqrt(2.0 * bath.kappa1);
    drive(2, 2) = drive(3, 3) = std::sqrt(2.0 * bath.kappa2);
    const Eigen::Matrix4cd s = lu.solve(drive);

    // <u_r1 u_r2> over the input correlators
    auto corr = [&](int r1, int r2) -> cplx {
        return s(r1, 0) * s(r2, 1) * (bath.n1 + 1.0)
             + s(r1, 1) * s(r2, 0) * bath.n1
             + s(r1, 2) * s(r2, 3) * (bath.n2 + 1.0)
             + s(r1, 3) * s(r2, 2) * bath.n2;
    };
    const cplx n1c = corr(1, 0);
    const cplx n2c = corr(3, 2);
    SpectralMoments out;
    out.n1 = n1c.real();
    out.n2 = n2c.real();
    out.d12 = corr(0, 2);
    out.n_o1 = 2.0 * bath.kappa1 * out.n1 + bath.n1;
    out.n_o2 = 2.0 * bath.kappa2 * out.n2 + bath.n2;
    out.d_o12 = 2.0 * std::sqrt(bath.kappa1 * bath.kappa2) * out.d12;
    return out;
}

}  // namespace hemtqc
