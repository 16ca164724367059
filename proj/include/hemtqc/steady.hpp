#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hemtqc/constants.hpp"
#include "hemtqc/errors.hpp"
#include "hemtqc/params.hpp"

namespace hemtqc {

using cplx = std::complex<double>;

/// Classical operating point the fluctuations are linearized around.
struct SteadyState {
    cplx a1{0.0, 0.0};
    cplx a2{0.0, 0.0};
    double residual = 0.0;   // ||M x - rhs||
};

/// Linearization rates entering the fluctuation equations.
struct GammaRates {
    cplx a11{}, a12{}, a13{};         // first-oscillator couplings
    cplx a21{}, a22{}, a23{}, a24{};  // second-oscillator couplings
};

struct SteadySystem {
    Eigen::Matrix4d matrix;
    Eigen::Vector4d rhs;
};

/// Builds the 4x4 real system for the operating point, unknowns
/// (Re A1, Im A1, Re A2, Im A2). Construction is total.
inline SteadySystem build_steady_system(const DerivedConstants& d,
                                        double kappa1, double kappa2,
                                        double delta1, double delta2) {
    const double gx = d.g12_prime * std::sqrt(d.z2 / d.z1);
    const double cq = 1.0 / (2.0 * d.cq1q2 * std::sqrt(d.z1 * d.z2));
    const double gy = d.g22_prime;
    SteadySystem s;
    s.matrix << -kappa1 / 2.0, delta1, 2.0 * gx, cq,
                -delta1, kappa1 / 2.0, 0.0, 0.0,
                0.0, cq, gy - kappa2 / 2.0, delta2,
                0.0, -2.0 * gx, -delta2, -(gy + kappa2 / 2.0);
    s.rhs << -d.vq1 * std::sqrt(1.0 / (2.0 * hbar * d.z1)),
             -d.igs_rms * std::sqrt(d.z1 / (2.0 * hbar)),
             -d.vq2 * std::sqrt(1.0 / (2.0 * hbar * d.z2)),
             d.ip2 * std::sqrt(d.z2 / (2.0 * hbar));
    return s;
}

/// Solves the operating-point system. Guards against ill conditioning: a
/// 4x4 double solve loses ~4 significant digits around condition 1e12.
inline SteadyState solve_steady_state(const Eigen::Matrix4d& matrix,
                                      const Eigen::Vector4d& rhs) {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(matrix);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(3);
    if (!(smin > 0.0) || smax / smin > 1e12) {
        std::ostringstream os;
        os << "degenerate steady state: condition estimate "
           << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
        throw numeric_error(os.str());
    }
    const Eigen::Vector4d x = matrix.partialPivLu().solve(rhs);
    SteadyState st;
    st.a1 = cplx(x(0), x(1));
    st.a2 = cplx(x(2), x(3));
    st.residual = (matrix * x - rhs).norm();
    return st;
}

/// Constant rates of the linearized dynamics, jointly linear in the coupling
/// constants at fixed operating point.
inline GammaRates langevin_rates(const SteadyState& s, const CouplingConstants& c) {
    const double re1 = s.a1.real(), im1 = s.a1.imag();
    const double re2 = s.a2.real(), im2 = s.a2.imag();
    const cplx i(0.0, 1.0);
    GammaRates g;
    g.a11 = -4.0 * i * c.gn11 * re2;
    g.a12 = -4.0 * i * c.gn11 * re1 - 4.0 * c.gn41 * re2 + 2.0 * c.gn61 * std::conj(s.a1);
    g.a13 = cplx(4.0 * c.gn61 * re2, 0.0);
    g.a21 = -4.0 * c.gn11 * im2 + 2.0 * i * c.gn21 * re2 + 4.0 * c.gn41 * re2
            - 2.0 * c.gn61 * re1;
    g.a22 = -2.0 * c.gn21 * im1 + 12.0 * i * c.gn31 * re2 + 4.0 * i * c.gn41 * im1
            - 4.0 * c.gn51 * re2 + 4.0 * i * c.gn51 * im2;
    g.a23 = cplx(4.0 * c.gn51 * re2, 0.0);
    g.a24 = -2.0 * i * c.gn61 * im1;
    return g;
}

/// Level energies including the first-order nonlinear shifts, in units of
/// hbar (rad/s). The second-oscillator shift is purely imaginary and is
/// reported verbatim.
inline std::pair<cplx, cplx> energy_levels(int j1, int j2, const SteadyState& s,
                                           const CouplingConstants& c,
                                           double omega1, double omega2) {
    const double re2 = s.a2.real();
    const cplx e1 = omega1 * (j1 + 0.5)
        + cplx(2.0 * c.gn11 * re2, -2.0 * c.gn61 * re2);
    const cplx e2 = omega2 * (j2 + 0.5)
        + cplx(0.0, 2.0 * c.gn41 * (2.0 * j2 + 1.0));
    return {e1, e2};
}

}  // namespace hemtqc
