#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hemtqc/langevin.hpp"
#include "hemtqc/params.hpp"
#include "oracle_linalg.hpp"

using namespace hemtqc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct DefaultPoint {
    DeviceParams p;
    DerivedConstants d;
    GammaRates g;
    BathSpec bath;
};

DefaultPoint default_point(double gn2) {
    DefaultPoint pt;
    const NonlinearInputs n{gn2, 0.0};
    pt.d = derive_linear_constants(pt.p, n);
    const auto c = derive_coupling_constants(pt.d, n);
    const auto sys = build_steady_system(pt.d, pt.p.kappa1, pt.p.kappa2, 0.0, 0.0);
    const auto st = solve_steady_state(sys.matrix, sys.rhs);
    pt.g = langevin_rates(st, c);
    pt.bath = BathSpec{thermal_occupancy(pt.d.omega1, pt.p.t),
                       thermal_occupancy(pt.d.omega2, pt.p.t),
                       pt.p.kappa1, pt.p.kappa2};
    return pt;
}

}  // namespace

TEST_CASE("thermal occupancy limits") {
    CHECK(thermal_occupancy(2.0 * pi * 5e9, 0.0) == 0.0);
    // hbar omega = kB T ln 2 gives exactly one photon
    const double omega = k_boltzmann * 4.2 * std::log(2.0) / hbar;
    CHECK_THAT(thermal_occupancy(omega, 4.2), WithinAbs(1.0, 1e-12));
    CHECK_THAT(thermal_occupancy(2.0 * pi * 6.5e9, 4.2),
               WithinRel(12.969850526610648, 1e-12));
    CHECK_THROWS_AS(thermal_occupancy(0.0, 4.2), std::domain_error);
    CHECK_THROWS_AS(thermal_occupancy(-1.0, 4.2), std::domain_error);
    CHECK_THROWS_AS(thermal_occupancy(1e10, -0.1), std::domain_error);
}

TEST_CASE("decoupled fluctuation matrix") {
    DerivedConstants d;
    d.omega1 = 10.0;
    d.omega2 = 30.0;
    const BathSpec bath{0.0, 0.0, 4.0, 6.0};
    const auto m = build_fluctuation_matrix(12.0, d, GammaRates{}, bath);
    CHECK(m(0, 0) == cplx(2.0, 2.0));     // i(12-10) + 4/2
    CHECK(m(1, 1) == cplx(2.0, -2.0));
    CHECK(m(2, 2) == cplx(3.0, -18.0));   // i(12-30) + 6/2
    CHECK(m(3, 3) == cplx(3.0, 18.0));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (r != c) CHECK(m(r, c) == cplx(0.0, 0.0));

    const auto m0 = build_fluctuation_matrix(10.0, d, GammaRates{},
                                             BathSpec{0.0, 0.0, 4.0, 4.0});
    CHECK(m0(0, 0) == cplx(2.0, 0.0));    // kappa/2 on resonance
    CHECK(m0(1, 1) == cplx(2.0, 0.0));
}

TEST_CASE("fluctuation matrix matches the independent transcription") {
    const auto pt = default_point(1.0);
    const auto m = build_fluctuation_matrix(2.0 * pi * 5.45e9, pt.d, pt.g, pt.bath);
    CHECK_THAT(m(0, 0).real(), WithinRel(314159265.3589793, 1e-12));
    CHECK_THAT(m(0, 0).imag(), WithinRel(7707004188.465444, 1e-9));
    CHECK_THAT(m(0, 1).real(), WithinRel(-5925918304.073625, 1e-9));
    CHECK_THAT(m(0, 1).imag(), WithinRel(8021163453.8244295, 1e-9));
    CHECK_THAT(m(0, 2).real(), WithinRel(1851038969175.9797, 1e-9));
    CHECK_THAT(m(0, 2).imag(), WithinRel(-4911562025196.807, 1e-9));
    CHECK(m(0, 3) == m(0, 2));
    CHECK(m(1, 0) == std::conj(m(0, 1)));
    CHECK(m(1, 1) == std::conj(m(0, 0)));
    CHECK(m(1, 2) == std::conj(m(0, 3)));
    CHECK_THAT(m(2, 0).real(), WithinRel(-1956931859736.3994, 1e-9));
    CHECK_THAT(m(2, 0).imag(), WithinRel(-283156700.3659941, 1e-9));
    CHECK_THAT(m(2, 1).real(), WithinRel(1956931859736.3994, 1e-9));
    CHECK_THAT(m(2, 1).imag(), WithinRel(-75275270.1861783, 1e-9));
    CHECK_THAT(m(2, 2).real(), WithinRel(307872362.0608578, 1e-9));
    CHECK_THAT(m(2, 2).imag(), WithinRel(-108773338623.96362, 1e-9));
    CHECK_THAT(m(2, 3).real(), WithinRel(-6286903.298121452, 1e-9));
    CHECK_THAT(m(2, 3).imag(), WithinRel(-46235651522.69409, 1e-9));
    CHECK(m(3, 0) == std::conj(m(2, 1)));
    CHECK(m(3, 1) == std::conj(m(2, 0)));
    CHECK(m(3, 2) == std::conj(m(2, 3)));
    CHECK(m(3, 3) == std::conj(m(2, 2)));
}

TEST_CASE("decoupled moments follow the one-mode closed form") {
    const auto pt = default_point(0.0);
    for (double f : {5.3e9, 5.5e9, 5.62e9, 15.4e9}) {
        const double omega = 2.0 * pi * f;
        const auto m = fluctuation_moments(omega, pt.d, pt.g, pt.bath);
        CHECK(m.d12 == cplx(0.0, 0.0));
        CHECK(m.d_o12 == cplx(0.0, 0.0));
        const double d1 = omega - pt.d.omega1;
        const double k1 = pt.bath.kappa1;
        const double closed1 = 2.0 * k1 * pt.bath.n1 / (d1 * d1 + k1 * k1 / 4.0);
        CHECK_THAT(m.n1, WithinRel(closed1, 1e-12));
        const double d2 = omega - pt.d.omega2;
        const double k2 = pt.bath.kappa2;
        const double closed2 = 2.0 * k2 * pt.bath.n2 / (d2 * d2 + k2 * k2 / 4.0);
        CHECK_THAT(m.n2, WithinRel(closed2, 1e-12));
        CHECK_THAT(m.n_o1, WithinRel(2.0 * k1 * m.n1 + pt.bath.n1, 1e-15));
    }
}

TEST_CASE("vacuum inputs give zero moments in the decoupled limit") {
    auto pt = default_point(0.0);
    pt.bath.n1 = 0.0;
    pt.bath.n2 = 0.0;
    const auto m = fluctuation_moments(2.0 * pi * 5.5e9, pt.d, pt.g, pt.bath);
    CHECK(m.n1 == 0.0);
    CHECK(m.n2 == 0.0);
    CHECK(m.d12 == cplx(0.0, 0.0));
    CHECK(m.n_o1 == 0.0);
    CHECK(m.n_o2 == 0.0);
}

TEST_CASE("moments at the default point match the independent evaluation") {
    const auto pt = default_point(1.0);
    const auto m = fluctuation_moments(2.0 * pi * 5.45e9, pt.d, pt.g, pt.bath);
    CHECK_THAT(m.n1, WithinRel(1.1484029229341547e-07, 1e-9));
    CHECK_THAT(m.n2, WithinRel(1.2057466012969017e-12, 1e-9));
    CHECK_THAT(m.d12.real(), WithinRel(1.8265730185201762e-10, 1e-9));
    CHECK_THAT(m.d12.imag(), WithinRel(-9.533504338803572e-13, 1e-9));
    CHECK_THAT(m.n_o1, WithinRel(159.72940443409144, 1e-9));
    CHECK_THAT(m.n_o2, WithinRel(5.197715361375197, 1e-9));
    CHECK_THAT(m.d_o12.real(), WithinRel(0.22953393504913272, 1e-9));
    CHECK_THAT(m.d_o12.imag(), WithinRel(-0.0011980154877500688, 1e-9));
}

TEST_CASE("moments match an explicit adjugate inverse on random couplings") {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto pt = default_point(0.0);
    for (int trial = 0; trial < 100; ++trial) {
        GammaRates g;
        const double scale = 0.25 * pt.bath.kappa1;
        g.a11 = scale * cplx(u(rng), u(rng));
        g.a12 = scale * cplx(u(rng), u(rng));
        g.a13 = scale * cplx(u(rng), u(rng));
        g.a21 = scale * cplx(u(rng), u(rng));
        g.a22 = scale * cplx(u(rng), u(rng));
        g.a23 = scale * cplx(u(rng), u(rng));
        g.a24 = scale * cplx(u(rng), u(rng));
        const double omega = pt.d.omega1 + u(rng) * 3.0 * pt.bath.kappa1;

        const auto got = fluctuation_moments(omega, pt.d, g, pt.bath);

        const auto m = build_fluctuation_matrix(omega, pt.d, g, pt.bath);
        oracle::Mat4<cplx> om;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) om[r][c] = m(r, c);
        const double sk1 = std::sqrt(2.0 * pt.bath.kappa1);
        const double sk2 = std::sqrt(2.0 * pt.bath.kappa2);
        const auto s = oracle::inverse_times_diag(om, {cplx(sk1), cplx(sk1),
                                                       cplx(sk2), cplx(sk2)});
        auto corr = [&](int r1, int r2) {
            return s[r1][0] * s[r2][1] * (pt.bath.n1 + 1.0)
                 + s[r1][1] * s[r2][0] * pt.bath.n1
                 + s[r1][2] * s[r2][3] * (pt.bath.n2 + 1.0)
                 + s[r1][3] * s[r2][2] * pt.bath.n2;
        };
        const double n1 = corr(1, 0).real();
        const double n2 = corr(3, 2).real();
        const cplx d12 = corr(0, 2);
        CHECK_THAT(got.n1, WithinRel(n1, 1e-9));
        CHECK_THAT(got.n2, WithinRel(n2, 1e-9));
        CHECK(std::abs(got.d12 - d12) <= 1e-9 * std::max(std::abs(d12), 1e-300));
    }
}

TEST_CASE("populations assemble real and nonnegative") {
    const auto pt = default_point(1.7);
    for (double f = 5.25e9; f < 15.75e9; f += 0.37e9) {
        const auto m = fluctuation_moments(2.0 * pi * f, pt.d, pt.g, pt.bath);
        CHECK(m.n1 >= -1e-9);
        CHECK(m.n2 >= -1e-9);
        CHECK(m.n_o1 >= -1e-9);
        CHECK(m.n_o2 >= -1e-9);
    }
}

TEST_CASE("populations are affine in the bath occupancies") {
    const auto pt = default_point(1.0);
    const double omega = 2.0 * pi * 5.48e9;
    auto moments_at = [&](double b1, double b2) {
        BathSpec bath{b1, b2, pt.bath.kappa1, pt.bath.kappa2};
        return fluctuation_moments(omega, pt.d, pt.g, bath);
    };
    const double y0 = moments_at(0.0, 5.0).n1;
    const double y1 = moments_at(7.0, 5.0).n1;
    const double y2 = moments_at(14.0, 5.0).n1;
    CHECK_THAT(y2 - y1, WithinRel(y1 - y0, 1e-9));
    const double z0 = moments_at(3.0, 0.0).n1;
    const double z1 = moments_at(3.0, 8.0).n1;
    const double z2 = moments_at(3.0, 16.0).n1;
    CHECK(std::abs((z2 - z1) - (z1 - z0)) <= 1e-9 * std::max(std::abs(z2), 1e-300));
}

TEST_CASE("moments vary continuously with the probe frequency") {
    // the coupled system has very narrow collective resonances, so a fixed
    // sampling step cannot bound the differences; refine the worst step and
    // require it to decay, which only a continuous profile does
    const auto pt = default_point(1.0);
    auto value = [&](double f) {
        return fluctuation_moments(2.0 * pi * f, pt.d, pt.g, pt.bath).n1;
    };
    const double lo = 5.2e9, hi = 5.9e9;
    const int coarse = 512;
    double worst = 0.0, wlo = lo, whi = hi;
    double wflo = value(lo), wfhi = 0.0;
    double prev_f = lo, prev_v = wflo;
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
    REQUIRE(worst > 0.0);
    double step = worst;
    for (int round = 0; round < 60 && step > 0.05 * worst; ++round) {
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
    CHECK(step <= 0.05 * worst);
}

TEST_CASE("singular fluctuation matrix is reported with the frequency") {
    DerivedConstants d;
    d.omega1 = 1e9;
    d.omega2 = 3e9;
    GammaRates g;
    g.a11 = cplx(2.0, 0.0);    // cancels kappa1/2 on resonance
    g.a13 = cplx(-2.0, 0.0);   // zeroes the conjugate column
    const BathSpec bath{1.0, 1.0, 4.0, 4.0};
    CHECK_THROWS_MATCHES(fluctuation_moments(1e9, d, g, bath), numeric_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring(
                                 "fluctuation resonance singularity")));
}
