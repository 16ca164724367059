#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hemtqc/gaussian.hpp"
#include "hemtqc/selfcheck.hpp"

using namespace hemtqc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TwoModeCM tmsv(double r) {
    TwoModeCM cm;
    cm.a = cm.b = std::cosh(2.0 * r);
    cm.c = std::sinh(2.0 * r);
    cm.tau = cm.c * cm.c / (cm.b * cm.b - 1.0);
    cm.eta = cm.a - cm.tau * cm.b;
    return cm;
}

}  // namespace

TEST_CASE("covariance matrix from output moments") {
    SpectralMoments vac;
    const auto v = covariance_matrix(vac);
    CHECK(v.a == 1.0);
    CHECK(v.b == 1.0);
    CHECK(v.c == 0.0);
    CHECK(v.tau == 0.0);
    CHECK(v.eta == 1.0);

    SpectralMoments m;
    m.n_o1 = 3.0;
    m.n_o2 = 12.0;
    const auto cm = covariance_matrix(m);
    CHECK(cm.a == 7.0);
    CHECK(cm.b == 25.0);
    CHECK(cm.tau == 0.0);
    CHECK(cm.eta == cm.a);

    m.n_o2 = 13.01;   // thermal-photon level of the reference design
    CHECK_THAT(covariance_matrix(m).b, WithinRel(27.02, 1e-12));

    SpectralMoments bad;
    bad.n_o1 = 1.0;
    bad.n_o2 = 0.0;   // b = 1 with nonzero cross-correlation
    bad.d_o12 = cplx(0.5, 0.0);
    CHECK_THROWS_MATCHES(covariance_matrix(bad), numeric_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring(
                                 "degenerate channel parametrization")));
}

TEST_CASE("channel parameters satisfy their defining relations") {
    std::mt19937_64 rng(60);
    for (int k = 0; k < 300; ++k) {
        const auto cm = random_physical_cm(rng);
        if (cm.b <= 1.0 + 1e-12) continue;
        CHECK_THAT(cm.tau, WithinRel(cm.c * cm.c / (cm.b * cm.b - 1.0), 1e-12));
        CHECK_THAT(cm.eta, WithinRel(cm.a - cm.tau * cm.b, 1e-12));
    }
}

TEST_CASE("entropy values") {
    CHECK(entropy_h(1.0) == 0.0);
    CHECK(entropy_h(1.0 - 1e-9) == 0.0);
    CHECK_THAT(entropy_h(3.0), WithinAbs(2.0, 1e-14));
    CHECK_THAT(entropy_h(5.0), WithinAbs(2.75489, 1e-5));   // 3 log2 3 - 2
    CHECK_THROWS_AS(entropy_h(0.99), std::domain_error);
    double prev = 0.0;
    for (double x = 1.0; x < 40.0; x += 0.37) {
        const double f = entropy_h(x);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("entropy is stable against large-argument cancellation") {
    // direct two-term evaluation loses ~8 digits here
    const double x = 3996331.775;
    const double v = (x - 1.0) / 2.0;
    const double reference = v * std::log1p(2.0 / (x - 1.0)) / std::log(2.0)
        + std::log2((x + 1.0) / 2.0);
    CHECK_THAT(entropy_h(x), WithinRel(reference, 1e-15));
    CHECK_THAT(entropy_h(x) - entropy_h(x * (1.0 + 1e-9)),
               WithinAbs(-1e-9 / std::log(2.0), 1e-12));
}

TEST_CASE("symplectic eigenvalues of reference states") {
    CHECK(symplectic_eigenvalues({1.0, 1.0, 0.0}) == std::pair{1.0, 1.0});
    CHECK(symplectic_eigenvalues({25.0, 25.0, 0.0}) == std::pair{25.0, 25.0});
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        const auto [nm, np] = symplectic_eigenvalues(tmsv(r));
        CHECK_THAT(nm, WithinAbs(1.0, 1e-10));
        CHECK_THAT(np, WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("partial transpose eigenvalue") {
    CHECK(pt_smaller_eigenvalue({4.0, 9.0, 0.0}) == 4.0);
    CHECK(pt_smaller_eigenvalue({9.0, 4.0, 0.0}) == 4.0);
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        CHECK_THAT(pt_smaller_eigenvalue(tmsv(r)),
                   WithinAbs(std::exp(-2.0 * r), 1e-10));
    }
    TwoModeCM impossible{2.0, 2.0, 40.0};
    CHECK_THROWS_MATCHES(symplectic_eigenvalues(impossible), numeric_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("non-physical CM")));
}

TEST_CASE("product states carry no correlations") {
    for (double a : {1.0, 7.0, 400.0}) {
        for (double b : {1.0, 25.0}) {
            TwoModeCM cm{a, b, 0.0, 0.0, a};
            const auto r = gaussian_discord(cm);
            CHECK(r.discord == 0.0);
            CHECK(r.classical == 0.0);
            CHECK(r.mutual == 0.0);
            CHECK(r.nu_minus == std::min(a, b));
            CHECK(r.nu_plus == std::max(a, b));
            CHECK(r.d_tilde == std::min(a, b));
            CHECK_FALSE(r.entangled);
        }
    }
}

TEST_CASE("pure two-mode squeezed state discord equals the entanglement entropy") {
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        const auto cm = tmsv(r);
        const double cond = cm.a - cm.c * cm.c / (cm.b + 1.0);
        CHECK_THAT(entropy_h(cond), WithinAbs(0.0, 1e-9));   // tau + eta = 1
        const auto rep = gaussian_discord(cm);
        CHECK_THAT(rep.discord, WithinAbs(entropy_h(std::cosh(2.0 * r)), 1e-9));
        CHECK(rep.entangled);
        CHECK(rep.d_tilde < 1.0);
    }
}

TEST_CASE("identities on random physical covariance matrices") {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 10000; ++k) {
        const auto cm = random_physical_cm(rng);
        const auto r = gaussian_discord(cm);
        CHECK(r.discord >= 0.0);
        CHECK(r.classical >= 0.0);
        CHECK_THAT(r.discord + r.classical, WithinAbs(r.mutual, 1e-9));
        CHECK(r.nu_minus >= 1.0 - 1e-9);
        const double detv = std::abs(cm.a * cm.b - cm.c * cm.c);
        CHECK_THAT(r.nu_minus * r.nu_plus, WithinRel(detv, 1e-10));
        CHECK(r.entangled == (r.d_tilde < 1.0));
    }
}

TEST_CASE("discord is nondecreasing in the cross-correlation") {
    for (double a : {1.5, 6.0, 50.0}) {
        for (double b : {2.0, 20.0}) {
            const double hi =
                std::sqrt((std::max(a, b) + 1.0) * (std::min(a, b) - 1.0));
            double last = -1.0;
            for (int k = 0; k <= 60; ++k) {
                TwoModeCM cm;
                cm.a = a;
                cm.b = b;
                cm.c = hi * k / 60.0;
                const double d = gaussian_discord(cm).discord;
                CHECK(d >= last - 1e-12);
                last = d;
            }
        }
    }
}

TEST_CASE("half-convention adapter round trip") {
    std::mt19937_64 rng(62);
    for (int k = 0; k < 500; ++k) {
        const auto cm = random_physical_cm(rng);
        const auto adapted = cm_from_half_convention(cm.a / 2.0, cm.b / 2.0,
                                                     cm.c / 2.0);
        CHECK(adapted.a == cm.a);
        CHECK(adapted.b == cm.b);
        CHECK(adapted.c == cm.c);
        const auto r0 = gaussian_discord(cm);
        const auto r1 = gaussian_discord(adapted);
        CHECK(r0.discord == r1.discord);
        CHECK(r0.classical == r1.classical);
        CHECK(r0.mutual == r1.mutual);
    }
}
