#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "nmq/integrate.hpp"
#include "nmq/spectra.hpp"

using namespace nmq;
using cxd = std::complex<double>;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Spectral-integral oracle (Ohmic class, w_c = 1, truncated at w = 50 where
// the e^{-w} tail is ~1e-22): Gamma(t) = 2 int J(w)(1-cos wt)/w^2 dw.
double gamma_quadrature(double s, double t) {
    return 2.0 * integrate_adaptive(
                     [s, t](double w) {
                         return std::pow(w, s - 2.0) * std::exp(-w) * (1.0 - std::cos(w * t));
                     },
                     1e-13, 50.0, 1e-10, 1e-13);
}

// delta(t) = 4 int J(w)(1-cos wt) cos(w t_s)/w^2 dw
double delta_quadrature(double s, double ts, double t) {
    return 4.0 * integrate_adaptive(
                     [s, ts, t](double w) {
                         return std::pow(w, s - 2.0) * std::exp(-w) * (1.0 - std::cos(w * t)) *
                                std::cos(w * ts);
                     },
                     1e-13, 50.0, 1e-10, 1e-13);
}

}  // namespace

TEST_CASE("gamma_ohmic closed form against the spectral quadrature oracle") {
    for (double s : {0.5, 1.0, 1.5, 2.5, 3.0, 4.0, 5.5}) {
        for (double t : {0.7, 3.0, 11.0}) {
            const double closed = gamma_ohmic(OhmicSpectrum{s}, t);
            const double quad = gamma_quadrature(s, t);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-7));
        }
    }
}

TEST_CASE("gamma_ohmic special values") {
    for (double s : {0.5, 1.0, 2.0, 3.0, 5.0})
        CHECK(gamma_ohmic(OhmicSpectrum{s}, 0.0) == doctest::Approx(0.0).scale(1.0));

    // s = 1 analytic limit of the closed-form family: ln(1 + t^2)
    CHECK(gamma_ohmic(OhmicSpectrum{1.0}, 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(gamma_ohmic(OhmicSpectrum{1.0 + 1e-9}, 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-7));

    // s = 3 asymptote 2*Gamma[2] = 2
    CHECK(gamma_ohmic(OhmicSpectrum{3.0}, inf) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(gamma_ohmic(OhmicSpectrum{3.0}, 1e8) == doctest::Approx(2.0).epsilon(1e-7));

    CHECK_THROWS_AS(gamma_ohmic(OhmicSpectrum{3.0}, -1.0), DomainError);
    CHECK_THROWS_AS(gamma_ohmic(OhmicSpectrum{-1.0}, 1.0), DomainError);
}

TEST_CASE("gamma_ohmic is monotone nondecreasing for s <= 2") {
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
        double prev = 0.0;
        for (int k = 1; k <= 500; ++k) {
            const double g = gamma_ohmic(OhmicSpectrum{s}, 0.1 * k);
            CHECK(g >= prev - 1e-10);
            prev = g;
        }
    }
}

TEST_CASE("dephasing_rate: analytic derivative of Gamma") {
    const OhmicSpectrum s3{3.0};
    // rate is (1/2) dGamma/dt (finite-difference oracle)
    for (double t : {0.3, 1.0, 2.5, 7.0}) {
        const double fd = (gamma_ohmic(s3, t + 1e-5) - gamma_ohmic(s3, t - 1e-5)) / 2e-5;
        CHECK(dephasing_rate(s3, t) == doctest::Approx(0.5 * fd).epsilon(1e-7));
    }
    CHECK(dephasing_rate(s3, 0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(std::abs(dephasing_rate(s3, std::tan(M_PI / 3.0))) < 1e-12);
    // s = 2: nonnegative rate at all times
    for (int k = 0; k <= 400; ++k)
        CHECK(dephasing_rate(OhmicSpectrum{2.0}, 0.05 * k) >= -1e-14);
}

TEST_CASE("ohmic_interval_endpoints across the s branches") {
    CHECK(!ohmic_interval_endpoints(OhmicSpectrum{1.5}).has_value());
    CHECK(!ohmic_interval_endpoints(OhmicSpectrum{2.0}).has_value());
    CHECK(!ohmic_interval_endpoints(OhmicSpectrum{6.5}).has_value());

    const auto s3 = ohmic_interval_endpoints(OhmicSpectrum{3.0});
    REQUIRE(s3.has_value());
    CHECK(s3->a == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(std::isinf(s3->b));

    const auto s5 = ohmic_interval_endpoints(OhmicSpectrum{5.0});
    REQUIRE(s5.has_value());
    CHECK(s5->a == doctest::Approx(0.72654).epsilon(1e-5));
    CHECK(s5->b == doctest::Approx(3.07768).epsilon(1e-5));

    // endpoints agree with a sign scan of the rate
    TimeWindow w{0.0, 20.0, 4000};
    const auto neg = find_sign_changes(
        [](double t) { return dephasing_rate(OhmicSpectrum{5.0}, t); }, w);
    REQUIRE(neg.size() == 1);
    CHECK(neg[0].a == doctest::Approx(s5->a).epsilon(1e-6));
    CHECK(neg[0].b == doctest::Approx(s5->b).epsilon(1e-6));
}

TEST_CASE("gamma_endpoint_values closed forms") {
    const auto e3 = gamma_endpoint_values(OhmicSpectrum{3.0});
    CHECK(e3.at_a1 == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(e3.at_b1 == doctest::Approx(2.0).epsilon(1e-14));

    const auto e4 = gamma_endpoint_values(OhmicSpectrum{4.0});
    CHECK(e4.at_b1 == doctest::Approx(4.0).epsilon(1e-13));

    // values agree with gamma_ohmic evaluated at the endpoints
    for (double s : {2.5, 3.0, 4.0, 4.5, 5.0, 6.0}) {
        const auto ends = gamma_endpoint_values(OhmicSpectrum{s});
        const auto iv = ohmic_interval_endpoints(OhmicSpectrum{s});
        REQUIRE(iv.has_value());
        CHECK(gamma_ohmic(OhmicSpectrum{s}, iv->a) ==
              doctest::Approx(ends.at_a1).epsilon(1e-9));
        CHECK(gamma_ohmic(OhmicSpectrum{s}, iv->b) ==
              doctest::Approx(ends.at_b1).epsilon(1e-9));
    }
    CHECK_THROWS_AS(gamma_endpoint_values(OhmicSpectrum{2.0}), DomainError);
    CHECK_THROWS_AS(gamma_endpoint_values(OhmicSpectrum{6.5}), DomainError);
}

TEST_CASE("delta_cross_talk closed form against the quadrature oracle") {
    for (double s : {0.5, 1.0, 3.0}) {
        for (double ts : {0.25, 2.0}) {
            for (double t : {1.0, 5.0}) {
                const CommonEnvSpec env{OhmicSpectrum{s}, ts};
                const double closed = delta_cross_talk(env, t);
                const double quad = delta_quadrature(s, ts, t);
                CHECK(closed == doctest::Approx(quad).epsilon(1e-6).scale(0.01));
            }
        }
    }
    CHECK(delta_cross_talk(CommonEnvSpec{OhmicSpectrum{3.0}, 2.0}, 0.0) ==
          doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("delta_cross_talk vanishes in the independent-environment limit") {
    const CommonEnvSpec far{OhmicSpectrum{3.0}, 1000.0};
    const double g = gamma_ohmic(far.ohmic, 5.0);
    CHECK(std::abs(delta_cross_talk(far, 5.0)) < 1e-3 * g);
}

TEST_CASE("gamma_plus_minus identities and positivity") {
    const CommonEnvSpec env{OhmicSpectrum{3.0}, 2.0};
    CHECK(gamma_plus_minus(env, 0.0).first == doctest::Approx(0.0).scale(1.0));
    CHECK(gamma_plus_minus(env, 0.0).second == doctest::Approx(0.0).scale(1.0));
    for (double s : {0.3, 1.0, 2.5, 4.0}) {
        for (double ts : {0.25, 2.0, 6.0}) {
            const CommonEnvSpec e{OhmicSpectrum{s}, ts};
            for (int k = 0; k <= 100; ++k) {
                const double t = 0.2 * k;
                const auto [gp, gm] = gamma_plus_minus(e, t);
                const double g = gamma_ohmic(e.ohmic, t);
                CHECK(gp + gm == doctest::Approx(4.0 * g).epsilon(1e-12).scale(1.0));
                CHECK(gp >= -1e-10);
                CHECK(gm >= -1e-10);
            }
        }
    }
    // t_s -> infinity: Gamma_pm -> 2 Gamma
    const CommonEnvSpec far{OhmicSpectrum{3.0}, 1000.0};
    const auto [gp, gm] = gamma_plus_minus(far, 5.0);
    const double g2 = 2.0 * gamma_ohmic(far.ohmic, 5.0);
    CHECK(gp == doctest::Approx(g2).epsilon(1e-3));
    CHECK(gm == doctest::Approx(g2).epsilon(1e-3));

    // asymptotic limit identity: Gamma_-(inf) = 2 Gamma(t_s)
    const CommonEnvSpec env2{OhmicSpectrum{3.0}, 0.7};
    const auto lim = gamma_plus_minus(env2, inf);
    CHECK(lim.second == doctest::Approx(2.0 * gamma_ohmic(env2.ohmic, 0.7)).epsilon(1e-12));
    const auto near = gamma_plus_minus(env2, 1e7);
    CHECK(lim.second == doctest::Approx(near.second).epsilon(1e-5));
    CHECK(lim.first == doctest::Approx(near.first).epsilon(1e-5));
}

TEST_CASE("rate_plus_minus: derivative identities and sign structure") {
    const CommonEnvSpec env{OhmicSpectrum{3.0}, 2.0};
    // gamma_pm = (1/4) d Gamma_pm/dt (finite-difference oracle)
    for (double t : {0.5, 1.5, 4.0}) {
        const auto [rp, rm] = rate_plus_minus(env, t);
        const double fdp = (gamma_plus_minus(env, t + 1e-5).first -
                            gamma_plus_minus(env, t - 1e-5).first) /
                           2e-5;
        const double fdm = (gamma_plus_minus(env, t + 1e-5).second -
                            gamma_plus_minus(env, t - 1e-5).second) /
                           2e-5;
        CHECK(rp == doctest::Approx(0.25 * fdp).epsilon(1e-6));
        CHECK(rm == doctest::Approx(0.25 * fdm).epsilon(1e-6));
        const double g1 = dephasing_rate(env.ohmic, t);
        CHECK(rp + rm == doctest::Approx(2.0 * g1).epsilon(1e-12).scale(1.0));
    }
    const auto z = rate_plus_minus(env, 0.0);
    CHECK(z.first == doctest::Approx(0.0).scale(1.0));
    CHECK(z.second == doctest::Approx(0.0).scale(1.0));

    // close qubits at small s: gamma_- attains negative values on [0, 20]
    const CommonEnvSpec close{OhmicSpectrum{3.0}, 0.25};
    bool negative = false;
    for (int k = 1; k <= 2000; ++k)
        if (rate_plus_minus(close, 0.01 * k).second < 0.0) negative = true;
    CHECK(negative);
}

TEST_CASE("g_lorentzian closed forms and limits") {
    CHECK(std::abs(g_lorentzian(LorentzianSpec{0.3, 0.0}, 0.0) - cxd{1.0, 0.0}) < 1e-15);

    // critically damped limit r = 1/2: G = e^{-t/2}(1 + t/2)
    CHECK(g_lorentzian(LorentzianSpec{0.5, 0.0}, 2.0).real() ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(g_lorentzian(LorentzianSpec{0.5, 0.0}, 2.0).real() ==
          doctest::Approx(0.73575888234288464).epsilon(1e-12));

    // r = 1: trigonometric regime, first zero at t = 3 pi / 2
    const double t0 = 1.5 * M_PI;
    CHECK(std::abs(g_lorentzian(LorentzianSpec{1.0, 0.0}, t0)) < 1e-12);
    CHECK(std::abs(g_lorentzian(LorentzianSpec{1.0, 0.0}, t0 - 0.3)) > 1e-3);

    // real and bounded by 1 on resonance
    for (double r : {0.1, 0.5, 1.0, 5.0, 50.0}) {
        for (int k = 0; k <= 400; ++k) {
            const double t = 0.1 * k;
            const cxd g = g_lorentzian(LorentzianSpec{r, 0.0}, t);
            CHECK(g.imag() == 0.0);
            CHECK(std::abs(g) <= 1.0 + 1e-12);
        }
    }
    // detuned case stays physical
    for (int k = 0; k <= 100; ++k) {
        const cxd g = g_lorentzian(LorentzianSpec{1.0, 2.0}, 0.2 * k);
        CHECK(std::abs(g) <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(g_lorentzian(LorentzianSpec{-0.1, 0.0}, 1.0), DomainError);
}

TEST_CASE("lorentzian_decay_rate analytic form") {
    // weak coupling: rate stays positive on [0, 40]
    for (int k = 1; k <= 400; ++k)
        CHECK(lorentzian_decay_rate(LorentzianSpec{0.25, 0.0}, 0.1 * k) >= -1e-12);

    // matches the generic numeric rate away from poles
    const LorentzianSpec strong{1.0, 0.0};
    auto g = [&](double t) { return g_lorentzian(strong, t); };
    for (double t : {0.5, 1.5, 3.0, 6.0}) {
        CHECK(lorentzian_decay_rate(strong, t) ==
              doctest::Approx(ad_decay_rate(g, t, 1e-6)).epsilon(1e-5).scale(1.0));
    }
    CHECK_THROWS_AS(lorentzian_decay_rate(strong, 1.5 * M_PI), PoleProximity);
    CHECK_THROWS_AS(ad_decay_rate(g, 1.5 * M_PI, 1e-6), PoleProximity);
    // identity channel: G == 1, rate 0
    CHECK(ad_decay_rate([](double) { return cxd{1.0, 0.0}; }, 1.0, 1e-6) ==
          doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("g_pbg initial condition and self-checks") {
    for (double z : {-15.0, -10.0, -4.0, -1.5, 0.0, 1.0, 1.7, 2.0}) {
        CHECK(std::abs(g_pbg(PBGSpec{z}, 0.0) - cxd{1.0, 0.0}) < 1e-8);
        // continuity of the t -> 0 limit
        CHECK(std::abs(g_pbg(PBGSpec{z}, 1e-8) - cxd{1.0, 0.0}) < 1e-3);
    }
    CHECK_THROWS_AS(g_pbg(PBGSpec{2.5}, 1.0), DomainError);
    CHECK_THROWS_AS(g_pbg(PBGSpec{-16.0}, 1.0), DomainError);
    CHECK_THROWS_AS(g_pbg(PBGSpec{0.0}, -1.0), DomainError);
}

TEST_CASE("g_pbg population trapping inside the gap") {
    // z = -10: |G|^2 oscillates but never drops below 1/2
    double min_abs2 = 1.0;
    for (int k = 1; k <= 800; ++k) {
        const double a2 = std::norm(g_pbg(PBGSpec{-10.0}, 0.025 * k));
        min_abs2 = std::min(min_abs2, a2);
        CHECK(a2 <= 1.0 + 1e-9);
    }
    CHECK(min_abs2 > 0.5);
    CHECK(min_abs2 > 0.9);  // deep in the gap the trapping is nearly complete
}

TEST_CASE("pbg_decay_rate oscillates in sign inside and near the gap") {
    // the atom-photon bound state causes backflow at every detuning of the
    // band-edge model; z = 1.8 shows a broad |G| revival around t ~ 2
    bool neg_18 = false;
    for (int k = 1; k <= 400; ++k)
        if (pbg_decay_rate(PBGSpec{1.8}, 0.01 * k + 1.5) < 0.0) neg_18 = true;
    CHECK(neg_18);
    CHECK(std::abs(g_pbg(PBGSpec{1.8}, 2.78)) > std::abs(g_pbg(PBGSpec{1.8}, 1.72)));
}
