#include <doctest.h>

#include <cmath>
#include <random>

#include "nmq/channels.hpp"

using namespace nmq;

namespace {

DensityMatrix random_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cxd{n(rng), n(rng)};
    Matrix rho = g * g.dagger();
    rho *= cxd{1.0 / rho.trace().real(), 0.0};
    return DensityMatrix::trusted(std::move(rho));
}

std::vector<ChannelModel> all_models() {
    return {
        Dephasing1Q{OhmicSpectrum{3.0}},
        Dephasing2QIndependent{OhmicSpectrum{3.0}},
        Dephasing2QCommon{CommonEnvSpec{OhmicSpectrum{3.0}, 0.5}},
        AmplitudeDamping1Q{LorentzianSpec{1.0, 0.0}},
        AmplitudeDamping1Q{PBGSpec{-2.0}},
        AmplitudeDamping2QIndependent{LorentzianSpec{0.3, 0.0}},
        AmplitudeDamping2QIndependent{PBGSpec{1.0}},
    };
}

double frob_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("apply at t = 0 is the identity map") {
    std::mt19937_64 rng(41);
    for (const auto& model : all_models()) {
        const auto rho = random_state(dimension(model), rng);
        const auto out = apply(model, rho, 0.0);
        CHECK(frob_diff(out.matrix(), rho.matrix()) < 1e-12);
    }
}

TEST_CASE("single-qubit dephasing shrinks the coherence by e^{-Gamma}") {
    const ChannelModel model = Dephasing1Q{OhmicSpectrum{3.0}};
    const double a1 = std::tan(M_PI / 3.0);
    const auto out = apply(model, plus_state(), a1);
    // Gamma(a1) = 2.25 for s = 3
    CHECK(out(0, 1).real() == doctest::Approx(0.5 * std::exp(-2.25)).epsilon(1e-12));
    CHECK(out(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("amplitude damping population decay: |G|^2 law") {
    const ChannelModel model = AmplitudeDamping1Q{LorentzianSpec{1.0, 0.0}};
    const auto excited = basis_state(2, 1);
    const auto out = apply(model, excited, 3.0 * M_PI);
    CHECK(out(1, 1).real() == doctest::Approx(std::exp(-3.0 * M_PI)).epsilon(1e-10));
    CHECK(out(0, 0).real() == doctest::Approx(1.0 - std::exp(-3.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("CPTP sanity: channel outputs satisfy all state invariants") {
    std::mt19937_64 rng(43);
    for (const auto& model : all_models()) {
        for (int k = 0; k < 12; ++k) {
            const auto rho = random_state(dimension(model), rng);
            const double t = 0.3 * (k + 1);
            const auto out = apply(model, rho, t);
            CHECK_NOTHROW(DensityMatrix::checked(out.matrix()));
        }
    }
}

TEST_CASE("Kraus completeness and Kraus/apply equivalence") {
    std::mt19937_64 rng(47);
    for (const auto& model : all_models()) {
        const int d = dimension(model);
        for (int k = 0; k < 14; ++k) {
            const double t = 0.25 * (k + 1);
            const auto ks = kraus_at(model, t);
            Matrix comp(d);
            for (const auto& op : ks.operators) comp += op.dagger() * op;
            CHECK(frob_diff(comp, Matrix::identity(d)) < 1e-9);

            const auto rho = random_state(d, rng);
            Matrix sum(d);
            for (const auto& op : ks.operators) sum += op * rho.matrix() * op.dagger();
            CHECK(frob_diff(sum, apply(model, rho, t).matrix()) < 1e-9);
        }
    }
}

TEST_CASE("dephasing Kraus structure at t = 0 and generic t") {
    const ChannelModel model = Dephasing1Q{OhmicSpectrum{3.0}};
    const auto ks0 = kraus_at(model, 0.0);
    REQUIRE(ks0.operators.size() == 2);
    CHECK(frob_diff(ks0.operators[0], Matrix::identity(2)) < 1e-12);
    CHECK(ks0.operators[1].max_abs() < 1e-12);  // K2 vanishes at Gamma = 0

    // K1 ~ 1, K2 ~ sigma_z reproduce the off-diagonal shrink e^{-Gamma}
    const double t = 1.3;
    const double f = std::exp(-gamma_ohmic(OhmicSpectrum{3.0}, t));
    const auto ks = kraus_at(model, t);
    const double c1 = ks.operators[0](0, 0).real();
    const double c2 = ks.operators[1](0, 0).real();
    CHECK(c1 * c1 - c2 * c2 == doctest::Approx(f).epsilon(1e-12));
    CHECK(ks.operators[1](1, 1).real() == doctest::Approx(-c2).epsilon(1e-12));
}

TEST_CASE("amplitude damping Kraus pair completeness for any |G| <= 1") {
    const ChannelModel model = AmplitudeDamping1Q{LorentzianSpec{5.0, 0.0}};
    for (double t : {0.2, 0.7, 1.9, 4.0}) {
        const auto ks = kraus_at(model, t);
        REQUIRE(ks.operators.size() == 2);
        Matrix comp(2);
        for (const auto& op : ks.operators) comp += op.dagger() * op;
        CHECK(frob_diff(comp, Matrix::identity(2)) < 1e-12);
    }
}

TEST_CASE("complementary map: pure environment at t = 0") {
    std::mt19937_64 rng(53);
    for (const auto& model : all_models()) {
        const auto rho = random_state(dimension(model), rng);
        const auto env = complementary_apply(model, rho, 0.0);
        CHECK(von_neumann_entropy(env) < 1e-9);
    }
}

TEST_CASE("complementary map closed forms for 1Q dephasing and AD") {
    // dephasing with maximally mixed input: environment eigenvalues (1 pm e^{-G})/2
    const ChannelModel deph = Dephasing1Q{OhmicSpectrum{3.0}};
    const double t = 1.1;
    const double f = std::exp(-gamma_ohmic(OhmicSpectrum{3.0}, t));
    const auto env = complementary_apply(deph, maximally_mixed(2), t);
    const auto eigs = hermitian_eigenvalues(env.matrix());
    CHECK(eigs[0] == doctest::Approx(0.5 * (1.0 + f)).epsilon(1e-12));
    CHECK(eigs[1] == doctest::Approx(0.5 * (1.0 - f)).epsilon(1e-12));

    // AD with the excited state: environment diag(|G|^2, 1 - |G|^2)
    const ChannelModel ad = AmplitudeDamping1Q{LorentzianSpec{1.0, 0.0}};
    const double g2 = std::norm(g_lorentzian(LorentzianSpec{1.0, 0.0}, t));
    const auto env2 = complementary_apply(ad, basis_state(2, 1), t);
    CHECK(env2(0, 0).real() == doctest::Approx(g2).epsilon(1e-12));
    CHECK(env2(1, 1).real() == doctest::Approx(1.0 - g2).epsilon(1e-12));
}

TEST_CASE("two-qubit independent channels factorize over product states") {
    std::mt19937_64 rng(59);
    const OhmicSpectrum s3{3.0};
    const ChannelModel two = Dephasing2QIndependent{s3};
    const ChannelModel one = Dephasing1Q{s3};
    for (int k = 0; k < 8; ++k) {
        const auto a = random_state(2, rng);
        const auto b = random_state(2, rng);
        const double t = 0.4 * (k + 1);
        const auto joint = apply(two, product_state(a, b), t);
        const auto a_out = apply(one, a, t);
        const auto b_out = apply(one, b, t);
        CHECK(frob_diff(joint.matrix(), kron(a_out.matrix(), b_out.matrix())) < 1e-12);
        CHECK(frob_diff(partial_trace(joint, Subsystem::first).matrix(), a_out.matrix()) <
              1e-12);
    }
}

TEST_CASE("common environment approaches independent environments as t_s grows") {
    const ChannelModel common = Dephasing2QCommon{CommonEnvSpec{OhmicSpectrum{3.0}, 1000.0}};
    const ChannelModel indep = Dephasing2QIndependent{OhmicSpectrum{3.0}};
    std::mt19937_64 rng(61);
    const auto rho = random_state(4, rng);
    for (double t : {0.5, 2.0, 5.0, 12.0, 20.0}) {
        const auto a = apply(common, rho, t);
        const auto b = apply(indep, rho, t);
        CHECK(frob_diff(a.matrix(), b.matrix()) < 1e-3);
    }
}

TEST_CASE("trace distance contracts under the divisible s = 1.5 dephasing") {
    const ChannelModel model = Dephasing1Q{OhmicSpectrum{1.5}};
    std::mt19937_64 rng(67);
    for (int pair = 0; pair < 20; ++pair) {
        const auto r1 = random_state(2, rng);
        const auto r2 = random_state(2, rng);
        double prev = trace_distance(r1, r2);
        for (int k = 1; k <= 40; ++k) {
            const double t = 0.25 * k;
            const double d = trace_distance(apply(model, r1, t), apply(model, r2, t));
            CHECK(d <= prev + 1e-10);
            prev = d;
        }
    }
}

TEST_CASE("printed two-qubit amplitude-damping element formulas (resonant, real G)") {
    std::mt19937_64 rng(71);
    const LorentzianSpec spec{0.7, 0.0};
    const ChannelModel model = AmplitudeDamping2QIndependent{spec};
    for (int k = 0; k < 6; ++k) {
        const auto rho = random_state(4, rng);
        const double t = 0.5 * (k + 1);
        const double G = g_lorentzian(spec, t).real();
        const double G2 = G * G;
        const auto out = apply(model, rho, t);
        // excited-first ordering in the printed list, ground-first here:
        // ee = index 3, eg = 2, ge = 1, gg = 0
        CHECK(out(3, 3).real() ==
              doctest::Approx(G2 * G2 * rho(3, 3).real()).epsilon(1e-10).scale(1.0));
        CHECK(out(2, 2).real() ==
              doctest::Approx(G2 * rho(3, 3).real() * (1.0 - G2) + rho(2, 2).real() * G2)
                  .epsilon(1e-10).scale(1.0));
        CHECK(out(1, 1).real() ==
              doctest::Approx(G2 * rho(3, 3).real() * (1.0 - G2) + rho(1, 1).real() * G2)
                  .epsilon(1e-10).scale(1.0));
        CHECK(out(0, 0).real() ==
              doctest::Approx(1.0 - out(3, 3).real() - out(2, 2).real() - out(1, 1).real())
                  .epsilon(1e-10));
        CHECK(std::abs(out(3, 2) - G2 * G * rho(3, 2)) < 1e-10);  // |G|^2 G
        CHECK(std::abs(out(3, 0) - G2 * rho(3, 0)) < 1e-10);      // G^2 (ee,gg)
        CHECK(std::abs(out(2, 1) - G2 * rho(2, 1)) < 1e-10);      // |G|^2 (eg,ge)
        CHECK(std::abs(out(2, 0) - (rho(3, 1) * G * (1.0 - G2) + rho(2, 0) * G)) < 1e-10);
        CHECK(std::abs(out(1, 0) - (rho(3, 2) * G * (1.0 - G2) + rho(1, 0) * G)) < 1e-10);
    }
}

TEST_CASE("two-qubit amplitude damping off-diagonal moduli for complex G") {
    std::mt19937_64 rng(73);
    const PBGSpec spec{-1.0};
    const ChannelModel model = AmplitudeDamping2QIndependent{spec};
    const auto rho = random_state(4, rng);
    for (double t : {0.6, 1.7, 4.0}) {
        const double a = std::abs(g_pbg(spec, t));
        const auto out = apply(model, rho, t);
        CHECK(std::abs(out(3, 2)) ==
              doctest::Approx(a * a * a * std::abs(rho(3, 2))).epsilon(1e-9).scale(1.0));
        CHECK(std::abs(out(3, 0)) ==
              doctest::Approx(a * a * std::abs(rho(3, 0))).epsilon(1e-9).scale(1.0));
        CHECK(std::abs(out(2, 1)) ==
              doctest::Approx(a * a * std::abs(rho(2, 1))).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("rhp_g vanishes for CPTP-divisible instants") {
    // all rates nonnegative: s = 1.5 dephasing, weak-coupling Lorentzian.
    // g carries an O(eps) bias for amplitude damping, so the eps -> 0 limit
    // is taken by Richardson extrapolation.
    const ChannelModel deph = Dephasing1Q{OhmicSpectrum{1.5}};
    const ChannelModel ad = AmplitudeDamping1Q{LorentzianSpec{0.25, 0.0}};
    for (double t : {0.5, 2.0, 8.0}) {
        CHECK(std::abs(rhp_g(deph, t, 1e-4)) < 1e-8);
        CHECK(std::abs(rhp_g(ad, t, 1e-4)) < 1e-5);
        CHECK(std::abs(2.0 * rhp_g(ad, t, 5e-5) - rhp_g(ad, t, 1e-4)) < 1e-8);
    }
}

TEST_CASE("rhp_g equals the canonical rate formulas (Richardson extrapolated)") {
    auto richardson = [](const ChannelModel& m, double t) {
        return 2.0 * rhp_g(m, t, 5e-5) - rhp_g(m, t, 1e-4);
    };

    // dephasing: g = -2 gamma_1 inside the negativity interval
    const OhmicSpectrum s3{3.0};
    const ChannelModel deph = Dephasing1Q{s3};
    const double t = 2.0;
    CHECK(richardson(deph, t) == doctest::Approx(-2.0 * dephasing_rate(s3, t)).epsilon(1e-6));

    // two-qubit common environment: g = -2 gamma_+ 1[gamma_+<0] - 2 gamma_- 1[gamma_-<0]
    const CommonEnvSpec env{OhmicSpectrum{3.0}, 0.25};
    const ChannelModel common = Dephasing2QCommon{env};
    for (double tc : {2.2, 3.0, 6.0}) {
        const auto [rp, rm] = rate_plus_minus(env, tc);
        const double expected = -2.0 * std::min(0.0, rp) - 2.0 * std::min(0.0, rm);
        CHECK(richardson(common, tc) == doctest::Approx(expected).epsilon(1e-6).scale(1e-6));
    }

    // amplitude damping: g = -gamma_1 1[gamma_1 < 0]
    const LorentzianSpec strong{1.0, 0.0};
    const ChannelModel ad = AmplitudeDamping1Q{strong};
    const double ta = 5.5;  // inside the negativity region past the first zero
    const double rate = lorentzian_decay_rate(strong, ta);
    CHECK(rate < 0.0);
    CHECK(richardson(ad, ta) == doctest::Approx(-rate).epsilon(1e-6));
}

TEST_CASE("rhp_g validates its epsilon range") {
    const ChannelModel deph = Dephasing1Q{OhmicSpectrum{3.0}};
    CHECK_THROWS_AS(rhp_g(deph, 1.0, 1e-7), DomainError);
    CHECK_THROWS_AS(rhp_g(deph, 1.0, 1e-2), DomainError);
}

TEST_CASE("channel input dimension checks") {
    const ChannelModel deph = Dephasing1Q{OhmicSpectrum{3.0}};
    CHECK_THROWS_AS(apply(deph, maximally_mixed(4), 1.0), DimensionMismatch);
    const ChannelModel ad = AmplitudeDamping1Q{LorentzianSpec{1.0, 0.0}};
    CHECK_THROWS_AS(apply(ad, maximally_mixed(2), std::numeric_limits<double>::infinity()),
                    DomainError);
}
