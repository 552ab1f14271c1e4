#include "nmq/channels.hpp"

#include <cmath>

namespace nmq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double checked_factor(double gamma_exponent) {
    // exponents are >= 0 up to roundoff; a genuinely negative one signals a
    // branch bug upstream
    if (gamma_exponent < -1e-12)
        throw BranchError("dephasing exponent went negative (factor > 1)");
    return std::exp(-std::max(0.0, gamma_exponent));
}

cxd amplitude_g_of(const AmplitudeSpectrum& spec, double t) {
    return std::visit(
        overloaded{[&](const LorentzianSpec& l) { return g_lorentzian(l, t); },
                   [&](const PBGSpec& p) { return g_pbg(p, t); }},
        spec);
}

double amplitude_rate_of(const AmplitudeSpectrum& spec, double t) {
    return std::visit(
        overloaded{[&](const LorentzianSpec& l) { return lorentzian_decay_rate(l, t); },
                   [&](const PBGSpec& p) { return pbg_decay_rate(p, t); }},
        spec);
}

Matrix dephasing_mask_1q(double gamma) {
    const double f = checked_factor(gamma);
    Matrix m(2);
    m(0, 0) = m(1, 1) = 1.0;
    m(0, 1) = m(1, 0) = f;
    return m;
}

int hamming2(int i, int j) {
    const int x = i ^ j;
    return ((x >> 1) & 1) + (x & 1);
}

Matrix dephasing_mask_2q_independent(double gamma) {
    const double f = checked_factor(gamma);
    Matrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = std::pow(f, hamming2(i, j));
    return m;
}

// Common environment: single-flip coherences decay with Gamma, the
// |00><11| coherence with Gamma_-, the |01><10| coherence with Gamma_+.
Matrix dephasing_mask_2q_common(double gamma, double gamma_plus, double gamma_minus) {
    const double f = checked_factor(gamma);
    const double fp = checked_factor(gamma_plus);
    const double fm = checked_factor(gamma_minus);
    Matrix m(4);
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    m(0, 1) = m(1, 0) = m(0, 2) = m(2, 0) = f;
    m(1, 3) = m(3, 1) = m(2, 3) = m(3, 2) = f;
    m(0, 3) = m(3, 0) = fm;
    m(1, 2) = m(2, 1) = fp;
    return m;
}

Matrix ad_apply_1q(const Matrix& rho, cxd g) {
    const double p = std::norm(g);  // |G|^2
    Matrix r(2);
    r(0, 0) = rho(0, 0) + (1.0 - p) * rho(1, 1);
    r(1, 1) = p * rho(1, 1);
    r(0, 1) = std::conj(g) * rho(0, 1);
    r(1, 0) = g * rho(1, 0);
    return r;
}

std::vector<Matrix> ad_kraus_1q(cxd g) {
    const double p = std::norm(g);
    if (p > 1.0 + 1e-9) throw BranchError("amplitude damping: |G| exceeds 1");
    Matrix k1(2), k2(2);
    k1(0, 0) = 1.0;
    k1(1, 1) = g;
    k2(0, 1) = std::sqrt(std::max(0.0, 1.0 - p));
    return {k1, k2};
}

std::vector<Matrix> dephasing_kraus_1q(double gamma) {
    const double f = checked_factor(gamma);
    Matrix k1 = Matrix::identity(2);
    k1 *= cxd{std::sqrt(0.5 * (1.0 + f)), 0.0};
    Matrix k2 = pauli_z();
    k2 *= cxd{std::sqrt(std::max(0.0, 0.5 * (1.0 - f))), 0.0};
    return {k1, k2};
}

// Common-environment Kraus set. With q = e^{-Gamma_-/2}, p = e^{-Gamma_+/2}
// the five diagonal operators reproduce the Hadamard mask exactly.
std::vector<Matrix> dephasing_kraus_2q_common(double gamma_plus, double gamma_minus) {
    if (gamma_plus < -1e-12 || gamma_minus < -1e-12)
        throw BranchError("common-environment exponent went negative (factor > 1)");
    const double q = std::exp(-0.5 * std::max(0.0, gamma_minus));
    const double p = std::exp(-0.5 * std::max(0.0, gamma_plus));

    Matrix k1(4), k2(4), k3(4), k4(4), k5(4);
    k1(0, 0) = k1(3, 3) = std::sqrt(q);
    k1(1, 1) = k1(2, 2) = std::sqrt(p);

    k2(0, 0) = (q - 1.0) * std::sqrt(q + 1.0);

    const double cq = std::sqrt(std::max(0.0, 1.0 - q));
    k3(0, 0) = -q * cq;
    k3(3, 3) = cq;

    k4(1, 1) = (p - 1.0) * std::sqrt(p + 1.0);

    const double cp = std::sqrt(std::max(0.0, 1.0 - p));
    k5(1, 1) = -p * cp;
    k5(2, 2) = cp;

    return {k1, k2, k3, k4, k5};
}

std::vector<Matrix> tensor_square(const std::vector<Matrix>& ks) {
    std::vector<Matrix> out;
    out.reserve(ks.size() * ks.size());
    for (const auto& a : ks)
        for (const auto& b : ks) out.push_back(kron(a, b));
    return out;
}

DensityMatrix apply_kraus(const std::vector<Matrix>& ks, const DensityMatrix& rho) {
    Matrix sum(rho.dim());
    for (const auto& k : ks) sum += k * rho.matrix() * k.dagger();
    return DensityMatrix::trusted(std::move(sum));
}

void check_input(const ChannelModel& model, const DensityMatrix& rho) {
    if (rho.dim() != dimension(model))
        throw DimensionMismatch("channel input dimension does not match model");
}

}  // namespace

int dimension(const ChannelModel& model) {
    return std::visit(overloaded{[](const Dephasing1Q&) { return 2; },
                                 [](const Dephasing2QIndependent&) { return 4; },
                                 [](const Dephasing2QCommon&) { return 4; },
                                 [](const AmplitudeDamping1Q&) { return 2; },
                                 [](const AmplitudeDamping2QIndependent&) { return 4; }},
                      model);
}

bool has_infinite_time_limit(const ChannelModel& model) {
    return std::holds_alternative<Dephasing1Q>(model) ||
           std::holds_alternative<Dephasing2QIndependent>(model) ||
           std::holds_alternative<Dephasing2QCommon>(model);
}

DensityMatrix apply(const ChannelModel& model, const DensityMatrix& rho0, double t) {
    check_input(model, rho0);
    if (std::isinf(t) && !has_infinite_time_limit(model))
        throw DomainError("apply: t = infinity is defined for dephasing models only");

    return std::visit(
        overloaded{
            [&](const Dephasing1Q& m) {
                const Matrix mask = dephasing_mask_1q(gamma_ohmic(m.spectrum, t));
                return DensityMatrix::trusted(hadamard_product(mask, rho0.matrix()));
            },
            [&](const Dephasing2QIndependent& m) {
                const Matrix mask = dephasing_mask_2q_independent(gamma_ohmic(m.spectrum, t));
                return DensityMatrix::trusted(hadamard_product(mask, rho0.matrix()));
            },
            [&](const Dephasing2QCommon& m) {
                const auto [gp, gm] = gamma_plus_minus(m.env, t);
                const Matrix mask =
                    dephasing_mask_2q_common(gamma_ohmic(m.env.ohmic, t), gp, gm);
                return DensityMatrix::trusted(hadamard_product(mask, rho0.matrix()));
            },
            [&](const AmplitudeDamping1Q& m) {
                return DensityMatrix::trusted(
                    ad_apply_1q(rho0.matrix(), amplitude_g_of(m.spectrum, t)));
            },
            [&](const AmplitudeDamping2QIndependent& m) {
                const auto ks = tensor_square(ad_kraus_1q(amplitude_g_of(m.spectrum, t)));
                return apply_kraus(ks, rho0);
            }},
        model);
}

KrausSet kraus_at(const ChannelModel& model, double t) {
    if (t < 0.0) throw DomainError("kraus_at: time must be >= 0");
    auto ops = std::visit(
        overloaded{
            [&](const Dephasing1Q& m) { return dephasing_kraus_1q(gamma_ohmic(m.spectrum, t)); },
            [&](const Dephasing2QIndependent& m) {
                return tensor_square(dephasing_kraus_1q(gamma_ohmic(m.spectrum, t)));
            },
            [&](const Dephasing2QCommon& m) {
                const auto [gp, gm] = gamma_plus_minus(m.env, t);
                return dephasing_kraus_2q_common(gp, gm);
            },
            [&](const AmplitudeDamping1Q& m) {
                return ad_kraus_1q(amplitude_g_of(m.spectrum, t));
            },
            [&](const AmplitudeDamping2QIndependent& m) {
                return tensor_square(ad_kraus_1q(amplitude_g_of(m.spectrum, t)));
            }},
        model);
    return {std::move(ops), t};
}

DensityMatrix complementary_apply(const ChannelModel& model, const DensityMatrix& rho0,
                                  double t) {
    check_input(model, rho0);
    const KrausSet ks = kraus_at(model, t);
    const int ne = static_cast<int>(ks.operators.size());
    const int d = rho0.dim();

    std::vector<Matrix> krho;
    krho.reserve(static_cast<size_t>(ne));
    for (const auto& k : ks.operators) krho.push_back(k * rho0.matrix());

    Matrix env(ne);
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < ne; ++j) {
            cxd sum{0.0, 0.0};
            for (int a = 0; a < d; ++a)
                for (int c = 0; c < d; ++c)
                    sum += krho[static_cast<size_t>(i)](a, c) *
                           std::conj(ks.operators[static_cast<size_t>(j)](a, c));
            env(i, j) = sum;
        }
    return DensityMatrix::trusted(std::move(env));
}

cxd amplitude_g(const ChannelModel& model, double t) {
    return std::visit(
        overloaded{[&](const AmplitudeDamping1Q& m) { return amplitude_g_of(m.spectrum, t); },
                   [&](const AmplitudeDamping2QIndependent& m) {
                       return amplitude_g_of(m.spectrum, t);
                   },
                   [](const auto&) -> cxd {
                       throw NotAvailable("amplitude_g: model has no G(t)");
                   }},
        model);
}

std::vector<LindbladTerm> lindblad_terms(const ChannelModel& model, double t) {
    const Matrix sz = pauli_z();
    const Matrix sm = sigma_minus();
    const Matrix id2 = Matrix::identity(2);

    return std::visit(
        overloaded{
            [&](const Dephasing1Q& m) {
                return std::vector<LindbladTerm>{{dephasing_rate(m.spectrum, t), sz}};
            },
            [&](const Dephasing2QIndependent& m) {
                const double g1 = dephasing_rate(m.spectrum, t);
                return std::vector<LindbladTerm>{{g1, kron(sz, id2)}, {g1, kron(id2, sz)}};
            },
            [&](const Dephasing2QCommon& m) {
                const auto [rp, rm] = rate_plus_minus(m.env, t);
                const Matrix w_total = kron(sz, id2) + kron(id2, sz);
                const Matrix w_diff = kron(sz, id2) - kron(id2, sz);
                // Gamma_- rides on the total-z operator ((00,11) coherence),
                // Gamma_+ on the difference ((01,10) coherence).
                return std::vector<LindbladTerm>{{0.5 * rm, w_total}, {0.5 * rp, w_diff}};
            },
            [&](const AmplitudeDamping1Q& m) {
                return std::vector<LindbladTerm>{{amplitude_rate_of(m.spectrum, t), sm}};
            },
            [&](const AmplitudeDamping2QIndependent& m) {
                const double g1 = amplitude_rate_of(m.spectrum, t);
                return std::vector<LindbladTerm>{{g1, kron(sm, id2)}, {g1, kron(id2, sm)}};
            }},
        model);
}

double rhp_g(const ChannelModel& model, double t, double epsilon) {
    if (!(epsilon >= 1e-6 && epsilon <= 1e-3))
        throw DomainError("rhp_g: epsilon must lie in [1e-6, 1e-3]");
    const int d = dimension(model);
    const auto terms = lindblad_terms(model, t);

    // |Omega><Omega| on the doubled space, |Omega> = sum_i |ii>/sqrt(d)
    const int dd = d * d;
    Matrix omega(dd);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) omega(i * d + i, j * d + j) = 1.0 / d;

    Matrix a = omega;
    const Matrix idd = Matrix::identity(d);
    for (const auto& term : terms) {
        const Matrix v = kron(term.op, idd);
        const Matrix vdag = v.dagger();
        Matrix l = v * omega * vdag;
        const Matrix vdv = vdag * v;
        l -= 0.5 * cxd{1.0, 0.0} * (vdv * omega + omega * vdv);
        a += cxd{epsilon * term.rate, 0.0} * l;
    }

    const auto eigs = hermitian_eigenvalues(a, 1e-8);
    double norm1 = 0.0;
    for (double l : eigs) norm1 += std::abs(l);
    return (norm1 - 1.0) / epsilon;
}

}  // namespace nmq
