#include "nmq/spectra.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "nmq/cerf.hpp"

namespace nmq {

namespace {

using cxd = std::complex<double>;

constexpr double inf = std::numeric_limits<double>::infinity();

void check_ohmic(const OhmicSpectrum& spec) {
    if (!(spec.s > 0.0)) throw DomainError("OhmicSpectrum: s must be positive");
}

void check_time(double t) {
    if (std::isnan(t) || t < 0.0) throw DomainError("time must be >= 0");
}

cxd cexpm1(cxd w) {
    if (std::abs(w) > 0.5) return std::exp(w) - 1.0;
    cxd term{1.0, 0.0};
    cxd sum{0.0, 0.0};
    for (int k = 1; k <= 24; ++k) {
        term *= w / static_cast<double>(k);
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

// E(x) = (1 - (1+ix)^{1-s}) / (s-1), continuous through s = 1 where it
// equals Log(1+ix). Gamma(t) = 2 Gamma[s] Re E(t).
cxd ohmic_E(double s, double x) {
    const cxd L{0.5 * std::log1p(x * x), std::atan(x)};
    const double eps = s - 1.0;
    if (eps == 0.0) return L;
    return -cexpm1(-eps * L) / eps;
}

// S(x) = (1+x^2)^{-s/2} sin(s arctan x); odd in x.
double ohmic_S(double s, double x) {
    return std::pow(1.0 + x * x, -0.5 * s) * std::sin(s * std::atan(x));
}

double gamma_ohmic_limit(double s) {
    if (s > 1.0) return 2.0 * std::tgamma(s) / (s - 1.0);
    return inf;
}

}  // namespace

double gamma_ohmic(const OhmicSpectrum& spec, double t) {
    check_ohmic(spec);
    check_time(t);
    if (std::isinf(t)) return gamma_ohmic_limit(spec.s);
    return 2.0 * std::tgamma(spec.s) * ohmic_E(spec.s, t).real();
}

double dephasing_rate(const OhmicSpectrum& spec, double t) {
    check_ohmic(spec);
    check_time(t);
    if (std::isinf(t)) return 0.0;
    return std::tgamma(spec.s) * ohmic_S(spec.s, t);
}

std::optional<Interval> ohmic_interval_endpoints(const OhmicSpectrum& spec) {
    check_ohmic(spec);
    const double s = spec.s;
    if (s <= 2.0 || s > 6.0) return std::nullopt;
    const double a1 = std::tan(M_PI / s);
    if (s <= 4.0) return Interval{a1, inf};
    return Interval{a1, std::tan(2.0 * M_PI / s)};
}

GammaEndpointValues gamma_endpoint_values(const OhmicSpectrum& spec) {
    check_ohmic(spec);
    const double s = spec.s;
    if (s <= 2.0 || s > 6.0)
        throw DomainError("gamma_endpoint_values: closed forms exist for 2 < s <= 6 only");
    const double g = std::tgamma(s);
    const double at_a1 = 2.0 * g * (1.0 + std::pow(std::cos(M_PI / s), s)) / (s - 1.0);
    double at_b1;
    if (s <= 4.0)
        at_b1 = 2.0 * std::tgamma(s - 1.0);
    else
        at_b1 = 2.0 * g * (1.0 - std::pow(std::cos(2.0 * M_PI / s), s)) / (s - 1.0);
    return {at_a1, at_b1};
}

double delta_cross_talk(const CommonEnvSpec& spec, double t) {
    check_ohmic(spec.ohmic);
    if (!(spec.transit_time > 0.0)) throw DomainError("CommonEnvSpec: transit_time must be > 0");
    check_time(t);
    const double s = spec.ohmic.s;
    const double ts = spec.transit_time;
    if (std::isinf(t)) {
        // delta(inf) = 2 Gamma(inf) - 2 Gamma(t_s)
        return 2.0 * gamma_ohmic_limit(s) - 2.0 * gamma_ohmic(spec.ohmic, ts);
    }
    const cxd sum = ohmic_E(s, ts - t) + ohmic_E(s, ts + t) - 2.0 * ohmic_E(s, ts);
    return 2.0 * std::tgamma(s) * sum.real();
}

std::pair<double, double> gamma_plus_minus(const CommonEnvSpec& spec, double t) {
    if (std::isinf(t)) {
        // Gamma_-(inf) = 2 Gamma(t_s) stays finite for every s; Gamma_+ picks
        // up the full 4 Gamma(inf).
        const double gm = 2.0 * gamma_ohmic(spec.ohmic, spec.transit_time);
        const double g_inf = gamma_ohmic(spec.ohmic, inf);
        return {4.0 * g_inf - gm, gm};
    }
    const double g2 = 2.0 * gamma_ohmic(spec.ohmic, t);
    const double d = delta_cross_talk(spec, t);
    return {g2 + d, g2 - d};
}

std::pair<double, double> rate_plus_minus(const CommonEnvSpec& spec, double t) {
    check_ohmic(spec.ohmic);
    if (!(spec.transit_time > 0.0)) throw DomainError("CommonEnvSpec: transit_time must be > 0");
    check_time(t);
    const double s = spec.ohmic.s;
    const double ts = spec.transit_time;
    const double g1 = dephasing_rate(spec.ohmic, t);
    const double g2 = std::isinf(t)
                          ? 0.0
                          : 0.5 * std::tgamma(s) * (ohmic_S(s, ts + t) - ohmic_S(s, ts - t));
    return {g1 + g2, g1 - g2};
}

namespace {

cxd sinhc(cxd w) {
    if (std::abs(w) < 1e-4) {
        const cxd w2 = w * w;
        return 1.0 + w2 / 6.0 * (1.0 + w2 / 20.0);
    }
    return std::sinh(w) / w;
}

struct LorentzianParts {
    cxd core;   // cosh(Om t/2) + (1-i Delta)(t/2) sinhc(Om t/2)
    cxd decay;  // e^{-(1-i Delta) t/2}
    cxd sh;     // (t/2) sinhc(Om t/2)  [= sinh(Om t/2)/Om]
};

LorentzianParts lorentzian_parts(const LorentzianSpec& spec, double t) {
    if (spec.r < 0.0) throw DomainError("LorentzianSpec: r must be >= 0");
    check_time(t);
    const cxd lam{1.0, -spec.detuning};  // lambda - i Delta_L, lambda = 1
    const double varpi = 0.5 * spec.r + 0.25 * spec.detuning * spec.detuning;
    // Om^2 = lambda^2 - 2 i Delta_L lambda - 4 varpi, lambda = 1
    const cxd om = std::sqrt(cxd{1.0 - 4.0 * varpi, -2.0 * spec.detuning});
    const cxd half_om_t = 0.5 * om * t;
    const cxd sh = 0.5 * t * sinhc(half_om_t);  // sinh(Om t/2)/Om
    const cxd core = std::cosh(half_om_t) + lam * sh;
    const cxd decay = std::exp(-0.5 * lam * t);
    return {core, decay, sh};
}

}  // namespace

cxd g_lorentzian(const LorentzianSpec& spec, double t) {
    const auto p = lorentzian_parts(spec, t);
    cxd g = p.decay * p.core;
    if (spec.detuning == 0.0) g = cxd{g.real(), 0.0};  // exactly real on resonance
    return g;
}

double lorentzian_decay_rate(const LorentzianSpec& spec, double t, double pole_guard) {
    const auto p = lorentzian_parts(spec, t);
    const double abs_core = std::abs(p.decay * p.core);
    if (abs_core <= pole_guard)
        throw PoleProximity("lorentzian_decay_rate: G(t) vanishes", t);
    // Gdot = -gamma_M lambda [sinh(Om t/2)/Om] e^{-lam t/2}; gamma_M = r
    const cxd gdot_over_g = -spec.r * p.sh / p.core;
    return -2.0 * gdot_over_g.real();
}

namespace {

struct PBGRoots {
    std::array<cxd, 3> x;
    std::array<cxd, 3> v;  // x_j / prod_{k != j} (x_j - x_k)
};

PBGRoots pbg_roots(double z) {
    const double zeta = 1.0 + 4.0 * z * z * z / 27.0;
    cxd ap, am;
    if (zeta >= 0.0) {
        const double rt = std::sqrt(zeta);
        ap = std::cbrt(0.5 + 0.5 * rt);
        am = std::cbrt(0.5 - 0.5 * rt);  // real cube root, sign preserved
    } else {
        const cxd rt = std::sqrt(cxd{zeta, 0.0});
        ap = std::pow(0.5 + 0.5 * rt, 1.0 / 3.0);
        am = std::pow(0.5 - 0.5 * rt, 1.0 / 3.0);
    }
    const auto phase = [](double turns) { return std::polar(1.0, M_PI * turns); };
    PBGRoots r;
    r.x[0] = (ap + am) * phase(0.25);
    r.x[1] = (ap * phase(-1.0 / 6.0) - am * phase(1.0 / 6.0)) * phase(-0.25);
    r.x[2] = (ap * phase(1.0 / 6.0) - am * phase(-1.0 / 6.0)) * phase(0.75);

    for (int j = 0; j < 3; ++j) {
        cxd denom{1.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            if (k == j) continue;
            const cxd d = r.x[static_cast<size_t>(j)] - r.x[static_cast<size_t>(k)];
            if (std::abs(d) < 1e-9)
                throw DomainError("g_pbg: degenerate reservoir roots at this z");
            denom *= d;
        }
        r.v[static_cast<size_t>(j)] = r.x[static_cast<size_t>(j)] / denom;
    }

    cxd check{0.0, 0.0};
    for (int j = 0; j < 3; ++j) check += r.v[static_cast<size_t>(j)] * r.x[static_cast<size_t>(j)];
    if (std::abs(check - cxd{1.0, 0.0}) > 1e-8)
        throw BranchError("g_pbg: root branch self-check failed (G(0) != 1)");
    return r;
}

}  // namespace

cxd g_pbg(const PBGSpec& spec, double t) {
    if (spec.z < PBGSpec::z_min || spec.z > PBGSpec::z_max)
        throw DomainError("PBGSpec: z outside validated range [-15, 2]");
    check_time(t);
    const PBGRoots r = pbg_roots(spec.z);
    if (t == 0.0) return cxd{1.0, 0.0};
    const double sq = std::sqrt(t);
    cxd sum{0.0, 0.0};
    for (int j = 0; j < 3; ++j)
        sum += r.v[static_cast<size_t>(j)] * r.x[static_cast<size_t>(j)] *
               erfcx(-r.x[static_cast<size_t>(j)] * sq);
    return sum * std::polar(1.0, spec.z * t);
}

double ad_decay_rate(const std::function<cxd(double)>& g, double t, double h,
                     double pole_guard) {
    if (!(h > 0.0)) throw DomainError("ad_decay_rate: step must be positive");
    check_time(t);
    const cxd gt = g(t);
    if (std::abs(gt) <= pole_guard)
        throw PoleProximity("ad_decay_rate: G(t) too close to zero", t);
    cxd gdot;
    if (t >= h)
        gdot = (g(t + h) - g(t - h)) / (2.0 * h);
    else
        gdot = (g(t + h) - g(std::max(0.0, t - h))) / (t + h - std::max(0.0, t - h));
    return -2.0 * (gdot / gt).real();
}

double pbg_decay_rate(const PBGSpec& spec, double t, double pole_guard) {
    return ad_decay_rate([&spec](double u) { return g_pbg(spec, u); }, t, 1e-4, pole_guard);
}

}  // namespace nmq
