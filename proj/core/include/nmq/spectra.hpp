#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>

#include "nmq/errors.hpp"
#include "nmq/integrate.hpp"

namespace nmq {

// Ohmic-class reservoir J(w) = w^s e^{-w/w_c} / w_c^{s-1}, with w_c = 1
// (all dephasing times in units of 1/w_c).
struct OhmicSpectrum {
    double s = 1.0;  // Ohmicity parameter
};

// Two qubits in one dephasing reservoir; transit_time is the sound
// propagation time between the qubits (units of 1/w_c). transit_time -> inf
// recovers independent environments.
struct CommonEnvSpec {
    OhmicSpectrum ohmic;
    double transit_time = 1.0;
};

// Lorentzian reservoir at width lambda = 1; r = gamma_M / lambda is the
// coupling ratio, detuning = (w_0 - w_c)/lambda (0 = resonant).
struct LorentzianSpec {
    double r = 0.1;
    double detuning = 0.0;
};

// Photonic-band-gap reservoir, times in units of 1/beta. z = Delta_P/beta is
// the detuning of the qubit from the band edge; z < 0 lies inside the gap.
struct PBGSpec {
    double z = 0.0;
    static constexpr double z_min = -15.0;
    static constexpr double z_max = 2.0;
};

// --- Ohmic dephasing --------------------------------------------------------

// Decoherence exponent Gamma(t) >= 0 for the single-qubit dephasing channel,
// off-diagonals decay as e^{-Gamma}. t may be +infinity (analytic limit
// 2*Gamma[s-1] for s > 1, divergent otherwise).
double gamma_ohmic(const OhmicSpectrum& spec, double t);

// Dephasing rate gamma_1(t) = (1/2) dGamma/dt, evaluated analytically:
// gamma_1 = Gamma[s] (1+t^2)^{-s/2} sin(s arctan t).
double dephasing_rate(const OhmicSpectrum& spec, double t);

// Analytic negativity interval of gamma_1 for 2 < s <= 6:
// (tan(pi/s), inf] below s = 4, (tan(pi/s), tan(2pi/s)] up to s = 6.
// nullopt for s <= 2 (no negativity) and s > 6 (several intervals; callers
// fall back to find_sign_changes).
std::optional<Interval> ohmic_interval_endpoints(const OhmicSpectrum& spec);

struct GammaEndpointValues {
    double at_a1;
    double at_b1;
};

// Closed forms of Gamma at the negativity endpoints, valid for 2 < s <= 6.
GammaEndpointValues gamma_endpoint_values(const OhmicSpectrum& spec);

// --- common dephasing environment -------------------------------------------

// Cross-talk exponent delta(t) = 4 int_0^t gamma_2. Accepts t = +infinity.
double delta_cross_talk(const CommonEnvSpec& spec, double t);

// Gamma_pm(t) = 2 Gamma(t) +- delta(t); the super/sub-decoherent exponents.
std::pair<double, double> gamma_plus_minus(const CommonEnvSpec& spec, double t);

// gamma_pm(t) = gamma_1(t) +- gamma_2(t), with gamma_2 = (1/4) d delta/dt
// differentiated analytically.
std::pair<double, double> rate_plus_minus(const CommonEnvSpec& spec, double t);

// --- amplitude damping ------------------------------------------------------

// Excited-state amplitude G(t) for the Lorentzian reservoir; real and
// within [0,1] in modulus on resonance. Handles r = 1/2 via the confluent
// limit and r > 1/2 via the trigonometric continuation automatically.
std::complex<double> g_lorentzian(const LorentzianSpec& spec, double t);

// G(t) for the band-gap reservoir: three-root sum with complex error
// function. Verifies G(0) = 1 (root/branch self-check) and throws
// BranchError on mismatch.
std::complex<double> g_pbg(const PBGSpec& spec, double t);

// gamma_1(t) = -2 Re[Gdot/G] with Gdot by symmetric difference. Throws
// PoleProximity when |G(t)| <= pole_guard.
double ad_decay_rate(const std::function<std::complex<double>(double)>& g, double t,
                     double h, double pole_guard = 1e-9);

// Analytic-derivative rate for the Lorentzian spectrum.
double lorentzian_decay_rate(const LorentzianSpec& spec, double t,
                             double pole_guard = 1e-9);

// Numeric rate for the band-gap spectrum (h = 1e-4 in units of 1/beta).
double pbg_decay_rate(const PBGSpec& spec, double t, double pole_guard = 1e-9);

}  // namespace nmq
