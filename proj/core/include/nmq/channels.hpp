#pragma once

#include <variant>
#include <vector>

#include "nmq/matrix.hpp"
#include "nmq/spectra.hpp"

namespace nmq {

struct Dephasing1Q {
    OhmicSpectrum spectrum;
};

struct Dephasing2QIndependent {
    OhmicSpectrum spectrum;
};

struct Dephasing2QCommon {
    CommonEnvSpec env;
};

using AmplitudeSpectrum = std::variant<LorentzianSpec, PBGSpec>;

struct AmplitudeDamping1Q {
    AmplitudeSpectrum spectrum;
};

struct AmplitudeDamping2QIndependent {
    AmplitudeSpectrum spectrum;
};

// The five exactly solvable channel families.
using ChannelModel = std::variant<Dephasing1Q, Dephasing2QIndependent, Dephasing2QCommon,
                                  AmplitudeDamping1Q, AmplitudeDamping2QIndependent>;

int dimension(const ChannelModel& model);

// Ohmic dephasing models admit analytic t -> infinity limits of every
// decoherence factor; trajectory tails use them.
bool has_infinite_time_limit(const ChannelModel& model);

struct KrausSet {
    std::vector<Matrix> operators;
    double time = 0.0;
};

// Exact analytic state evolution rho_0 -> rho_t. For dephasing models t may
// be +infinity (the asymptotic mask).
DensityMatrix apply(const ChannelModel& model, const DensityMatrix& rho0, double t);

// Operator-sum representation at time t; satisfies sum K^dag K = 1 within
// 1e-9 and reproduces apply() exactly. BranchError if a decoherence factor
// leaves [0, 1].
KrausSet kraus_at(const ChannelModel& model, double t);

// Environment output: E_ij = Tr(K_i rho K_j^dag), dimension = number of
// Kraus operators. Its entropy is the entropy exchange S(rho, Phi_t).
DensityMatrix complementary_apply(const ChannelModel& model, const DensityMatrix& rho0,
                                  double t);

// G(t) for the amplitude-damping families (NotAvailable for dephasing).
cxd amplitude_g(const ChannelModel& model, double t);

struct LindbladTerm {
    double rate;
    Matrix op;
};

// Time-local generator of the exact solution,
// L_t(rho) = sum_k rate_k (V rho V^dag - (1/2){V^dag V, rho}).
// Throws PoleProximity when an amplitude-damping rate blows up.
std::vector<LindbladTerm> lindblad_terms(const ChannelModel& model, double t);

// Choi-space divisibility witness
//   g(t) = (||(1 + eps L_t x 1)|Omega><Omega|||_1 - 1) / eps,
// positive iff some canonical rate is negative. epsilon in [1e-6, 1e-3].
double rhp_g(const ChannelModel& model, double t, double epsilon);

}  // namespace nmq
