#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nmq/channels.hpp"
#include "nmq/integrate.hpp"

namespace nmq {

struct MeasureResult {
    double value = 0.0;
    bool diverged = false;  // value then holds the truncated-window partial sum
    IntervalList intervals;
    std::optional<DensityMatrix> argmax_state;
    std::optional<std::pair<DensityMatrix, DensityMatrix>> argmax_pair;
    std::string argmax_label = "none";
    int sampler_budget_used = 0;
};

enum class SamplerStrategy {
    analytic_candidates,
    random_pure,
    random_mixed_rank_k,
    random_orthogonal_pairs,
    product_of_1q_optima,
};

struct StateSampler {
    std::vector<SamplerStrategy> strategies = {
        SamplerStrategy::analytic_candidates,
        SamplerStrategy::random_pure,
        SamplerStrategy::random_mixed_rank_k,
        SamplerStrategy::random_orthogonal_pairs,
        SamplerStrategy::product_of_1q_optima,
    };
    int budget = 100;  // number of random candidates drawn
    unsigned long long seed = 1;
    int mixed_rank = 2;

    bool has(SamplerStrategy s) const;
};

// Haar-style samples used by the optimizers (exposed for tests).
DensityMatrix sample_random_pure(int dim, std::mt19937_64& rng);
DensityMatrix sample_random_mixed(int dim, int rank, std::mt19937_64& rng);
std::pair<DensityMatrix, DensityMatrix> sample_orthogonal_pair(int dim, std::mt19937_64& rng);

// Divisibility measure: integral of the negative part of the canonical
// rates (channel-specific convention; dephasing carries the factor 2).
// Diverges where a rate does; then `diverged` is set and the value is the
// pole-guarded partial sum.
MeasureResult n_rhp(const ChannelModel& model, const TimeWindow& window);

// Trace-distance backflow, maximized over analytic candidate pairs and
// sampler-drawn orthogonal pairs.
MeasureResult n_blp(const ChannelModel& model, const TimeWindow& window,
                    const StateSampler& sampler);

// I(rho, Phi_t) = S(rho) + S(Phi_t rho) - S(complementary output), in bits.
double mutual_info_channel(const ChannelModel& model, const DensityMatrix& rho, double t);

// I_c(rho, Phi_t) = S(Phi_t rho) - S(rho, Phi_t); I = S(rho) + I_c.
double coherent_info(const ChannelModel& model, const DensityMatrix& rho, double t);

struct CapacityResult {
    double value = 0.0;
    DensityMatrix argmax;
    std::string argmax_label;
};

// Entanglement-assisted classical capacity at time t. Dephasing channels
// use the maximally mixed analytic optimum; amplitude damping optimizes the
// one-parameter diagonal family; the common environment samples states.
CapacityResult c_ea(const ChannelModel& model, double t, int optimizer_budget = 128,
                    unsigned long long seed = 1);

// One-shot quantum capacity (degradable / anti-degradable logic built in).
CapacityResult q_cap(const ChannelModel& model, double t, int optimizer_budget = 128,
                     unsigned long long seed = 1);

// Mutual-information backflow, maximized over input states.
MeasureResult n_lfs(const ChannelModel& model, const TimeWindow& window,
                    const StateSampler& sampler);

// Capacity-revival measures.
MeasureResult n_c(const ChannelModel& model, const TimeWindow& window,
                  const StateSampler& sampler = {});
MeasureResult n_q(const ChannelModel& model, const TimeWindow& window,
                  const StateSampler& sampler = {});

}  // namespace nmq
