#pragma once

#include <string>
#include <vector>

#include "nmq/measures.hpp"

namespace nmq {

enum class MeasureId { rhp, blp, lfs, cea, q };

std::string to_string(MeasureId id);
MeasureId measure_from_string(const std::string& name);

struct OutputSpec {
    std::string format = "csv";  // "csv" or "json"
    std::string path;            // empty = stdout only
};

// One sweep: a channel family, the parameter being swept, the grid, the
// window and the measures to evaluate.
struct SweepConfig {
    ChannelModel model_template = Dephasing1Q{OhmicSpectrum{3.0}};
    std::string sweep_parameter = "s";  // one of s, r, z, t_s
    std::vector<double> values;
    TimeWindow window;
    std::vector<MeasureId> measures = {MeasureId::rhp};
    StateSampler sampler;
    bool seed_given = false;
    bool normalize = false;
    OutputSpec output;
    int jobs = 1;

    // Parses the JSON config (ConfigError on unknown fields or illegal
    // parameter/model combinations).
    static SweepConfig from_json_text(const std::string& text);
    static SweepConfig from_json_file(const std::string& path);

    // Canonical serialization used for the meta.json config hash.
    std::string canonical_json() const;

    // Model with the swept parameter set to the given value.
    ChannelModel model_at(double parameter_value) const;
};

struct MeasureCell {
    double value = 0.0;
    bool diverged = false;
    int interval_count = 0;
    std::string argmax = "none";
    std::string error;  // non-empty when this measure failed on this row
};

struct ResultRow {
    double parameter_value = 0.0;
    std::vector<MeasureCell> cells;  // aligned with SweepConfig::measures
    std::string error;               // non-empty when the whole row failed
};

struct SweepOutput {
    std::vector<ResultRow> rows;
    bool any_failure = false;
};

// Runs every row (concurrently up to config.jobs), deterministic for a fixed
// seed: each row draws its own seed from hash(global_seed, parameter_value).
SweepOutput run_sweep(const SweepConfig& config);

std::string to_csv(const SweepConfig& config, const SweepOutput& out);
std::string to_json(const SweepConfig& config, const SweepOutput& out);

// First parameter value at which the measure crosses the threshold,
// refined by bisection to 1e-3. Throws NoCrossing.
double detect_crossover(const SweepConfig& config, MeasureId measure,
                        double threshold = 1e-6);

// splitmix64-style mix of the global seed with the parameter value.
unsigned long long mix_seed(unsigned long long global_seed, double parameter_value);

// Sweep presets reproducing the figure grids (1: single-qubit dephasing,
// 2: common-environment dephasing at three transit times, 3: amplitude
// damping for Lorentzian and band-gap reservoirs).
std::vector<std::pair<std::string, SweepConfig>> figure_presets(int figure);

}  // namespace nmq
