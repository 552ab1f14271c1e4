#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmq/sweep.hpp"
#include "nmq/version.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 partial failures
constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_partial = 3;

unsigned long long env_seed_fallback(bool& found) {
    found = false;
    const char* env = std::getenv("NMQ_SEED");
    if (!env) return 0;
    try {
        const unsigned long long s = std::stoull(env);
        found = true;
        return s;
    } catch (...) {
        return 0;
    }
}

std::string config_hash_hex(const std::string& canonical) {
    // FNV-1a, enough to fingerprint a config in meta.json
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw nmq::ConfigError("cannot write output file: " + path);
    out << content;
}

void write_meta(const std::string& out_path, const nmq::SweepConfig& config,
                double wall_seconds) {
    nlohmann::json meta;
    meta["config_hash"] = config_hash_hex(config.canonical_json());
    meta["tool_version"] = nmq::version_string;
    meta["wall_time_seconds"] = wall_seconds;
    write_file(out_path + ".meta.json", meta.dump(2));
}

void print_summary(const nmq::SweepConfig& config, const nmq::SweepOutput& out) {
    std::cout << "param";
    for (auto m : config.measures) std::cout << "\t" << nmq::to_string(m);
    std::cout << "\n";
    for (const auto& row : out.rows) {
        std::cout << row.parameter_value;
        for (const auto& c : row.cells) {
            std::cout << "\t";
            if (!c.error.empty())
                std::cout << "error";
            else {
                std::cout << c.value;
                if (c.diverged) std::cout << "(div)";
            }
        }
        if (!row.error.empty()) std::cout << "\trow error: " << row.error;
        std::cout << "\n";
    }
}

int run_one_sweep(nmq::SweepConfig config, const std::string& out_override,
                  const std::string& format_override) {
    if (!format_override.empty()) config.output.format = format_override;
    if (!out_override.empty()) config.output.path = out_override;

    const auto t0 = std::chrono::steady_clock::now();
    const nmq::SweepOutput out = nmq::run_sweep(config);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string rendered =
        config.output.format == "json" ? nmq::to_json(config, out) : nmq::to_csv(config, out);
    if (!config.output.path.empty()) {
        write_file(config.output.path, rendered);
        write_meta(config.output.path, config, wall);
        std::cout << "wrote " << config.output.path << " (" << out.rows.size() << " rows, "
                  << wall << " s)\n";
    } else {
        std::cout << rendered;
    }
    print_summary(config, out);
    return out.any_failure ? exit_partial : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Markovianity measures over exactly solvable qubit channels"};
    app.set_version_flag("--version", nmq::version_string);
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    int jobs = 0;
    int figure = 0;
    long long seed = -1;

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep->add_option("--config", config_path, "JSON sweep configuration");
    sweep->add_option("--jobs", jobs, "number of concurrent rows");
    sweep->add_option("--figure", figure, "preset grid (1, 2 or 3)")->check(CLI::Range(1, 3));
    sweep->add_option("--out", out_path, "output file (or prefix for figure presets)");
    sweep->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--seed", seed, "override the sampler seed");

    std::string xmeasure = "rhp";
    double threshold = 1e-6;
    auto* crossover =
        app.add_subcommand("crossover", "bisect the parameter where a measure crosses a threshold");
    crossover->add_option("--config", config_path, "JSON sweep configuration")->required();
    crossover->add_option("--measure", xmeasure, "measure id (rhp, blp, lfs, cea, q)");
    crossover->add_option("--threshold", threshold, "crossing threshold");
    crossover->add_option("--seed", seed, "override the sampler seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            std::vector<std::pair<std::string, nmq::SweepConfig>> runs;
            if (figure > 0) {
                runs = nmq::figure_presets(figure);
            } else {
                if (config_path.empty())
                    throw nmq::ConfigError("sweep needs --config or --figure");
                runs.emplace_back("", nmq::SweepConfig::from_json_file(config_path));
            }

            int rc = exit_ok;
            for (auto& [name, config] : runs) {
                if (jobs > 0) config.jobs = jobs;
                if (seed >= 0) {
                    config.sampler.seed = static_cast<unsigned long long>(seed);
                    config.seed_given = true;
                } else if (!config.seed_given) {
                    bool found = false;
                    const auto s = env_seed_fallback(found);
                    if (found) {
                        config.sampler.seed = s;
                        config.seed_given = true;
                    }
                }
                std::string out_file = out_path;
                if (!name.empty()) {
                    const std::string ext = config.output.format == "json" ? ".json" : ".csv";
                    out_file = (out_path.empty() ? name : out_path + "_" + name) + ext;
                }
                const int one = run_one_sweep(config, out_file, format);
                rc = std::max(rc, one);
            }
            return rc;
        }

        if (crossover->parsed()) {
            nmq::SweepConfig config = nmq::SweepConfig::from_json_file(config_path);
            if (seed >= 0) {
                config.sampler.seed = static_cast<unsigned long long>(seed);
                config.seed_given = true;
            }
            const double xc =
                nmq::detect_crossover(config, nmq::measure_from_string(xmeasure), threshold);
            std::cout << "crossover " << xmeasure << " at " << config.sweep_parameter << " = "
                      << xc << "\n";
            return exit_ok;
        }
    } catch (const nmq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const nmq::NoCrossing& e) {
        std::cerr << "no crossing: " << e.what() << "\n";
        return exit_partial;
    } catch (const nmq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_partial;
    }
    return exit_ok;
}
