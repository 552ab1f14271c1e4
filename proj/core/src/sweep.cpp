#include "nmq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace nmq {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string shortest_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

struct ModelInfo {
    std::string family;
    std::string spectrum;  // for amplitude damping
};

ModelInfo model_info(const ChannelModel& model) {
    return std::visit(
        overloaded{[](const Dephasing1Q&) { return ModelInfo{"dephasing_1q", ""}; },
                   [](const Dephasing2QIndependent&) {
                       return ModelInfo{"dephasing_2q_independent", ""};
                   },
                   [](const Dephasing2QCommon&) { return ModelInfo{"dephasing_2q_common", ""}; },
                   [](const AmplitudeDamping1Q& m) {
                       return ModelInfo{"amplitude_damping_1q",
                                        std::holds_alternative<LorentzianSpec>(m.spectrum)
                                            ? "lorentzian"
                                            : "pbg"};
                   },
                   [](const AmplitudeDamping2QIndependent& m) {
                       return ModelInfo{"amplitude_damping_2q_independent",
                                        std::holds_alternative<LorentzianSpec>(m.spectrum)
                                            ? "lorentzian"
                                            : "pbg"};
                   }},
        model);
}

bool uses_sampler(const SweepConfig& config) {
    const bool common = std::holds_alternative<Dephasing2QCommon>(config.model_template);
    for (MeasureId m : config.measures) {
        if (m == MeasureId::blp || m == MeasureId::lfs) return true;
        if (common && (m == MeasureId::cea || m == MeasureId::q)) return true;
    }
    return false;
}

AmplitudeSpectrum amplitude_spectrum_from(const json& jm) {
    const std::string kind = jm.value("spectrum", "lorentzian");
    if (kind == "lorentzian") {
        LorentzianSpec l;
        l.r = jm.value("r", 0.1);
        l.detuning = jm.value("detuning", 0.0);
        return l;
    }
    if (kind == "pbg") {
        PBGSpec p;
        p.z = jm.value("z", 0.0);
        return p;
    }
    throw ConfigError("unknown amplitude-damping spectrum: " + kind);
}

const std::vector<std::string> known_model_keys = {"family", "spectrum", "s", "t_s",
                                                   "r",      "z",        "detuning"};

ChannelModel model_from_json(const json& jm) {
    if (!jm.contains("family")) throw ConfigError("model.family is required");
    for (auto it = jm.begin(); it != jm.end(); ++it)
        if (std::find(known_model_keys.begin(), known_model_keys.end(), it.key()) ==
            known_model_keys.end())
            throw ConfigError("unknown model field: " + it.key());
    const std::string family = jm["family"].get<std::string>();
    if (family == "dephasing_1q") return Dephasing1Q{OhmicSpectrum{jm.value("s", 1.0)}};
    if (family == "dephasing_2q_independent")
        return Dephasing2QIndependent{OhmicSpectrum{jm.value("s", 1.0)}};
    if (family == "dephasing_2q_common")
        return Dephasing2QCommon{CommonEnvSpec{OhmicSpectrum{jm.value("s", 1.0)},
                                               jm.value("t_s", 1.0)}};
    if (family == "amplitude_damping_1q")
        return AmplitudeDamping1Q{amplitude_spectrum_from(jm)};
    if (family == "amplitude_damping_2q_independent")
        return AmplitudeDamping2QIndependent{amplitude_spectrum_from(jm)};
    throw ConfigError("unknown model family: " + family);
}

void check_sweep_legality(const ChannelModel& model, const std::string& parameter) {
    const auto info = model_info(model);
    const bool ohmic = info.family.rfind("dephasing", 0) == 0;
    if (parameter == "s") {
        if (!ohmic) throw ConfigError("sweep over s requires a dephasing model");
    } else if (parameter == "t_s") {
        if (info.family != "dephasing_2q_common")
            throw ConfigError("sweep over t_s requires the common-environment model");
    } else if (parameter == "r") {
        if (info.spectrum != "lorentzian")
            throw ConfigError("sweep over r requires a Lorentzian amplitude-damping model");
    } else if (parameter == "z") {
        if (info.spectrum != "pbg")
            throw ConfigError("sweep over z requires a band-gap amplitude-damping model");
    } else {
        throw ConfigError("unknown sweep_parameter: " + parameter);
    }
}

SamplerStrategy strategy_from_string(const std::string& s) {
    if (s == "analytic_candidates") return SamplerStrategy::analytic_candidates;
    if (s == "random_pure") return SamplerStrategy::random_pure;
    if (s == "random_mixed_rank_k") return SamplerStrategy::random_mixed_rank_k;
    if (s == "random_orthogonal_pairs") return SamplerStrategy::random_orthogonal_pairs;
    if (s == "product_of_1q_optima") return SamplerStrategy::product_of_1q_optima;
    throw ConfigError("unknown sampler strategy: " + s);
}

std::string strategy_to_string(SamplerStrategy s) {
    switch (s) {
        case SamplerStrategy::analytic_candidates: return "analytic_candidates";
        case SamplerStrategy::random_pure: return "random_pure";
        case SamplerStrategy::random_mixed_rank_k: return "random_mixed_rank_k";
        case SamplerStrategy::random_orthogonal_pairs: return "random_orthogonal_pairs";
        case SamplerStrategy::product_of_1q_optima: return "product_of_1q_optima";
    }
    return "?";
}

}  // namespace

std::string to_string(MeasureId id) {
    switch (id) {
        case MeasureId::rhp: return "rhp";
        case MeasureId::blp: return "blp";
        case MeasureId::lfs: return "lfs";
        case MeasureId::cea: return "cea";
        case MeasureId::q: return "q";
    }
    return "?";
}

MeasureId measure_from_string(const std::string& name) {
    if (name == "rhp") return MeasureId::rhp;
    if (name == "blp") return MeasureId::blp;
    if (name == "lfs") return MeasureId::lfs;
    if (name == "cea") return MeasureId::cea;
    if (name == "q") return MeasureId::q;
    throw ConfigError("unknown measure: " + name);
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    static const std::vector<std::string> known_keys = {
        "model",    "sweep_parameter", "values", "window",
        "measures", "sampler",         "normalize", "output", "jobs"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known_keys.begin(), known_keys.end(), it.key()) == known_keys.end())
            throw ConfigError("unknown config field: " + it.key());

    SweepConfig c;
    try {
        if (!j.contains("model")) throw ConfigError("config needs a model section");
        c.model_template = model_from_json(j["model"]);
        c.sweep_parameter = j.value("sweep_parameter", "s");
        if (!j.contains("values") || !j["values"].is_array() || j["values"].empty())
            throw ConfigError("config needs a nonempty values array");
        c.values = j["values"].get<std::vector<double>>();
        if (!std::is_sorted(c.values.begin(), c.values.end()))
            throw ConfigError("values must be sorted ascending");

        if (j.contains("window")) {
            const auto& w = j["window"];
            c.window.t_start = w.value("t_start", 0.0);
            c.window.t_end = w.value("t_end", 20.0);
            c.window.grid_points = w.value("grid_points", 2000);
        }
        c.window.validate();

        if (j.contains("measures")) {
            c.measures.clear();
            for (const auto& m : j["measures"]) c.measures.push_back(measure_from_string(m));
        }
        if (c.measures.empty()) throw ConfigError("measures must be nonempty");

        if (j.contains("sampler")) {
            const auto& s = j["sampler"];
            c.sampler.budget = s.value("budget", c.sampler.budget);
            if (s.contains("seed")) {
                c.sampler.seed = s["seed"].get<unsigned long long>();
                c.seed_given = true;
            }
            c.sampler.mixed_rank = s.value("mixed_rank", c.sampler.mixed_rank);
            if (s.contains("strategies")) {
                c.sampler.strategies.clear();
                for (const auto& name : s["strategies"])
                    c.sampler.strategies.push_back(strategy_from_string(name));
            }
        }
        c.normalize = j.value("normalize", false);
        if (j.contains("output")) {
            c.output.format = j["output"].value("format", "csv");
            c.output.path = j["output"].value("path", "");
            if (c.output.format != "csv" && c.output.format != "json")
                throw ConfigError("output.format must be csv or json");
        }
        c.jobs = j.value("jobs", 1);

        check_sweep_legality(c.model_template, c.sweep_parameter);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    return c;
}

SweepConfig SweepConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string SweepConfig::canonical_json() const {
    json j;
    const auto info = model_info(model_template);
    j["model"]["family"] = info.family;
    if (!info.spectrum.empty()) j["model"]["spectrum"] = info.spectrum;
    std::visit(overloaded{[&](const Dephasing1Q& m) { j["model"]["s"] = m.spectrum.s; },
                          [&](const Dephasing2QIndependent& m) { j["model"]["s"] = m.spectrum.s; },
                          [&](const Dephasing2QCommon& m) {
                              j["model"]["s"] = m.env.ohmic.s;
                              j["model"]["t_s"] = m.env.transit_time;
                          },
                          [&](const AmplitudeDamping1Q& m) {
                              std::visit(overloaded{[&](const LorentzianSpec& l) {
                                                        j["model"]["r"] = l.r;
                                                        j["model"]["detuning"] = l.detuning;
                                                    },
                                                    [&](const PBGSpec& p) { j["model"]["z"] = p.z; }},
                                         m.spectrum);
                          },
                          [&](const AmplitudeDamping2QIndependent& m) {
                              std::visit(overloaded{[&](const LorentzianSpec& l) {
                                                        j["model"]["r"] = l.r;
                                                        j["model"]["detuning"] = l.detuning;
                                                    },
                                                    [&](const PBGSpec& p) { j["model"]["z"] = p.z; }},
                                         m.spectrum);
                          }},
               model_template);
    j["sweep_parameter"] = sweep_parameter;
    j["values"] = values;
    j["window"] = {{"t_start", window.t_start},
                   {"t_end", window.t_end},
                   {"grid_points", window.grid_points}};
    std::vector<std::string> ms;
    for (MeasureId m : measures) ms.push_back(to_string(m));
    j["measures"] = ms;
    std::vector<std::string> strat;
    for (auto s : sampler.strategies) strat.push_back(strategy_to_string(s));
    j["sampler"] = {{"budget", sampler.budget},
                    {"seed", sampler.seed},
                    {"mixed_rank", sampler.mixed_rank},
                    {"strategies", strat}};
    j["normalize"] = normalize;
    j["output"] = {{"format", output.format}, {"path", output.path}};
    return j.dump();
}

ChannelModel SweepConfig::model_at(double v) const {
    ChannelModel m = model_template;
    std::visit(overloaded{[&](Dephasing1Q& d) { d.spectrum.s = v; },
                          [&](Dephasing2QIndependent& d) { d.spectrum.s = v; },
                          [&](Dephasing2QCommon& d) {
                              if (sweep_parameter == "t_s")
                                  d.env.transit_time = v;
                              else
                                  d.env.ohmic.s = v;
                          },
                          [&](AmplitudeDamping1Q& d) {
                              std::visit(overloaded{[&](LorentzianSpec& l) { l.r = v; },
                                                    [&](PBGSpec& p) { p.z = v; }},
                                         d.spectrum);
                          },
                          [&](AmplitudeDamping2QIndependent& d) {
                              std::visit(overloaded{[&](LorentzianSpec& l) { l.r = v; },
                                                    [&](PBGSpec& p) { p.z = v; }},
                                         d.spectrum);
                          }},
               m);
    return m;
}

unsigned long long mix_seed(unsigned long long global_seed, double parameter_value) {
    unsigned long long bits;
    std::memcpy(&bits, &parameter_value, sizeof(bits));
    unsigned long long x = global_seed ^ (bits + 0x9e3779b97f4a7c15ull);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

namespace {

MeasureCell cell_from(const MeasureResult& r) {
    MeasureCell c;
    c.value = r.value;
    c.diverged = r.diverged;
    c.interval_count = static_cast<int>(r.intervals.size());
    c.argmax = r.argmax_label;
    return c;
}

ResultRow compute_row(const SweepConfig& config, double v) {
    ResultRow row;
    row.parameter_value = v;
    ChannelModel model;
    try {
        model = config.model_at(v);
    } catch (const Error& e) {
        row.error = e.what();
        return row;
    }
    StateSampler sampler = config.sampler;
    sampler.seed = mix_seed(config.sampler.seed, v);

    for (MeasureId id : config.measures) {
        MeasureCell cell;
        try {
            switch (id) {
                case MeasureId::rhp: cell = cell_from(n_rhp(model, config.window)); break;
                case MeasureId::blp: cell = cell_from(n_blp(model, config.window, sampler)); break;
                case MeasureId::lfs: cell = cell_from(n_lfs(model, config.window, sampler)); break;
                case MeasureId::cea: cell = cell_from(n_c(model, config.window, sampler)); break;
                case MeasureId::q: cell = cell_from(n_q(model, config.window, sampler)); break;
            }
        } catch (const Error& e) {
            cell.value = std::nan("");
            cell.error = e.what();
            cell.argmax = "error";
        }
        row.cells.push_back(std::move(cell));
    }
    return row;
}

void normalize_columns(const SweepConfig& config, SweepOutput& out) {
    for (size_t col = 0; col < config.measures.size(); ++col) {
        double max_abs = 0.0;
        for (const auto& row : out.rows) {
            if (!row.error.empty() || col >= row.cells.size()) continue;
            const auto& c = row.cells[col];
            if (c.error.empty() && std::isfinite(c.value))
                max_abs = std::max(max_abs, std::abs(c.value));
        }
        if (max_abs <= 0.0) continue;
        for (auto& row : out.rows) {
            if (!row.error.empty() || col >= row.cells.size()) continue;
            auto& c = row.cells[col];
            if (c.error.empty() && std::isfinite(c.value)) c.value /= max_abs;
        }
    }
}

}  // namespace

SweepOutput run_sweep(const SweepConfig& config) {
    if (config.values.empty()) throw ConfigError("run_sweep: empty parameter grid");
    if (uses_sampler(config) && !config.seed_given && config.sampler.seed == 0)
        throw ConfigError("run_sweep: sampled measures require a sampler seed");

    SweepOutput out;
    out.rows.resize(config.values.size());

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < config.values.size(); ++i)
            out.rows[i] = compute_row(config, config.values[i]);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= config.values.size()) return;
                out.rows[i] = compute_row(config, config.values[i]);
            }
        };
        std::vector<std::thread> pool;
        const int n = std::min<int>(jobs, static_cast<int>(config.values.size()));
        pool.reserve(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& row : out.rows) {
        if (!row.error.empty()) out.any_failure = true;
        for (const auto& c : row.cells)
            if (!c.error.empty()) out.any_failure = true;
    }
    if (config.normalize) normalize_columns(config, out);
    return out;
}

std::string to_csv(const SweepConfig& config, const SweepOutput& out) {
    std::ostringstream os;
    os << "param";
    for (MeasureId id : config.measures) {
        const std::string m = to_string(id);
        os << "," << m << "_value," << m << "_diverged," << m << "_intervals," << m
           << "_argmax";
    }
    os << "\n";
    for (const auto& row : out.rows) {
        os << shortest_double(row.parameter_value);
        for (size_t col = 0; col < config.measures.size(); ++col) {
            if (col < row.cells.size() && row.error.empty()) {
                const auto& c = row.cells[col];
                os << "," << shortest_double(c.value) << "," << (c.diverged ? "true" : "false")
                   << "," << c.interval_count << "," << (c.error.empty() ? c.argmax : "error");
            } else {
                os << ",nan,false,0,error";
            }
        }
        os << "\n";
    }
    return os.str();
}

std::string to_json(const SweepConfig& config, const SweepOutput& out) {
    json j;
    j["sweep_parameter"] = config.sweep_parameter;
    json rows = json::array();
    for (const auto& row : out.rows) {
        json r;
        r["param"] = row.parameter_value;
        if (!row.error.empty()) r["error"] = row.error;
        json cells = json::object();
        for (size_t col = 0; col < config.measures.size() && col < row.cells.size(); ++col) {
            const auto& c = row.cells[col];
            json jc;
            if (std::isfinite(c.value))
                jc["value"] = c.value;
            else
                jc["value"] = nullptr;
            jc["diverged"] = c.diverged;
            jc["intervals"] = c.interval_count;
            jc["argmax"] = c.argmax;
            if (!c.error.empty()) jc["error"] = c.error;
            cells[to_string(config.measures[col])] = jc;
        }
        r["measures"] = cells;
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2);
}

double detect_crossover(const SweepConfig& config, MeasureId measure, double threshold) {
    if (config.values.size() < 2)
        throw NoCrossing("detect_crossover: need at least two sweep values");

    auto eval = [&](double v) {
        ChannelModel model = config.model_at(v);
        StateSampler sampler = config.sampler;
        sampler.seed = mix_seed(config.sampler.seed, v);
        switch (measure) {
            case MeasureId::rhp: return n_rhp(model, config.window).value;
            case MeasureId::blp: return n_blp(model, config.window, sampler).value;
            case MeasureId::lfs: return n_lfs(model, config.window, sampler).value;
            case MeasureId::cea: return n_c(model, config.window, sampler).value;
            case MeasureId::q: return n_q(model, config.window, sampler).value;
        }
        return 0.0;
    };

    std::vector<double> vals(config.values.size());
    for (size_t i = 0; i < config.values.size(); ++i) vals[i] = eval(config.values[i]);

    size_t bracket = config.values.size();
    for (size_t i = 0; i + 1 < config.values.size(); ++i) {
        if ((vals[i] <= threshold) != (vals[i + 1] <= threshold)) {
            bracket = i;
            break;
        }
    }
    if (bracket == config.values.size())
        throw NoCrossing("detect_crossover: measure never crosses the threshold");

    double lo = config.values[bracket];
    double hi = config.values[bracket + 1];
    const bool lo_below = vals[bracket] <= threshold;
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if ((eval(mid) <= threshold) == lo_below)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<std::pair<std::string, SweepConfig>> figure_presets(int figure) {
    auto linspace = [](double a, double b, double step) {
        std::vector<double> v;
        for (double x = a; x <= b + 1e-12; x += step) v.push_back(x);
        return v;
    };
    const std::vector<MeasureId> all = {MeasureId::rhp, MeasureId::blp, MeasureId::lfs,
                                        MeasureId::cea, MeasureId::q};

    std::vector<std::pair<std::string, SweepConfig>> out;
    if (figure == 1) {
        SweepConfig c;
        c.model_template = Dephasing1Q{OhmicSpectrum{3.0}};
        c.sweep_parameter = "s";
        c.values = linspace(0.1, 6.0, 0.1);
        c.window = {0.0, 20.0, 2000};
        c.measures = all;
        c.sampler.budget = 40;
        c.sampler.seed = 7;
        c.seed_given = true;
        c.normalize = true;
        out.emplace_back("fig1", c);
    } else if (figure == 2) {
        for (double ts : {0.25, 2.0, 6.0}) {
            SweepConfig c;
            c.model_template = Dephasing2QCommon{CommonEnvSpec{OhmicSpectrum{3.0}, ts}};
            c.sweep_parameter = "s";
            c.values = linspace(0.1, 6.0, 0.1);
            c.window = {0.0, 20.0, 2000};
            c.measures = all;
            c.sampler.budget = 24;
            c.sampler.seed = 7;
            c.seed_given = true;
            c.normalize = true;
            std::ostringstream name;
            name << "fig2_ts" << ts;
            out.emplace_back(name.str(), c);
        }
    } else if (figure == 3) {
        SweepConfig lor;
        lor.model_template = AmplitudeDamping1Q{LorentzianSpec{1.0, 0.0}};
        lor.sweep_parameter = "r";
        lor.values = linspace(0.05, 2.0, 0.05);
        lor.window = {0.0, 40.0, 2000};
        lor.measures = all;
        lor.sampler.budget = 40;
        lor.sampler.seed = 7;
        lor.seed_given = true;
        lor.normalize = true;
        out.emplace_back("fig3_lorentzian", lor);

        SweepConfig pbg;
        pbg.model_template = AmplitudeDamping1Q{PBGSpec{0.0}};
        pbg.sweep_parameter = "z";
        pbg.values = linspace(-15.0, 2.0, 0.25);
        pbg.window = {0.0, 20.0, 2000};
        pbg.measures = all;
        pbg.sampler.budget = 40;
        pbg.sampler.seed = 7;
        pbg.seed_given = true;
        pbg.normalize = true;
        out.emplace_back("fig3_pbg", pbg);
    } else {
        throw ConfigError("figure preset must be 1, 2 or 3");
    }
    return out;
}

}  // namespace nmq
