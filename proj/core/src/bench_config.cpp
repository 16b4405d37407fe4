#include "ising/bench_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ising/instances.hpp"
#include "json.hpp"

namespace ising {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string>& known_param_keys() {
    static const std::set<std::string> keys = {
        "steps",      "dt",         "sigma",      "beta",        "alpha0",
        "alpha1",     "alpha_final", "x_sat",     "beta_f",      "zeta0",
        "zeta_decay", "alpha_max",  "period",     "eps",         "kerr",
        "detuning",   "init_spread", "epsilon",   "rho_th",      "gain0",
        "integrator", "noise_outside", "track_best", "random_sweep_order",
    };
    return keys;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    std::string bad;
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) bad += (bad.empty() ? "" : ", ") + key;
    if (!bad.empty())
        throw ConfigError("unknown key(s) in " + where + ": " + bad);
}

ParamOverrides parse_overrides(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown_keys(obj, known_param_keys(), where);
    ParamOverrides out;
    for (const auto& [key, value] : obj.items()) {
        if (value.is_boolean()) {
            out.flags[key] = value.get<bool>();
        } else if (value.is_number()) {
            out.numeric[key] = value.get<double>();
        } else if (value.is_string()) {
            out.strings[key] = value.get<std::string>();
        } else {
            throw ConfigError(where + "." + key + " must be a number, bool, or string");
        }
    }
    return out;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void retarget_schedules(SolverParams& p) {
    p.pump.total_steps = p.num_steps;
    p.coupling.total_steps = p.num_steps;
    p.noise.total_steps = p.num_steps;
    p.activation.total_steps = p.num_steps;
    p.temperature.total_steps = p.num_steps;
}

}  // namespace

std::string ParamOverrides::key() const {
    if (empty()) return "default";
    std::string out;
    auto append = [&out](const std::string& k, const std::string& v) {
        if (!out.empty()) out += ";";
        out += k + "=" + v;
    };
    for (const auto& [k, v] : numeric) append(k, fmt_short(v));
    for (const auto& [k, v] : flags) append(k, v ? "true" : "false");
    for (const auto& [k, v] : strings) append(k, v);
    return out;
}

void apply_overrides(SolverParams& p, const ParamOverrides& overrides) {
    if (auto it = overrides.numeric.find("steps"); it != overrides.numeric.end()) {
        p.num_steps = static_cast<int>(it->second);
        retarget_schedules(p);
    }
    for (const auto& [key, v] : overrides.numeric) {
        if (key == "steps") continue;
        if (key == "dt") p.dt = v;
        else if (key == "sigma") {
            auto nt = p.noise.total_steps;
            p.noise = ScheduleSpec::constant(v);
            p.noise.total_steps = nt;
        } else if (key == "beta") {
            auto nt = p.coupling.total_steps;
            p.coupling = ScheduleSpec::constant(v);
            p.coupling.total_steps = nt;
        } else if (key == "alpha0") p.pump.amplitude = v;
        else if (key == "alpha1") p.pump.sharpness = v;
        else if (key == "alpha_final") p.pump.final_value = v;
        else if (key == "x_sat") p.x_sat = v;
        else if (key == "beta_f") p.temperature.final_value = v;
        else if (key == "zeta0") p.activation.amplitude = v;
        else if (key == "zeta_decay") p.activation.decay = v;
        else if (key == "alpha_max") p.pump.high = v;
        else if (key == "period") p.pump.period = v;
        else if (key == "eps") p.rk45_eps = v;
        else if (key == "kerr") p.kerr = v;
        else if (key == "detuning") p.detuning = v;
        else if (key == "init_spread") p.init_spread = v;
        else if (key == "epsilon") p.gd_epsilon = v;
        else if (key == "rho_th") p.gd_rho_th = v;
        else if (key == "gain0") p.gd_gain0 = v;
        else throw ConfigError("unknown numeric parameter: " + key);
    }
    for (const auto& [key, v] : overrides.flags) {
        if (key == "noise_outside") p.noise_outside = v;
        else if (key == "track_best") p.track_best = v;
        else if (key == "random_sweep_order") p.random_sweep_order = v;
        else throw ConfigError("unknown flag parameter: " + key);
    }
    for (const auto& [key, v] : overrides.strings) {
        if (key == "integrator") p.integrator = parse_integrator(v);
        else throw ConfigError("unknown string parameter: " + key);
    }
}

std::vector<IsingProblem> generate_instances(const GeneratorSpec& spec) {
    std::vector<IsingProblem> out;
    out.reserve(spec.count);
    for (int k = 0; k < spec.count; ++k) {
        if (spec.type == "square") {
            PlantMode mode;
            if (spec.mode == "mattis") mode = PlantMode::Mattis;
            else if (spec.mode == "frustrated-loops") mode = PlantMode::FrustratedLoops;
            else if (spec.mode == "random-verified") mode = PlantMode::RandomVerified;
            else throw ConfigError("unknown square mode: " + spec.mode);
            out.push_back(gen_planted_square({spec.L, spec.seed + k, spec.loops}, mode));
        } else if (spec.type == "vb") {
            out.push_back(gen_viana_bray({spec.n, spec.c, spec.seed + k, spec.verify}));
        } else {
            throw ConfigError("unknown generator type: " + spec.type);
        }
    }
    return out;
}

BenchConfig parse_bench_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(root,
                        {"solver", "runs", "p_d", "seed", "jobs", "units", "tts_csv",
                         "fit_csv", "params", "grid", "instance_sets"},
                        "config");

    BenchConfig cfg;
    if (!root.contains("solver")) throw ConfigError("missing required key: solver");
    if (root["solver"].is_string()) {
        cfg.solvers.push_back(parse_solver(root["solver"].get<std::string>()));
    } else if (root["solver"].is_array()) {
        for (const auto& s : root["solver"])
            cfg.solvers.push_back(parse_solver(s.get<std::string>()));
    } else {
        throw ConfigError("solver must be a string or an array of strings");
    }
    cfg.runs = root.value("runs", 100);
    cfg.p_d = root.value("p_d", 0.99);
    cfg.seed = root.value("seed", std::uint64_t{0});
    cfg.jobs = root.value("jobs", 1);
    const std::string units = root.value("units", "us");
    if (units == "steps") cfg.steps_units = true;
    else if (units != "us") throw ConfigError("units must be 'us' or 'steps'");
    if (!root.contains("tts_csv")) throw ConfigError("missing required key: tts_csv");
    cfg.tts_csv_path = root["tts_csv"].get<std::string>();
    cfg.fit_csv_path = root.value("fit_csv", "");
    if (root.contains("params")) cfg.base = parse_overrides(root["params"], "params");
    if (root.contains("grid")) {
        if (!root["grid"].is_array()) throw ConfigError("grid must be an array");
        for (std::size_t k = 0; k < root["grid"].size(); ++k)
            cfg.grid.push_back(
                parse_overrides(root["grid"][k], "grid[" + std::to_string(k) + "]"));
    }
    if (!root.contains("instance_sets") || !root["instance_sets"].is_array() ||
        root["instance_sets"].empty())
        throw ConfigError("instance_sets must be a non-empty array");
    for (const auto& setj : root["instance_sets"]) {
        reject_unknown_keys(setj, {"name", "L", "files", "generator"}, "instance_sets[]");
        InstanceSet set;
        set.name = setj.value("name", "");
        set.size_label = setj.value("L", 0.0);
        if (setj.contains("files")) {
            set.files = expand_glob(setj["files"].get<std::string>());
            if (set.files.empty())
                throw ConfigError("no files match pattern " + setj["files"].get<std::string>());
        }
        if (setj.contains("generator")) {
            const auto& g = setj["generator"];
            reject_unknown_keys(
                g, {"type", "L", "mode", "loops", "N", "c", "count", "seed", "verify"},
                "generator");
            GeneratorSpec spec;
            if (!g.contains("type")) throw ConfigError("generator requires a type");
            spec.type = g["type"].get<std::string>();
            spec.L = g.value("L", 4);
            spec.mode = g.value("mode", "random-verified");
            spec.loops = g.value("loops", 0);
            spec.n = g.value("N", 0);
            spec.c = g.value("c", 0);
            spec.count = g.value("count", 1);
            spec.seed = g.value("seed", std::uint64_t{0});
            spec.verify = g.value("verify", false);
            set.generator = spec;
            if (set.size_label == 0.0)
                set.size_label = spec.type == "square" ? spec.L : spec.n;
            if (set.name.empty())
                set.name = spec.type == "square"
                               ? "square-L" + std::to_string(spec.L)
                               : "vb-N" + std::to_string(spec.n) + "-c" + std::to_string(spec.c);
        }
        if (set.files.empty() && !set.generator)
            throw ConfigError("instance set needs 'files' or 'generator'");
        if (set.name.empty()) set.name = "set" + std::to_string(cfg.sets.size());
        cfg.sets.push_back(std::move(set));
    }
    return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_config(ss.str());
}

BenchOutputs run_bench(const BenchConfig& cfg) {
    BenchOutputs out;
    out.tts_csv = "solver,instance_set,L,param_key,p_s,n,tts_us,tts_steps,ci_lo,ci_hi\n";

    std::vector<std::pair<std::string, ParamOverrides>> grid;
    if (cfg.grid.empty()) {
        grid.emplace_back(cfg.base.key(), ParamOverrides{});
    } else {
        for (const auto& g : cfg.grid) grid.emplace_back(g.key(), g);
    }

    struct FitPoint {
        double size;
        double value;
    };
    std::map<SolverKind, std::vector<FitPoint>> fit_points;

    for (const auto& set : cfg.sets) {
        std::vector<IsingProblem> problems;
        if (set.generator) {
            problems = generate_instances(*set.generator);
        } else {
            for (const auto& path : set.files) {
                auto p = read_instance(path);
                p.add_metadata("instance", path);
                problems.push_back(std::move(p));
            }
        }
        for (SolverKind kind : cfg.solvers) {
            std::vector<std::pair<std::string, ParamsFactory>> factories;
            for (const auto& [key, overrides] : grid) {
                ParamOverrides base = cfg.base;
                factories.emplace_back(key, [kind, base, overrides](const IsingProblem& p) {
                    SolverParams params = SolverParams::defaults(kind, p);
                    apply_overrides(params, base);
                    apply_overrides(params, overrides);
                    return params;
                });
            }
            auto rows = sweep(problems, factories, cfg.runs, cfg.p_d, cfg.seed, cfg.jobs,
                              cfg.steps_units);
            for (const auto& row : rows) {
                const auto& e = row.estimate;
                out.tts_csv += std::string(solver_name(kind)) + "," + set.name + "," +
                               fmt_short(set.size_label) + "," + row.param_key + "," +
                               fmt(e.p_s) + "," + fmt(e.n_restarts) + "," +
                               (cfg.steps_units ? "" : fmt(e.tts_us)) + "," +
                               fmt(e.tts_steps) + "," + fmt(e.ci_lo) + "," + fmt(e.ci_hi) +
                               "\n";
            }
            const std::size_t best = optimal_grid_point(rows, cfg.steps_units);
            fit_points[kind].push_back(
                {set.size_label, cfg.steps_units ? rows[best].estimate.tts_steps
                                                 : rows[best].estimate.tts_us});
        }
    }

    if (!cfg.fit_csv_path.empty()) {
        out.fit_csv = "solver,a,b,err_a,err_b\n";
        for (const auto& [kind, points] : fit_points) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& p : points) pts.emplace_back(p.size, p.value);
            auto fit = fit_scaling(pts);
            out.fit_csv += std::string(solver_name(kind)) + "," + fmt(fit.a) + "," +
                           fmt(fit.b) + "," + fmt(fit.err_a) + "," + fmt(fit.err_b) + "\n";
        }
    }
    return out;
}

std::string fit_from_csv(const std::string& tts_csv, bool steps_units) {
    std::istringstream in(tts_csv);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("fit: empty CSV");

    std::map<std::string, std::map<double, double>> best;  // solver -> L -> min tts
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (fields.size() < 10) throw std::runtime_error("fit: malformed CSV row: " + line);
        const std::string& solver = fields[0];
        const double L = std::stod(fields[2]);
        const std::string& cell = fields[steps_units ? 7 : 6];
        double v = std::numeric_limits<double>::infinity();
        if (cell == "inf" || cell.empty()) {
            v = std::numeric_limits<double>::infinity();
        } else {
            v = std::stod(cell);
        }
        auto& slot = best[solver];
        auto it = slot.find(L);
        if (it == slot.end() || v < it->second) slot[L] = v;
    }

    std::string out = "solver,a,b,err_a,err_b\n";
    for (const auto& [solver, by_size] : best) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [L, v] : by_size) pts.emplace_back(L, v);
        auto fit = fit_scaling(pts);
        out += solver + "," + fmt(fit.a) + "," + fmt(fit.b) + "," + fmt(fit.err_a) + "," +
               fmt(fit.err_b) + "\n";
    }
    return out;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    const auto star = pattern.find('*');
    if (star == std::string::npos) {
        return fs::exists(pattern) ? std::vector<std::string>{pattern}
                                   : std::vector<std::string>{};
    }
    fs::path p(pattern);
    fs::path dir = p.parent_path();
    if (dir.empty()) dir = ".";
    const std::string name = p.filename().string();
    const auto wild = name.find('*');
    const std::string prefix = name.substr(0, wild);
    const std::string suffix = name.substr(wild + 1);

    std::vector<std::string> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string fn = entry.path().filename().string();
        if (fn.size() >= prefix.size() + suffix.size() && fn.rfind(prefix, 0) == 0 &&
            fn.compare(fn.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ising
