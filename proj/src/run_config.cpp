#include "kinklab/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kinklab/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kinklab {

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

namespace {

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    if (!j[key].is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
    return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError("'" + key + "' must be a number");
    return j[key].get<double>();
}

}  // namespace

Potential model_from_json(const json& j) {
    if (j.is_string()) return make_builtin(j.get<std::string>());
    reject_unknown_keys(j, {"name", "coeffs", "phi_plus"}, "model");
    if (!j.contains("coeffs")) return make_builtin(j.at("name").get<std::string>());
    Potential p = make_polynomial(j.value("name", "custom"),
                                  j.at("coeffs").get<std::vector<double>>(),
                                  require_number(j, "phi_plus", "model"));
    ValidationReport rep = validate(p, 256);
    if (!rep.passed) throw ConfigError("custom model failed validation: " + rep.summary());
    return p;
}

Grid grid_from_json(const json& j) {
    reject_unknown_keys(j, {"x_min", "x_max", "n"}, "grid");
    Grid g;
    g.x_min = require_number(j, "x_min", "grid");
    g.x_max = require_number(j, "x_max", "grid");
    if (!j.contains("n")) throw ConfigError("grid: missing key 'n'");
    g.n = j["n"].get<int>();
    if (g.x_max <= g.x_min) throw ConfigError("grid: x_max must exceed x_min");
    if (g.n < 64) throw ConfigError("grid: n must be at least 64");
    return g;
}

InitialDataSpec initial_data_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "a", "v", "v_sep", "t0", "value"}, "initial_data");
    InitialDataSpec s;
    if (!j.contains("kind")) throw ConfigError("initial_data: missing key 'kind'");
    s.kind = j["kind"].get<std::string>();
    const std::vector<std::string> kinds = {"kink", "antikink", "pair_superposition",
                                            "sg_exact_pair", "vacuum"};
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
        throw ConfigError("initial_data: unknown kind '" + s.kind + "'");
    s.a = number_or(j, "a", 0.0);
    s.v = number_or(j, "v", 0.0);
    s.v_sep = number_or(j, "v_sep", 0.0);
    s.t0 = number_or(j, "t0", s.kind == "sg_exact_pair" ? 1.0 : 0.0);
    if ((s.kind == "kink" || s.kind == "antikink") && std::abs(s.v) >= 1.0)
        throw ConfigError("initial_data: |v| must be < 1");
    return s;
}

void validate_evolution_numerics(const Grid& g, double dt, double t_end, double t_begin,
                                 double max_kink_abs) {
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (dt > 0.9 * g.dx()) {
        std::ostringstream os;
        os << "dt=" << dt << " violates the CFL precondition dt <= 0.9*dx (dx=" << g.dx()
           << ")";
        throw ConfigError(os.str());
    }
    if (t_end <= t_begin) throw ConfigError("t_end must exceed the initial time");
    const double needed = max_kink_abs + (t_end - t_begin) + 10.0;
    if (g.x_max < needed || -g.x_min < needed) {
        std::ostringstream os;
        os << "domain too small: |x| extent must reach " << needed
           << " (kink position + propagation time + 10) to keep boundary reflections "
              "out of the observation window";
        throw ConfigError(os.str());
    }
}

EvolveConfig EvolveConfig::parse(const json& j) {
    reject_unknown_keys(j,
                        {"model", "kind", "params", "grid", "dt", "t_end", "observers",
                         "output_dir"},
                        "evolve config");
    EvolveConfig c;
    c.echo = j;
    if (!j.contains("model")) throw ConfigError("evolve config: missing 'model'");
    c.model = model_from_json(j["model"]);
    json init = j.contains("params") ? j["params"] : json::object();
    init["kind"] = j.value("kind", init.value("kind", ""));
    c.initial = initial_data_from_json(init);
    if (!j.contains("grid")) throw ConfigError("evolve config: missing 'grid'");
    c.grid = grid_from_json(j["grid"]);
    c.dt = require_number(j, "dt", "evolve config");
    c.t_end = require_number(j, "t_end", "evolve config");
    c.output_dir = j.value("output_dir", "");

    if (j.contains("observers")) {
        reject_unknown_keys(j["observers"], {"energy_stride", "snapshot_stride"},
                            "observers");
        c.energy_stride = number_or(j["observers"], "energy_stride", 0.1);
        c.snapshot_stride = number_or(j["observers"], "snapshot_stride", 0.0);
    }

    const double pos = std::max(std::abs(c.initial.a),
                                c.initial.kind == "sg_exact_pair"
                                    ? std::log(2.0 * std::max(c.t_end, 1.0))
                                    : std::abs(c.initial.a));
    validate_evolution_numerics(c.grid, c.dt, c.t_end, c.initial.t0, pos);
    return c;
}

ModulateConfig ModulateConfig::parse(const json& j) {
    reject_unknown_keys(j,
                        {"model", "kind", "params", "grid", "dt", "t_end", "stride",
                         "t_start", "z_min", "guess", "fit_window", "output_dir"},
                        "modulate config");
    ModulateConfig c;
    c.echo = j;
    if (!j.contains("model")) throw ConfigError("modulate config: missing 'model'");
    c.model = model_from_json(j["model"]);
    json init = j.contains("params") ? j["params"] : json::object();
    init["kind"] = j.value("kind", init.value("kind", ""));
    c.initial = initial_data_from_json(init);
    if (!j.contains("grid")) throw ConfigError("modulate config: missing 'grid'");
    c.grid = grid_from_json(j["grid"]);
    c.dt = require_number(j, "dt", "modulate config");
    c.t_end = require_number(j, "t_end", "modulate config");
    c.stride = number_or(j, "stride", 0.1);
    c.t_start = number_or(j, "t_start", c.initial.t0);
    c.z_min = number_or(j, "z_min", 6.0);
    c.output_dir = j.value("output_dir", "");
    if (j.contains("guess")) {
        auto g = j["guess"].get<std::vector<double>>();
        if (g.size() != 2) throw ConfigError("guess must be [x1, x2]");
        c.guess = std::make_pair(g[0], g[1]);
    }
    if (j.contains("fit_window")) {
        auto w = j["fit_window"].get<std::vector<double>>();
        if (w.size() != 2 || w[1] <= w[0]) throw ConfigError("fit_window must be [lo, hi]");
        c.fit_window = std::make_pair(w[0], w[1]);
    }
    if (c.stride <= 0.0) throw ConfigError("stride must be positive");

    const double pos = std::max(std::abs(c.initial.a),
                                c.initial.kind == "sg_exact_pair"
                                    ? std::log(2.0 * std::max(c.t_end, 1.0))
                                    : std::abs(c.initial.a));
    validate_evolution_numerics(c.grid, c.dt, c.t_end, c.initial.t0, pos);
    return c;
}

ReducedOdeConfig ReducedOdeConfig::parse(const json& j) {
    reject_unknown_keys(
        j, {"model", "amplitude_A", "z0", "dz0", "t0", "t_end", "dt", "forcing_eps",
            "output_dir"},
        "reduced-ode config");
    ReducedOdeConfig c;
    c.echo = j;
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    c.amplitude_A = number_or(j, "amplitude_A", 0.0);
    if (!c.model && c.amplitude_A <= 0.0)
        throw ConfigError("reduced-ode config: need 'model' or positive 'amplitude_A'");
    c.z0 = require_number(j, "z0", "reduced-ode config");
    c.dz0 = number_or(j, "dz0", 0.0);
    c.t0 = require_number(j, "t0", "reduced-ode config");
    c.t_end = require_number(j, "t_end", "reduced-ode config");
    c.dt = require_number(j, "dt", "reduced-ode config");
    c.forcing_eps = number_or(j, "forcing_eps", 0.0);
    c.output_dir = j.value("output_dir", "");
    if (c.t_end <= c.t0) throw ConfigError("reduced-ode config: t_end must exceed t0");
    if (c.dt > 1e-2 * c.t0)
        throw ConfigError("reduced-ode config: dt must be <= 1e-2 * t0");
    return c;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
    if (header.size() != columns.size())
        throw DomainError("write_csv: header/column mismatch");
    std::ofstream os(path);
    if (!os) throw DomainError("write_csv: cannot open " + path);
    os.precision(15);
    for (std::size_t k = 0; k < header.size(); ++k)
        os << header[k] << (k + 1 < header.size() ? ',' : '\n');
    const std::size_t rows = columns.empty() ? 0 : columns[0]->size();
    for (const auto* col : columns)
        if (col->size() != rows) throw DomainError("write_csv: ragged columns");
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k)
            os << (*columns[k])[i] << (k + 1 < columns.size() ? ',' : '\n');
    }
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == name) return columns[k];
    throw DomainError("csv column '" + name + "' not found");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DomainError("read_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw DomainError("read_csv: empty file " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    t.columns.resize(t.header.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t k = 0;
        while (std::getline(ls, cell, ',') && k < t.columns.size())
            t.columns[k++].push_back(std::stod(cell));
    }
    return t;
}

void write_manifest(const std::string& dir, const std::string& command,
                    const json& config_echo, double wall_seconds,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["config"] = config_echo;
    m["version"] = kVersion;
    m["wall_time_s"] = wall_seconds;
#ifdef _OPENMP
    m["threads"] = omp_get_max_threads();
#else
    m["threads"] = 1;
#endif
    m["outputs"] = outputs;
    std::ofstream os(std::filesystem::path(dir) / "manifest.json");
    os << m.dump(2) << '\n';
}

std::string prepare_output_dir(const std::string& dir) {
    std::filesystem::path p = dir.empty() ? "." : std::filesystem::path(dir);
    if (p.is_relative()) {
        if (const char* root = std::getenv(kOutputRootEnv)) p = std::filesystem::path(root) / p;
    }
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + p.string());
    return p.string();
}

}  // namespace kinklab
