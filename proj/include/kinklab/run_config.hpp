#ifndef KINKLAB_RUN_CONFIG_HPP
#define KINKLAB_RUN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinklab/field_solver.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputRootEnv = "KINKLAB_OUTPUT_ROOT";

using json = nlohmann::json;

/// Throws ConfigError when j contains a key outside `allowed`.
void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where);

/// Model selection: a builtin name or a custom even polynomial
///   {"name": "...", "coeffs": [...], "phi_plus": x}.
/// Custom models are validated before use.
Potential model_from_json(const json& j);

Grid grid_from_json(const json& j);

/// Initial data kinds understood by the evolve/modulate commands.
struct InitialDataSpec {
    std::string kind;  // kink | antikink | pair_superposition | sg_exact_pair | vacuum
    double a = 0.0;
    double v = 0.0;
    double v_sep = 0.0;
    double t0 = 0.0;
};

InitialDataSpec initial_data_from_json(const json& j);

struct EvolveConfig {
    json echo;  // config as parsed, echoed into the manifest
    Potential model;
    InitialDataSpec initial;
    Grid grid;
    double dt = 0.0;
    double t_end = 0.0;
    double energy_stride = 0.1;
    double snapshot_stride = 0.0;  // 0 = final snapshot only
    std::string output_dir;

    static EvolveConfig parse(const json& j);
};

struct ModulateConfig {
    json echo;
    Potential model;
    InitialDataSpec initial;
    Grid grid;
    double dt = 0.0;
    double t_end = 0.0;
    double stride = 0.1;
    double t_start = 0.0;
    double z_min = 6.0;
    std::optional<std::pair<double, double>> guess;
    std::optional<std::pair<double, double>> fit_window;
    std::string output_dir;

    static ModulateConfig parse(const json& j);
};

struct ReducedOdeConfig {
    json echo;
    std::optional<std::string> model;  // builtin force table when set
    double amplitude_A = 0.0;          // analytic force otherwise
    double z0 = 0.0, dz0 = 0.0;
    double t0 = 0.0, t_end = 0.0, dt = 0.0;
    double forcing_eps = 0.0;          // optional v(t) = eps t^-3 forcing
    std::string output_dir;

    static ReducedOdeConfig parse(const json& j);
};

/// CFL and padding validation shared by evolve-type configs; throws
/// ConfigError with the failing field.
void validate_evolution_numerics(const Grid& g, double dt, double t_end, double t_begin,
                                 double max_kink_abs);

// --- small output helpers ----------------------------------------------------

/// Columns written side by side; all columns must share a length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Writes manifest.json (config echo, version, wall time, thread count)
/// beside the command outputs.
void write_manifest(const std::string& dir, const std::string& command,
                    const json& config_echo, double wall_seconds,
                    const std::vector<std::string>& outputs);

/// Creates dir (recursively) and returns it; falls back to the env output
/// root when dir is relative and the variable is set.
std::string prepare_output_dir(const std::string& dir);

}  // namespace kinklab

#endif
