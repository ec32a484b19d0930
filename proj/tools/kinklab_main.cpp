// Command-line front end: model constants, kink profiles, force tables,
// spectra, field evolution, modulation tracking, reduced-law fits.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "kinklab/asymptotic_ode.hpp"
#include "kinklab/errors.hpp"
#include "kinklab/field_solver.hpp"
#include "kinklab/interaction.hpp"
#include "kinklab/kernels.hpp"
#include "kinklab/kink_profile.hpp"
#include "kinklab/linearization.hpp"
#include "kinklab/modulation.hpp"
#include "kinklab/run_config.hpp"
#include "kinklab/verify_sg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kinklab;
namespace fs = std::filesystem;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(is);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    os << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

FieldState build_initial_state(const InitialDataSpec& spec, const Grid& grid,
                               const Potential& model, const KinkProfile& profile) {
    if (spec.kind == "kink") return make_kink_state(grid, profile, spec.a, spec.v, false);
    if (spec.kind == "antikink")
        return make_kink_state(grid, profile, spec.a, spec.v, true);
    if (spec.kind == "pair_superposition")
        return make_pair_superposition(grid, profile, spec.a, spec.v_sep);
    if (spec.kind == "sg_exact_pair") {
        if (model.name != "sine_gordon")
            throw ConfigError("sg_exact_pair initial data requires the sine_gordon model");
        return make_sg_exact_pair(grid, spec.t0);
    }
    return make_vacuum(grid, model.phi_plus);
}

int cmd_constants(const std::string& model_name, const std::string& out_dir) {
    Timer timer;
    Potential model = make_builtin(model_name);
    KinkProfile profile = KinkProfile::build(model);
    KinkConstants mc = kink_constants(profile);
    KinkConstants nc = kink_constants_normalized(profile);
    const double kq = profile.kappa();
    const double kt = kappa_tail_limit(profile);

    json out;
    out["model"] = model_name;
    out["kappa"] = kq;
    out["A"] = constant_A(profile);
    out["mass"] = mc.mass;
    out["energy"] = mc.energy;
    out["kappa_tail_route"] = kt;
    out["A_tail_route"] = constant_A_with_kappa(profile, kt);
    out["mass_normalized"] = nc.mass;
    out["energy_normalized"] = nc.energy;
    out["routes_agree_within"] = std::abs(kq - kt);

    const std::string dir = prepare_output_dir(out_dir);
    write_json(fs::path(dir) / "constants.json", out);
    write_manifest(dir, "constants", json{{"model", model_name}}, timer.seconds(),
                   {"constants.json"});
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_profile(const std::string& model_name, double x_max, int nodes, bool normalized,
                const std::string& out_dir) {
    Timer timer;
    KinkProfile profile = KinkProfile::build(make_builtin(model_name), x_max, nodes);
    const double scale = normalized ? 1.0 : profile.record().time_scale;

    std::vector<double> xs, h, dh, d2h;
    for (double x : profile.x_table()) {
        const double xm = x * scale;
        xs.push_back(xm);
        h.push_back(normalized ? profile.eval(x, 0) : profile.eval_model(xm, 0));
        dh.push_back(normalized ? profile.eval(x, 1) : profile.eval_model(xm, 1));
        d2h.push_back(normalized ? profile.eval(x, 2) : profile.eval_model(xm, 2));
    }
    const std::string dir = prepare_output_dir(out_dir);
    write_csv((fs::path(dir) / "profile.csv").string(), {"x", "H", "dH", "d2H"},
              {&xs, &h, &dh, &d2h});
    write_manifest(dir, "profile",
                   json{{"model", model_name},
                        {"x_max", x_max},
                        {"nodes", nodes},
                        {"normalized", normalized}},
                   timer.seconds(), {"profile.csv"});
    std::cout << "wrote " << (fs::path(dir) / "profile.csv").string() << '\n';
    return 0;
}

int cmd_force(const std::string& model_name, double zmin, double zmax, int nodes,
              const std::string& out_dir) {
    Timer timer;
    if (zmin < 1.0 || zmax <= zmin || nodes < 2)
        throw ConfigError("force: need 1 <= zmin < zmax and nodes >= 2");
    KinkProfile profile = KinkProfile::build(make_builtin(model_name));
    const double A = constant_A(profile);

    std::vector<double> z(nodes), f(nodes), asym(nodes), ratio(nodes);
    for (int i = 0; i < nodes; ++i) {
        z[i] = zmin + (zmax - zmin) * i / (nodes - 1);
        f[i] = force(profile, z[i]);
        asym[i] = A * A * std::exp(-z[i]);
        ratio[i] = f[i] / asym[i];
    }
    const std::string dir = prepare_output_dir(out_dir);
    write_csv((fs::path(dir) / "force.csv").string(), {"z", "F", "A2_exp_minus_z", "ratio"},
              {&z, &f, &asym, &ratio});
    write_text(fs::path(dir) / "plots.gp",
               "set datafile separator ','\n"
               "set logscale y\n"
               "set xlabel 'z'; set ylabel 'force'\n"
               "plot 'force.csv' skip 1 using 1:2 with lines title 'F(z)', \\\n"
               "     'force.csv' skip 1 using 1:3 with lines title 'A^2 e^{-z}'\n");
    write_manifest(dir, "force",
                   json{{"model", model_name}, {"zmin", zmin}, {"zmax", zmax},
                        {"nodes", nodes}},
                   timer.seconds(), {"force.csv", "plots.gp"});
    std::cout << "wrote " << (fs::path(dir) / "force.csv").string() << '\n';
    return 0;
}

int cmd_spectrum(const std::string& model_name, double dx, double domain, int k,
                 const std::string& out_dir) {
    Timer timer;
    if (domain < 20.0) throw ConfigError("spectrum: domain half-width must be >= 20");
    KinkProfile profile = KinkProfile::build(make_builtin(model_name));
    int n = int(std::lround(2.0 * domain / dx)) + 1;
    if (n % 2 == 0) ++n;
    Grid g{-domain, domain, n};
    SpectrumResult res = spectrum_richardson(profile, g, k, OperatorUnits::model);

    json out;
    out["model"] = model_name;
    out["eigenvalues"] = res.eigenvalues;
    out["eigenvalues_fine"] = res.eigenvalues_fine;
    out["eigenvalues_coarse"] = res.eigenvalues_coarse;
    out["continuum_edge"] = res.continuum_edge;
    out["zero_mode_residual"] = res.zero_mode_residual;
    out["zero_mode_overlap"] = res.zero_mode_overlap;

    const std::string dir = prepare_output_dir(out_dir);
    write_json(fs::path(dir) / "spectrum.json", out);
    write_manifest(dir, "spectrum",
                   json{{"model", model_name}, {"dx", dx}, {"domain", domain}, {"k", k}},
                   timer.seconds(), {"spectrum.json"});
    std::cout << out.dump(2) << '\n';
    return 0;
}

void write_snapshot(const fs::path& path, const FieldState& s) {
    std::vector<double> x(s.grid.n);
    for (int i = 0; i < s.grid.n; ++i) x[i] = s.grid.x(i);
    write_csv(path.string(), {"x", "phi", "pi"}, {&x, &s.phi, &s.pi});
}

int cmd_evolve(const std::string& config_path, const std::string& out_override) {
    Timer timer;
    EvolveConfig cfg = EvolveConfig::parse(load_config(config_path));
    const std::string dir =
        prepare_output_dir(out_override.empty() ? cfg.output_dir : out_override);

    KinkProfile profile = KinkProfile::build(cfg.model);
    FieldState s = build_initial_state(cfg.initial, cfg.grid, cfg.model, profile);

    std::vector<double> ts, ek, ep, et;
    std::vector<std::string> outputs = {"series.csv"};
    int snap_index = 0;
    std::vector<Observer> obs;
    obs.push_back({cfg.energy_stride, [&](const FieldState& st) {
                       EnergyTriple e = energy(st, cfg.model);
                       ts.push_back(st.t);
                       ek.push_back(e.kinetic);
                       ep.push_back(e.potential);
                       et.push_back(e.total);
                   }});
    if (cfg.snapshot_stride > 0.0) {
        obs.push_back({cfg.snapshot_stride, [&](const FieldState& st) {
                           char name[64];
                           std::snprintf(name, sizeof name, "snapshot_%04d.csv",
                                         snap_index++);
                           write_snapshot(fs::path(dir) / name, st);
                           outputs.push_back(name);
                       }});
    }
    evolve(s, cfg.model, cfg.t_end, cfg.dt, obs);

    write_csv((fs::path(dir) / "series.csv").string(), {"t", "E_k", "E_p", "E"},
              {&ts, &ek, &ep, &et});
    write_snapshot(fs::path(dir) / "final.csv", s);
    outputs.push_back("final.csv");
    write_text(fs::path(dir) / "plots.gp",
               "set datafile separator ','\n"
               "set xlabel 't'; set ylabel 'energy'\n"
               "plot 'series.csv' skip 1 using 1:4 with lines title 'E total'\n");
    outputs.push_back("plots.gp");
    write_manifest(dir, "evolve", cfg.echo, timer.seconds(), outputs);
    std::cout << "evolved to t=" << s.t << ", outputs in " << dir << '\n';
    return 0;
}

int cmd_modulate(const std::string& config_path, const std::string& out_override) {
    Timer timer;
    ModulateConfig cfg = ModulateConfig::parse(load_config(config_path));
    const std::string dir =
        prepare_output_dir(out_override.empty() ? cfg.output_dir : out_override);

    KinkProfile profile = KinkProfile::build(cfg.model);
    FieldState s = build_initial_state(cfg.initial, cfg.grid, cfg.model, profile);

    TrackConfig tc;
    tc.stride = cfg.stride;
    tc.t_start = cfg.t_start;
    tc.t_end = cfg.t_end;
    tc.dt = cfg.dt;
    tc.mod.z_min = cfg.z_min;
    tc.initial_guess = cfg.guess;
    TrajectoryRecord rec = track(s, cfg.model, profile, tc);

    std::vector<double> t, x1, x2, z, v1, v2, p1, p2, gh1, e;
    for (std::size_t i = 0; i < rec.frames.size(); ++i) {
        const auto& f = rec.frames[i];
        t.push_back(f.t);
        x1.push_back(f.x1);
        x2.push_back(f.x2);
        z.push_back(f.x2 - f.x1);
        v1.push_back(f.v1);
        v2.push_back(f.v2);
        p1.push_back(f.p1);
        p2.push_back(f.p2);
        gh1.push_back(f.g_norm_h1);
        e.push_back(i < rec.energies.size() ? rec.energies[i].total : 0.0);
    }
    write_csv((fs::path(dir) / "trajectory.csv").string(),
              {"t", "x1", "x2", "z", "v1", "v2", "p1", "p2", "g_h1", "E"},
              {&t, &x1, &x2, &z, &v1, &v2, &p1, &p2, &gh1, &e});

    json fits;
    fits["partial"] = rec.partial;
    if (rec.partial) fits["failure"] = rec.failure;
    if (!rec.partial && cfg.fit_window && t.size() >= 20) {
        LogLawFit fit = fit_log_law(t, x2, cfg.model.curvature, cfg.fit_window->first,
                                    cfg.fit_window->second);
        fits["log_law"] = {{"A_hat", fit.A_hat},
                           {"t0_hat", fit.t0_hat},
                           {"rms", fit.rms_residual},
                           {"window", {cfg.fit_window->first, cfg.fit_window->second}}};
    }
    if (t.size() >= 8) {
        // decay-rate fit of the residual H1 norm: g_h1 ~ C t^{-q}
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (gh1[i] <= 0.0) continue;
            const double lx = std::log(t[i]), ly = std::log(gh1[i]);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++m;
        }
        if (m >= 8) {
            const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            fits["g_h1_decay_exponent"] = -slope;
        }
    }
    write_json(fs::path(dir) / "fits.json", fits);
    write_text(fs::path(dir) / "plots.gp",
               "set datafile separator ','\n"
               "set xlabel 't'\n"
               "plot 'trajectory.csv' skip 1 using 1:3 with lines title 'x2(t)', \\\n"
               "     'trajectory.csv' skip 1 using 1:(log(2*$1)) with lines title 'log 2t'\n");
    write_manifest(dir, "modulate", cfg.echo, timer.seconds(),
                   {"trajectory.csv", "fits.json", "plots.gp"});
    std::cout << (rec.partial ? "PARTIAL record: " + rec.failure
                              : "tracked " + std::to_string(rec.frames.size()) + " frames")
              << ", outputs in " << dir << '\n';
    return rec.partial ? 1 : 0;
}

int cmd_reduced_ode(const std::string& config_path, const std::string& out_override) {
    Timer timer;
    ReducedOdeConfig cfg = ReducedOdeConfig::parse(load_config(config_path));
    const std::string dir =
        prepare_output_dir(out_override.empty() ? cfg.output_dir : out_override);

    ForceTable table;
    if (cfg.model) {
        KinkProfile profile = KinkProfile::build(make_builtin(*cfg.model));
        table = ForceTable::build(profile);
    } else {
        table = ForceTable::analytic(cfg.amplitude_A);
    }
    std::function<double(double)> forcing;
    if (cfg.forcing_eps != 0.0) {
        const double eps = cfg.forcing_eps;
        forcing = [eps](double t) { return eps / (t * t * t); };
    }
    ReducedSolution sol =
        solve_reduced(table, cfg.z0, cfg.dz0, cfg.t0, cfg.t_end, cfg.dt, forcing);

    write_csv((fs::path(dir) / "reduced.csv").string(), {"t", "z", "dz", "conserved"},
              {&sol.t, &sol.z, &sol.dz, &sol.conserved});

    json out;
    out["conserved_drift"] = sol.max_conserved_drift;
    if (sol.t.size() >= 32) {
        std::vector<double> half(sol.z.size());
        for (std::size_t i = 0; i < sol.z.size(); ++i) half[i] = 0.5 * sol.z[i];
        LogLawFit fit = fit_log_law(sol.t, half, 1.0, sol.t.front() + 0.1 * (sol.t.back() - sol.t.front()),
                                    sol.t.back());
        out["log_law"] = {{"A_hat", fit.A_hat}, {"t0_hat", fit.t0_hat},
                          {"rms", fit.rms_residual}};
    }
    write_json(fs::path(dir) / "fit.json", out);
    write_manifest(dir, "reduced-ode", cfg.echo, timer.seconds(),
                   {"reduced.csv", "fit.json"});
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_fit(const std::string& input, double t_min, double t_max, double curvature,
            const std::string& column, const std::string& out_dir) {
    Timer timer;
    CsvTable tab = read_csv(input);
    const std::vector<double>& t = tab.column("t");
    const std::vector<double>& x = tab.column(column);
    if (t_max <= t_min) {
        t_min = t.front();
        t_max = t.back();
    }
    LogLawFit fit = fit_log_law(t, x, curvature, t_min, t_max);
    json out = {{"A_hat", fit.A_hat},
                {"t0_hat", fit.t0_hat},
                {"rms", fit.rms_residual},
                {"window", {t_min, t_max}}};
    const std::string dir = prepare_output_dir(out_dir);
    write_json(fs::path(dir) / "fit.json", out);
    write_manifest(dir, "fit",
                   json{{"input", input}, {"column", column}, {"curvature", curvature}},
                   timer.seconds(), {"fit.json"});
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_verify_sg(bool fast, const std::string& out_dir) {
    VerifySgOptions opt;
    if (fast) {
        opt.dx = 0.02;
        opt.dt = 0.01;
    }
    VerifySgReport rep = verify_sg(opt);
    for (const auto& c : rep.checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.value
                  << " (threshold " << c.threshold << ") " << c.detail << '\n';
    }
    std::cout << (rep.all_passed ? "verify-sg: PASS" : "verify-sg: FAIL") << " ("
              << rep.wall_seconds << " s)\n";
    const std::string dir = prepare_output_dir(out_dir);
    write_json(fs::path(dir) / "verify_sg.json", rep.to_json());
    write_manifest(dir, "verify-sg", json{{"fast", fast}}, rep.wall_seconds,
                   {"verify_sg.json"});
    return rep.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D scalar-field kink dynamics laboratory"};
    app.require_subcommand(1);

    std::string output_dir = "out";
    int threads = 0;
    long seed = 0;
    app.add_option("--output", output_dir, "output directory (default 'out')");
    app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");
    app.add_option("--seed", seed, "seed recorded for stochastic commands");

    std::string model = "sine_gordon";
    double x_max = 20.0, zmin = 2.0, zmax = 20.0, dx = 0.01, domain = 40.0;
    int nodes = 4096, fnodes = 64, k = 3;
    bool normalized = false, fast = false;
    std::string config_path, input, column = "x2";
    double t_min = 0.0, t_max = 0.0, curvature = 1.0;

    auto* c_const = app.add_subcommand("constants", "tail amplitude, mass, energy, A");
    c_const->add_option("--model", model)->required();

    auto* c_prof = app.add_subcommand("profile", "dump the kink profile as CSV");
    c_prof->add_option("--model", model)->required();
    c_prof->add_option("--x-max", x_max);
    c_prof->add_option("--nodes", nodes);
    c_prof->add_flag("--normalized", normalized, "normalized instead of model units");

    auto* c_force = app.add_subcommand("force", "attraction force table as CSV");
    c_force->add_option("--model", model)->required();
    c_force->add_option("--zmin", zmin)->required();
    c_force->add_option("--zmax", zmax)->required();
    c_force->add_option("--nodes", fnodes)->required();

    auto* c_spec = app.add_subcommand("spectrum", "linearization eigenvalues as JSON");
    c_spec->add_option("--model", model)->required();
    c_spec->add_option("--dx", dx);
    c_spec->add_option("--domain", domain, "half-width of the truncated domain");
    c_spec->add_option("--k", k, "number of eigenvalues (<= 10)");

    auto* c_evo = app.add_subcommand("evolve", "field evolution from a JSON config");
    c_evo->add_option("--config", config_path)->required()->check(CLI::ExistingFile);

    auto* c_mod = app.add_subcommand("modulate", "evolution + modulation tracking");
    c_mod->add_option("--config", config_path)->required()->check(CLI::ExistingFile);

    auto* c_red = app.add_subcommand("reduced-ode", "reduced separation law solver");
    c_red->add_option("--config", config_path)->required()->check(CLI::ExistingFile);

    auto* c_fit = app.add_subcommand("fit", "separation-law fit of a trajectory CSV");
    c_fit->add_option("--input", input)->required()->check(CLI::ExistingFile);
    c_fit->add_option("--t-min", t_min);
    c_fit->add_option("--t-max", t_max);
    c_fit->add_option("--curvature", curvature);
    c_fit->add_option("--column", column);

    auto* c_ver = app.add_subcommand("verify-sg", "end-to-end sine-Gordon verification");
    c_ver->add_flag("--fast", fast, "coarser grid (diagnostics only)");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    (void)seed;

    try {
        if (*c_const) return cmd_constants(model, output_dir);
        if (*c_prof) return cmd_profile(model, x_max, nodes, normalized, output_dir);
        if (*c_force) return cmd_force(model, zmin, zmax, fnodes, output_dir);
        if (*c_spec) return cmd_spectrum(model, dx, domain, k, output_dir);
        if (*c_evo) return cmd_evolve(config_path, output_dir);
        if (*c_mod) return cmd_modulate(config_path, output_dir);
        if (*c_red) return cmd_reduced_ode(config_path, output_dir);
        if (*c_fit) return cmd_fit(input, t_min, t_max, curvature, column, output_dir);
        if (*c_ver) return cmd_verify_sg(fast, output_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
