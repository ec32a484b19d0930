#include "kinklab/verify_sg.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "kinklab/asymptotic_ode.hpp"
#include "kinklab/field_solver.hpp"
#include "kinklab/modulation.hpp"

namespace kinklab {

void VerifySgReport::add(const std::string& name, bool ok, double value,
                         double threshold, const std::string& detail) {
    checks.push_back({name, ok, value, threshold, detail});
    all_passed = all_passed && ok;
}

nlohmann::json VerifySgReport::to_json() const {
    nlohmann::json j;
    j["all_passed"] = all_passed;
    j["wall_time_s"] = wall_seconds;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"threshold", c.threshold},
                               {"detail", c.detail}});
    }
    return j;
}

namespace {

double exact_pair_sup_error(const FieldState& s) {
    double sup = 0.0;
    for (int i = 0; i < s.grid.n; ++i) {
        sup = std::max(sup,
                       std::abs(s.phi[i] - sg_exact_pair_value(s.t, s.grid.x(i))));
    }
    return sup;
}

}  // namespace

VerifySgReport verify_sg(const VerifySgOptions& opt) {
    const auto t_begin = std::chrono::steady_clock::now();
    VerifySgReport rep;
    Potential sg = make_builtin("sine_gordon");
    KinkProfile profile = KinkProfile::build(sg);

    // --- exact-pair evolution against the closed form --------------------
    {
        const auto run_start = std::chrono::steady_clock::now();
        Grid g{-40.0, 40.0, int(std::lround(80.0 / opt.dx)) + 1};
        FieldState s = make_sg_exact_pair(g, 1.0);
        const EnergyTriple e0 = energy(s, sg);

        double max_drift = 0.0;
        std::vector<Observer> obs{{1.0, [&](const FieldState& st) {
                                       const EnergyTriple e = energy(st, sg);
                                       max_drift = std::max(
                                           max_drift,
                                           std::abs(e.total - e0.total) / e0.total);
                                   }}};
        evolve(s, sg, opt.t_end, opt.dt, obs);
        const double err = exact_pair_sup_error(s);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start)
                .count();

        rep.add("closed-form sup error", err <= 1e-3, err, 1e-3);
        rep.add("run time (s)", secs <= 60.0, secs, 60.0);
        rep.add("energy drift (relative)", max_drift <= 1e-5, max_drift, 1e-5);
        rep.add("total energy", std::abs(e0.total - 16.0) <= 1e-3, e0.total, 16.0,
                "expected 16 +- 1e-3");

        // spatial convergence: halve dx and dt together (fixed CFL)
        Grid g2{-40.0, 40.0, 2 * (g.n - 1) + 1};
        FieldState s2 = make_sg_exact_pair(g2, 1.0);
        evolve(s2, sg, opt.t_end, 0.5 * opt.dt);
        const double err2 = exact_pair_sup_error(s2);
        const double factor = err / err2;
        std::ostringstream det;
        det << "err(dx)=" << err << " err(dx/2)=" << err2;
        rep.add("halving dx error factor", factor >= 3.5, factor, 3.5, det.str());
    }

    // --- modulation tracking and the separation-law fit ------------------
    {
        Grid g{-55.0, 55.0, int(std::lround(110.0 / opt.dx)) + 1};
        FieldState s = make_sg_exact_pair(g, 1.0);
        TrackConfig tc;
        tc.stride = 0.1;
        tc.t_start = opt.fit_lo;
        tc.t_end = opt.track_t_end;
        tc.dt = opt.dt;
        tc.mod.z_min = 5.5;
        TrajectoryRecord rec = track(s, sg, profile, tc);

        if (rec.partial) {
            rep.add("modulation tracking", false, 0.0, 0.0, rec.failure);
        } else {
            double worst = 0.0;
            double v2t = 0.0;
            double best_dt = 1e9;
            for (const auto& f : rec.frames) {
                if (f.t >= opt.fit_lo - 1e-6 && f.t <= opt.fit_hi + 1e-6)
                    worst = std::max(worst, std::abs(f.x2 - std::log(2.0 * f.t)));
                if (std::abs(f.t - 20.0) < best_dt) {
                    best_dt = std::abs(f.t - 20.0);
                    v2t = f.v2 * f.t;
                }
            }
            rep.add("max |x2 - log 2t| on the fit window", worst <= 0.05, worst, 0.05);
            rep.add("v2 * t at t=20", std::abs(v2t - 1.0) <= 0.03, v2t, 1.0,
                    "expected 1 +- 0.03");

            std::vector<double> ts = rec.times(), xs = rec.x2_series();
            LogLawFit fit = fit_log_law(ts, xs, sg.curvature, opt.fit_lo, opt.fit_hi);
            rep.add("separation-law amplitude", std::abs(fit.A_hat - 2.0) <= 0.04,
                    fit.A_hat, 2.0, "expected 2 within 2%");
        }
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return rep;
}

}  // namespace kinklab
