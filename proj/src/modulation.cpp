#include "kinklab/modulation.hpp"

#include <cmath>
#include <sstream>

#include "kinklab/errors.hpp"
#include "kinklab/quadrature.hpp"

namespace kinklab {

namespace {

// Trapezoid inner product on the solver grid.
double dot(const std::vector<double>& a, const std::vector<double>& b, double dx) {
    double s = 0.0, comp = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double term = w * a[i] * b[i];
        const double y = term - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s * dx;
}

// C2 smoothstep cutoff: 1 below 1/3, 0 above 2/3, quintic blend between.
double cutoff(double u) {
    if (u <= 1.0 / 3.0) return 1.0;
    if (u >= 2.0 / 3.0) return 0.0;
    const double s = 3.0 * (u - 1.0 / 3.0);
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double cutoff_deriv(double u) {
    if (u <= 1.0 / 3.0 || u >= 2.0 / 3.0) return 0.0;
    const double s = 3.0 * (u - 1.0 / 3.0);
    const double om = 1.0 - s;
    return -90.0 * s * s * om * om;  // -3 S'(s), S the quintic smoothstep
}

struct KinkArrays {
    std::vector<double> h1, dh1, d2h1, h2, dh2, d2h2;
};

void fill_kink_arrays(const FieldState& s, const KinkProfile& prof, double x1, double x2,
                      KinkArrays& k, bool second_derivs) {
    const int n = s.grid.n;
    k.h1.resize(n); k.dh1.resize(n); k.h2.resize(n); k.dh2.resize(n);
    if (second_derivs) { k.d2h1.resize(n); k.d2h2.resize(n); }
    for (int i = 0; i < n; ++i) {
        const double x = s.grid.x(i);
        k.h1[i] = prof.eval_model(x - x1, 0);
        k.dh1[i] = prof.eval_model(x - x1, 1);
        k.h2[i] = prof.eval_model(x - x2, 0);
        k.dh2[i] = prof.eval_model(x - x2, 1);
        if (second_derivs) {
            k.d2h1[i] = prof.eval_model(x - x1, 2);
            k.d2h2[i] = prof.eval_model(x - x2, 2);
        }
    }
}

void residual_field(const FieldState& s, const KinkArrays& k, double vac,
                    std::vector<double>& g) {
    const int n = s.grid.n;
    g.resize(n);
    for (int i = 0; i < n; ++i) g[i] = s.phi[i] - (vac - k.h1[i] + k.h2[i]);
}

std::vector<double> centered_derivative(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    d[0] = (f[1] - f[0]) / dx;
    d[n - 1] = (f[n - 1] - f[n - 2]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    return d;
}

}  // namespace

std::optional<std::pair<double, double>> guess_positions(const FieldState& s) {
    // Zero crossings of phi (midpoint of the two vacua for even potentials).
    std::vector<double> crossings;
    for (int i = 0; i + 1 < s.grid.n; ++i) {
        const double a = s.phi[i], b = s.phi[i + 1];
        if (a == 0.0) crossings.push_back(s.grid.x(i));
        else if (a * b < 0.0)
            crossings.push_back(s.grid.x(i) + s.grid.dx() * a / (a - b));
    }
    if (crossings.size() < 2) return std::nullopt;
    return std::make_pair(crossings.front(), crossings.back());
}

Decomposition decompose(const FieldState& s, const KinkProfile& profile,
                        double x1_guess, double x2_guess, const ModOptions& opt) {
    if (x2_guess - x1_guess < opt.z_min)
        throw RegimeError("decompose: initial guess separation below z_min");

    const double dx = s.grid.dx();
    const double vac = profile.model_potential().phi_plus;
    Decomposition d;
    d.x1 = x1_guess;
    d.x2 = x2_guess;

    KinkArrays k;
    for (int it = 0; it < opt.max_newton_iters; ++it) {
        fill_kink_arrays(s, profile, d.x1, d.x2, k, true);
        residual_field(s, k, vac, d.g);

        const double mass = dot(k.dh1, k.dh1, dx);
        const double r1 = dot(k.dh1, d.g, dx);
        const double r2 = dot(k.dh2, d.g, dx);
        d.mass = mass;
        d.orth_residual = std::max(std::abs(r1), std::abs(r2)) / mass;
        d.newton_iters = it;
        if (d.orth_residual <= opt.orth_tol) return d;

        const double gram = dot(k.dh1, k.dh2, dx);
        const double j11 = -mass - dot(k.d2h1, d.g, dx);
        const double j22 = mass - dot(k.d2h2, d.g, dx);
        const double det = j11 * j22 + gram * gram;  // j12 = gram, j21 = -gram
        if (std::abs(det) < 1e-14 * mass * mass)
            throw ConvergenceError("decompose: singular Newton system");
        const double dx1 = (-r1 * j22 + r2 * gram) / det;
        const double dx2 = (-j11 * r2 - gram * r1) / det;
        d.x1 += dx1;
        d.x2 += dx2;
        if (d.x2 - d.x1 < opt.z_min) {
            std::ostringstream os;
            os << "decompose: separation " << d.x2 - d.x1 << " fell below z_min "
               << opt.z_min;
            throw RegimeError(os.str());
        }
    }
    std::ostringstream os;
    os << "decompose: no convergence in " << opt.max_newton_iters
       << " iterations (last residual " << d.orth_residual << ")";
    throw ConvergenceError(os.str());
}

std::pair<double, double> velocities(const FieldState& s, const Decomposition& d,
                                     const KinkProfile& profile, const ModOptions& opt) {
    const double dx = s.grid.dx();
    KinkArrays k;
    fill_kink_arrays(s, profile, d.x1, d.x2, k, true);

    const double mass = d.mass;
    const double gram = dot(k.dh1, k.dh2, dx);
    const double a11 = -mass - dot(k.d2h1, d.g, dx);
    const double a12 = gram;
    const double a21 = -gram;
    const double a22 = mass - dot(k.d2h2, d.g, dx);
    const double b1 = -dot(k.dh1, s.pi, dx);
    const double b2 = -dot(k.dh2, s.pi, dx);

    // exact 2-norm condition number of the 2x2 system
    const double fro2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
    const double det = a11 * a22 - a12 * a21;
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    const double cond = (fro2 + disc) / (2.0 * std::abs(det));
    if (cond > opt.max_condition)
        throw RegimeError("velocity system conditioning " + std::to_string(cond) +
                          " exceeds " + std::to_string(opt.max_condition));

    const double v1 = (b1 * a22 - a12 * b2) / det;
    const double v2 = (a11 * b2 - a21 * b1) / det;
    return {v1, v2};
}

std::pair<double, double> corrected_momenta(const FieldState& s, const Decomposition& d,
                                            const KinkProfile& profile) {
    const int n = s.grid.n;
    const double dx = s.grid.dx();
    const double z = d.x2 - d.x1;

    KinkArrays k;
    fill_kink_arrays(s, profile, d.x1, d.x2, k, false);
    std::vector<double> dg = centered_derivative(d.g, dx);

    std::vector<double> w1(n), w2(n);
    for (int i = 0; i < n; ++i) {
        const double u = (s.grid.x(i) - d.x1) / z;
        const double chi1 = cutoff(u);
        const double dchi1 = cutoff_deriv(u) / z;
        // d/dx (chi1 g) and d/dx (chi2 g) with chi2 = 1 - chi1
        const double dchi1g = dchi1 * d.g[i] + chi1 * dg[i];
        const double dchi2g = -dchi1 * d.g[i] + (1.0 - chi1) * dg[i];
        w1[i] = k.dh1[i] - dchi1g;
        w2[i] = -(k.dh2[i] + dchi2g);
    }
    const double p1 = dot(w1, s.pi, dx) / d.mass;
    const double p2 = dot(w2, s.pi, dx) / d.mass;
    return {p1, p2};
}

ModulationFrame analyze(const FieldState& s, const KinkProfile& profile, double x1_guess,
                        double x2_guess, const ModOptions& opt) {
    Decomposition d = decompose(s, profile, x1_guess, x2_guess, opt);
    auto [v1, v2] = velocities(s, d, profile, opt);
    auto [p1, p2] = corrected_momenta(s, d, profile);

    ModulationFrame f;
    f.t = s.t;
    f.x1 = d.x1;
    f.x2 = d.x2;
    f.orth_residual = d.orth_residual;
    f.v1 = v1;
    f.v2 = v2;
    f.p1 = p1;
    f.p2 = p2;

    const double dx = s.grid.dx();
    std::vector<double> dg = centered_derivative(d.g, dx);
    // forward-difference derivative energy for the discrete H1 norm
    double grad = 0.0;
    for (int i = 0; i + 1 < s.grid.n; ++i) {
        const double dd = (d.g[i + 1] - d.g[i]) / dx;
        grad += dd * dd;
    }
    f.g_norm_h1 = std::sqrt(dot(d.g, d.g, dx) + grad * dx);
    f.dtphi_norm = std::sqrt(dot(s.pi, s.pi, dx));
    return f;
}

std::vector<double> TrajectoryRecord::times() const {
    std::vector<double> t;
    t.reserve(frames.size());
    for (const auto& f : frames) t.push_back(f.t);
    return t;
}

std::vector<double> TrajectoryRecord::z() const {
    std::vector<double> v;
    v.reserve(frames.size());
    for (const auto& f : frames) v.push_back(f.x2 - f.x1);
    return v;
}

std::vector<double> TrajectoryRecord::x2_series() const {
    std::vector<double> v;
    v.reserve(frames.size());
    for (const auto& f : frames) v.push_back(f.x2);
    return v;
}

std::vector<double> TrajectoryRecord::p() const {
    std::vector<double> v;
    v.reserve(frames.size());
    for (const auto& f : frames) v.push_back(f.p2 - f.p1);
    return v;
}

std::vector<double> TrajectoryRecord::p_prime() const {
    std::vector<double> pp(frames.size(), 0.0);
    if (frames.size() < 3) return pp;
    for (std::size_t i = 1; i + 1 < frames.size(); ++i) {
        const double dt = frames[i + 1].t - frames[i - 1].t;
        pp[i] = ((frames[i + 1].p2 - frames[i + 1].p1) -
                 (frames[i - 1].p2 - frames[i - 1].p1)) / dt;
    }
    pp[0] = pp[1];
    pp[frames.size() - 1] = pp[frames.size() - 2];
    return pp;
}

TrajectoryRecord track(FieldState& s, const Potential& pot, const KinkProfile& profile,
                       const TrackConfig& cfg) {
    TrajectoryRecord rec;
    double gx1, gx2;
    if (cfg.initial_guess) {
        gx1 = cfg.initial_guess->first;
        gx2 = cfg.initial_guess->second;
    } else {
        auto g = guess_positions(s);
        if (!g) throw RegimeError("track: no zero crossings to seed the positions");
        gx1 = g->first;
        gx2 = g->second;
    }

    auto take_frame = [&](const FieldState& state) {
        if (rec.partial) return;
        if (state.t < cfg.t_start - 1e-9) return;
        try {
            ModulationFrame f = analyze(state, profile, gx1, gx2, cfg.mod);
            gx1 = f.x1;
            gx2 = f.x2;
            rec.frames.push_back(f);
            if (cfg.record_energy) rec.energies.push_back(energy(state, pot));
        } catch (const std::exception& e) {
            rec.partial = true;
            rec.failure = e.what();
        }
    };

    if (s.t >= cfg.t_start - 1e-9) take_frame(s);  // initial frame
    std::vector<Observer> obs{{cfg.stride, take_frame}};
    evolve(s, pot, cfg.t_end, cfg.dt, obs);
    if (rec.partial)
        return rec;
    return rec;
}

}  // namespace kinklab
