#include "kinklab/asymptotic_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinklab/errors.hpp"
#include "kinklab/quadrature.hpp"

namespace kinklab {

ReducedSolution solve_reduced(const ForceTable& F, double z0, double dz0, double t0,
                              double t_end, double dt,
                              const std::function<double(double)>& forcing) {
    if (t_end <= t0) throw DomainError("solve_reduced: t_end must exceed t0");
    if (dt > 1e-2 * t0) throw DomainError("solve_reduced: dt must be <= 1e-2 * t0");

    auto accel = [&](double t, double z) {
        double a = -2.0 * F(z);
        if (forcing) a += forcing(t);
        return a;
    };

    ReducedSolution sol;
    const int steps = int(std::ceil((t_end - t0) / dt - 1e-12));
    sol.t.reserve(steps + 1);
    sol.z.reserve(steps + 1);
    sol.dz.reserve(steps + 1);
    sol.conserved.reserve(steps + 1);

    double t = t0, z = z0, w = dz0;
    auto record = [&]() {
        sol.t.push_back(t);
        sol.z.push_back(z);
        sol.dz.push_back(w);
        sol.conserved.push_back(0.5 * w * w - 2.0 * F.integral_to_inf(z));
    };
    record();
    const double scale =
        std::max(0.5 * dz0 * dz0 + 2.0 * F.integral_to_inf(z0), 1e-30);

    for (int k = 0; k < steps; ++k) {
        const double h = std::min(dt, t_end - t);
        // RK4 on (z, w)
        const double k1z = w, k1w = accel(t, z);
        const double k2z = w + 0.5 * h * k1w, k2w = accel(t + 0.5 * h, z + 0.5 * h * k1z);
        const double k3z = w + 0.5 * h * k2w, k3w = accel(t + 0.5 * h, z + 0.5 * h * k2z);
        const double k4z = w + h * k3w, k4w = accel(t + h, z + h * k3z);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        t += h;
        record();
    }

    if (!forcing) {
        double drift = 0.0;
        for (double c : sol.conserved) drift = std::max(drift, std::abs(c - sol.conserved[0]));
        sol.max_conserved_drift = drift / scale;
    }
    return sol;
}

namespace {

// \int_t^{Tmax} s^alpha v(s) ds on a fixed geometric panel set, returned as a
// callable using prefix sums; plus the analytic power-law tail beyond Tmax.
class WeightedTailIntegral {
  public:
    WeightedTailIntegral(const std::function<double(double)>& v, double alpha, double T0,
                         double Tmax, double decay_exponent, double tail_tol) {
        alpha_ = alpha;
        // geometric panels, ~48 per decade
        const int per_decade = 48;
        const int n_panels = std::max(
            8, int(std::ceil(per_decade * std::log10(Tmax / T0))));
        edges_.resize(n_panels + 1);
        const double r = std::pow(Tmax / T0, 1.0 / n_panels);
        edges_[0] = T0;
        for (int i = 1; i <= n_panels; ++i) edges_[i] = edges_[i - 1] * r;
        edges_[n_panels] = Tmax;

        auto f = [&](double s) { return std::pow(s, alpha) * v(s); };
        suffix_.assign(n_panels + 1, 0.0);
        for (int i = n_panels - 1; i >= 0; --i)
            suffix_[i] = suffix_[i + 1] + gauss_kronrod_panel(f, edges_[i], edges_[i + 1]);

        // Tail beyond Tmax: v ~ V s^{-d} with V estimated at Tmax; the
        // deviation from a pure power law (measured at Tmax/2) bounds the
        // correction error.
        const double d = decay_exponent;
        if (d <= alpha + 1.0)
            throw DomainError("tail integral diverges: decay exponent too small");
        const double V1 = v(Tmax) * std::pow(Tmax, d);
        const double V2 = v(0.5 * Tmax) * std::pow(0.5 * Tmax, d);
        tail_ = V1 * std::pow(Tmax, alpha - d + 1.0) / (d - alpha - 1.0);
        const double dev = std::abs(V2 - V1) / std::max({std::abs(V1), std::abs(V2), 1e-300});
        tail_bound_ = std::abs(tail_) * (dev + 1e-12);
        if (tail_bound_ > tail_tol) {
            std::ostringstream os;
            os << "tail bound " << tail_bound_ << " above tolerance " << tail_tol
               << " at T_max=" << Tmax;
            throw AccuracyError(os.str());
        }
        vfn_ = &v;
    }

    double operator()(double t) const {
        // locate panel, integrate the partial cell directly
        auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
        int j = std::clamp<int>(int(it - edges_.begin()) - 1, 0, int(edges_.size()) - 2);
        auto f = [&](double s) { return std::pow(s, alpha_) * (*vfn_)(s); };
        return suffix_[j + 1] + gauss_kronrod_panel(f, t, edges_[j + 1]) + tail_;
    }

  private:
    double alpha_ = 0.0;
    double tail_ = 0.0, tail_bound_ = 0.0;
    std::vector<double> edges_, suffix_;
    const std::function<double(double)>* vfn_ = nullptr;
};

}  // namespace

EulerSolution solve_euler(double mu, const std::function<double(double)>& v,
                          double decay_exponent, double T0, double t_end, int samples,
                          double tail_tol) {
    if (mu < 0.0) throw DomainError("solve_euler: mu must be >= 0");
    if (t_end <= T0 || samples < 2) throw DomainError("solve_euler: bad sample window");
    const double root = std::sqrt(1.0 + 4.0 * mu);
    const double mup = 0.5 * (1.0 + root);
    const double mum = 0.5 * (1.0 - root);
    if (decay_exponent <= mup + 1.0)
        throw DomainError("solve_euler: decay exponent must exceed mu+ + 1");

    const double Tmax = 100.0 * t_end;
    WeightedTailIntegral Ip(v, mup, T0, Tmax, decay_exponent, tail_tol);
    WeightedTailIntegral Im(v, mum, T0, Tmax, decay_exponent, tail_tol);

    EulerSolution sol;
    sol.t.resize(samples);
    sol.z.resize(samples);
    sol.dz.resize(samples);
    sol.d2z.resize(samples);
    const double h = (t_end - T0) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double t = T0 + i * h;
        const double ip = Ip(t), im = Im(t);
        const double tp = std::pow(t, mup), tm = std::pow(t, mum);
        sol.t[i] = t;
        sol.z[i] = (tm * ip - tp * im) / root;
        sol.dz[i] = (mum * tm / t * ip - mup * tp / t * im) / root;
        sol.d2z[i] = mu / (t * t) * sol.z[i] + v(t);
    }
    return sol;
}

std::pair<EulerSolution, EulerSolution> solve_coupled(
    const std::function<double(double)>& f1, const std::function<double(double)>& f2,
    double decay_exponent, double T0, double t_end, int samples) {
    auto g1 = [&](double t) { return f2(t) + f1(t); };  // z1'' = g1 (mu = 0)
    auto g2 = [&](double t) { return f2(t) - f1(t); };  // z2'' = 2 t^-2 z2 + g2
    EulerSolution z1 = solve_euler(0.0, g1, decay_exponent, T0, t_end, samples);
    EulerSolution z2 = solve_euler(2.0, g2, decay_exponent, T0, t_end, samples);

    EulerSolution y1 = z1, y2 = z1;
    for (int i = 0; i < samples; ++i) {
        y1.z[i] = 0.5 * (z1.z[i] - z2.z[i]);
        y1.dz[i] = 0.5 * (z1.dz[i] - z2.dz[i]);
        y1.d2z[i] = 0.5 * (z1.d2z[i] - z2.d2z[i]);
        y2.z[i] = 0.5 * (z1.z[i] + z2.z[i]);
        y2.dz[i] = 0.5 * (z1.dz[i] + z2.dz[i]);
        y2.d2z[i] = 0.5 * (z1.d2z[i] + z2.d2z[i]);
    }
    return {y1, y2};
}

LogLawFit fit_log_law(std::span<const double> t, std::span<const double> x2,
                      double curvature, double w_lo, double w_hi) {
    if (t.size() != x2.size()) throw DomainError("fit_log_law: size mismatch");
    std::vector<double> tt, xx;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= w_lo && t[i] <= w_hi) {
            tt.push_back(t[i]);
            xx.push_back(x2[i]);
        }
    }
    const int m = int(tt.size());
    if (m < 20) throw DomainError("fit_log_law: window holds fewer than 20 samples");

    const double s = 1.0 / std::sqrt(curvature);
    double seed = 0.0;
    for (int i = 0; i < m; ++i) seed += xx[i] / s - std::log(tt[i]);
    double A = std::exp(seed / m);
    double t0 = 0.0;

    auto ssr = [&](double a, double c) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = xx[i] - s * std::log(a * (tt[i] - c));
            acc += r * r;
        }
        return acc;
    };

    LogLawFit fit;
    fit.curvature_inv_sqrt = s;
    double current = ssr(A, t0);
    for (int it = 0; it < 100; ++it) {
        fit.iterations = it + 1;
        // normal equations for the two parameters
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (int i = 0; i < m; ++i) {
            const double w = tt[i] - t0;
            const double r = xx[i] - s * std::log(A * w);
            const double ja = -s / A;       // d r / d A
            const double jc = s / w;        // d r / d t0
            jtj00 += ja * ja;
            jtj01 += ja * jc;
            jtj11 += jc * jc;
            jtr0 += ja * r;
            jtr1 += jc * r;
        }
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        if (std::abs(det) < 1e-300) throw ConvergenceError("fit_log_law: singular normal equations");
        double dA = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
        double dt0 = -(jtj00 * jtr1 - jtj01 * jtr0) / det;

        // damped update keeping the log argument positive
        double lambda = 1.0;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            const double An = A + lambda * dA;
            const double tn = t0 + lambda * dt0;
            if (An > 0.0 && tn < tt.front() - 1e-12) {
                const double next = ssr(An, tn);
                if (next <= current * (1.0 + 1e-15)) {
                    A = An;
                    t0 = tn;
                    const bool converged =
                        std::abs(lambda * dA) <= 1e-12 * std::max(1.0, A) &&
                        std::abs(lambda * dt0) <= 1e-12 * std::max(1.0, std::abs(t0));
                    current = next;
                    accepted = true;
                    if (converged) {
                        fit.A_hat = A;
                        fit.t0_hat = t0;
                        fit.rms_residual = std::sqrt(current / m);
                        return fit;
                    }
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // step rejected entirely: treat as converged at the current point
            fit.A_hat = A;
            fit.t0_hat = t0;
            fit.rms_residual = std::sqrt(current / m);
            return fit;
        }
    }
    std::ostringstream os;
    os << "fit_log_law: no convergence in 100 iterations (ssr " << current << ")";
    throw ConvergenceError(os.str());
}

NormDiagnostics norm_diagnostics(std::span<const double> t, std::span<const double> z,
                                 double gamma, double alpha) {
    if (t.size() != z.size() || t.size() < 2)
        throw DomainError("norm_diagnostics: bad series");
    const std::size_t n = t.size();

    NormDiagnostics out;
    for (std::size_t i = 0; i < n; ++i)
        out.n_gamma = std::max(out.n_gamma, std::pow(t[i], gamma) * std::abs(z[i]));

    // cumulative trapezoid of s^alpha z(s)
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double fa = std::pow(t[i - 1], alpha) * z[i - 1];
        const double fb = std::pow(t[i], alpha) * z[i];
        cum[i] = cum[i - 1] + 0.5 * (fa + fb) * (t[i] - t[i - 1]);
    }
    // max over i<=j of t_i^{gamma-alpha} |cum_j - cum_i| via suffix extrema
    std::vector<double> smax(n), smin(n);
    smax[n - 1] = smin[n - 1] = cum[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        smax[i] = std::max(cum[i], smax[i + 1]);
        smin[i] = std::min(cum[i], smin[i + 1]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double reach = std::max(smax[i] - cum[i], cum[i] - smin[i]);
        out.w_alpha_gamma =
            std::max(out.w_alpha_gamma, std::pow(t[i], gamma - alpha) * reach);
    }
    return out;
}

}  // namespace kinklab
