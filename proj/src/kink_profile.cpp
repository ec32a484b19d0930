#include "kinklab/kink_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "kinklab/errors.hpp"
#include "kinklab/quadrature.hpp"

namespace kinklab {

namespace detail {

// Vacuum-side expansion of the regularized integrand
//   r(phi_plus - s) = 1/sqrt(2U(phi_plus - s)) * sqrt(curv) - 1/s
//                   = b0 + b1 s + b2 s^2 + b3 s^3 + O(s^4),
// from 2U(phi_plus - s) = curv s^2 (1 + a1 s + a2 s^2 + a3 s^3 + a4 s^4).
// Higher derivatives of U come from finite differences of the d3u handle.
struct VacuumSeries {
    double b[4];

    explicit VacuumSeries(const Potential& p) {
        const double a = p.phi_plus;
        const double c = p.curvature;
        const double h = 1e-3 * std::max(1.0, a);
        const double u3 = p.d3u(a);
        const double u4 = (p.d3u(a + h) - p.d3u(a - h)) / (2.0 * h);
        const double u5 = (p.d3u(a + h) - 2.0 * u3 + p.d3u(a - h)) / (h * h);
        const double u6 = (p.d3u(a + 2 * h) - 2.0 * p.d3u(a + h) + 2.0 * p.d3u(a - h) -
                           p.d3u(a - 2 * h)) / (2.0 * h * h * h);
        const double a1 = -u3 / (3.0 * c);
        const double a2 = u4 / (12.0 * c);
        const double a3 = -u5 / (60.0 * c);
        const double a4 = u6 / (360.0 * c);
        b[0] = -0.5 * a1;
        b[1] = 0.375 * a1 * a1 - 0.5 * a2;
        b[2] = -0.5 * a3 + 0.75 * a1 * a2 - 0.3125 * a1 * a1 * a1;
        b[3] = -0.5 * a4 + 0.375 * (a2 * a2 + 2.0 * a1 * a3) -
               0.9375 * a1 * a1 * a2 + 0.2734375 * a1 * a1 * a1 * a1;
    }

    double eval(double s) const { return b[0] + s * (b[1] + s * (b[2] + s * b[3])); }

    // integral_0^s of the series
    double integral(double s) const {
        return s * (b[0] + s * (b[1] / 2 + s * (b[2] / 3 + s * b[3] / 4)));
    }
};

// Evaluates G(psi) = -log(1 - psi) + R(psi) for a normalized potential, where
// R(psi) = integral_0^psi r, r(y) = 1/sqrt(2U(y)) - 1/(1-y) is bounded.
// R is tabulated once on uniform panels; the last 'eps' of the interval is
// handled by the vacuum series, which avoids the cancellation of the two
// reciprocals (each ~1/s) next to the vacuum.
class GEvaluator {
  public:
    explicit GEvaluator(const Potential& p, int panels = 1024)
        : pot_(p), series_(p) {
        if (!p.is_normalized(1e-9))
            throw DomainError("G evaluator requires a normalized potential");

        // Prefix integrals of r over [0, 1-eps].
        panel_w_ = (1.0 - eps_) / panels;
        prefix_.resize(panels + 1, 0.0);
        auto r = [this](double y) { return remainder(y); };
        double acc = 0.0, comp = 0.0;
        for (int k = 0; k < panels; ++k) {
            double part = gauss_kronrod_panel(r, k * panel_w_, (k + 1) * panel_w_);
            double y = part - comp;
            double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            prefix_[k + 1] = acc;
        }
        R_full_ = acc;  // R(1 - eps)
        log_kappa_ = R_full_ + series_.integral(eps_);
    }

    double eps() const { return eps_; }
    double log_kappa() const { return log_kappa_; }

    double remainder(double y) const {
        return 1.0 / std::sqrt(2.0 * pot_.u(y)) - 1.0 / (1.0 - y);
    }

    // R(psi) for psi in [0, 1].
    double R(double psi) const {
        if (psi <= 0.0) return 0.0;
        if (psi >= 1.0 - eps_) {
            const double s = 1.0 - psi;
            return R_full_ + series_.integral(eps_) - series_.integral(s);
        }
        const int k = std::min<int>(prefix_.size() - 2, int(psi / panel_w_));
        auto r = [this](double y) { return remainder(y); };
        return prefix_[k] + gauss_kronrod_panel(r, k * panel_w_, psi);
    }

    double G(double psi) const {
        if (psi < 0.0) return -G(-psi);
        return -std::log1p(-psi) + R(psi);
    }

    // dG/dpsi = 1/sqrt(2U); series form inside the eps band.
    double dG(double psi) const {
        const double a = std::abs(psi);
        if (a >= 1.0 - eps_) {
            const double s = 1.0 - a;
            return 1.0 / s + series_.eval(s);
        }
        return 1.0 / std::sqrt(2.0 * pot_.u(psi));
    }

    // Solve -log s + R(1-s) = x for s = 1 - psi; valid when the solution lies
    // inside the series band (x large). Full relative precision in s.
    double solve_tail_s(double x) const {
        double u = log_kappa_ - x;  // log s seed
        for (int it = 0; it < 60; ++it) {
            const double s = std::exp(u);
            const double f = -u + R_full_ + series_.integral(eps_) -
                             series_.integral(s) - x;
            const double fp = -1.0 - s * series_.eval(s);
            const double du = f / fp;
            u -= du;
            if (std::abs(du) < 1e-15 * std::max(1.0, std::abs(u))) break;
        }
        return std::exp(u);
    }

    // Abscissa beyond which solve_tail_s is guaranteed inside the band.
    double tail_x_threshold() const { return log_kappa_ - std::log(0.25 * eps_); }

  private:
    Potential pot_;
    VacuumSeries series_;
    double eps_ = 1e-3;
    double panel_w_ = 0.0;
    double R_full_ = 0.0;
    double log_kappa_ = 0.0;
    std::vector<double> prefix_;
};

namespace {

// Safeguarded Newton for G(psi) = x, x >= 0.
double invert_positive(const GEvaluator& ge, double x) {
    if (x == 0.0) return 0.0;
    if (x >= ge.tail_x_threshold()) return 1.0 - ge.solve_tail_s(x);

    double lo = 0.0, hi = 1.0 - 1e-16;
    double psi = std::min(hi, x / ge.dG(0.0));
    if (x > 2.0) psi = std::max(psi, 1.0 - std::exp(ge.log_kappa() - x));
    const double tol = 5e-14 * std::max(1.0, x);

    for (int it = 0; it < 200; ++it) {
        const double g = ge.G(psi) - x;
        if (std::abs(g) <= tol) return psi;
        if (g < 0.0) lo = psi; else hi = psi;
        double step = g / ge.dG(psi);
        double next = psi - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi))
            return 0.5 * (lo + hi);
        psi = next;
    }
    std::ostringstream os;
    os << "kink inversion failed at x=" << x;
    throw ConvergenceError(os.str());
}

}  // namespace
}  // namespace detail

double compute_G(const Potential& normalized, double psi) {
    if (std::abs(psi) >= 1.0)
        throw DomainError("compute_G: |psi| must be < 1 for a normalized potential");
    detail::GEvaluator ge(normalized);
    return ge.G(psi);
}

double compute_G_derivative(const Potential& normalized, double psi) {
    detail::GEvaluator ge(normalized);
    return ge.dG(psi);
}

double compute_kappa(const Potential& p) {
    const double a = p.phi_plus;
    const double sc = std::sqrt(p.curvature);
    const double eps = 1e-3;

    auto integrand = [&](double y) {
        return sc / std::sqrt(2.0 * p.u(y)) - 1.0 / (a - y);
    };
    QuadratureResult main = integrate_adaptive(integrand, 0.0, a - eps, 1e-13, 1e-13, 8192);
    if (main.error_estimate > 1e-10)
        throw AccuracyError("kappa quadrature stalled above 1e-10");

    detail::VacuumSeries series(p);
    return std::exp(main.value + series.integral(eps));
}

KinkProfile KinkProfile::build(const Potential& model, double x_max, int nodes) {
    if (x_max < 20.0) throw DomainError("build: x_max must be >= 20");
    if (nodes < 1024) throw DomainError("build: need at least 1024 nodes");

    KinkProfile prof;
    prof.model_pot_ = model;
    auto [norm, rec] = normalize(model);
    prof.norm_pot_ = norm;
    prof.record_ = rec;
    prof.x_max_ = x_max;

    auto ge = std::make_shared<detail::GEvaluator>(norm);
    prof.gev_ = ge;
    prof.kappa_ = compute_kappa(norm);

    const int n = (nodes % 2 == 0) ? nodes + 1 : nodes;  // keep x=0 on the grid
    prof.x_.resize(n);
    prof.h_.resize(n);
    prof.dh_.resize(n);
    prof.d2h_.resize(n);
    prof.dx_ = 2.0 * x_max / (n - 1);
    const int mid = n / 2;

    for (int i = mid; i < n; ++i) {
        const double x = -x_max + i * prof.dx_;
        prof.x_[i] = x;
        double psi;
        try {
            psi = detail::invert_positive(*ge, x);
        } catch (const ConvergenceError&) {
            std::ostringstream os;
            os << "profile construction failed at node " << i << " (x=" << x << ")";
            throw ConvergenceError(os.str());
        }
        prof.h_[i] = psi;
        prof.dh_[i] = std::sqrt(2.0 * norm.u(psi));
        prof.d2h_[i] = norm.du(psi);
    }
    for (int i = 0; i < mid; ++i) {  // odd reflection
        prof.x_[i] = -x_max + i * prof.dx_;
        prof.h_[i] = -prof.h_[n - 1 - i];
        prof.dh_[i] = prof.dh_[n - 1 - i];
        prof.d2h_[i] = -prof.d2h_[n - 1 - i];
    }

    // Switch to the tail formulas once table and asymptote agree to 1e-9.
    const double k = prof.kappa_;
    int sw = -1;
    for (int i = n - 1; i > mid; --i) {
        const double x = prof.x_[i];
        const double e = k * std::exp(-x);
        const bool ok = std::abs(prof.h_[i] - (1.0 - e)) <= 1e-9 &&
                        std::abs(prof.dh_[i] - e) <= 1e-9 &&
                        std::abs(prof.d2h_[i] + e) <= 1e-9;
        if (!ok) break;
        sw = i;
    }
    if (sw < 0)
        throw AccuracyError("no tail switch point found; increase x_max");
    prof.x_switch_ = prof.x_[sw];
    return prof;
}

double KinkProfile::eval(double x, int order) const {
    if (order < 0 || order > 2) throw DomainError("eval: order must be 0, 1 or 2");
    if (x > x_switch_) {
        const double e = kappa_ * std::exp(-x);
        if (order == 0) return 1.0 - e;
        return order == 1 ? e : -e;
    }
    if (x < -x_switch_) {
        const double e = kappa_ * std::exp(x);
        if (order == 0) return -1.0 + e;
        return e;
    }

    const std::vector<double>& tab = (order == 0) ? h_ : (order == 1 ? dh_ : d2h_);
    const int n = int(x_.size());
    double u = (x + x_max_) / dx_;
    int j = int(std::floor(u));
    j = std::clamp(j, 1, n - 3);
    const double t = u - j;
    // 4-point Lagrange on the uniform stencil {j-1, j, j+1, j+2}.
    const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return w0 * tab[j - 1] + w1 * tab[j] + w2 * tab[j + 1] + w3 * tab[j + 2];
}

double KinkProfile::eval_model(double x, int order) const {
    const double s = record_.sqrt_curvature();
    double scale = record_.phi_scale;
    for (int k = 0; k < order; ++k) scale *= s;
    return scale * eval(s * x, order);
}

double KinkProfile::invert_exact(double x) const {
    const auto& ge = *gev_;
    if (x >= 0.0) return detail::invert_positive(ge, x);
    return -detail::invert_positive(ge, -x);
}

double KinkProfile::tail_distance(double x) const {
    const auto& ge = *gev_;
    if (x < ge.tail_x_threshold())
        throw DomainError("tail_distance: abscissa below the series band");
    return ge.solve_tail_s(x);
}

double kappa_tail_limit(const KinkProfile& profile) {
    const double xa = 18.0, xb = 24.0;
    const double sa = profile.tail_distance(xa);
    const double sb = profile.tail_distance(xb);
    const double ka = std::exp(xa) * sa;
    const double kb = std::exp(xb) * sb;
    // k(x) = kappa + c1 e^{-x}; eliminate c1 with the two abscissas.
    const double c1 = (ka - kb) / (std::exp(-xa) - std::exp(-xb));
    return ka - c1 * std::exp(-xa);
}

namespace {

KinkConstants constants_for(const KinkProfile& prof, const Potential& pot, bool model_units) {
    const double a = pot.phi_plus;
    auto speed = [&pot](double y) { return std::sqrt(2.0 * pot.u(y)); };
    const double half = integrate_or_throw(speed, 0.0, a, 1e-12, 1e-14, "kink mass");
    const double mass = 2.0 * half;
    const double energy =
        integrate_or_throw(speed, -a, a, 1e-12, 1e-14, "kink energy");

    // Cross-check against grid quadrature of the tabulated profile.
    const double scale = model_units ? prof.record().time_scale : 1.0;
    const double L = prof.x_max() * scale;
    const int n = 16384;
    const double dx = 2.0 * L / n;
    std::vector<double> dens(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = -L + i * dx;
        const double hp = model_units ? prof.eval_model(x, 1) : prof.eval(x, 1);
        const double hv = model_units ? prof.eval_model(x, 0) : prof.eval(x, 0);
        dens[i] = 0.5 * hp * hp + pot.u(hv);
    }
    const double grid_energy = trapezoid(dens, dx);
    if (std::abs(grid_energy - energy) > 1e-6)
        throw AccuracyError("kink energy cross-check mismatch: field-variable " +
                            std::to_string(energy) + " vs grid " +
                            std::to_string(grid_energy));
    return {mass, energy};
}

}  // namespace

KinkConstants kink_constants(const KinkProfile& profile) {
    return constants_for(profile, profile.model_potential(), true);
}

KinkConstants kink_constants_normalized(const KinkProfile& profile) {
    return constants_for(profile, profile.normalized_potential(), false);
}

}  // namespace kinklab
