#include "kinklab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "kinklab/errors.hpp"

namespace kinklab {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
    double result;
    double error;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double v = f(c - x) + f(c + x);
        res_k += kWgk[j] * v;
        if (j % 2 == 1) res_g += kWg[j / 2] * v;
    }
    res_g *= h;
    res_k *= h;
    return {res_k, std::abs(res_k - res_g)};
}

struct Panel {
    double a, b, result, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

double gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b) {
    return gk15(f, a, b).result;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol, double abs_tol,
                                    int max_panels) {
    QuadratureResult out;
    if (a == b) { out.converged = true; return out; }

    std::priority_queue<Panel> panels;
    PanelEval e0 = gk15(f, a, b);
    panels.push({a, b, e0.result, e0.error});
    double total = e0.result;
    double total_err = e0.error;
    out.evaluations = 15;

    int n_panels = 1;
    while (n_panels < max_panels) {
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
            panels.push(worst);
            break;
        }
        PanelEval l = gk15(f, worst.a, mid);
        PanelEval r = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += l.result + r.result - worst.result;
        total_err += l.error + r.error - worst.error;
        panels.push({worst.a, mid, l.result, l.error});
        panels.push({mid, worst.b, r.result, r.error});
        ++n_panels;
    }

    out.value = total;
    out.error_estimate = total_err;
    out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, const char* what) {
    QuadratureResult r = integrate_adaptive(f, a, b, rel_tol, abs_tol);
    if (!r.converged) {
        throw AccuracyError(std::string(what) + ": adaptive quadrature stalled at error " +
                            std::to_string(r.error_estimate));
    }
    return r.value;
}

double trapezoid(std::span<const double> values, double dx) {
    if (values.size() < 2) return 0.0;
    double sum = 0.0, comp = 0.0;
    auto add = [&](double term) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    add(0.5 * values.front());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) add(values[i]);
    add(0.5 * values.back());
    return sum * dx;
}

double trapezoid_sampled(const std::function<double(double)>& f, double a, double b,
                         int n) {
    std::vector<double> vals(n + 1);
    const double dx = (b - a) / n;
    for (int i = 0; i <= n; ++i) vals[i] = f(a + i * dx);
    return trapezoid(vals, dx);
}

}  // namespace kinklab
