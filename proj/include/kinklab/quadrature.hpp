#ifndef KINKLAB_QUADRATURE_HPP
#define KINKLAB_QUADRATURE_HPP

#include <functional>
#include <span>

namespace kinklab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) panel integration of f over [a, b].
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol = 1e-12,
                                    double abs_tol = 1e-14, int max_panels = 4096);

/// As above, but throws AccuracyError when the error estimate stays above the
/// requested tolerance.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-14,
                          const char* what = "quadrature");

/// Single non-adaptive 15-point Kronrod panel (used for table segments).
double gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b);

/// Compensated (Kahan) trapezoid sum of uniformly spaced samples.
double trapezoid(std::span<const double> values, double dx);

/// Compensated trapezoid of f sampled at n+1 uniform points on [a, b].
double trapezoid_sampled(const std::function<double(double)>& f, double a, double b,
                         int n);

}  // namespace kinklab

#endif
