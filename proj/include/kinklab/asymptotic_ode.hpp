#ifndef KINKLAB_ASYMPTOTIC_ODE_HPP
#define KINKLAB_ASYMPTOTIC_ODE_HPP

#include <functional>
#include <span>
#include <vector>

#include "kinklab/interaction.hpp"

namespace kinklab {

/// Trajectory of the reduced separation law z'' = -2 F(z) (+ optional
/// forcing), with the first integral 0.5 z'^2 + 2 \int_.^z F monitored.
struct ReducedSolution {
    std::vector<double> t, z, dz;
    std::vector<double> conserved;  // 0.5 dz^2 - 2 \int_z^inf F  (forcing-free)
    double max_conserved_drift = 0.0;  // relative to the energy scale
};

/// Classic RK4 on z'' = -2 F(z) + forcing(t). dt <= 1e-2 t0. Throws
/// DomainError if z leaves the force handle's valid range.
ReducedSolution solve_reduced(const ForceTable& F, double z0, double dz0, double t0,
                              double t_end, double dt,
                              const std::function<double(double)>& forcing = {});

/// Solution of z'' = mu t^{-2} z + v decaying at infinity, sampled on a
/// uniform grid of `samples` points on [T0, t_end]:
///   z(t) = (1+4mu)^{-1/2} (t^{mu-} I_{mu+}(t) - t^{mu+} I_{mu-}(t)),
/// I_a(t) = \int_t^inf s^a v(s) ds. The improper integrals are truncated at
/// T_max = 100 t_end and closed with a power-law tail estimated from the
/// caller-supplied decay exponent; the residual tail uncertainty must stay
/// below tail_tol or an AccuracyError is thrown.
struct EulerSolution {
    std::vector<double> t, z, dz, d2z;
};

EulerSolution solve_euler(double mu, const std::function<double(double)>& v,
                          double decay_exponent, double T0, double t_end,
                          int samples = 512, double tail_tol = 1e-10);

/// Coupled trajectory system y1'' = -t^{-2}(y2-y1) + f1, y2'' = t^{-2}(y2-y1)
/// + f2, decoupled through z1 = y2 + y1 (mu = 0) and z2 = y2 - y1 (mu = 2).
std::pair<EulerSolution, EulerSolution> solve_coupled(
    const std::function<double(double)>& f1, const std::function<double(double)>& f2,
    double decay_exponent, double T0, double t_end, int samples = 512);

struct LogLawFit {
    double A_hat = 0.0;
    double t0_hat = 0.0;
    double rms_residual = 0.0;
    double curvature_inv_sqrt = 1.0;
    int iterations = 0;
};

/// Gauss-Newton fit of x2(t) ~ curvature^{-1/2} log(A (t - t0)) over the
/// window [w_lo, w_hi] (>= 20 samples). Seeded with
/// A = exp(mean(x2 sqrt(curv) - log t)), t0 = 0.
LogLawFit fit_log_law(std::span<const double> t, std::span<const double> x2,
                      double curvature, double w_lo, double w_hi);

struct NormDiagnostics {
    double n_gamma = 0.0;        // max t^gamma |z|
    double w_alpha_gamma = 0.0;  // max over pairs t^{gamma-alpha} |sum s^alpha z ds|
};

/// Discrete time-weighted norms of a sampled series (trapezoid-accumulated).
NormDiagnostics norm_diagnostics(std::span<const double> t, std::span<const double> z,
                                 double gamma, double alpha);

}  // namespace kinklab

#endif
