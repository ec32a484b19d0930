#ifndef KINKLAB_KERNELS_HPP
#define KINKLAB_KERNELS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "kinklab/potential.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kinklab::kernels {

// Every kernel exists twice: a plain serial loop kept as the reference
// implementation, and an OpenMP version used for large arrays. The serial
// form is what the tests check against; elementwise kernels are bit-identical
// between the two, reductions are deterministic for a fixed thread count.

enum class Mode { serial, openmp, automatic };

/// Process-wide kernel mode (default automatic: OpenMP for n >= threshold).
Mode& mode();

/// Arrays shorter than this stay serial in automatic mode.
inline constexpr std::ptrdiff_t kParallelThreshold = 8192;

bool use_openmp(std::ptrdiff_t n);

// ---------------------------------------------------------------------------
// Force functors (dU/dphi). Builtins are inlined in the loops; everything
// else goes through the std::function handle.

struct Phi4Force {
    double operator()(double v) const { return v * v * v - v; }
};
struct SineGordonForce {
    double operator()(double v) const { return -std::sin(v); }
};
struct Phi4NormForce {
    double operator()(double v) const { return -0.5 * v * (1.0 - v * v); }
};
struct SineGordonNormForce {
    double operator()(double v) const { return -std::sin(M_PI * v) / M_PI; }
};
struct GenericForce {
    const std::function<double(double)>* du;
    double operator()(double v) const { return (*du)(v); }
};

/// Dispatch fn(force_functor) on the potential's fast path.
template <class Fn>
auto with_force(const Potential& p, Fn&& fn) {
    switch (p.fast_force) {
        case BuiltinForce::phi4: return fn(Phi4Force{});
        case BuiltinForce::sine_gordon: return fn(SineGordonForce{});
        case BuiltinForce::phi4_normalized: return fn(Phi4NormForce{});
        case BuiltinForce::sine_gordon_normalized: return fn(SineGordonNormForce{});
        default: return fn(GenericForce{&p.du});
    }
}

// ---------------------------------------------------------------------------
// Leapfrog kernels. Boundary nodes (0 and n-1) are never touched: the caller
// pins them to the vacuum.

/// pi[i] += coef * ((phi[i-1] - 2 phi[i] + phi[i+1])/dx^2 - F(phi[i]))
template <class Force>
void kick_serial(double* pi, const double* phi, std::ptrdiff_t n, double dx,
                 double coef, Force f) {
    const double inv = 1.0 / (dx * dx);
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
        const double lap = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) * inv;
        pi[i] += coef * (lap - f(phi[i]));
    }
}

template <class Force>
void kick_omp(double* pi, const double* phi, std::ptrdiff_t n, double dx, double coef,
              Force f) {
#ifdef _OPENMP
    const double inv = 1.0 / (dx * dx);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
        const double lap = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) * inv;
        pi[i] += coef * (lap - f(phi[i]));
    }
#else
    kick_serial(pi, phi, n, dx, coef, f);
#endif
}

template <class Force>
void kick(double* pi, const double* phi, std::ptrdiff_t n, double dx, double coef,
          Force f) {
    if (use_openmp(n)) kick_omp(pi, phi, n, dx, coef, f);
    else kick_serial(pi, phi, n, dx, coef, f);
}

/// phi[i] += dt * pi[i] on the interior.
void drift_serial(double* phi, const double* pi, std::ptrdiff_t n, double dt);
void drift_omp(double* phi, const double* pi, std::ptrdiff_t n, double dt);
void drift(double* phi, const double* pi, std::ptrdiff_t n, double dt);

// ---------------------------------------------------------------------------
// Schrodinger-type operator y = -D2 x + diag .* x with Dirichlet ends
// (x[-1] = x[n] = 0). stencil_order 2 or 4; the order-4 stencil falls back to
// order 2 on the first interior node at each end.

void apply_schrodinger_serial(const double* x, const double* diag, std::ptrdiff_t n,
                              double dx, int order, double* y);
void apply_schrodinger_omp(const double* x, const double* diag, std::ptrdiff_t n,
                           double dx, int order, double* y);
void apply_schrodinger(const double* x, const double* diag, std::ptrdiff_t n, double dx,
                       int order, double* y);

// ---------------------------------------------------------------------------
// Reductions. OpenMP versions accumulate per-thread partials and combine them
// in thread order, so results are reproducible for a fixed thread count.

struct EnergySums {
    double kinetic = 0.0;   // sum of pi^2 / 2 (trapezoid-weighted)
    double gradient = 0.0;  // sum of (centered dphi/dx)^2 / 2
    double potential = 0.0; // sum of U(phi)
};

template <class PotFn>
EnergySums energy_sums_serial(const double* phi, const double* pi, std::ptrdiff_t n,
                              double dx, PotFn u) {
    EnergySums s;
    const double inv2 = 1.0 / (2.0 * dx);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        double d;
        if (i == 0) d = (phi[1] - phi[0]) / dx;
        else if (i == n - 1) d = (phi[n - 1] - phi[n - 2]) / dx;
        else d = (phi[i + 1] - phi[i - 1]) * inv2;
        s.kinetic += w * 0.5 * pi[i] * pi[i];
        s.gradient += w * 0.5 * d * d;
        s.potential += w * u(phi[i]);
    }
    return s;
}

template <class PotFn>
EnergySums energy_sums_omp(const double* phi, const double* pi, std::ptrdiff_t n,
                           double dx, PotFn u) {
#ifdef _OPENMP
    const int nt = omp_get_max_threads();
    std::vector<EnergySums> parts(nt);
    const double inv2 = 1.0 / (2.0 * dx);
#pragma omp parallel num_threads(nt)
    {
        const int tid = omp_get_thread_num();
        EnergySums local;
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            double d;
            if (i == 0) d = (phi[1] - phi[0]) / dx;
            else if (i == n - 1) d = (phi[n - 1] - phi[n - 2]) / dx;
            else d = (phi[i + 1] - phi[i - 1]) * inv2;
            local.kinetic += w * 0.5 * pi[i] * pi[i];
            local.gradient += w * 0.5 * d * d;
            local.potential += w * u(phi[i]);
        }
        parts[tid] = local;
    }
    EnergySums s;
    for (const auto& p : parts) {
        s.kinetic += p.kinetic;
        s.gradient += p.gradient;
        s.potential += p.potential;
    }
    return s;
#else
    return energy_sums_serial(phi, pi, n, dx, u);
#endif
}

template <class PotFn>
EnergySums energy_sums(const double* phi, const double* pi, std::ptrdiff_t n, double dx,
                       PotFn u) {
    if (use_openmp(n)) return energy_sums_omp(phi, pi, n, dx, u);
    return energy_sums_serial(phi, pi, n, dx, u);
}

/// max over i of |phi[i]| with a non-finite flag folded in as +inf.
double abs_max_serial(const double* phi, std::ptrdiff_t n);
double abs_max_omp(const double* phi, std::ptrdiff_t n);
double abs_max(const double* phi, std::ptrdiff_t n);

}  // namespace kinklab::kernels

#endif
