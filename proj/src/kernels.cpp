#include "kinklab/kernels.hpp"

#include <algorithm>
#include <limits>

namespace kinklab::kernels {

Mode& mode() {
    static Mode m = Mode::automatic;
    return m;
}

bool use_openmp(std::ptrdiff_t n) {
#ifdef _OPENMP
    switch (mode()) {
        case Mode::serial: return false;
        case Mode::openmp: return true;
        case Mode::automatic: return n >= kParallelThreshold && omp_get_max_threads() > 1;
    }
#endif
    (void)n;
    return false;
}

void drift_serial(double* phi, const double* pi, std::ptrdiff_t n, double dt) {
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) phi[i] += dt * pi[i];
}

void drift_omp(double* phi, const double* pi, std::ptrdiff_t n, double dt) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) phi[i] += dt * pi[i];
#else
    drift_serial(phi, pi, n, dt);
#endif
}

void drift(double* phi, const double* pi, std::ptrdiff_t n, double dt) {
    if (use_openmp(n)) drift_omp(phi, pi, n, dt);
    else drift_serial(phi, pi, n, dt);
}

namespace {

inline double row2(const double* x, std::ptrdiff_t i, std::ptrdiff_t n, double inv) {
    const double xm = (i > 0) ? x[i - 1] : 0.0;
    const double xp = (i < n - 1) ? x[i + 1] : 0.0;
    return -(xm - 2.0 * x[i] + xp) * inv;
}

inline double row4(const double* x, std::ptrdiff_t i, std::ptrdiff_t n, double inv12) {
    const double xm2 = (i > 1) ? x[i - 2] : 0.0;
    const double xm1 = (i > 0) ? x[i - 1] : 0.0;
    const double xp1 = (i < n - 1) ? x[i + 1] : 0.0;
    const double xp2 = (i < n - 2) ? x[i + 2] : 0.0;
    return -(-xm2 + 16.0 * xm1 - 30.0 * x[i] + 16.0 * xp1 - xp2) * inv12;
}

}  // namespace

void apply_schrodinger_serial(const double* x, const double* diag, std::ptrdiff_t n,
                              double dx, int order, double* y) {
    const double inv = 1.0 / (dx * dx);
    if (order == 2) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            y[i] = row2(x, i, n, inv) + diag[i] * x[i];
        return;
    }
    const double inv12 = inv / 12.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const bool edge = (i < 2 || i > n - 3);
        y[i] = (edge ? row2(x, i, n, inv) : row4(x, i, n, inv12)) + diag[i] * x[i];
    }
}

void apply_schrodinger_omp(const double* x, const double* diag, std::ptrdiff_t n,
                           double dx, int order, double* y) {
#ifdef _OPENMP
    const double inv = 1.0 / (dx * dx);
    if (order == 2) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            y[i] = row2(x, i, n, inv) + diag[i] * x[i];
        return;
    }
    const double inv12 = inv / 12.0;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const bool edge = (i < 2 || i > n - 3);
        y[i] = (edge ? row2(x, i, n, inv) : row4(x, i, n, inv12)) + diag[i] * x[i];
    }
#else
    apply_schrodinger_serial(x, diag, n, dx, order, y);
#endif
}

void apply_schrodinger(const double* x, const double* diag, std::ptrdiff_t n, double dx,
                       int order, double* y) {
    if (use_openmp(n)) apply_schrodinger_omp(x, diag, n, dx, order, y);
    else apply_schrodinger_serial(x, diag, n, dx, order, y);
}

double abs_max_serial(const double* phi, std::ptrdiff_t n) {
    double m = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double a = std::abs(phi[i]);
        if (!(a <= std::numeric_limits<double>::max()))
            return std::numeric_limits<double>::infinity();
        m = std::max(m, a);
    }
    return m;
}

double abs_max_omp(const double* phi, std::ptrdiff_t n) {
#ifdef _OPENMP
    double m = 0.0;
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(max : m) reduction(|| : bad)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double a = std::abs(phi[i]);
        if (!(a <= std::numeric_limits<double>::max())) bad = true;
        m = std::max(m, a);
    }
    return bad ? std::numeric_limits<double>::infinity() : m;
#else
    return abs_max_serial(phi, n);
#endif
}

double abs_max(const double* phi, std::ptrdiff_t n) {
    if (use_openmp(n)) return abs_max_omp(phi, n);
    return abs_max_serial(phi, n);
}

}  // namespace kinklab::kernels
