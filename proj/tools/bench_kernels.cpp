// Benchmark of the stepping kernels: serial reference vs OpenMP, across grid
// sizes. Reports node updates per second and the speedup.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "kinklab/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kinklab;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_steps(std::vector<double>& phi, std::vector<double>& pi, double dx,
                  double dt, int steps, F run_kick, bool omp) {
    const std::ptrdiff_t n = phi.size();
    const double t0 = now();
    for (int s = 0; s < steps; ++s) {
        run_kick(pi.data(), phi.data(), n, dx, 0.5 * dt);
        if (omp) kernels::drift_omp(phi.data(), pi.data(), n, dt);
        else kernels::drift_serial(phi.data(), pi.data(), n, dt);
        run_kick(pi.data(), phi.data(), n, dx, 0.5 * dt);
    }
    return now() - t0;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%10s %10s %14s %14s %9s\n", "n", "steps", "serial MU/s", "openmp MU/s",
                "speedup");

    for (int n : {4001, 16001, 64001, 256001}) {
        const double dx = 80.0 / (n - 1);
        const double dt = 0.5 * dx;
        const int steps = std::max(20, int(4e7 / n));

        std::vector<double> phi(n), pi(n, 0.0);
        for (int i = 0; i < n; ++i) phi[i] = std::tanh((-40.0 + i * dx) / std::sqrt(2.0));

        auto phi_s = phi;
        auto pi_s = pi;
        const double ts = time_steps(
            phi_s, pi_s, dx, dt, steps,
            [](double* p, const double* f, std::ptrdiff_t m, double h, double c) {
                kernels::kick_serial(p, f, m, h, c, kernels::Phi4Force{});
            },
            false);

        auto phi_p = phi;
        auto pi_p = pi;
        const double tp = time_steps(
            phi_p, pi_p, dx, dt, steps,
            [](double* p, const double* f, std::ptrdiff_t m, double h, double c) {
                kernels::kick_omp(p, f, m, h, c, kernels::Phi4Force{});
            },
            true);

        // consistency between the two paths (they must agree to round-off)
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(phi_s[i] - phi_p[i]));

        const double mu = double(n) * steps / 1e6;
        std::printf("%10d %10d %14.1f %14.1f %8.2fx   (max diff %.2e)\n", n, steps,
                    mu / ts, mu / tp, ts / tp, diff);
    }
    return 0;
}
