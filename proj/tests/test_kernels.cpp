#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kinklab/kernels.hpp"

using namespace kinklab;

namespace {

std::vector<double> random_field(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST_CASE("kick: serial and OpenMP paths are bit-identical") {
    const int n = 20001;
    auto phi = random_field(n, 11);
    auto pi_a = random_field(n, 12);
    auto pi_b = pi_a;
    kernels::kick_serial(pi_a.data(), phi.data(), n, 0.01, 0.003, kernels::Phi4Force{});
    kernels::kick_omp(pi_b.data(), phi.data(), n, 0.01, 0.003, kernels::Phi4Force{});
    for (int i = 0; i < n; ++i) CHECK(pi_a[i] == pi_b[i]);
}

TEST_CASE("drift: serial and OpenMP paths are bit-identical") {
    const int n = 20001;
    auto phi_a = random_field(n, 21);
    auto phi_b = phi_a;
    auto pi = random_field(n, 22);
    kernels::drift_serial(phi_a.data(), pi.data(), n, 0.004);
    kernels::drift_omp(phi_b.data(), pi.data(), n, 0.004);
    for (int i = 0; i < n; ++i) CHECK(phi_a[i] == phi_b[i]);
}

TEST_CASE("operator application: both paths agree, both orders") {
    const int n = 30001;
    auto x = random_field(n, 31);
    auto diag = random_field(n, 32);
    std::vector<double> ya(n), yb(n);
    for (int order : {2, 4}) {
        kernels::apply_schrodinger_serial(x.data(), diag.data(), n, 0.01, order, ya.data());
        kernels::apply_schrodinger_omp(x.data(), diag.data(), n, 0.01, order, yb.data());
        for (int i = 0; i < n; ++i) CHECK(ya[i] == yb[i]);
    }
}

TEST_CASE("energy sums: OpenMP reduction matches serial to 1e-12") {
    const int n = 50001;
    auto phi = random_field(n, 41);
    auto pi = random_field(n, 42);
    auto u = [](double v) { return 0.25 * (1 - v * v) * (1 - v * v); };
    auto a = kernels::energy_sums_serial(phi.data(), pi.data(), n, 0.01, u);
    auto b = kernels::energy_sums_omp(phi.data(), pi.data(), n, 0.01, u);
    CHECK(std::abs(a.kinetic - b.kinetic) < 1e-12 * std::abs(a.kinetic));
    CHECK(std::abs(a.gradient - b.gradient) < 1e-12 * std::abs(a.gradient));
    CHECK(std::abs(a.potential - b.potential) < 1e-12 * std::abs(a.potential));
}

TEST_CASE("abs_max flags non-finite values") {
    std::vector<double> v = {0.5, -2.5, 1.0};
    CHECK(kernels::abs_max_serial(v.data(), 3) == 2.5);
    v[1] = std::nan("");
    CHECK(std::isinf(kernels::abs_max_serial(v.data(), 3)));
    std::vector<double> w = random_field(40001, 51);
    CHECK(kernels::abs_max_serial(w.data(), 40001) ==
          kernels::abs_max_omp(w.data(), 40001));
}

TEST_CASE("stencil accuracy orders on a smooth function") {
    // residual of L f with f = dH and diag = U''(H) is the truncation error;
    // here use plain sin with diag 0: -D2 sin = sin'' error ~ dx^order.
    auto residual = [](int n, int order) {
        const double L = 3.14159265358979323846;
        const double dx = 2 * L / (n - 1);
        std::vector<double> x(n), diag(n, 0.0), y(n);
        for (int i = 0; i < n; ++i) x[i] = std::sin(-L + i * dx);
        kernels::apply_schrodinger_serial(x.data(), diag.data(), n, dx, order, y.data());
        double worst = 0.0;
        for (int i = n / 4; i < 3 * n / 4; ++i)
            worst = std::max(worst, std::abs(y[i] - std::sin(-L + i * dx)));
        return worst;
    };
    // order 2: halving dx -> ~4x ; order 4: ~16x
    const double r2 = residual(501, 2) / residual(1001, 2);
    const double r4 = residual(501, 4) / residual(1001, 4);
    CHECK(r2 > 3.5);
    CHECK(r2 < 4.5);
    CHECK(r4 > 12.0);
    CHECK(r4 < 20.0);
}
