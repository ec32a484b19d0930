#include "kinklab/linearization.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "kinklab/errors.hpp"
#include "kinklab/kernels.hpp"

namespace kinklab {

void DiscreteOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(x.size());
    kernels::apply_schrodinger(x.data(), diagonal.data(), grid.n, grid.dx(),
                               stencil_order, y.data());
}

namespace {

void check_order(int order) {
    if (order != 2 && order != 4)
        throw DomainError("stencil order must be 2 or 4");
}

}  // namespace

DiscreteOperator assemble_single_kink(const KinkProfile& profile, const Grid& grid,
                                      int stencil_order, OperatorUnits units, double a) {
    check_order(stencil_order);
    if (grid.x_min > a - 10.0 || grid.x_max < a + 10.0)
        throw DomainError("grid must extend at least 10 beyond the kink center");

    DiscreteOperator op;
    op.grid = grid;
    op.stencil_order = stencil_order;
    op.pair_background = false;
    op.x1 = a;
    op.diagonal.resize(grid.n);
    if (units == OperatorUnits::model) {
        const Potential& p = profile.model_potential();
        for (int i = 0; i < grid.n; ++i)
            op.diagonal[i] = p.d2u(profile.eval_model(grid.x(i) - a, 0));
        op.continuum_edge = p.curvature;
    } else {
        const Potential& p = profile.normalized_potential();
        for (int i = 0; i < grid.n; ++i)
            op.diagonal[i] = p.d2u(profile.eval(grid.x(i) - a, 0));
        op.continuum_edge = 1.0;
    }
    return op;
}

DiscreteOperator assemble_pair(const KinkProfile& profile, double x1, double x2,
                               const Grid& grid, int stencil_order) {
    check_order(stencil_order);
    if (x2 <= x1) throw DomainError("pair background requires x2 > x1");
    if (grid.x_min > x1 - 10.0 || grid.x_max < x2 + 10.0)
        throw DomainError("grid must extend at least 10 beyond both kinks");

    DiscreteOperator op;
    op.grid = grid;
    op.stencil_order = stencil_order;
    op.pair_background = true;
    op.x1 = x1;
    op.x2 = x2;
    op.continuum_edge = 1.0;
    op.diagonal.resize(grid.n);
    const Potential& p = profile.normalized_potential();
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        const double bg = 1.0 - profile.eval(x - x1, 0) + profile.eval(x - x2, 0);
        op.diagonal[i] = p.d2u(bg);
    }
    return op;
}

std::vector<double> spectrum(const DiscreteOperator& op, int k,
                             std::vector<std::vector<double>>* vectors) {
    if (k < 1 || k > 10) throw DomainError("spectrum: k must be between 1 and 10");
    if (op.stencil_order != 2)
        throw DomainError("spectrum requires the order-2 (tridiagonal) operator");

    const int m = op.grid.n - 2;  // interior nodes
    const double inv = 1.0 / (op.grid.dx() * op.grid.dx());
    std::vector<double> d(m), e(m - 1);
    for (int i = 0; i < m; ++i) d[i] = 2.0 * inv + op.diagonal[i + 1];
    for (int i = 0; i < m - 1; ++i) e[i] = -inv;

    std::vector<double> w(m);
    std::vector<double> z(vectors ? std::size_t(m) * k : 1);
    std::vector<lapack_int> isuppz(2 * std::max(1, k));
    lapack_int found = 0;
    lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', m, d.data(), e.data(), 0.0, 0.0, 1,
        k, 0.0, &found, w.data(), z.data(), m, isuppz.data());
    if (info != 0 || found < k)
        throw AccuracyError("tridiagonal eigensolve failed (info=" +
                            std::to_string(info) + ")");

    if (vectors) {
        vectors->assign(k, std::vector<double>(op.grid.n, 0.0));
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < m; ++i) (*vectors)[j][i + 1] = z[std::size_t(j) * m + i];
    }
    return std::vector<double>(w.begin(), w.begin() + k);
}

SpectrumResult spectrum_richardson(const KinkProfile& profile, const Grid& fine_grid,
                                   int k, OperatorUnits units) {
    if (fine_grid.n % 2 == 0)
        throw DomainError("spectrum_richardson needs an odd point count so the "
                          "coarse grid shares nodes");
    Grid coarse{fine_grid.x_min, fine_grid.x_max, (fine_grid.n - 1) / 2 + 1};

    DiscreteOperator fine = assemble_single_kink(profile, fine_grid, 2, units);
    DiscreteOperator crs = assemble_single_kink(profile, coarse, 2, units);

    SpectrumResult out;
    std::vector<std::vector<double>> vecs;
    out.eigenvalues_fine = spectrum(fine, k, &vecs);
    out.eigenvalues_coarse = spectrum(crs, k);
    out.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j) {
        out.eigenvalues[j] =
            (4.0 * out.eigenvalues_fine[j] - out.eigenvalues_coarse[j]) / 3.0;
    }
    out.continuum_edge = fine.continuum_edge;

    // Zero-mode diagnostics against the sampled translation mode.
    const int n = fine_grid.n;
    std::vector<double> dh(n), ldh(n);
    for (int i = 0; i < n; ++i) {
        dh[i] = (units == OperatorUnits::model) ? profile.eval_model(fine_grid.x(i), 1)
                                                : profile.eval(fine_grid.x(i), 1);
    }
    fine.apply(dh, ldh);
    double sup = 0.0;
    for (int i = 2; i < n - 2; ++i) sup = std::max(sup, std::abs(ldh[i]));
    out.zero_mode_residual = sup;

    double num = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < n; ++i) {
        num += vecs[0][i] * dh[i];
        na += vecs[0][i] * vecs[0][i];
        nb += dh[i] * dh[i];
    }
    out.zero_mode_overlap = std::abs(num) / std::sqrt(na * nb);
    return out;
}

double quadratic_form(const DiscreteOperator& op, const std::vector<double>& v) {
    const int n = op.grid.n;
    const double dx = op.grid.dx();
    double grad = 0.0, diag = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double d = (v[i + 1] - v[i]) / dx;
        grad += d * d;
    }
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        diag += w * op.diagonal[i] * v[i] * v[i];
    }
    return (grad + diag) * dx;
}

double h1_norm_sq(const std::vector<double>& v, double dx) {
    double l2 = 0.0, grad = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        l2 += w * v[i] * v[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = (v[i + 1] - v[i]) / dx;
        grad += d * d;
    }
    return (l2 + grad) * dx;
}

CoercivityResult coercivity_check(const DiscreteOperator& op, const KinkProfile& profile,
                                  int trials, std::uint64_t seed) {
    if (!op.pair_background)
        throw DomainError("coercivity_check needs a pair-background operator");
    if (op.x2 - op.x1 < 20.0)
        throw DomainError("coercivity_check requires pair separation >= 20");
    if (trials < 100) throw DomainError("coercivity_check requires >= 100 trials");

    const int n = op.grid.n;
    const double dx = op.grid.dx();

    // Translation modes on the grid.
    std::vector<double> m1(n), m2(n);
    for (int i = 0; i < n; ++i) {
        m1[i] = profile.eval(op.grid.x(i) - op.x1, 1);
        m2[i] = profile.eval(op.grid.x(i) - op.x2, 1);
    }
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            s += w * a[i] * b[i];
        }
        return s * dx;
    };
    const double g11 = dot(m1, m1), g22 = dot(m2, m2), g12 = dot(m1, m2);
    const double det = g11 * g22 - g12 * g12;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> center(op.x1 - 8.0, op.x2 + 8.0);
    std::uniform_real_distribution<double> width(0.6, 4.0);

    CoercivityResult res;
    res.trials = trials;
    res.min_quotient = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::vector<double> v(n);

    for (int trial = 0; trial < trials; ++trial) {
        // Smooth localized trial function: a few random Gaussian bumps.
        constexpr int kBumps = 12;
        double a[kBumps], c[kBumps], w[kBumps];
        for (int b = 0; b < kBumps; ++b) {
            a[b] = amp(rng);
            c[b] = center(rng);
            w[b] = width(rng);
        }
        for (int i = 0; i < n; ++i) {
            const double x = op.grid.x(i);
            double val = 0.0;
            for (int b = 0; b < kBumps; ++b) {
                const double u = (x - c[b]) / w[b];
                val += a[b] * std::exp(-0.5 * u * u);
            }
            v[i] = val;
        }
        v.front() = 0.0;
        v.back() = 0.0;

        // Project out both translation modes (2x2 Gram solve).
        const double r1 = dot(m1, v), r2 = dot(m2, v);
        const double c1 = (g22 * r1 - g12 * r2) / det;
        const double c2 = (g11 * r2 - g12 * r1) / det;
        for (int i = 0; i < n; ++i) v[i] -= c1 * m1[i] + c2 * m2[i];

        const double q = quadratic_form(op, v) / h1_norm_sq(v, dx);
        res.min_quotient = std::min(res.min_quotient, q);
        sum += q;
    }
    res.mean_quotient = sum / trials;
    return res;
}

}  // namespace kinklab
