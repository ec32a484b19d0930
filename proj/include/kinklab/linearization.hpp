#ifndef KINKLAB_LINEARIZATION_HPP
#define KINKLAB_LINEARIZATION_HPP

#include <cstdint>
#include <vector>

#include "kinklab/field_solver.hpp"
#include "kinklab/kink_profile.hpp"

namespace kinklab {

/// Which units the operator's potential term is sampled in.
enum class OperatorUnits { model, normalized };

/// Matrix-free discretization of -d^2/dx^2 + U''(background) with Dirichlet
/// truncation on a uniform grid. Symmetric; stencil order 2 or 4.
struct DiscreteOperator {
    Grid grid;
    std::vector<double> diagonal;  // U''(background) samples
    int stencil_order = 2;
    // background bookkeeping for projections and edge values
    bool pair_background = false;
    double x1 = 0.0, x2 = 0.0;  // pair positions (pair case); x1 = kink center otherwise
    double continuum_edge = 0.0;

    void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

/// Single kink centered at a; grid must extend >= 10 beyond the center.
DiscreteOperator assemble_single_kink(const KinkProfile& profile, const Grid& grid,
                                      int stencil_order = 2,
                                      OperatorUnits units = OperatorUnits::model,
                                      double a = 0.0);

/// Kink-antikink pair background phi_plus - H1 + H2 in normalized units;
/// grid must extend >= 10 beyond both positions.
DiscreteOperator assemble_pair(const KinkProfile& profile, double x1, double x2,
                               const Grid& grid, int stencil_order = 2);

/// k smallest eigenvalues (k <= 10) via the symmetric tridiagonal solver on
/// the order-2 interior matrix. Optionally returns the matching eigenvectors
/// (grid-sized, zero-padded at the boundary, unit discrete L2 norm).
std::vector<double> spectrum(const DiscreteOperator& op, int k,
                             std::vector<std::vector<double>>* vectors = nullptr);

struct SpectrumResult {
    std::vector<double> eigenvalues;        // Richardson-extrapolated
    std::vector<double> eigenvalues_coarse; // at 2 dx
    std::vector<double> eigenvalues_fine;   // at dx
    double continuum_edge = 0.0;
    double zero_mode_residual = 0.0;  // sup |L dH| on the fine grid
    double zero_mode_overlap = 0.0;   // normalized inner product with sampled dH
};

/// Eigenvalues at spacings {2 dx, dx} combined by Richardson extrapolation,
/// plus zero-mode diagnostics (single-kink background).
SpectrumResult spectrum_richardson(const KinkProfile& profile, const Grid& fine_grid,
                                   int k, OperatorUnits units = OperatorUnits::model);

struct CoercivityResult {
    double min_quotient = 0.0;
    double mean_quotient = 0.0;
    int trials = 0;
};

/// Minimum of <v, L_X v> / ||v||_H1^2 over random smooth trial functions with
/// both translation modes projected out. Deterministic for a given seed; the
/// trial functions are continuum objects, so results are grid-comparable.
CoercivityResult coercivity_check(const DiscreteOperator& op, const KinkProfile& profile,
                                  int trials, std::uint64_t seed);

/// <v, L v> via the summation-by-parts form (forward differences + diagonal).
double quadratic_form(const DiscreteOperator& op, const std::vector<double>& v);

/// Discrete H1 norm squared: trapezoid L2 plus forward-difference energy.
double h1_norm_sq(const std::vector<double>& v, double dx);

}  // namespace kinklab

#endif
