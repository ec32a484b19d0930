#ifndef KINKLAB_INTERACTION_HPP
#define KINKLAB_INTERACTION_HPP

#include <vector>

#include "kinklab/kink_profile.hpp"

namespace kinklab {

// All interaction quantities are computed in normalized variables; energies
// are mapped back to model units on output through the profile's record
// (factor phi_plus^2 sqrt(curvature)).

/// Residual source of the two-kink ansatz:
///   Phi(x1, x2, x) = -U'(1 - H1 + H2) - U'(H1) + U'(H2),  Hj = H(x - xj).
/// Equals minus the potential-energy gradient of the ansatz pointwise.
double interaction_field(const KinkProfile& profile, double x1, double x2, double x);

/// Attraction force F(z) = |dH|^{-2} <dH, Phi(0, z, .)>, z >= 1. Two-resolution
/// trapezoid quadrature with a convergence check.
double force(const KinkProfile& profile, double z);

/// Separation-law amplitude
///   A = phi_plus curv^{1/4} (integral_0^{phi_plus} sqrt(2U) dy)^{-1/2} kappa,
/// invariant under normalization. Computed from the model potential with the
/// given kappa (defaults to the profile's quadrature value).
double constant_A(const KinkProfile& profile);
double constant_A_with_kappa(const KinkProfile& profile, double kappa);

/// Potential energy of the pair configuration phi_plus - H1 + H2, model units.
/// Grid quadrature padded by `padding` on both sides; the padding tail bound
/// must stay below 1e-10.
double pair_energy(const KinkProfile& profile, double x1, double x2,
                   double padding = 15.0);

/// E_p(pair at separation z) - 2 E_p(H) in normalized units, evaluated as a
/// single quadrature of the cross terms. The direct difference of the two
/// energies cannot resolve the z e^{-2z} remainder in double precision.
double pair_energy_defect(const KinkProfile& profile, double z);

struct DipoleResidual {
    double sup_residual;   // sup |static-equation residual of the superposition|
    double energy_defect;  // E_p(w) - 2 E_p(H), signed, normalized units
};

/// Static-equation residual and energy defect of w(x; a) = 1 - H(x+a) + H(x-a).
DipoleResidual dipole_residual(const KinkProfile& profile, double a);

/// F sampled on a uniform z grid with cubic interpolation inside and the
/// A^2 e^{-z} asymptote beyond the right end. Positive and strictly
/// decreasing by construction check.
class ForceTable {
  public:
    ForceTable() = default;
    static ForceTable build(const KinkProfile& profile, double z_min = 2.0,
                            double z_max = 30.0, int nodes = 225);
    /// Purely asymptotic table (A^2 e^{-z} everywhere), for reduced-law tests.
    static ForceTable analytic(double amplitude_A, double z_min = 1.0);

    double operator()(double z) const;       // F(z); throws below z_min
    double integral_to_inf(double z) const;  // \int_z^inf F
    double amplitude_A() const { return A_; }
    double z_min() const { return z_min_; }
    double z_max() const { return z_max_; }
    const std::vector<double>& z_grid() const { return z_; }
    const std::vector<double>& f_values() const { return f_; }

  private:
    std::vector<double> z_, f_, tail_int_;  // tail_int_[i] = \int_{z_i}^inf F
    double z_min_ = 0.0, z_max_ = 0.0, dz_ = 0.0, A_ = 0.0;
    bool analytic_only_ = false;
};

}  // namespace kinklab

#endif
