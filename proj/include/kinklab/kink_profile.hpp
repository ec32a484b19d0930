#ifndef KINKLAB_KINK_PROFILE_HPP
#define KINKLAB_KINK_PROFILE_HPP

#include <memory>
#include <vector>

#include "kinklab/potential.hpp"

namespace kinklab {

namespace detail { class GEvaluator; }

/// G(psi) = integral_0^psi dy / sqrt(2 U(y)) for a normalized potential,
/// with the logarithmic endpoint part split off in closed form. Defined for
/// -1 < psi < 1; odd in psi.
double compute_G(const Potential& normalized, double psi);

/// dG/dpsi = 1 / sqrt(2 U(psi)), series-stabilized near the vacua.
double compute_G_derivative(const Potential& normalized, double psi);

/// Tail amplitude kappa = exp(integral_0^{phi_plus} (sqrt(curv)/sqrt(2U) -
/// 1/(phi_plus - y)) dy). Invariant under normalization; accepts any
/// admissible potential.
double compute_kappa(const Potential& p);

/// The static kink H = G^{-1} of a model, tabulated on a uniform grid in the
/// normalized length variable with closed exponential-tail formulas beyond
/// x_switch. Immutable after build; eval is reentrant.
class KinkProfile {
  public:
    /// Builds the profile for 'model' (normalized internally). x_max >= 20,
    /// nodes >= 1024.
    static KinkProfile build(const Potential& model, double x_max = 20.0,
                             int nodes = 4096);

    /// H and derivatives in normalized units. order in {0,1,2}. Total on the
    /// reals: cubic table interpolation inside, tail formulas outside.
    double eval(double x, int order) const;

    /// H and derivatives of the original model:
    ///   H_model(x) = phi_scale * H(sqrt(curv) x) etc.
    double eval_model(double x, int order) const;

    double kappa() const { return kappa_; }
    double x_switch() const { return x_switch_; }
    double x_max() const { return x_max_; }

    const Potential& normalized_potential() const { return norm_pot_; }
    const Potential& model_potential() const { return model_pot_; }
    const NormalizationRecord& record() const { return record_; }

    const std::vector<double>& x_table() const { return x_; }
    const std::vector<double>& h_table() const { return h_; }
    const std::vector<double>& dh_table() const { return dh_; }
    const std::vector<double>& d2h_table() const { return d2h_; }

    /// Solve G(psi) = x afresh by safeguarded root-finding (no table).
    double invert_exact(double x) const;

    /// Distance 1 - H(x) to the vacuum at full relative precision, for x deep
    /// in the tail. Use this for tail-amplitude checks; 1 - eval(x, 0) loses
    /// the digits to cancellation.
    double tail_distance(double x) const;

  private:
    KinkProfile() = default;

    Potential model_pot_;
    Potential norm_pot_;
    NormalizationRecord record_;
    std::shared_ptr<const detail::GEvaluator> gev_;
    std::vector<double> x_, h_, dh_, d2h_;
    double dx_ = 0.0;
    double x_max_ = 0.0;
    double x_switch_ = 0.0;
    double kappa_ = 0.0;
};

/// kappa extracted from the tail limit e^x (1 - H(x)); independent of the
/// defining quadrature. Uses fresh inversions at two abscissas to cancel the
/// leading correction.
double kappa_tail_limit(const KinkProfile& profile);

struct KinkConstants {
    double mass;    // |dH/dx|_{L2}^2
    double energy;  // potential energy of the kink
};

/// Both constants by quadrature in the field variable, in the units of the
/// original model; cross-checked against grid quadrature of the profile.
KinkConstants kink_constants(const KinkProfile& profile);

/// Same constants for the normalized model.
KinkConstants kink_constants_normalized(const KinkProfile& profile);

}  // namespace kinklab

#endif
