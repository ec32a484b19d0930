#ifndef KINKLAB_POTENTIAL_HPP
#define KINKLAB_POTENTIAL_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace kinklab {

/// Tags for potentials whose derivative has a hand-inlined fast path in the
/// stepping kernels. Custom potentials go through std::function.
enum class BuiltinForce {
    none,
    phi4,                    // U' = phi^3 - phi
    sine_gordon,             // U' = -sin(phi)
    phi4_normalized,         // U' = -phi(1 - phi^2)/2
    sine_gordon_normalized,  // U' = -sin(pi*phi)/pi
};

/// A symmetric double-well model: U together with analytic derivative handles
/// and the location/curvature of the positive vacuum.
struct Potential {
    std::string name;
    std::function<double(double)> u;
    std::function<double(double)> du;
    std::function<double(double)> d2u;
    std::function<double(double)> d3u;
    double phi_plus = 1.0;
    double curvature = 1.0;  // d2u(phi_plus)
    BuiltinForce fast_force = BuiltinForce::none;

    bool is_normalized(double tol = 1e-12) const;
};

/// How a model was rescaled to the reference form (vacuum at 1, unit curvature).
/// Field values map as phi_model = phi_scale * phi_ref, lengths/times as
/// x_model = time_scale * x_ref.
struct NormalizationRecord {
    double phi_scale = 1.0;   // vacuum location of the original model
    double time_scale = 1.0;  // 1/sqrt(curvature) of the original model
    bool was_normalized = true;

    double sqrt_curvature() const { return 1.0 / time_scale; }
};

/// Supported names: "phi4", "sine_gordon". Throws DomainError otherwise.
Potential make_builtin(const std::string& name);

/// Even polynomial double well from coefficients c[k] of sum c[k] phi^k.
/// The caller supplies the positive vacuum; validate() should be run next.
Potential make_polynomial(const std::string& name, const std::vector<double>& coeffs,
                          double phi_plus);

/// Rescale so that the vacuum sits at 1 with unit curvature:
///   U_ref(phi) = U(phi_plus * phi) / (phi_plus^2 * curvature).
/// Applying normalize to an already-normalized model is the identity.
std::pair<Potential, NormalizationRecord> normalize(const Potential& p);

struct ValidationIssue {
    std::string condition;
    double worst_value = 0.0;  // size of the violation
    double worst_point = 0.0;  // field value where it occurred
    double tolerance = 0.0;
};

struct ValidationReport {
    bool passed = true;
    std::vector<ValidationIssue> issues;
    std::string summary() const;
};

/// Check the double-well requirements on a sample grid: vanishing even vacua,
/// positivity between them, positive curvature, and consistency of the
/// derivative handles with finite differences. samples >= 16.
ValidationReport validate(const Potential& p, int samples = 256);

}  // namespace kinklab

#endif
