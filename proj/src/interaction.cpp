#include "kinklab/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinklab/errors.hpp"
#include "kinklab/quadrature.hpp"

namespace kinklab {

namespace {

double model_energy_scale(const KinkProfile& p) {
    const NormalizationRecord& r = p.record();
    return r.phi_scale * r.phi_scale * r.sqrt_curvature();
}

// |dH|_{L2}^2 of the normalized kink, without the cross-check done by
// kink_constants (this sits inside the force integrand loop).
double normalized_mass(const KinkProfile& p) {
    const Potential& u = p.normalized_potential();
    auto speed = [&u](double y) { return std::sqrt(2.0 * u.u(y)); };
    return 2.0 * integrate_or_throw(speed, 0.0, 1.0, 1e-13, 1e-14, "kink mass");
}

// Two-resolution trapezoid with agreement check. The integrands here are
// analytic and exponentially decaying, so the trapezoid rule converges
// spectrally; the refinement is a cheap certificate.
template <class F>
double checked_trapezoid(F f, double a, double b, double dx, double rel_tol,
                         const char* what) {
    const int n1 = std::max(64, int(std::ceil((b - a) / dx)));
    auto sample = [&](int n) {
        std::vector<double> v(n + 1);
        const double h = (b - a) / n;
        for (int i = 0; i <= n; ++i) v[i] = f(a + i * h);
        return trapezoid(v, h);
    };
    const double c = sample(n1);
    const double fine = sample(2 * n1);
    if (std::abs(fine - c) > rel_tol * std::max(1.0, std::abs(fine)))
        throw AccuracyError(std::string(what) + ": quadrature failed to converge (delta " +
                            std::to_string(std::abs(fine - c)) + ")");
    return fine;
}

}  // namespace

double interaction_field(const KinkProfile& profile, double x1, double x2, double x) {
    if (x2 <= x1) throw DomainError("interaction_field requires x2 > x1");
    const Potential& u = profile.normalized_potential();
    const double h1 = profile.eval(x - x1, 0);
    const double h2 = profile.eval(x - x2, 0);
    return -u.du(1.0 - h1 + h2) - u.du(h1) + u.du(h2);
}

double force(const KinkProfile& profile, double z) {
    if (z < 1.0) throw DomainError("force: z must be >= 1");
    const double pad = profile.x_max();
    auto integrand = [&](double x) {
        return profile.eval(x, 1) * interaction_field(profile, 0.0, z, x);
    };
    const double num =
        checked_trapezoid(integrand, -pad, z + pad, 0.02, 1e-11, "force");
    return num / normalized_mass(profile);
}

double constant_A_with_kappa(const KinkProfile& profile, double kappa) {
    const Potential& p = profile.model_potential();
    auto speed = [&p](double y) { return std::sqrt(2.0 * p.u(y)); };
    const double half =
        integrate_or_throw(speed, 0.0, p.phi_plus, 1e-13, 1e-14, "amplitude A");
    return p.phi_plus * std::pow(p.curvature, 0.25) * kappa / std::sqrt(half);
}

double constant_A(const KinkProfile& profile) {
    return constant_A_with_kappa(profile, profile.kappa());
}

double pair_energy(const KinkProfile& profile, double x1, double x2, double padding) {
    if (x2 - x1 < 2.0) throw DomainError("pair_energy requires x2 - x1 >= 2");
    if (padding < 15.0) {
        // Tail of the energy density beyond the padding behaves like e^{-2 pad}.
        const double k = profile.kappa();
        const double bound = 2.0 * k * k * std::exp(-2.0 * padding);
        if (bound > 1e-10) {
            std::ostringstream os;
            os << "pair_energy: padding " << padding << " leaves tail bound " << bound;
            throw DomainError(os.str());
        }
    }
    const Potential& u = profile.normalized_potential();
    auto dens = [&](double x) {
        const double grad = -profile.eval(x - x1, 1) + profile.eval(x - x2, 1);
        const double val = 1.0 - profile.eval(x - x1, 0) + profile.eval(x - x2, 0);
        return 0.5 * grad * grad + u.u(val);
    };
    const double e = checked_trapezoid(dens, x1 - padding, x2 + padding, 0.01, 1e-11,
                                       "pair_energy");
    return e * model_energy_scale(profile);
}

double pair_energy_defect(const KinkProfile& profile, double z) {
    if (z < 2.0) throw DomainError("pair_energy_defect requires z >= 2");
    const Potential& u = profile.normalized_potential();
    const double pad = 18.0;
    // Cross terms only: the quadratic parts of the two isolated kinks cancel
    // exactly against 2 E_p(H) under the substitution x -> x - xj.
    auto dens = [&](double x) {
        const double h1 = profile.eval(x, 0), d1 = profile.eval(x, 1);
        const double h2 = profile.eval(x - z, 0), d2 = profile.eval(x - z, 1);
        const double w = 1.0 - h1 + h2;
        return -d1 * d2 + (u.u(w) - u.u(h1) - u.u(h2));
    };
    return checked_trapezoid(dens, -pad, z + pad, 0.005, 1e-9, "pair_energy_defect");
}

DipoleResidual dipole_residual(const KinkProfile& profile, double a) {
    if (a < 3.0) throw DomainError("dipole_residual requires a >= 3");
    // The static-equation residual of the superposition equals -Phi(-a, a, .).
    double sup = 0.0;
    const double lo = -a - 20.0, hi = a + 20.0;
    for (double x = lo; x <= hi; x += 0.01)
        sup = std::max(sup, std::abs(interaction_field(profile, -a, a, x)));
    DipoleResidual r;
    r.sup_residual = sup;
    r.energy_defect = pair_energy_defect(profile, 2.0 * a);
    return r;
}

ForceTable ForceTable::build(const KinkProfile& profile, double z_min, double z_max,
                             int nodes) {
    if (nodes < 16) throw DomainError("force table needs at least 16 nodes");
    if (z_min < 1.0 || z_max <= z_min) throw DomainError("force table range invalid");

    ForceTable t;
    t.z_min_ = z_min;
    t.z_max_ = z_max;
    t.dz_ = (z_max - z_min) / (nodes - 1);
    t.A_ = constant_A(profile);
    t.z_.resize(nodes);
    t.f_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        t.z_[i] = z_min + i * t.dz_;
        t.f_[i] = force(profile, t.z_[i]);
    }
    for (int i = 0; i + 1 < nodes; ++i) {
        if (!(t.f_[i] > 0.0) || t.f_[i + 1] >= t.f_[i])
            throw AccuracyError("force table is not positive decreasing at z=" +
                                std::to_string(t.z_[i]));
    }
    // \int_{z_i}^{inf} F: Simpson on each cell from the right + asymptote tail.
    t.tail_int_.assign(nodes, 0.0);
    t.tail_int_[nodes - 1] = t.A_ * t.A_ * std::exp(-z_max);
    for (int i = nodes - 2; i >= 0; --i) {
        const double fm = force(profile, 0.5 * (t.z_[i] + t.z_[i + 1]));
        const double cell = (t.f_[i] + 4.0 * fm + t.f_[i + 1]) * t.dz_ / 6.0;
        t.tail_int_[i] = t.tail_int_[i + 1] + cell;
    }
    return t;
}

ForceTable ForceTable::analytic(double amplitude_A, double z_min) {
    ForceTable t;
    t.analytic_only_ = true;
    t.A_ = amplitude_A;
    t.z_min_ = z_min;
    t.z_max_ = z_min;
    return t;
}

double ForceTable::operator()(double z) const {
    if (analytic_only_ || z >= z_max_) return A_ * A_ * std::exp(-z);
    if (z < z_min_) throw DomainError("force table evaluated below z_min");
    const int n = int(z_.size());
    double u = (z - z_min_) / dz_;
    int j = std::clamp(int(std::floor(u)), 1, n - 3);
    const double s = u - j;
    const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return w0 * f_[j - 1] + w1 * f_[j] + w2 * f_[j + 1] + w3 * f_[j + 2];
}

double ForceTable::integral_to_inf(double z) const {
    if (analytic_only_ || z >= z_max_) return A_ * A_ * std::exp(-z);
    if (z < z_min_) throw DomainError("force table integral below z_min");
    const int n = int(z_.size());
    int j = std::clamp(int(std::floor((z - z_min_) / dz_)), 0, n - 2);
    // Simpson over [z, z_{j+1}] with the interpolant
    const double a = z, b = z_[j + 1];
    const double part =
        (b - a) / 6.0 * ((*this)(a) + 4.0 * (*this)(0.5 * (a + b)) + (*this)(b));
    return tail_int_[j + 1] + part;
}

}  // namespace kinklab
