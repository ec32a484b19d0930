#ifndef KINKLAB_FIELD_SOLVER_HPP
#define KINKLAB_FIELD_SOLVER_HPP

#include <functional>
#include <vector>

#include "kinklab/kink_profile.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

struct Grid {
    double x_min = -40.0;
    double x_max = 40.0;
    int n = 8001;

    double dx() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * dx(); }
};

/// Field and conjugate momentum (time derivative) on a grid at one instant.
/// Boundary nodes stay pinned to the vacuum values of the initial data.
struct FieldState {
    Grid grid;
    std::vector<double> phi;
    std::vector<double> pi;
    double t = 0.0;
};

// --- initial data ----------------------------------------------------------

/// Boosted kink centered at a with velocity v (|v| < 1); antikink if mirrored.
FieldState make_kink_state(const Grid& g, const KinkProfile& profile, double a,
                           double v, bool antikink = false);

/// phi = phi_plus - H(x+a) + H(x-a), pi = v_sep (H'(x+a) + H'(x-a)).
FieldState make_pair_superposition(const Grid& g, const KinkProfile& profile, double a,
                                   double v_sep);

/// The exact sine-Gordon kink-antikink pair pi - 4 atan(t0 / cosh x) at time t0
/// (model units of the sine_gordon potential).
FieldState make_sg_exact_pair(const Grid& g, double t0);

/// Closed form of the exact pair at arbitrary time, for error measurements.
double sg_exact_pair_value(double t, double x);
double sg_exact_pair_dt(double t, double x);

FieldState make_vacuum(const Grid& g, double value);

FieldState make_custom(const Grid& g, const std::function<double(double)>& phi0,
                       const std::function<double(double)>& pi0, double t0);

// --- evolution --------------------------------------------------------------

/// One velocity-Verlet (leapfrog) step of phi_tt = phi_xx - U'(phi).
/// Requires dt <= 0.9 dx; re-pins the boundary and checks for blow-up.
void step(FieldState& s, const Potential& pot, double dt);

struct EnergyTriple {
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
};

/// Trapezoid energies; the field gradient uses centered differences.
EnergyTriple energy(const FieldState& s, const Potential& pot);

struct Observer {
    double stride = 0.1;  // time units between callbacks
    std::function<void(const FieldState&)> fn;
};

/// Evolve to t_end with observer callbacks at their strides; every observer
/// also fires once at t_end. Numerical errors propagate.
void evolve(FieldState& s, const Potential& pot, double t_end, double dt,
            std::vector<Observer>& observers);

/// Convenience overload without observers.
void evolve(FieldState& s, const Potential& pot, double t_end, double dt);

}  // namespace kinklab

#endif
