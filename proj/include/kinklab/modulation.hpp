#ifndef KINKLAB_MODULATION_HPP
#define KINKLAB_MODULATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kinklab/field_solver.hpp"
#include "kinklab/kink_profile.hpp"

namespace kinklab {

struct ModOptions {
    double z_min = 6.0;          // reject frames with x2 - x1 below this
    double orth_tol = 1e-9;      // convergence: max |<dH_j, g>| / |dH|^2
    int max_newton_iters = 50;
    double max_condition = 10.0; // velocity-system conditioning guard
};

/// Positions plus the residual field g = phi - (phi_plus - H1 + H2) fixed by
/// the two orthogonality conditions <dH_j, g> = 0.
struct Decomposition {
    double x1 = 0.0;
    double x2 = 0.0;
    std::vector<double> g;
    double orth_residual = 0.0;
    int newton_iters = 0;
    double mass = 0.0;  // |dH|_{L2}^2 on this grid
};

/// Per-snapshot summary used in trajectory records.
struct ModulationFrame {
    double t = 0.0;
    double x1 = 0.0, x2 = 0.0;
    double g_norm_h1 = 0.0;
    double dtphi_norm = 0.0;
    double v1 = 0.0, v2 = 0.0;
    double p1 = 0.0, p2 = 0.0;
    double orth_residual = 0.0;
};

/// Guess kink positions from the zero crossings of phi (the field midpoint
/// level); returns nullopt when fewer than two crossings exist.
std::optional<std::pair<double, double>> guess_positions(const FieldState& s);

/// 2D Newton iteration on the orthogonality map. Throws ConvergenceError after
/// max_newton_iters, RegimeError if the separation drops below z_min.
Decomposition decompose(const FieldState& s, const KinkProfile& profile,
                        double x1_guess, double x2_guess, const ModOptions& opt = {});

/// Modulation velocities from the diagonally dominant 2x2 system obtained by
/// time-differentiating the orthogonality conditions.
std::pair<double, double> velocities(const FieldState& s, const Decomposition& d,
                                     const KinkProfile& profile,
                                     const ModOptions& opt = {});

/// Momentum-corrected parameters p1, p2 built with the 1/3-2/3 plateau cutoff.
std::pair<double, double> corrected_momenta(const FieldState& s, const Decomposition& d,
                                            const KinkProfile& profile);

/// decompose + velocities + corrected_momenta + norms in one call.
ModulationFrame analyze(const FieldState& s, const KinkProfile& profile,
                        double x1_guess, double x2_guess, const ModOptions& opt = {});

struct TrajectoryRecord {
    std::vector<ModulationFrame> frames;
    std::vector<EnergyTriple> energies;
    bool partial = false;        // a frame failed; record stops there
    std::string failure;

    std::vector<double> times() const;
    std::vector<double> z() const;          // x2 - x1
    std::vector<double> x2_series() const;
    std::vector<double> p() const;          // p2 - p1
    /// centered finite differences of p at the frame stride (interior frames)
    std::vector<double> p_prime() const;
};

struct TrackConfig {
    double stride = 0.1;
    double t_start = 0.0;   // first frame no earlier than this
    double t_end = 0.0;
    double dt = 0.0;        // solver step
    ModOptions mod;
    std::optional<std::pair<double, double>> initial_guess;
    bool record_energy = true;
};

/// Evolve the state while extracting one modulation frame per stride,
/// warm-starting each Newton solve from the previous frame. On a frame
/// failure the record is returned flagged partial.
TrajectoryRecord track(FieldState& s, const Potential& pot, const KinkProfile& profile,
                       const TrackConfig& cfg);

}  // namespace kinklab

#endif
