#include "kinklab/field_solver.hpp"

#include <cmath>
#include <sstream>

#include "kinklab/errors.hpp"
#include "kinklab/kernels.hpp"

namespace kinklab {

namespace {

void check_grid(const Grid& g) {
    if (g.n < 64) throw DomainError("grid must have at least 64 points");
    if (g.dx() <= 0.0) throw DomainError("grid spacing must be positive");
}

void pin_boundary(FieldState& s, double left, double right) {
    s.phi.front() = left;
    s.phi.back() = right;
    s.pi.front() = 0.0;
    s.pi.back() = 0.0;
}

}  // namespace

FieldState make_kink_state(const Grid& g, const KinkProfile& profile, double a,
                           double v, bool antikink) {
    check_grid(g);
    if (std::abs(v) >= 1.0) throw DomainError("kink velocity must satisfy |v| < 1");
    const double gamma = 1.0 / std::sqrt(1.0 - v * v);
    FieldState s{g, std::vector<double>(g.n), std::vector<double>(g.n), 0.0};
    for (int i = 0; i < g.n; ++i) {
        const double u = gamma * (g.x(i) - a);
        const double h = profile.eval_model(u, 0);
        const double hp = profile.eval_model(u, 1);
        if (!antikink) {
            s.phi[i] = h;
            s.pi[i] = -v * gamma * hp;
        } else {
            s.phi[i] = -h;
            s.pi[i] = v * gamma * hp;
        }
    }
    pin_boundary(s, s.phi.front(), s.phi.back());
    return s;
}

FieldState make_pair_superposition(const Grid& g, const KinkProfile& profile, double a,
                                   double v_sep) {
    check_grid(g);
    const double vac = profile.model_potential().phi_plus;
    FieldState s{g, std::vector<double>(g.n), std::vector<double>(g.n), 0.0};
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        s.phi[i] = vac - profile.eval_model(x + a, 0) + profile.eval_model(x - a, 0);
        s.pi[i] = v_sep * (profile.eval_model(x + a, 1) + profile.eval_model(x - a, 1));
    }
    pin_boundary(s, vac, vac);
    return s;
}

double sg_exact_pair_value(double t, double x) {
    return M_PI - 4.0 * std::atan(t / std::cosh(x));
}

double sg_exact_pair_dt(double t, double x) {
    const double c = std::cosh(x);
    return -4.0 * c / (c * c + t * t);
}

FieldState make_sg_exact_pair(const Grid& g, double t0) {
    check_grid(g);
    FieldState s{g, std::vector<double>(g.n), std::vector<double>(g.n), t0};
    for (int i = 0; i < g.n; ++i) {
        s.phi[i] = sg_exact_pair_value(t0, g.x(i));
        s.pi[i] = sg_exact_pair_dt(t0, g.x(i));
    }
    pin_boundary(s, M_PI, M_PI);
    return s;
}

FieldState make_vacuum(const Grid& g, double value) {
    check_grid(g);
    FieldState s{g, std::vector<double>(g.n, value), std::vector<double>(g.n, 0.0), 0.0};
    return s;
}

FieldState make_custom(const Grid& g, const std::function<double(double)>& phi0,
                       const std::function<double(double)>& pi0, double t0) {
    check_grid(g);
    FieldState s{g, std::vector<double>(g.n), std::vector<double>(g.n), t0};
    for (int i = 0; i < g.n; ++i) {
        s.phi[i] = phi0(g.x(i));
        s.pi[i] = pi0(g.x(i));
    }
    pin_boundary(s, s.phi.front(), s.phi.back());
    return s;
}

void step(FieldState& s, const Potential& pot, double dt) {
    const double dx = s.grid.dx();
    if (dt > 0.9 * dx) {
        std::ostringstream os;
        os << "CFL violation: dt=" << dt << " exceeds 0.9*dx=" << 0.9 * dx;
        throw DomainError(os.str());
    }
    const int n = s.grid.n;
    const double left = s.phi.front(), right = s.phi.back();

    kernels::with_force(pot, [&](auto f) {
        kernels::kick(s.pi.data(), s.phi.data(), n, dx, 0.5 * dt, f);
        kernels::drift(s.phi.data(), s.pi.data(), n, dt);
        kernels::kick(s.pi.data(), s.phi.data(), n, dx, 0.5 * dt, f);
        return 0;
    });

    s.phi.front() = left;
    s.phi.back() = right;
    s.pi.front() = 0.0;
    s.pi.back() = 0.0;
    s.t += dt;

    const double m = kernels::abs_max(s.phi.data(), n);
    if (!(m <= 10.0 * std::max(1.0, pot.phi_plus))) {
        std::ostringstream os;
        os << "field blow-up detected at t=" << s.t << " (max |phi| = " << m << ")";
        throw BlowUpError(os.str(), s.t);
    }
}

EnergyTriple energy(const FieldState& s, const Potential& pot) {
    const double dx = s.grid.dx();
    kernels::EnergySums sums = kernels::energy_sums(
        s.phi.data(), s.pi.data(), s.grid.n, dx, [&pot](double v) { return pot.u(v); });
    EnergyTriple e;
    e.kinetic = sums.kinetic * dx;
    e.potential = (sums.gradient + sums.potential) * dx;
    e.total = e.kinetic + e.potential;
    return e;
}

void evolve(FieldState& s, const Potential& pot, double t_end, double dt,
            std::vector<Observer>& observers) {
    if (t_end <= s.t) throw DomainError("evolve: t_end must exceed the state time");

    std::vector<double> next(observers.size());
    for (std::size_t k = 0; k < observers.size(); ++k) next[k] = s.t + observers[k].stride;

    // Observations snap to the nearest step time (half-step window).
    const double obs_eps = 0.5 * dt;
    const double end_eps = 1e-12 * std::max(1.0, std::abs(t_end));
    while (s.t < t_end - end_eps) {
        const double h = std::min(dt, t_end - s.t);
        step(s, pot, h);
        for (std::size_t k = 0; k < observers.size(); ++k) {
            if (s.t >= next[k] - obs_eps && s.t < t_end - obs_eps) {
                observers[k].fn(s);
                while (next[k] <= s.t + obs_eps) next[k] += observers[k].stride;
            }
        }
    }
    for (auto& ob : observers) ob.fn(s);  // terminal observation
}

void evolve(FieldState& s, const Potential& pot, double t_end, double dt) {
    std::vector<Observer> none;
    evolve(s, pot, t_end, dt, none);
}

}  // namespace kinklab
