#include <doctest.h>

#include <cmath>

#include "kinklab/errors.hpp"
#include "kinklab/interaction.hpp"
#include "kinklab/quadrature.hpp"

using namespace kinklab;

namespace {

const KinkProfile& sgp() {
    static KinkProfile p = KinkProfile::build(make_builtin("sine_gordon"));
    return p;
}

const KinkProfile& p4n() {
    static KinkProfile p = []() {
        auto [q, rec] = normalize(make_builtin("phi4"));
        (void)rec;
        return KinkProfile::build(q);
    }();
    return p;
}

// Simpson oracle at a fixed resolution, independent of the production
// two-resolution trapezoid path.
double force_simpson(const KinkProfile& prof, double z, double h) {
    const double a = -prof.x_max(), b = z + prof.x_max();
    const int n = 2 * int((b - a) / (2.0 * h));
    const double dx = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + i * dx;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * prof.eval(x, 1) * interaction_field(prof, 0.0, z, x);
    }
    acc *= dx / 3.0;
    const KinkConstants c = kink_constants_normalized(prof);
    return acc / c.mass;
}

}  // namespace

TEST_CASE("interaction field decays away from the pair") {
    const KinkProfile& p = sgp();
    const double x1 = 0.0, x2 = 20.0;
    // far left of x1: |Phi| <= C e^{-(x2-x)} with moderate C
    const double far = std::abs(interaction_field(p, x1, x2, x1 - 10.0));
    CHECK(far < 100.0 * std::exp(-(x2 - (x1 - 10.0))));
    // midpoint at z = 20: product-bound scale e^{-10} each side
    const double mid = std::abs(interaction_field(p, x1, x2, 10.0));
    CHECK(mid < 100.0 * std::exp(-10.0) * std::exp(-10.0) * std::exp(20.0) *
                    std::exp(-20.0));
    CHECK(mid > 0.0);
    // fully separated pair: interaction at the midpoint is numerically zero
    const double far_pair = std::abs(interaction_field(p, 0.0, 60.0, 30.0));
    CHECK(far_pair < 1e-12);
}

TEST_CASE("force matches the Simpson oracle at two resolutions") {
    for (const KinkProfile* p : {&sgp(), &p4n()}) {
        const double f = force(*p, 8.0);
        const double o1 = force_simpson(*p, 8.0, 0.02);
        const double o2 = force_simpson(*p, 8.0, 0.01);
        CHECK(std::abs(o1 - o2) < 1e-10 * std::abs(f));
        CHECK(f == doctest::Approx(o2).epsilon(1e-9));
    }
}

TEST_CASE("force asymptote F(z) e^z / A^2 -> 1") {
    for (const KinkProfile* p : {&sgp(), &p4n()}) {
        const double A = constant_A(*p);
        const double r12 = force(*p, 12.0) * std::exp(12.0) / (A * A);
        CHECK(r12 > 0.99);
        CHECK(r12 < 1.01);
    }
}

TEST_CASE("force is positive and decreasing") {
    const double f10 = force(sgp(), 10.0);
    const double f12 = force(sgp(), 12.0);
    const double f14 = force(sgp(), 14.0);
    CHECK(f10 > f12);
    CHECK(f12 > f14);
    CHECK(f14 > 0.0);
}

TEST_CASE("amplitude A: closed-form values and algebraic identity") {
    CHECK(constant_A(sgp()) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(constant_A(p4n()) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));

    // 2 kappa^2 / |dH|^2 = A^2 for normalized models
    for (const KinkProfile* p : {&sgp(), &p4n()}) {
        const double k = p->kappa();
        const double mass = kink_constants_normalized(*p).mass;
        const double A = constant_A(*p);
        CHECK(std::abs(2.0 * k * k / mass - A * A) < 1e-10 * A * A);
    }
}

TEST_CASE("pair energy approaches twice the kink energy") {
    // sine-Gordon model units: 2 E_p(H) = 16
    const double e60 = pair_energy(sgp(), 0.0, 60.0);
    CHECK(std::abs(e60 - 16.0) < 1e-10);
    // attraction: below threshold at finite separation
    const double e10 = pair_energy(sgp(), -5.0, 5.0);
    CHECK(e10 < 16.0);
    CHECK_THROWS_AS(pair_energy(sgp(), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(pair_energy(sgp(), 0.0, 20.0, 5.0), DomainError);
}

TEST_CASE("pair-energy defect matches -2 kappa^2 e^{-z} with a controlled remainder") {
    for (const KinkProfile* p : {&sgp(), &p4n()}) {
        const double k = p->kappa();
        double c_prev = 0.0;
        for (double z : {10.0, 14.0, 18.0}) {
            const double defect = pair_energy_defect(*p, z);
            const double rem = std::abs(defect + 2.0 * k * k * std::exp(-z));
            const double c = rem / (z * std::exp(-2.0 * z));
            if (z > 10.0) CHECK(c < 4.0 * std::max(c_prev, 1e-3));  // no growth
            c_prev = std::max(c_prev, c);
        }
    }
}

TEST_CASE("dE/dz equals minus mass times force") {
    for (const KinkProfile* p : {&sgp(), &p4n()}) {
        const double z = 12.0, h = 1e-3;
        const double d = (pair_energy_defect(*p, z + h) - pair_energy_defect(*p, z - h)) /
                         (2.0 * h);
        const double mass = kink_constants_normalized(*p).mass;
        CHECK(std::abs(d + mass * force(*p, z)) < 1e-6);
    }
}

TEST_CASE("projections on both translation modes coincide") {
    const KinkProfile& p = sgp();
    const double x1 = -6.0, x2 = 6.0;
    auto proj = [&](int which) {
        auto f = [&](double x) {
            return p.eval(x - (which == 1 ? x1 : x2), 1) *
                   interaction_field(p, x1, x2, x);
        };
        return trapezoid_sampled(f, x1 - 20.0, x2 + 20.0, 8000);
    };
    const double a = proj(1), b = proj(2);
    CHECK(std::abs(a - b) < 1e-10 * std::max(std::abs(a), 1.0));
}

TEST_CASE("superposition residual decays exponentially in the half-distance") {
    const KinkProfile& p = sgp();
    DipoleResidual r5 = dipole_residual(p, 5.0);
    DipoleResidual r6 = dipole_residual(p, 6.0);
    DipoleResidual r7 = dipole_residual(p, 7.0);
    DipoleResidual r8 = dipole_residual(p, 8.0);
    // fitted decay exponent over a in {5,6,7,8} must be >= 0.75
    const double slope =
        (std::log(r8.sup_residual) - std::log(r5.sup_residual)) / (8.0 - 5.0);
    CHECK(-slope >= 0.75);
    CHECK(r6.sup_residual / r5.sup_residual <= std::exp(-0.75));

    // energy defect: below threshold, decaying
    CHECK(r5.energy_defect < 0.0);
    CHECK(r8.energy_defect < 0.0);
    CHECK(std::abs(r8.energy_defect) < std::abs(r5.energy_defect));

    DipoleResidual far = dipole_residual(p, 30.0);
    CHECK(far.sup_residual < 1e-10);
}

TEST_CASE("force table interpolation and asymptotic extension") {
    ForceTable t = ForceTable::build(sgp(), 2.0, 18.0, 129);
    CHECK(t(7.3) == doctest::Approx(force(sgp(), 7.3)).epsilon(1e-8));
    // beyond the table: asymptote
    const double A = t.amplitude_A();
    CHECK(t(25.0) == doctest::Approx(A * A * std::exp(-25.0)));
    CHECK_THROWS_AS(t(1.0), DomainError);

    // integral_to_inf consistency: numeric derivative is -F
    const double h = 1e-4;
    const double d = (t.integral_to_inf(9.0 + h) - t.integral_to_inf(9.0 - h)) / (2 * h);
    CHECK(std::abs(d + t(9.0)) < 1e-6);
}
