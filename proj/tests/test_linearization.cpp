#include <doctest.h>

#include <cmath>

#include "kinklab/errors.hpp"
#include "kinklab/linearization.hpp"

using namespace kinklab;

namespace {

const KinkProfile& p4p() {
    static KinkProfile p = KinkProfile::build(make_builtin("phi4"));
    return p;
}

const KinkProfile& sgp() {
    static KinkProfile p = KinkProfile::build(make_builtin("sine_gordon"));
    return p;
}

}  // namespace

TEST_CASE("operator annihilates the translation mode") {
    Grid g{-40.0, 40.0, 8001};  // dx = 0.01
    DiscreteOperator op = assemble_single_kink(p4p(), g, 4);
    std::vector<double> dh(g.n), out;
    for (int i = 0; i < g.n; ++i) dh[i] = p4p().eval_model(g.x(i), 1);
    op.apply(dh, out);
    double sup = 0.0;
    for (int i = 2; i < g.n - 2; ++i) sup = std::max(sup, std::abs(out[i]));
    CHECK(sup < 1e-5);
}

TEST_CASE("second-derivative-of-kink identity") {
    // L d2H = -U'''(H) (dH)^2
    Grid g{-40.0, 40.0, 8001};
    const KinkProfile& p = p4p();
    const Potential& pot = p.model_potential();
    DiscreteOperator op = assemble_single_kink(p, g, 4);
    std::vector<double> d2h(g.n), out;
    for (int i = 0; i < g.n; ++i) d2h[i] = p.eval_model(g.x(i), 2);
    op.apply(d2h, out);
    double sup = 0.0;
    for (int i = 2; i < g.n - 2; ++i) {
        const double h = p.eval_model(g.x(i), 0);
        const double dh = p.eval_model(g.x(i), 1);
        const double rhs = -pot.d3u(h) * dh * dh;
        sup = std::max(sup, std::abs(out[i] - rhs));
    }
    CHECK(sup < 1e-4);
}

TEST_CASE("zero-mode residual drops at the stencil order") {
    auto residual = [](int n, int order) {
        Grid g{-40.0, 40.0, n};
        DiscreteOperator op = assemble_single_kink(p4p(), g, order);
        std::vector<double> dh(g.n), out;
        for (int i = 0; i < g.n; ++i) dh[i] = p4p().eval_model(g.x(i), 1);
        op.apply(dh, out);
        double sup = 0.0;
        for (int i = 2; i < g.n - 2; ++i) sup = std::max(sup, std::abs(out[i]));
        return sup;
    };
    const double r2 = residual(2001, 2) / residual(4001, 2);
    CHECK(r2 > 3.5);
    CHECK(r2 < 4.5);
    const double r4 = residual(2001, 4) / residual(4001, 4);
    CHECK(r4 > 12.0);
}

TEST_CASE("pair operator rows far from both kinks are the free operator") {
    Grid g{-40.0, 70.0, 11001};
    DiscreteOperator op = assemble_pair(sgp(), 0.0, 30.0, g, 2);
    // at the far left edge of the interior, U''(background) = 1 after
    // normalization
    const int i_far = 100;  // x ~ -39
    CHECK(std::abs(op.diagonal[i_far] - 1.0) < 1e-10);
    const int i_mid_far = int((15.0 - g.x_min) / g.dx());  // midpoint, z=30
    CHECK(std::abs(op.diagonal[i_mid_far] - 1.0) < 2e-6);  // e^{-15} tails
    CHECK(op.continuum_edge == 1.0);
}

TEST_CASE("operator symmetry under the discrete inner product") {
    Grid g{-25.0, 25.0, 2501};
    DiscreteOperator op = assemble_single_kink(sgp(), g, 2);
    std::vector<double> u(g.n), v(g.n), Lu, Lv;
    unsigned state = 12345u;
    auto rnd = [&state]() {
        state = state * 1664525u + 1013904223u;
        return double(state) / 4294967296.0 - 0.5;
    };
    for (int i = 1; i < g.n - 1; ++i) {
        u[i] = rnd();
        v[i] = rnd();
    }
    op.apply(u, Lu);
    op.apply(v, Lv);
    double a = 0.0, b = 0.0;
    for (int i = 0; i < g.n; ++i) {
        a += u[i] * Lv[i];
        b += Lu[i] * v[i];
    }
    a *= g.dx();
    b *= g.dx();
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
}

TEST_CASE("phi4 spectrum: zero mode and internal mode below the edge") {
    Grid g{-40.0, 40.0, 8001};
    SpectrumResult res = spectrum_richardson(p4p(), g, 2, OperatorUnits::model);
    CHECK(std::abs(res.eigenvalues[0]) < 1e-6);
    CHECK(res.eigenvalues[1] == doctest::Approx(1.5).epsilon(1e-3 / 1.5));
    CHECK(res.continuum_edge == doctest::Approx(2.0));
    CHECK(res.zero_mode_overlap > 1.0 - 1e-6);
}

TEST_CASE("sine-Gordon spectrum: zero mode only below the edge") {
    Grid g{-40.0, 40.0, 8001};
    SpectrumResult res = spectrum_richardson(sgp(), g, 2, OperatorUnits::model);
    CHECK(std::abs(res.eigenvalues[0]) < 1e-6);
    CHECK(res.continuum_edge == doctest::Approx(1.0));
    // next eigenvalue sits at the truncated continuum edge, not below it
    CHECK(res.eigenvalues[1] > 0.99);
}

TEST_CASE("spectrum preconditions") {
    Grid g{-40.0, 40.0, 4001};
    DiscreteOperator op = assemble_single_kink(p4p(), g, 2);
    CHECK_THROWS_AS(spectrum(op, 11), DomainError);
    DiscreteOperator op4 = assemble_single_kink(p4p(), g, 4);
    CHECK_THROWS_AS(spectrum(op4, 2), DomainError);
    Grid tiny{-5.0, 5.0, 257};
    CHECK_THROWS_AS(assemble_single_kink(p4p(), tiny, 2), DomainError);
}

TEST_CASE("coercivity: positive minimum, near-kernel direction, far bump") {
    Grid g{-25.0, 55.0, 8001};  // dx = 0.01
    DiscreteOperator op = assemble_pair(sgp(), 0.0, 30.0, g, 2);

    CoercivityResult res = coercivity_check(op, sgp(), 200, 2024);
    CHECK(res.min_quotient > 0.0);

    // grid stability: same continuum trial functions on a refined grid
    Grid g2{-25.0, 55.0, 16001};
    DiscreteOperator op2 = assemble_pair(sgp(), 0.0, 30.0, g2, 2);
    CoercivityResult res2 = coercivity_check(op2, sgp(), 200, 2024);
    CHECK(std::abs(res2.min_quotient - res.min_quotient) <
          0.1 * std::max(res.min_quotient, res2.min_quotient));

    // unprojected translation mode: quotient collapses
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = sgp().eval(g.x(i), 1);
    const double q_kernel = quadratic_form(op, v) / h1_norm_sq(v, g.dx());
    CHECK(std::abs(q_kernel) < 1e-4);

    // smooth bump far from both kinks: free-operator quotient, near its
    // L2/H1 ratio
    std::vector<double> b(g.n, 0.0);
    for (int i = 0; i < g.n; ++i) {
        const double u = (g.x(i) - 45.0) / 2.0;
        b[i] = std::exp(-0.5 * u * u);
    }
    const double q_far = quadratic_form(op, b) / h1_norm_sq(b, g.dx());
    const double expected = 1.0 / (1.0 + 0.25);  // |v|^2 + |v'|^2 with width 2
    CHECK(q_far > 0.95 * expected);
    CHECK(q_far < 1.0);
}

TEST_CASE("coercivity preconditions") {
    Grid g{-25.0, 55.0, 8001};
    DiscreteOperator pair = assemble_pair(sgp(), 0.0, 30.0, g, 2);
    CHECK_THROWS_AS(coercivity_check(pair, sgp(), 50, 1), DomainError);
    DiscreteOperator single = assemble_single_kink(sgp(), g, 2);
    CHECK_THROWS_AS(coercivity_check(single, sgp(), 200, 1), DomainError);
}
