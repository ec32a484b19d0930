#include <doctest.h>

#include <cmath>

#include "kinklab/errors.hpp"
#include "kinklab/kink_profile.hpp"
#include "kinklab/potential.hpp"
#include "kinklab/quadrature.hpp"

using namespace kinklab;

namespace {

const KinkProfile& phi4_profile() {
    static KinkProfile p = KinkProfile::build(make_builtin("phi4"));
    return p;
}

const KinkProfile& sg_profile() {
    static KinkProfile p = KinkProfile::build(make_builtin("sine_gordon"));
    return p;
}

}  // namespace

TEST_CASE("G closed form for normalized phi4: G(psi) = 2 artanh(psi)") {
    auto [q, rec] = normalize(make_builtin("phi4"));
    CHECK(compute_G(q, 0.5) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-12));
    CHECK(compute_G(q, 0.0) == 0.0);
    CHECK(compute_G(q, -0.5) == doctest::Approx(-2.0 * std::atanh(0.5)).epsilon(1e-12));
    CHECK(compute_G(q, 0.999) ==
          doctest::Approx(2.0 * std::atanh(0.999)).epsilon(1e-12));
    CHECK_THROWS_AS(compute_G(q, 1.0), DomainError);
    (void)rec;
}

TEST_CASE("G closed form for normalized sine-Gordon") {
    auto [q, rec] = normalize(make_builtin("sine_gordon"));
    // Inverse of H(x) = (4 atan(e^x) - pi)/pi.
    for (double psi : {0.1, 0.5, 0.9}) {
        double expected = std::log(std::tan(M_PI * (psi + 1.0) / 4.0));
        CHECK(compute_G(q, psi) == doctest::Approx(expected).epsilon(1e-12));
    }
    (void)rec;
}

TEST_CASE("phi4 normalized kink is tanh(x/2) on [-20, 20]") {
    const KinkProfile& p = phi4_profile();
    double worst = 0.0;
    for (double x = -20.0; x <= 20.0; x += 0.173) {
        worst = std::max(worst, std::abs(p.eval(x, 0) - std::tanh(0.5 * x)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("phi4 model kink mapped back is tanh(x/sqrt2)") {
    const KinkProfile& p = phi4_profile();
    double worst = 0.0;
    for (double x = -14.0; x <= 14.0; x += 0.211) {
        worst = std::max(worst, std::abs(p.eval_model(x, 0) - std::tanh(x / std::sqrt(2.0))));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("sine-Gordon model kink is 4 atan(e^x) - pi") {
    const KinkProfile& p = sg_profile();
    double worst = 0.0;
    for (double x = -19.0; x <= 19.0; x += 0.247) {
        worst = std::max(worst, std::abs(p.eval_model(x, 0) -
                                         (4.0 * std::atan(std::exp(x)) - M_PI)));
    }
    CHECK(worst < 1e-8);
    // derivative at the center: dH/dx(0) = sqrt(2 U(0)) = 2
    CHECK(p.eval_model(0.0, 1) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("kappa by quadrature: phi4 -> 2, sine-Gordon -> 4/pi") {
    CHECK(compute_kappa(phi4_profile().normalized_potential()) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(compute_kappa(make_builtin("phi4")) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(compute_kappa(make_builtin("sine_gordon")) ==
          doctest::Approx(4.0 / M_PI).epsilon(1e-10));
}

TEST_CASE("kappa tail-limit route agrees with the quadrature route") {
    CHECK(std::abs(kappa_tail_limit(phi4_profile()) - 2.0) < 1e-8);
    CHECK(std::abs(kappa_tail_limit(sg_profile()) - 4.0 / M_PI) < 1e-8);

    // Third route for sine-Gordon: e^x (1 - H(x)/pi) from the closed-form kink.
    double x = 18.0;
    double closed = std::exp(x) * (4.0 * std::atan(std::exp(-x)) / M_PI);
    CHECK(std::abs(kappa_tail_limit(sg_profile()) - closed) < 1e-6);
}

TEST_CASE("kink constants: mass and energy") {
    KinkConstants c4 = kink_constants_normalized(phi4_profile());
    CHECK(c4.mass == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(c4.energy == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

    KinkConstants cs = kink_constants(sg_profile());
    CHECK(cs.mass == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(cs.energy == doctest::Approx(8.0).epsilon(1e-10));

    // energy == mass whenever sqrt(2U) is even
    CHECK(std::abs(cs.mass - cs.energy) < 1e-9);
}

TEST_CASE("eval tails and center") {
    CHECK(phi4_profile().eval(0.0, 0) == 0.0);
    // x = 40 sits deep in the tail: value is 1 - 2e^{-40}
    double v = phi4_profile().eval(40.0, 0);
    CHECK(std::abs(v - (1.0 - 2.0 * std::exp(-40.0))) / 1.0 < 1e-17);
    CHECK(phi4_profile().eval(40.0, 1) == doctest::Approx(2.0 * std::exp(-40.0)));
    CHECK(phi4_profile().eval(-40.0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("profile tables are odd and strictly increasing") {
    const KinkProfile& p = sg_profile();
    const auto& h = p.h_table();
    const auto& x = p.x_table();
    const int n = int(h.size());
    for (int i = 1; i < n; ++i) CHECK(h[i] > h[i - 1]);
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(h[i] + h[n - 1 - i]) < 1e-10);
        CHECK(std::abs(x[i] + x[n - 1 - i]) < 1e-12);
    }
}

TEST_CASE("first-order reduction residual is small everywhere") {
    for (const KinkProfile* p : {&phi4_profile(), &sg_profile()}) {
        const Potential& q = p->normalized_potential();
        double worst = 0.0;
        for (double x = -19.5; x <= 19.5; x += 0.0917) {
            double res = p->eval(x, 1) - std::sqrt(2.0 * q.u(p->eval(x, 0)));
            worst = std::max(worst, std::abs(res));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("static equation residual at interior points") {
    const KinkProfile& p = phi4_profile();
    const Potential& q = p.normalized_potential();
    double worst = 0.0;
    for (double x = -18.0; x <= 18.0; x += 0.1037) {
        worst = std::max(worst, std::abs(p.eval(x, 2) - q.du(p.eval(x, 0))));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("G(H(x)) = x round-trip at interior nodes") {
    const KinkProfile& p = sg_profile();
    const Potential& q = p.normalized_potential();
    const auto& xs = p.x_table();
    const auto& hs = p.h_table();
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); i += 37) {
        if (std::abs(xs[i]) > p.x_switch()) continue;
        worst = std::max(worst, std::abs(compute_G(q, hs[i]) - xs[i]));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("tail amplitude converges to kappa at the asymptotic rate") {
    const KinkProfile& p = sg_profile();
    const double k = p.kappa();
    // |e^x (1 - H) - kappa| <= C e^{-x}: estimate C at x=16 and check decay.
    double d16 = std::abs(std::exp(16.0) * p.tail_distance(16.0) - k);
    double d20 = std::abs(std::exp(20.0) * p.tail_distance(20.0) - k);
    CHECK(d20 < d16);
    double c_est = d16 * std::exp(16.0);
    CHECK(d20 <= 4.0 * c_est * std::exp(-20.0));
}

TEST_CASE("eval is continuous across the tail switch") {
    for (const KinkProfile* p : {&phi4_profile(), &sg_profile()}) {
        double xs = p->x_switch();
        for (int order : {0, 1, 2}) {
            double below = p->eval(xs - 1e-9, order);
            double above = p->eval(xs + 1e-9, order);
            CHECK(std::abs(below - above) < 1e-9);
        }
    }
}

TEST_CASE("doubling nodes gives fourth-order interpolation convergence") {
    Potential m = make_builtin("phi4");
    KinkProfile coarse = KinkProfile::build(m, 20.0, 1024);
    KinkProfile fine = KinkProfile::build(m, 20.0, 2048);
    auto max_err = [](const KinkProfile& p) {
        double worst = 0.0;
        for (double x = 0.013; x < 8.0; x += 0.1013) {
            worst = std::max(worst, std::abs(p.eval(x, 0) - std::tanh(0.5 * x)));
        }
        return worst;
    };
    double ec = max_err(coarse), ef = max_err(fine);
    REQUIRE(ec > 1e-15);
    CHECK(ec / ef > 10.0);  // ~16x for clean fourth order
}

TEST_CASE("build preconditions") {
    Potential m = make_builtin("phi4");
    CHECK_THROWS_AS(KinkProfile::build(m, 10.0, 4096), DomainError);
    CHECK_THROWS_AS(KinkProfile::build(m, 20.0, 512), DomainError);
}
