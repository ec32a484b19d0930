#include <doctest.h>

#include <cmath>

#include "kinklab/errors.hpp"
#include "kinklab/potential.hpp"

using namespace kinklab;

TEST_CASE("builtin values") {
    Potential p4 = make_builtin("phi4");
    CHECK(p4.u(0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p4.d2u(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p4.phi_plus == 1.0);

    Potential sg = make_builtin("sine_gordon");
    CHECK(std::abs(sg.u(M_PI)) < 1e-15);
    CHECK(sg.d2u(M_PI) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sg.u(0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sg.phi_plus == doctest::Approx(M_PI));
}

TEST_CASE("unknown model is rejected with the supported list") {
    try {
        make_builtin("phi6");
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        std::string msg = e.what();
        CHECK(msg.find("phi4") != std::string::npos);
        CHECK(msg.find("sine_gordon") != std::string::npos);
    }
}

TEST_CASE("normalization maps to unit vacuum and curvature") {
    // Symbolic oracle for phi4: U_ref(phi) = U(phi)/2 = (1-phi^2)^2/8.
    auto [q4, rec4] = normalize(make_builtin("phi4"));
    for (double v : {-0.9, -0.3, 0.0, 0.4, 0.8, 1.0}) {
        double w = 1.0 - v * v;
        CHECK(q4.u(v) == doctest::Approx(w * w / 8.0).epsilon(1e-14));
    }
    CHECK(q4.phi_plus == 1.0);
    CHECK(q4.d2u(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec4.phi_scale == 1.0);
    CHECK(rec4.time_scale == doctest::Approx(1.0 / std::sqrt(2.0)));

    // Oracle for sine-Gordon: U_ref(phi) = (1 + cos(pi phi))/pi^2.
    auto [qs, recs] = normalize(make_builtin("sine_gordon"));
    for (double v : {-0.7, 0.0, 0.25, 0.9}) {
        CHECK(qs.u(v) ==
              doctest::Approx((1.0 + std::cos(M_PI * v)) / (M_PI * M_PI)).epsilon(1e-14));
    }
    CHECK(recs.phi_scale == doctest::Approx(M_PI));
    CHECK(recs.time_scale == doctest::Approx(1.0));
}

TEST_CASE("normalize is idempotent") {
    auto [q, rec1] = normalize(make_builtin("phi4"));
    auto [q2, rec2] = normalize(q);
    CHECK(rec2.was_normalized);
    CHECK(rec2.phi_scale == 1.0);
    for (double v = -1.0; v <= 1.0; v += 0.125) {
        CHECK(std::abs(q2.u(v) - q.u(v)) < 1e-12);
        CHECK(std::abs(q2.du(v) - q.du(v)) < 1e-12);
    }
    (void)rec1;
}

TEST_CASE("validate passes builtins") {
    CHECK(validate(make_builtin("phi4"), 256).passed);
    CHECK(validate(make_builtin("sine_gordon"), 256).passed);
    auto [q, rec] = normalize(make_builtin("sine_gordon"));
    CHECK(validate(q, 256).passed);
    (void)rec;
}

TEST_CASE("validate rejects a lifted well (vacuum condition)") {
    Potential p = make_builtin("phi4");
    p.u = [](double v) { double w = 1.0 - v * v; return 0.25 * w * w + 0.01; };
    ValidationReport rep = validate(p, 64);
    CHECK_FALSE(rep.passed);
    bool found = false;
    for (const auto& is : rep.issues)
        if (is.condition.find("vacuum") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate rejects an odd perturbation (evenness)") {
    Potential p = make_builtin("phi4");
    p.u = [](double v) { double w = 1.0 - v * v; return 0.25 * w * w * (1.0 + 0.1 * v); };
    ValidationReport rep = validate(p, 64);
    CHECK_FALSE(rep.passed);
    bool found = false;
    for (const auto& is : rep.issues)
        if (is.condition.find("evenness") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate rejects inconsistent derivative handles") {
    Potential p = make_builtin("phi4");
    p.du = [](double v) { return v * v * v - 0.9 * v; };  // wrong derivative
    CHECK_FALSE(validate(p, 64).passed);
}

TEST_CASE("validate requires a minimum sample count") {
    CHECK_THROWS_AS(validate(make_builtin("phi4"), 8), DomainError);
}

TEST_CASE("polynomial potential matches the builtin phi4") {
    // 1/4 (1 - v^2)^2 = 1/4 - v^2/2 + v^4/4
    Potential p = make_polynomial("poly4", {0.25, 0.0, -0.5, 0.0, 0.25}, 1.0);
    CHECK(validate(p, 128).passed);
    Potential q = make_builtin("phi4");
    for (double v = -1.0; v <= 1.0; v += 0.2) {
        CHECK(p.u(v) == doctest::Approx(q.u(v)).epsilon(1e-13));
        CHECK(p.d3u(v) == doctest::Approx(q.d3u(v)).epsilon(1e-13));
    }
    CHECK(p.curvature == doctest::Approx(2.0));
}

TEST_CASE("derivative handles track finite differences at second order") {
    // Empirical order check: error at h=1e-2 vs h=1e-3 should drop ~100x.
    for (const char* name : {"phi4", "sine_gordon"}) {
        Potential p = make_builtin(name);
        auto max_err = [&](double h) {
            double worst = 0.0;
            for (double v = -0.9 * p.phi_plus; v <= 0.9 * p.phi_plus;
                 v += p.phi_plus / 7.0) {
                double fd = (p.u(v + h) - p.u(v - h)) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - p.du(v)));
            }
            return worst;
        };
        double e2 = max_err(1e-2), e3 = max_err(1e-3);
        REQUIRE(e2 > 1e-12);  // truncation-dominated at this h
        CHECK(e2 / e3 > 50.0);
        CHECK(e2 / e3 < 200.0);
    }
}
