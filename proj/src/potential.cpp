#include "kinklab/potential.hpp"

#include <cmath>
#include <sstream>

#include "kinklab/errors.hpp"

namespace kinklab {

bool Potential::is_normalized(double tol) const {
    return std::abs(phi_plus - 1.0) <= tol && std::abs(curvature - 1.0) <= tol;
}

Potential make_builtin(const std::string& name) {
    Potential p;
    p.name = name;
    if (name == "phi4") {
        // (1-v)(1+v) keeps full precision next to the vacua.
        p.u = [](double v) { double w = (1.0 - v) * (1.0 + v); return 0.25 * w * w; };
        p.du = [](double v) { return v * v * v - v; };
        p.d2u = [](double v) { return 3.0 * v * v - 1.0; };
        p.d3u = [](double v) { return 6.0 * v; };
        p.phi_plus = 1.0;
        p.curvature = 2.0;
        p.fast_force = BuiltinForce::phi4;
    } else if (name == "sine_gordon") {
        // 1 + cos v written as 2 cos^2(v/2): no cancellation at v = pi.
        p.u = [](double v) { double c = std::cos(0.5 * v); return 2.0 * c * c; };
        p.du = [](double v) { return -std::sin(v); };
        p.d2u = [](double v) { return -std::cos(v); };
        p.d3u = [](double v) { return std::sin(v); };
        p.phi_plus = M_PI;
        p.curvature = 1.0;
        p.fast_force = BuiltinForce::sine_gordon;
    } else {
        throw DomainError("unknown model '" + name +
                          "'; supported models: phi4, sine_gordon");
    }
    return p;
}

Potential make_polynomial(const std::string& name, const std::vector<double>& coeffs,
                          double phi_plus) {
    if (phi_plus <= 0.0) throw DomainError("polynomial potential: phi_plus must be positive");
    if (coeffs.empty()) throw DomainError("polynomial potential: empty coefficient list");

    auto poly_deriv = [](const std::vector<double>& c) {
        std::vector<double> d;
        for (std::size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
        if (d.empty()) d.push_back(0.0);
        return d;
    };
    auto horner = [](const std::vector<double>& c, double v) {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * v + c[k];
        return acc;
    };

    std::vector<double> c1 = poly_deriv(coeffs);
    std::vector<double> c2 = poly_deriv(c1);
    std::vector<double> c3 = poly_deriv(c2);

    Potential p;
    p.name = name;
    p.u = [coeffs, horner](double v) { return horner(coeffs, v); };
    p.du = [c1, horner](double v) { return horner(c1, v); };
    p.d2u = [c2, horner](double v) { return horner(c2, v); };
    p.d3u = [c3, horner](double v) { return horner(c3, v); };
    p.phi_plus = phi_plus;
    p.curvature = p.d2u(phi_plus);
    return p;
}

std::pair<Potential, NormalizationRecord> normalize(const Potential& p) {
    NormalizationRecord rec;
    rec.phi_scale = p.phi_plus;
    rec.time_scale = 1.0 / std::sqrt(p.curvature);
    rec.was_normalized = p.is_normalized();

    if (rec.was_normalized) {
        NormalizationRecord identity;
        identity.was_normalized = true;
        return {p, identity};
    }

    const double a = p.phi_plus;
    const double c = p.curvature;
    const double escale = 1.0 / (a * a * c);

    Potential q;
    q.name = p.name + "_normalized";
    q.u = [f = p.u, a, escale](double v) { return escale * f(a * v); };
    q.du = [f = p.du, a, escale](double v) { return escale * a * f(a * v); };
    q.d2u = [f = p.d2u, a, escale](double v) { return escale * a * a * f(a * v); };
    q.d3u = [f = p.d3u, a, escale](double v) { return escale * a * a * a * f(a * v); };
    q.phi_plus = 1.0;
    q.curvature = 1.0;
    if (p.fast_force == BuiltinForce::phi4) q.fast_force = BuiltinForce::phi4_normalized;
    if (p.fast_force == BuiltinForce::sine_gordon)
        q.fast_force = BuiltinForce::sine_gordon_normalized;
    return {q, rec};
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    if (passed) {
        os << "potential validation passed";
        return os.str();
    }
    os << "potential validation failed:";
    for (const auto& is : issues) {
        os << "\n  " << is.condition << ": violation " << is.worst_value << " at phi="
           << is.worst_point << " (tolerance " << is.tolerance << ")";
    }
    return os.str();
}

namespace {

void check(ValidationReport& rep, const std::string& cond, double worst, double at,
           double tol) {
    if (worst > tol) {
        rep.passed = false;
        rep.issues.push_back({cond, worst, at, tol});
    }
}

// Max |f'(v) - centered difference of f| over the sample grid.
void derivative_check(ValidationReport& rep, const std::string& cond,
                      const std::function<double(double)>& f,
                      const std::function<double(double)>& fprime, double a, int samples,
                      double h, double tol) {
    double worst = 0.0, at = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double v = -a + 2.0 * a * i / samples;
        double fd = (f(v + h) - f(v - h)) / (2.0 * h);
        double err = std::abs(fprime(v) - fd);
        if (err > worst) { worst = err; at = v; }
    }
    check(rep, cond, worst, at, tol);
}

}  // namespace

ValidationReport validate(const Potential& p, int samples) {
    if (samples < 16) throw DomainError("validate: samples must be >= 16");
    ValidationReport rep;
    const double a = p.phi_plus;

    check(rep, "vacuum value u(phi_plus)=0", std::abs(p.u(a)), a, 1e-12);
    check(rep, "vacuum value u(-phi_plus)=0", std::abs(p.u(-a)), -a, 1e-12);
    check(rep, "curvature = d2u(phi_plus) > 0", p.curvature > 0 ? 0.0 : 1.0, a, 0.0);
    check(rep, "curvature field matches d2u(phi_plus)",
          std::abs(p.d2u(a) - p.curvature), a, 1e-12);

    // Positivity strictly inside (-phi_plus, phi_plus) and evenness.
    double worst_pos = 0.0, at_pos = 0.0;
    double worst_even = 0.0, at_even = 0.0;
    for (int i = 1; i < samples; ++i) {
        double v = -a + 2.0 * a * i / samples;
        if (p.u(v) <= 0.0 && std::abs(v) < a * (1.0 - 1e-9)) {
            double viol = p.u(v) <= 0.0 ? std::max(1e-300, -p.u(v) + 1e-300) : 0.0;
            if (viol >= worst_pos) { worst_pos = viol; at_pos = v; }
        }
        double ev = std::abs(p.u(v) - p.u(-v));
        if (ev > worst_even) { worst_even = ev; at_even = v; }
    }
    check(rep, "u > 0 inside the well", worst_pos, at_pos, 0.0);
    check(rep, "evenness u(-phi)=u(phi)", worst_even, at_even, 1e-12);

    // Derivative handles against centered differences, checked along the chain
    // u -> du -> d2u -> d3u so round-off stays at eps/h. Thresholds are scaled
    // for an O(h^2) truncation error with an O(1) constant.
    const double scale = std::max(1.0, std::abs(p.u(0.0)) + p.curvature);
    for (double h : {1e-3, 1e-4}) {
        const double tol = 10.0 * scale * h * h + 1e-10;
        std::ostringstream tag;
        tag << " (h=" << h << ")";
        derivative_check(rep, "du = d/dphi u" + tag.str(), p.u, p.du, a, samples, h, tol);
        derivative_check(rep, "d2u = d/dphi du" + tag.str(), p.du, p.d2u, a, samples, h, tol);
        derivative_check(rep, "d3u = d/dphi d2u" + tag.str(), p.d2u, p.d3u, a, samples, h, tol);
    }
    return rep;
}

}  // namespace kinklab
