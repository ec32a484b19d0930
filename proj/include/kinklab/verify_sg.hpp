#ifndef KINKLAB_VERIFY_SG_HPP
#define KINKLAB_VERIFY_SG_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace kinklab {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifySgReport {
    std::vector<VerifyCheck> checks;
    bool all_passed = true;
    double wall_seconds = 0.0;

    void add(const std::string& name, bool ok, double value, double threshold,
             const std::string& detail = "");
    nlohmann::json to_json() const;
};

struct VerifySgOptions {
    // closed-form evolution run
    double dx = 0.01;
    double dt = 0.005;
    double t_end = 20.0;
    // modulation run
    double track_t_end = 41.0;
    double fit_lo = 10.0, fit_hi = 40.0;
};

/// End-to-end sine-Gordon verification: exact-pair evolution against the
/// closed form (accuracy, convergence order, energy), then modulation
/// tracking and the separation-law fit.
VerifySgReport verify_sg(const VerifySgOptions& opt = {});

}  // namespace kinklab

#endif
