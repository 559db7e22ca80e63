#include "coplan/theorems.hpp"

#include <cmath>

#include "coplan/errors.hpp"
#include "coplan/rng.hpp"
#include "coplan/validation.hpp"

namespace coplan {

TheoremCheckReport run_theorem_checks(int cases, std::uint64_t samples, std::uint64_t seed) {
    if (cases < 1) throw ArgumentError("run_theorem_checks: cases must be >= 1");
    if (samples < 1000) throw ArgumentError("run_theorem_checks: at least 1000 samples required");

    Rng rng(seed);
    TheoremCheckReport report;
    report.cases_total = cases;

    const double budgets[] = {0.01, 0.05, 0.1};

    for (int c = 0; c < cases; ++c) {
        const double theta = rng.uniform(0.0, M_PI);
        Matrix rot(2, 2);
        rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        const Vector eigs = (Vector(2) << rng.uniform(1e-4, 0.25), rng.uniform(1e-4, 0.25)).finished();
        const Matrix cov = rot * eigs.asDiagonal() * rot.transpose();
        const Vector mean = (Vector(2) << rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)).finished();
        const DifferenceBelief diff(mean, cov);

        const double p = budgets[c % 3];
        const double r_i = rng.uniform(0.05, 0.3);
        const double r_j = rng.uniform(0.05, 0.3);
        const double r_ext = rng.uniform(0.5, 3.0);
        const double slack = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));

        const bool want1 = check_robot_robot(diff, r_i, r_j, p);
        const bool want2 = check_ext_enabled(diff, r_ext, p);
        if (!want1 && !want2) continue;

        const GaussianSampler sampler(diff.mean(), diff.covariance());
        std::uint64_t collisions = 0;
        std::uint64_t unavailable = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
            const double norm = sampler.draw(rng).norm();
            if (norm <= r_i + r_j) ++collisions;
            if (norm > r_ext) ++unavailable;
        }

        if (want1) {
            ++report.thm1_checked;
            const double estimate = static_cast<double>(collisions) / static_cast<double>(samples);
            const double margin = (p + slack) - estimate;
            report.thm1_worst_margin = std::min(report.thm1_worst_margin, margin);
            if (margin < 0.0) ++report.thm1_failures;
        }
        if (want2) {
            ++report.thm2_checked;
            const double estimate = static_cast<double>(unavailable) / static_cast<double>(samples);
            const double margin = (p + slack) - estimate;
            report.thm2_worst_margin = std::min(report.thm2_worst_margin, margin);
            if (margin < 0.0) ++report.thm2_failures;
        }
    }
    return report;
}

} // namespace coplan
