#pragma once

#include <cstdint>

namespace coplan {

/// Monte-Carlo soundness audit of the two pairwise chance checks over
/// randomized difference beliefs: wherever a check answers true, the
/// empirical violation probability must stay within the budget plus a
/// three-sigma binomial sampling margin. `worst_margin` is the smallest
/// observed slack (bound minus estimate); negative means a failure.
struct TheoremCheckReport {
    int cases_total = 0;
    int thm1_checked = 0;
    int thm1_failures = 0;
    double thm1_worst_margin = 1.0;
    int thm2_checked = 0;
    int thm2_failures = 0;
    double thm2_worst_margin = 1.0;
};

TheoremCheckReport run_theorem_checks(int cases, std::uint64_t samples, std::uint64_t seed);

} // namespace coplan
