#pragma once

#include <vector>

#include "coplan/lqr.hpp"
#include "coplan/propagation.hpp"
#include "coplan/team.hpp"
#include "coplan/validation.hpp"

namespace coplan {

/// Outcome of propagating a control sequence under the availability rule
/// with per-step validation.
struct GuardedExtension {
    bool ok = false;
    Violation cause = Violation::None;   // first failed family when !ok
    bool numeric_failure = false;
    ExpectedBelief terminal;
    EdgeRecord record;
};

/// Propagates `controls` from `from`, constructing the measurement schedule
/// on the fly: at every step each pair whose availability chance check
/// passes on the arrival-step Gamma is activated. Every intermediate belief
/// is validated (obstacles, robot-robot); the first violation aborts the
/// extension and is reported as the cause.
GuardedExtension propagate_guarded(const TeamModel& model, const ValidationContext& ctx, const Matrix& K,
                                   const ExpectedBelief& from, const std::vector<Vector>& controls);

} // namespace coplan
