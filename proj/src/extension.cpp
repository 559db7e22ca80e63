#include "coplan/extension.hpp"

#include "coplan/errors.hpp"

namespace coplan {

GuardedExtension propagate_guarded(const TeamModel& model, const ValidationContext& ctx, const Matrix& K,
                                   const ExpectedBelief& from, const std::vector<Vector>& controls) {
    GuardedExtension out;
    out.record.states.push_back(from.mean);

    const double ncl_budget = ctx.pair_ncl_budget(model.num_robots());
    ExpectedBelief current = from;

    for (const Vector& u : controls) {
        const Matrix gamma_pred = predicted_gamma(model, current, K);
        const Vector mean_next = model.A() * current.mean + model.B() * u;

        std::vector<int> active;
        for (int p = 0; p < static_cast<int>(model.pairs().size()); ++p) {
            const ExteroPair& ep = model.pair(p);
            const DifferenceBelief diff = pair_difference(model, mean_next, gamma_pred, ep.i, ep.j);
            if (check_ext_enabled(diff, ep.r_ext, ncl_budget)) active.push_back(p);
        }

        auto [C, R] = assemble_measurement(model, active);
        try {
            current = propagate_step(model, current, u, C, R, K);
        } catch (const NumericError&) {
            out.numeric_failure = true;
            return out;
        }

        const Violation v = first_violation(current, model, ctx, active);
        if (v != Violation::None) {
            out.cause = v;
            return out;
        }

        out.record.controls.push_back(u);
        out.record.states.push_back(current.mean);
        out.record.schedule.push_back(std::move(active));
    }

    out.ok = true;
    out.terminal = std::move(current);
    return out;
}

} // namespace coplan
