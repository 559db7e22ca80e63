#include "coplan/propagation.hpp"

#include <Eigen/Cholesky>

#include "coplan/errors.hpp"

namespace coplan {

namespace {

// Solve S X = M^T for the Kalman gain L = (S^{-1} M)^T with S symmetric
// positive definite up to jitter.
Matrix innovation_solve(const Matrix& S, const Matrix& M) {
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() == Eigen::Success) return llt.solve(M).transpose();
    Matrix jittered = S + 1e-12 * Matrix::Identity(S.rows(), S.cols());
    Eigen::LLT<Matrix> retry(jittered);
    if (retry.info() == Eigen::Success) return retry.solve(M).transpose();
    throw NumericError("innovation matrix singular beyond jitter");
}

} // namespace

ExpectedBelief propagate_step(const TeamModel& model, const ExpectedBelief& belief, const Vector& u,
                              const Matrix& C, const Matrix& R, const Matrix& K) {
    const Matrix& A = model.A();
    const Matrix& B = model.B();
    if (belief.mean.size() != model.state_dim()) throw DimensionError("propagate_step: belief dimension mismatch");
    if (u.size() != model.control_dim()) throw DimensionError("propagate_step: control dimension mismatch");
    if (C.cols() != model.state_dim() && C.rows() != 0) throw DimensionError("propagate_step: C column mismatch");
    if (R.rows() != C.rows() || R.cols() != C.rows()) throw DimensionError("propagate_step: R shape mismatch");

    ExpectedBelief next;
    next.time_index = belief.time_index + 1;
    next.mean = A * belief.mean + B * u;

    Matrix sigma_bar = A * belief.sigma * A.transpose() + model.Q();
    sigma_bar = ((sigma_bar + sigma_bar.transpose()) / 2.0).eval();

    const Matrix A_cl = A - B * K;
    Matrix lambda_next = A_cl * belief.lambda * A_cl.transpose();

    if (C.rows() == 0) {
        next.sigma = sigma_bar;
        next.lambda = lambda_next;
    } else {
        const Matrix CS = C * sigma_bar;                       // C Sbar
        const Matrix S = CS * C.transpose() + R;               // innovation covariance
        const Matrix L = innovation_solve(S, CS);              // Sbar C^T S^{-1}
        const Matrix LCS = L * CS;
        next.sigma = sigma_bar - LCS;
        next.lambda = lambda_next + LCS;
    }

    repair_covariance(next.sigma, "propagated sigma");
    repair_covariance(next.lambda, "propagated lambda");
    return next;
}

Matrix predicted_gamma(const TeamModel& model, const ExpectedBelief& belief, const Matrix& K) {
    const Matrix& A = model.A();
    const Matrix A_cl = A - model.B() * K;
    Matrix g = A * belief.sigma * A.transpose() + model.Q() + A_cl * belief.lambda * A_cl.transpose();
    return ((g + g.transpose()) / 2.0).eval();
}

std::pair<ExpectedBelief, EdgeRecord> propagate_edge(const TeamModel& model, const ExpectedBelief& from,
                                                     const std::vector<Vector>& controls,
                                                     const MeasurementSchedule& schedule, const Matrix& K) {
    if (schedule.length() != controls.size()) {
        throw DimensionError("propagate_edge: schedule length != control count");
    }
    schedule.validate(model);

    EdgeRecord record;
    record.states.push_back(from.mean);

    ExpectedBelief current = from;
    for (std::size_t k = 0; k < controls.size(); ++k) {
        auto [C, R] = assemble_measurement(model, schedule.active_pairs[k]);
        current = propagate_step(model, current, controls[k], C, R, K);
        record.controls.push_back(controls[k]);
        record.states.push_back(current.mean);
        record.schedule.push_back(schedule.active_pairs[k]);
    }
    return {std::move(current), std::move(record)};
}

} // namespace coplan
