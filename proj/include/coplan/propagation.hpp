#pragma once

#include <vector>

#include "coplan/gaussian.hpp"
#include "coplan/lqr.hpp"
#include "coplan/team.hpp"
#include "coplan/types.hpp"

namespace coplan {

/// Belief planned over: nominal composed state plus the two covariance
/// tracks. `sigma` is the online Kalman-filter estimate covariance and
/// `lambda` the spread of the estimate induced by not-yet-realized
/// measurements; their sum `gamma()` is the covariance every constraint
/// check runs against.
struct ExpectedBelief {
    Vector mean;
    Matrix sigma;
    Matrix lambda;
    int time_index = 0;

    [[nodiscard]] Matrix gamma() const { return sigma + lambda; }
};

/// Nominal record of one tree edge: per-step composed controls, the nominal
/// state sequence (one longer), and the per-step active pair sets.
struct EdgeRecord {
    std::vector<Vector> controls;
    std::vector<Vector> states;                 // states.size() == controls.size() + 1
    std::vector<std::vector<int>> schedule;     // schedule.size() == controls.size()

    [[nodiscard]] std::size_t length() const { return controls.size(); }
};

/// One step of the expected-belief recursion:
///   mean' = A mean + B u
///   Sbar  = A Sigma A^T + Q
///   L     = Sbar C^T (C Sbar C^T + R)^{-1}   (zero-row C gives L = 0)
///   Sigma'  = Sbar - L C Sbar
///   Lambda' = (A - B K) Lambda (A - B K)^T + L C Sbar
/// Covariance repair runs on both outputs. The innovation solve is an LLT
/// with a 1e-12 jitter retry; failure past that raises NumericError.
ExpectedBelief propagate_step(const TeamModel& model, const ExpectedBelief& belief, const Vector& u,
                              const Matrix& C, const Matrix& R, const Matrix& K);

/// Prediction-only covariance of the expected belief one step ahead,
/// before any measurement update:
///   Gamma_pred = (A Sigma A^T + Q) + (A - B K) Lambda (A - B K)^T.
/// The measurement update moves mass between Sigma and Lambda but leaves
/// their sum at the arrival step unchanged, so this is the Gamma the
/// arrival-step checks (and the measurement-availability rule) see.
Matrix predicted_gamma(const TeamModel& model, const ExpectedBelief& belief, const Matrix& K);

/// Folds propagate_step along a control sequence with a fixed measurement
/// schedule, returning the terminal belief and the nominal edge record.
/// Callers are responsible for having gated every scheduled pair through the
/// availability check; this function just executes the schedule.
std::pair<ExpectedBelief, EdgeRecord> propagate_edge(const TeamModel& model, const ExpectedBelief& from,
                                                     const std::vector<Vector>& controls,
                                                     const MeasurementSchedule& schedule, const Matrix& K);

} // namespace coplan
