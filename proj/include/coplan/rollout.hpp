#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "coplan/planner.hpp"
#include "coplan/rng.hpp"

namespace coplan {

/// Empirical constraint statistics from closed-loop execution of a plan.
/// Violation rates are per robot per step (columns are steps 1..T); goal
/// rates are per robot at the horizon. Rollouts that go non-finite are
/// dropped from every tally and counted in `excluded`.
struct RolloutReport {
    std::uint64_t rollouts = 0;
    std::uint64_t excluded = 0;
    std::uint64_t rng_seed = 0;

    Matrix obstacle_rate;      // N x T
    Matrix robot_robot_rate;   // N x T
    Matrix cl_fail_rate;       // N x T
    Vector goal_rate;          // per robot
    double success_rate = 0.0; // all robots inside their goals at T

    /// Deviation covariance of the true state about the nominal, per step
    /// 0..T. Filled only when requested.
    std::vector<Matrix> deviation_cov;

    [[nodiscard]] double max_obstacle_rate() const { return obstacle_rate.size() ? obstacle_rate.maxCoeff() : 0.0; }
    [[nodiscard]] double max_robot_robot_rate() const { return robot_robot_rate.size() ? robot_robot_rate.maxCoeff() : 0.0; }
    [[nodiscard]] double max_cl_fail_rate() const { return cl_fail_rate.size() ? cl_fail_rate.maxCoeff() : 0.0; }
    [[nodiscard]] double min_goal_rate() const { return goal_rate.size() ? goal_rate.minCoeff() : 0.0; }
};

struct ExecuteOptions {
    bool collect_deviation_cov = false;
};

/// Closed-loop Monte Carlo execution: true stochastic dynamics, the
/// centralized Kalman filter, and the feedback law u = u_nom - K (xhat -
/// x_nom). A scheduled pair measurement is delivered only when the true
/// states are inside the availability radius at the arrival step; otherwise
/// the step counts as a CL failure for both robots and the filter simply
/// runs without that block. Constraint events are recorded against true
/// states.
RolloutReport execute_plan(const TeamModel& model, const PlanningProblem& problem, const Matrix& K,
                           const MotionPlan& plan, std::uint64_t rollouts, std::uint64_t seed,
                           const ExecuteOptions& options = {});

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// Plain Monte-Carlo probability-mass estimate of an event region under a
/// Gaussian, with binomial standard error. Requires at least 1000 samples.
McEstimate mc_probability(const Vector& mean, const Matrix& cov,
                          const std::function<bool(const Vector&)>& event, std::uint64_t samples, Rng& rng);

inline McEstimate mc_probability(const GaussianBelief& b, const std::function<bool(const Vector&)>& event,
                                 std::uint64_t samples, Rng& rng) {
    return mc_probability(b.mean(), b.covariance(), event, samples, rng);
}

inline McEstimate mc_probability(const DifferenceBelief& b, const std::function<bool(const Vector&)>& event,
                                 std::uint64_t samples, Rng& rng) {
    return mc_probability(b.mean(), b.covariance(), event, samples, rng);
}

} // namespace coplan
