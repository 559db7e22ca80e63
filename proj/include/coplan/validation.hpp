#pragma once

#include <span>
#include <vector>

#include "coplan/gaussian.hpp"
#include "coplan/propagation.hpp"
#include "coplan/team.hpp"
#include "coplan/types.hpp"

namespace coplan {

/// Split of the violation budget 1 - p_safe across the three constraint
/// families. The identity p_obs + p_rob + p_ncl = 1 - p_safe is enforced to
/// 1e-12 at validation.
struct ProbabilityBudget {
    double p_safe = 0.0;
    double p_obs = 0.0;
    double p_rob = 0.0;
    double p_ncl = 0.0;

    void validate() const;
};

/// Static workspace obstacle: axis-aligned rectangle or disc.
struct Obstacle {
    enum class Kind { Rect, Disc };
    Kind kind = Kind::Rect;
    Vector lo, hi;      // Rect
    Vector center;      // Disc
    double radius = 0.0;

    static Obstacle rect(Vector lo, Vector hi);
    static Obstacle disc(Vector center, double radius);

    /// Euclidean distance from a workspace point to the obstacle (zero inside).
    [[nodiscard]] double distance(const Vector& point) const;
};

struct GoalRegion {
    Vector center;
    double radius = 0.0;
};

/// Axis-aligned workspace box. Leaving it counts as an obstacle collision.
struct WorkspaceBounds {
    Vector lo, hi;

    /// True iff the disc of `radius` about `point` lies inside the box.
    [[nodiscard]] bool contains_disc(const Vector& point, double radius) const;
    [[nodiscard]] bool contains_point(const Vector& point) const { return contains_disc(point, 0.0); }
    [[nodiscard]] double diagonal() const { return (hi - lo).norm(); }
};

/// Obstacle chance check on a robot's workspace marginal of Gamma: the disc
/// of contour_radius(cov, p_obs) + body_radius about the mean must clear
/// every obstacle and stay inside the workspace. True implies the per-step
/// obstacle collision probability is at most p_obs.
bool check_obstacles(const GaussianBelief& ws_marginal, double body_radius,
                     std::span<const Obstacle> obstacles, const WorkspaceBounds& bounds, double p_obs);

/// Robot-robot chance check on the pair's difference belief from Gamma:
/// ||mean|| - contour_radius(cov, p_rob) > r_i + r_j.
bool check_robot_robot(const DifferenceBelief& diff, double r_i, double r_j, double p_rob);

/// Measurement-availability chance check on the same difference belief:
/// ||mean|| + contour_radius(cov, p_ncl) < r_ext, i.e. the contour sphere is
/// subsumed by the availability ball.
bool check_ext_enabled(const DifferenceBelief& diff, double r_ext, double p_ncl);

/// Goal chance check: the sphere containing p_safe mass about the mean must
/// lie inside the goal disc. The contour here must CONTAIN p_safe mass, so
/// the chi-square quantile is taken at p_safe (tail argument 1 - p_safe).
bool check_goal(const GaussianBelief& ws_marginal, const GoalRegion& goal, double p_safe);

/// Environment geometry handed to the validity predicate.
struct ValidationContext {
    WorkspaceBounds bounds;
    std::vector<Obstacle> obstacles;
    ProbabilityBudget budget;
    bool divide_pair_budget = true;

    /// Per-pair share of the summed pairwise budgets. With division enabled
    /// each unordered pair is checked at budget / (N_A - 1), which makes the
    /// per-robot sums over partners come in under the family budget.
    [[nodiscard]] double pair_rob_budget(int num_robots) const;
    [[nodiscard]] double pair_ncl_budget(int num_robots) const;
};

/// Full node validity: every robot clears the obstacle check, every
/// unordered pair clears the robot-robot check, and every pair scheduled for
/// a measurement at this step clears the availability check. All checks run
/// against Gamma = Sigma + Lambda.
bool valid_belief(const ExpectedBelief& belief, const TeamModel& model, const ValidationContext& ctx,
                  std::span<const int> scheduled_pairs);

/// Like valid_belief but reports which family failed first.
enum class Violation { None, Obstacle, RobotRobot, Cl };
Violation first_violation(const ExpectedBelief& belief, const TeamModel& model, const ValidationContext& ctx,
                          std::span<const int> scheduled_pairs);

/// Difference belief of a pair's workspace coordinates extracted from a
/// composed covariance.
DifferenceBelief pair_difference(const TeamModel& model, const Vector& mean, const Matrix& cov,
                                 int robot_i, int robot_j);

} // namespace coplan
