#include "coplan/validation.hpp"

#include <cmath>
#include <string>

#include "coplan/errors.hpp"

namespace coplan {

void ProbabilityBudget::validate() const {
    if (!(p_safe > 0.0 && p_safe < 1.0)) throw ConfigError("budget: p_safe must be in (0,1)");
    if (p_obs < 0.0 || p_rob < 0.0 || p_ncl < 0.0) throw ConfigError("budget: negative component");
    const double gap = std::abs((p_obs + p_rob + p_ncl) - (1.0 - p_safe));
    if (gap > 1e-12) {
        throw ConfigError("budget: p_obs + p_rob + p_ncl must equal 1 - p_safe (off by " + std::to_string(gap) + ")");
    }
}

Obstacle Obstacle::rect(Vector lo, Vector hi) {
    if (lo.size() != hi.size()) throw ConfigError("obstacle rect: dimension mismatch");
    if (((hi - lo).array() <= 0.0).any()) throw ConfigError("obstacle rect: empty interior");
    Obstacle o;
    o.kind = Kind::Rect;
    o.lo = std::move(lo);
    o.hi = std::move(hi);
    return o;
}

Obstacle Obstacle::disc(Vector center, double radius) {
    if (radius <= 0.0) throw ConfigError("obstacle disc: empty interior");
    Obstacle o;
    o.kind = Kind::Disc;
    o.center = std::move(center);
    o.radius = radius;
    return o;
}

double Obstacle::distance(const Vector& point) const {
    if (kind == Kind::Disc) {
        return std::max(0.0, (point - center).norm() - radius);
    }
    // clamped closest point of the rectangle
    Vector clamped = point.cwiseMax(lo).cwiseMin(hi);
    return (point - clamped).norm();
}

bool WorkspaceBounds::contains_disc(const Vector& point, double radius) const {
    return ((point.array() - radius) >= lo.array()).all() && ((point.array() + radius) <= hi.array()).all();
}

bool check_obstacles(const GaussianBelief& ws_marginal, double body_radius,
                     std::span<const Obstacle> obstacles, const WorkspaceBounds& bounds, double p_obs) {
    const double inflated = contour_radius(ws_marginal.covariance(), p_obs) + body_radius;
    if (!bounds.contains_disc(ws_marginal.mean(), inflated)) return false;
    for (const Obstacle& obs : obstacles) {
        if (obs.distance(ws_marginal.mean()) <= inflated) return false;
    }
    return true;
}

bool check_robot_robot(const DifferenceBelief& diff, double r_i, double r_j, double p_rob) {
    return diff.mean().norm() - contour_radius(diff.covariance(), p_rob) > r_i + r_j;
}

bool check_ext_enabled(const DifferenceBelief& diff, double r_ext, double p_ncl) {
    return diff.mean().norm() + contour_radius(diff.covariance(), p_ncl) < r_ext;
}

bool check_goal(const GaussianBelief& ws_marginal, const GoalRegion& goal, double p_safe) {
    const double contour = contour_radius(ws_marginal.covariance(), 1.0 - p_safe);
    return (ws_marginal.mean() - goal.center).norm() + contour <= goal.radius;
}

double ValidationContext::pair_rob_budget(int num_robots) const {
    return divide_pair_budget ? budget.p_rob / std::max(1, num_robots - 1) : budget.p_rob;
}

double ValidationContext::pair_ncl_budget(int num_robots) const {
    return divide_pair_budget ? budget.p_ncl / std::max(1, num_robots - 1) : budget.p_ncl;
}

DifferenceBelief pair_difference(const TeamModel& model, const Vector& mean, const Matrix& cov,
                                 int robot_i, int robot_j) {
    GaussianBelief joint(mean, cov);
    return difference_belief(joint, model.workspace_indices(robot_i), model.workspace_indices(robot_j));
}

Violation first_violation(const ExpectedBelief& belief, const TeamModel& model, const ValidationContext& ctx,
                          std::span<const int> scheduled_pairs) {
    const Matrix gamma = belief.gamma();
    GaussianBelief composed(belief.mean, gamma);

    const int n = model.num_robots();
    for (int i = 0; i < n; ++i) {
        GaussianBelief ws = marginal(composed, model.workspace_indices(i));
        if (!check_obstacles(ws, model.robot(i).body_radius, ctx.obstacles, ctx.bounds, ctx.budget.p_obs)) {
            return Violation::Obstacle;
        }
    }
    const double rob_budget = ctx.pair_rob_budget(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            DifferenceBelief diff = difference_belief(composed, model.workspace_indices(i), model.workspace_indices(j));
            if (!check_robot_robot(diff, model.robot(i).body_radius, model.robot(j).body_radius, rob_budget)) {
                return Violation::RobotRobot;
            }
        }
    }
    const double ncl_budget = ctx.pair_ncl_budget(n);
    for (int p : scheduled_pairs) {
        const ExteroPair& ep = model.pair(p);
        DifferenceBelief diff = difference_belief(composed, model.workspace_indices(ep.i), model.workspace_indices(ep.j));
        if (!check_ext_enabled(diff, ep.r_ext, ncl_budget)) return Violation::Cl;
    }
    return Violation::None;
}

bool valid_belief(const ExpectedBelief& belief, const TeamModel& model, const ValidationContext& ctx,
                  std::span<const int> scheduled_pairs) {
    return first_violation(belief, model, ctx, scheduled_pairs) == Violation::None;
}

} // namespace coplan
