#pragma once

#include <vector>

#include "coplan/team.hpp"
#include "coplan/types.hpp"

namespace coplan {

/// Discrete-time infinite-horizon LQR gain for (A, B) with stage costs
/// (Q_cost, R_cost), computed by iterating the Riccati recursion to a fixed
/// point (tolerance 1e-10, at most 1e4 iterations). Throws ModelError when
/// the recursion fails to converge or the closed loop is not Schur-stable.
Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& Q_cost, const Matrix& R_cost);

inline Matrix lqr_gain(const RobotModel& robot, const Matrix& Q_cost, const Matrix& R_cost) {
    return lqr_gain(robot.A, robot.B, Q_cost, R_cost);
}

/// Spectral radius of a (generally non-symmetric) square matrix.
double spectral_radius(const Matrix& M);

/// Per-robot feedback gains plus their block-diagonal composition. Each
/// robot's closed loop A - B K is verified Schur-stable at construction.
class GainSet {
public:
    GainSet(const TeamModel& model, std::vector<Matrix> per_robot_gains);

    /// Gains from identity stage costs (the setup default), overridable by
    /// scalar multipliers on Q_cost and R_cost.
    static GainSet lqr_defaults(const TeamModel& model, double q_scale = 1.0, double r_scale = 1.0);

    [[nodiscard]] const Matrix& composed() const { return composed_; }
    [[nodiscard]] const Matrix& gain(int robot) const { return gains_[static_cast<std::size_t>(robot)]; }

private:
    std::vector<Matrix> gains_;
    Matrix composed_;
};

} // namespace coplan
