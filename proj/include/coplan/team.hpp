#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coplan/gaussian.hpp"
#include "coplan/types.hpp"

namespace coplan {

/// Per-robot linear-Gaussian dynamics x' = A x + B u + w, w ~ N(0, Q), with
/// an optional always-on proprioceptive sensor y = C_prop x + v,
/// v ~ N(0, R_prop). A robot without onboard sensing simply leaves C_prop
/// unset; zero-row matrices are not used so observability gaps stay visible.
struct RobotModel {
    Matrix A;
    Matrix B;
    Matrix Q;
    std::optional<Matrix> C_prop;
    std::optional<Matrix> R_prop;
    double body_radius = 0.0;
    IndexList workspace_proj;   // workspace coordinates within the robot state
    double u_max = 0.5;         // per-axis control bound per step

    [[nodiscard]] Index state_dim() const { return A.rows(); }
    [[nodiscard]] Index control_dim() const { return B.cols(); }
};

/// Relative measurement y = C_ext [x_i; x_j] + v between robots i < j,
/// available only while the robots are within workspace radius r_ext.
struct ExteroPair {
    int i = 0;
    int j = 0;
    Matrix C_ext;
    Matrix R_ext;
    double r_ext = 0.0;
};

/// Composed team system: block-diagonal A, B, Q over all robots plus offset
/// tables mapping robot-local state/control indices into the composed space.
class TeamModel {
public:
    /// Builds the composed system. Requires at least two robots and mutually
    /// consistent dimensions everywhere.
    static TeamModel compose(std::vector<RobotModel> robots, std::vector<ExteroPair> pairs);

    [[nodiscard]] int num_robots() const { return static_cast<int>(robots_.size()); }
    [[nodiscard]] const std::vector<RobotModel>& robots() const { return robots_; }
    [[nodiscard]] const RobotModel& robot(int i) const { return robots_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const std::vector<ExteroPair>& pairs() const { return pairs_; }
    [[nodiscard]] const ExteroPair& pair(int p) const { return pairs_[static_cast<std::size_t>(p)]; }

    [[nodiscard]] const Matrix& A() const { return A_; }
    [[nodiscard]] const Matrix& B() const { return B_; }
    [[nodiscard]] const Matrix& Q() const { return Q_; }

    [[nodiscard]] Index state_dim() const { return A_.rows(); }
    [[nodiscard]] Index control_dim() const { return B_.cols(); }
    [[nodiscard]] int workspace_dim() const { return workspace_dim_; }

    [[nodiscard]] IndexRange state_block(int i) const {
        return {state_offsets_[static_cast<std::size_t>(i)], robots_[static_cast<std::size_t>(i)].state_dim()};
    }
    [[nodiscard]] IndexRange control_block(int i) const {
        return {control_offsets_[static_cast<std::size_t>(i)], robots_[static_cast<std::size_t>(i)].control_dim()};
    }

    /// Global (composed-state) indices of robot i's workspace coordinates.
    [[nodiscard]] const IndexList& workspace_indices(int i) const {
        return workspace_indices_[static_cast<std::size_t>(i)];
    }

    /// Workspace position of robot i extracted from a composed state vector.
    [[nodiscard]] Vector workspace_position(int i, const Vector& composed_state) const;

private:
    std::vector<RobotModel> robots_;
    std::vector<ExteroPair> pairs_;
    Matrix A_, B_, Q_;
    std::vector<Index> state_offsets_;
    std::vector<Index> control_offsets_;
    std::vector<IndexList> workspace_indices_;
    int workspace_dim_ = 0;
};

/// Per-time-step measurement plan: which exteroceptive pairs are active at
/// each step, on top of the fixed proprioceptive stack. Materialize a step
/// with assemble_measurement.
struct MeasurementSchedule {
    std::vector<std::vector<int>> active_pairs;

    [[nodiscard]] std::size_t length() const { return active_pairs.size(); }
    void validate(const TeamModel& model) const;
};

/// Builds (C_k, R_k) for one step: the proprioceptive stack (block-diagonal
/// over robots that have a sensor) on top of one row block per active pair,
/// with each pair's C_ext columns scattered to the global offsets of its two
/// robots. No active pairs and no proprioceptive sensors yields a zero-row C.
std::pair<Matrix, Matrix> assemble_measurement(const TeamModel& model, std::span<const int> active_pairs);

/// Mean-level availability predicate: the projected means of the pair's
/// robots are within r_ext. The probabilistic counterpart lives with the
/// chance-constraint checks.
bool pair_within_radius(const TeamModel& model, const Vector& composed_mean, const ExteroPair& pair);

} // namespace coplan
