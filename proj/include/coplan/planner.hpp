#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coplan/biasing.hpp"
#include "coplan/extension.hpp"
#include "coplan/rng.hpp"
#include "coplan/tree.hpp"

namespace coplan {

enum class PlannerKind { Rrt, Est };
enum class BiasKind { None, Clone, Weight, Rebranch };

std::string to_string(PlannerKind k);
std::string to_string(BiasKind b);
PlannerKind planner_kind_from_string(const std::string& s);
BiasKind bias_kind_from_string(const std::string& s);

struct PlannerConfig {
    PlannerKind planner = PlannerKind::Rrt;
    BiasKind bias = BiasKind::None;
    double epsilon = 0.0;
    double goal_bias = 0.05;
    std::uint64_t max_iterations = std::numeric_limits<std::uint64_t>::max();
    double time_budget_s = std::numeric_limits<double>::infinity();
    int edge_steps = 5;
    std::uint64_t rng_seed = 0;
    double est_radius = 0.0;    // <= 0 selects 10% of the workspace diagonal
    double cov_weight = 0.0;    // covariance-trace term in the nearest metric
    double weight_cap = 1e6;
    double gain_q_scale = 1.0;
    double gain_r_scale = 1.0;

    void validate() const;
};

/// Planner-facing problem statement: geometry and budget, composed start
/// belief, one goal region per robot.
struct PlanningProblem {
    ValidationContext ctx;
    Vector start_mean;
    Matrix start_sigma;
    std::vector<GoalRegion> goals;
};

/// Planner output contract: per-robot nominal controls and states plus the
/// shared measurement schedule.
struct MotionPlan {
    std::vector<Matrix> controls;   // robot i: m_i x T
    std::vector<Matrix> states;     // robot i: n_i x (T+1)
    MeasurementSchedule schedule;   // length T

    [[nodiscard]] int horizon() const { return static_cast<int>(schedule.length()); }
    [[nodiscard]] Vector composed_control(const TeamModel& model, int k) const;
    [[nodiscard]] Vector composed_state(const TeamModel& model, int k) const;
};

struct PlanResult {
    bool success = false;
    MotionPlan plan;
    std::vector<Matrix> gammas;     // composed Gamma_k, k = 0..T, on success
    std::uint64_t iterations = 0;
    std::size_t tree_size = 1;
    std::uint64_t candidates = 0;   // extension attempts
    RejectionTally rejections;
    double solve_time_s = 0.0;
};

/// Post-hoc view of one stored tree node for invariant checks.
struct NodeSnapshot {
    ExpectedBelief belief;
    std::vector<int> arrival_schedule;   // active pairs of the edge's last step
    int parent = -1;
};

/// One build-select-extend-validate search (Belief-RRT / Belief-EST over
/// expected beliefs). Returns the first plan whose terminal node satisfies
/// every robot's goal chance check, or a failure report. When
/// `tree_snapshot` is given, every stored node is copied out at the end.
PlanResult plan(const TeamModel& model, const PlanningProblem& problem, const PlannerConfig& config,
                std::vector<NodeSnapshot>* tree_snapshot = nullptr);

/// RRT selection: draw one uniform variate, partition it into the CL-bias /
/// goal-bias / uniform segments, sample a concatenated workspace target
/// accordingly, and return the nearest node.
struct RrtSelection {
    int node = -1;
    Vector target;
};
RrtSelection select_rrt(const BeliefTree& tree, const PlanningProblem& problem, const PlannerConfig& config,
                        BiasState& bias, Rng& rng);

/// EST selection: distance-weight PDF with probability epsilon (when that
/// bias is active), sparsity PDF otherwise.
int select_est(const BeliefTree& tree, const PlannerConfig& config, const BiasState& bias, Rng& rng);

/// Builds the L-step control sequence for one extension attempt: steering
/// toward the target (RRT or goal-biased EST) or uniformly random bounded
/// controls (EST), then runs guarded propagation.
GuardedExtension extend(const BeliefTree& tree, int from_node, const std::optional<Vector>& ws_target,
                        const PlanningProblem& problem, const PlannerConfig& config, const Matrix& K, Rng& rng);

/// Root-to-node edge concatenation, split per robot, with a nominal-dynamics
/// replay check before returning.
MotionPlan extract_plan(const BeliefTree& tree, int goal_node);

/// Independent validity pass over a finished plan: re-propagates Sigma and
/// Lambda from the root through the plan's stored schedule and re-runs every
/// chance check, including goal satisfaction at the horizon. Returns the
/// Gamma sequence alongside the verdict.
struct Revalidation {
    bool valid = false;
    std::string reason;
    std::vector<Matrix> gammas;
};
Revalidation revalidate_plan(const TeamModel& model, const PlanningProblem& problem, const Matrix& K,
                             const MotionPlan& plan);

/// Root expected belief of a problem (Lambda starts at zero).
ExpectedBelief root_belief(const PlanningProblem& problem);

} // namespace coplan
