#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coplan/environment.hpp"
#include "coplan/planner.hpp"
#include "coplan/rollout.hpp"

namespace coplan {

/// One planner configuration cell of a sweep.
struct CellConfig {
    PlannerKind planner = PlannerKind::Rrt;
    BiasKind bias = BiasKind::None;
    double epsilon = 0.0;

    [[nodiscard]] std::string label() const;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    bool success = false;
    double solve_time_s = 0.0;
    std::uint64_t iterations = 0;
    std::size_t tree_size = 0;
    std::uint64_t candidates = 0;
    RejectionTally rejections;
    int horizon = 0;

    // rollout validation summary (when enabled and the trial succeeded)
    bool validated = false;
    double max_obstacle_rate = 0.0;
    double max_robot_robot_rate = 0.0;
    double max_cl_fail_rate = 0.0;
    double min_goal_rate = 0.0;

    [[nodiscard]] double rejection_rate_obstacle() const;
    [[nodiscard]] double rejection_rate_robot() const;
    [[nodiscard]] double rejection_rate_cl() const;
    [[nodiscard]] double rejection_rate_numeric() const;
};

/// Per-cell results; success_rate is exactly successes/trials.
struct CellStats {
    CellConfig config;
    std::uint64_t seed_base = 0;
    std::vector<TrialRecord> trials;

    [[nodiscard]] double success_rate() const;
};

using BenchStats = std::vector<CellStats>;

/// Successful trial trajectory kept for export.
struct TrajectoryRecord {
    std::string label;
    MotionPlan plan;
    std::vector<Matrix> gammas;
};

/// Sweep grid parsed from "planner=rrt,est;bias=none,clone;epsilon=0,0.1".
/// Omitted axes default to the base config's single value.
struct SweepSpec {
    std::vector<PlannerKind> planners;
    std::vector<BiasKind> biases;
    std::vector<double> epsilons;

    static SweepSpec parse(const std::string& text, const PlannerConfig& base);
    [[nodiscard]] std::vector<CellConfig> cells() const;
};

struct BatchOptions {
    int trials = 50;
    double time_budget_s = 60.0;
    std::uint64_t max_iterations = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t seed_base = 0;
    int workers = 1;
    std::uint64_t validate_rollouts = 0;  // 0 disables the execute_plan pass
    bool keep_trajectories = true;
    bool with_extero = true;              // false drops every pair (no-CL ablation)
};

/// Runs `trials` seeded planning queries per sweep cell (seed_base + trial
/// index), optionally piping each success through execute_plan. Trials run
/// on a worker pool; aggregation is by trial index, so results do not depend
/// on scheduling.
BenchStats run_batch(const Environment& env, const PlannerConfig& base, const SweepSpec& sweep,
                     const BatchOptions& options, std::vector<TrajectoryRecord>* trajectories = nullptr);

/// Writes stats.csv (one row per cell with distribution quantiles),
/// trials.jsonl (one record per trial), and one trajectory CSV per kept
/// success. With include_timing = false every wall-time field is written as
/// zero so that equal-seed runs produce byte-identical files.
void export_results(const BenchStats& stats, const std::vector<TrajectoryRecord>& trajectories,
                    const TeamModel& model, const std::string& out_dir, bool include_timing = true);

/// Trajectory CSV: one row per step with each robot's nominal workspace
/// position and the 2-sigma radius from its Gamma workspace block.
void write_trajectory_csv(const std::string& path, const TeamModel& model, const MotionPlan& plan,
                          const std::vector<Matrix>& gammas);

} // namespace coplan
