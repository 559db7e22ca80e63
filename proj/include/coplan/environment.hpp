#pragma once

#include <string>
#include <vector>

#include "coplan/planner.hpp"
#include "coplan/team.hpp"
#include "coplan/validation.hpp"

namespace coplan {

struct RobotSpec {
    RobotModel model;
    GaussianBelief start;
    GoalRegion goal;
};

/// Benchmark scenario: workspace, obstacles, robots with start beliefs and
/// goal regions, exteroceptive pairs, and the probability budget.
struct Environment {
    std::string name;
    std::string notes;
    WorkspaceBounds bounds;
    std::vector<Obstacle> obstacles;
    std::vector<RobotSpec> robots;
    std::vector<ExteroPair> pairs;
    ProbabilityBudget budget;
    bool divide_pair_budget = true;

    /// Composed team system; pass false to drop every exteroceptive pair
    /// (the no-CL ablation).
    [[nodiscard]] TeamModel team_model(bool with_extero = true) const;

    [[nodiscard]] PlanningProblem problem() const;

    /// Full invariant check: budget identity, geometry inside the workspace,
    /// and a valid root belief. Throws ConfigError naming the failing field.
    void validate() const;
};

/// Parses and validates an environment file (JSON, matrices row-major with
/// declared shapes). Parse and invariant failures raise ConfigError with the
/// offending field.
Environment load_environment(const std::string& path);

/// Inverse of load_environment; load(save(env)) reproduces env exactly.
void save_environment(const Environment& env, const std::string& path);

/// JSON-string forms used by both the environment and plan files.
std::string environment_to_json(const Environment& env);
Environment environment_from_json(const std::string& json_text);

/// Self-contained plan file: the environment it was planned for, the plan,
/// and the seed/config needed to reproduce it.
struct PlanFile {
    Environment env;
    MotionPlan plan;
    PlannerConfig config;
    std::uint64_t iterations = 0;
};

void save_plan(const PlanFile& pf, const TeamModel& model, const std::string& path);
PlanFile load_plan(const std::string& path);

} // namespace coplan
