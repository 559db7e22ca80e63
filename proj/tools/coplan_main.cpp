#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "coplan/bench.hpp"
#include "coplan/environment.hpp"
#include "coplan/errors.hpp"
#include "coplan/rollout.hpp"
#include "coplan/theorems.hpp"

namespace {

using namespace coplan;

constexpr int kExitSuccess = 0;
constexpr int kExitNoPlan = 2;
constexpr int kExitConfig = 3;
constexpr int kExitValidation = 4;

struct PlanArgs {
    std::string env_path;
    std::string planner = "rrt";
    std::string bias = "none";
    double epsilon = 0.0;
    double goal_bias = 0.05;
    int edge_steps = 5;
    std::uint64_t seed = 0;
    double time_budget = 60.0;
    std::uint64_t max_iterations = 0;   // 0 = unbounded
    bool no_extero = false;
    std::string out_dir = ".";
};

PlannerConfig to_config(const PlanArgs& args) {
    PlannerConfig config;
    config.planner = planner_kind_from_string(args.planner);
    config.bias = bias_kind_from_string(args.bias);
    config.epsilon = args.epsilon;
    config.goal_bias = args.goal_bias;
    config.edge_steps = args.edge_steps;
    config.rng_seed = args.seed;
    config.time_budget_s = args.time_budget;
    if (args.max_iterations > 0) config.max_iterations = args.max_iterations;
    return config;
}

int run_plan(const PlanArgs& args) {
    const Environment env = load_environment(args.env_path);
    const TeamModel model = env.team_model(!args.no_extero);
    const PlannerConfig config = to_config(args);

    const PlanResult result = plan(model, env.problem(), config);
    std::cout << "iterations=" << result.iterations << " tree_size=" << result.tree_size
              << " solve_time_s=" << result.solve_time_s
              << " rejections{obstacle=" << result.rejections.obstacle
              << ",robot_robot=" << result.rejections.robot_robot
              << ",cl=" << result.rejections.cl
              << ",numeric=" << result.rejections.numeric
              << ",rebranch=" << result.rejections.rebranch << "}\n";
    if (!result.success) {
        std::cout << "no plan found\n";
        return kExitNoPlan;
    }

    std::filesystem::create_directories(args.out_dir);
    PlanFile pf;
    pf.env = env;
    pf.plan = result.plan;
    pf.config = config;
    pf.iterations = result.iterations;
    save_plan(pf, model, args.out_dir + "/plan.json");
    write_trajectory_csv(args.out_dir + "/trajectory.csv", model, result.plan, result.gammas);
    std::cout << "plan horizon=" << result.plan.horizon() << " written to " << args.out_dir << "\n";
    return kExitSuccess;
}

struct BenchArgs {
    std::string env_path;
    std::string sweep;
    int trials = 50;
    double time_budget = 60.0;
    std::uint64_t max_iterations = 0;
    std::uint64_t seed_base = 0;
    int workers = 1;
    std::uint64_t validate_rollouts = 0;
    bool no_timing = false;
    bool no_trajectories = false;
    bool no_extero = false;
    std::string out_dir = "bench_out";
    PlanArgs base;
};

int run_bench(const BenchArgs& args) {
    const Environment env = load_environment(args.env_path);
    const TeamModel model = env.team_model(!args.no_extero);

    const PlannerConfig base = to_config(args.base);
    const SweepSpec sweep = SweepSpec::parse(args.sweep, base);

    BatchOptions options;
    options.trials = args.trials;
    options.time_budget_s = args.time_budget;
    if (args.max_iterations > 0) options.max_iterations = args.max_iterations;
    options.seed_base = args.seed_base;
    options.workers = args.workers;
    options.validate_rollouts = args.validate_rollouts;
    options.keep_trajectories = !args.no_trajectories;
    options.with_extero = !args.no_extero;

    std::vector<TrajectoryRecord> trajectories;
    const BenchStats stats = run_batch(env, base, sweep, options,
                                       options.keep_trajectories ? &trajectories : nullptr);
    export_results(stats, trajectories, model, args.out_dir, !args.no_timing);

    for (const CellStats& cell : stats) {
        std::cout << cell.config.label() << ": success_rate=" << cell.success_rate() << "\n";
    }
    std::cout << "results written to " << args.out_dir << "\n";
    return kExitSuccess;
}

struct ValidateArgs {
    std::string plan_path;
    std::uint64_t rollouts = 10000;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_validate(const ValidateArgs& args) {
    const PlanFile pf = load_plan(args.plan_path);
    const TeamModel model = pf.env.team_model();
    const PlanningProblem problem = pf.env.problem();
    const GainSet gains = GainSet::lqr_defaults(model);

    const Revalidation rv = revalidate_plan(model, problem, gains.composed(), pf.plan);

    nlohmann::json out;
    out["revalidation"] = {{"valid", rv.valid}, {"reason", rv.reason}};
    bool ok = rv.valid;

    if (rv.valid && args.rollouts > 0) {
        const RolloutReport report = execute_plan(model, problem, gains.composed(), pf.plan,
                                                  args.rollouts, args.seed);
        const auto margin = [&](double p) {
            return p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(args.rollouts));
        };
        const ProbabilityBudget& budget = pf.env.budget;
        const bool obstacle_ok = report.max_obstacle_rate() <= margin(budget.p_obs);
        const bool robot_ok = report.max_robot_robot_rate() <= margin(budget.p_rob);
        const bool cl_ok = report.max_cl_fail_rate() <= margin(budget.p_ncl);
        const double goal_floor = budget.p_safe
                                  - 3.0 * std::sqrt(budget.p_safe * (1.0 - budget.p_safe)
                                                    / static_cast<double>(args.rollouts));
        const bool goal_ok = report.min_goal_rate() >= goal_floor;
        ok = obstacle_ok && robot_ok && cl_ok && goal_ok;

        out["rollouts"] = {{"count", report.rollouts},
                           {"excluded", report.excluded},
                           {"seed", report.rng_seed},
                           {"max_obstacle_rate", report.max_obstacle_rate()},
                           {"max_robot_robot_rate", report.max_robot_robot_rate()},
                           {"max_cl_fail_rate", report.max_cl_fail_rate()},
                           {"min_goal_rate", report.min_goal_rate()},
                           {"success_rate", report.success_rate},
                           {"bounds_ok", {{"obstacle", obstacle_ok},
                                          {"robot_robot", robot_ok},
                                          {"cl", cl_ok},
                                          {"goal", goal_ok}}}};
    }
    out["valid"] = ok;

    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!args.out_path.empty()) {
        std::ofstream f(args.out_path);
        f << text;
    }
    return ok ? kExitSuccess : kExitValidation;
}

int run_check_theorems(int cases, std::uint64_t samples, std::uint64_t seed) {
    const TheoremCheckReport report = run_theorem_checks(cases, samples, seed);
    std::cout << "theorem-1: checked=" << report.thm1_checked << " failures=" << report.thm1_failures
              << " worst_margin=" << report.thm1_worst_margin << "\n";
    std::cout << "theorem-2: checked=" << report.thm2_checked << " failures=" << report.thm2_failures
              << " worst_margin=" << report.thm2_worst_margin << "\n";
    const bool ok = report.thm1_failures == 0 && report.thm2_failures == 0
                    && report.thm1_checked > 0 && report.thm2_checked > 0;
    std::cout << (ok ? "soundness checks passed\n" : "soundness checks FAILED\n");
    return ok ? kExitSuccess : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chance-constrained multi-robot belief planner"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    CLI::App* plan_cmd = app.add_subcommand("plan", "plan one query and write plan.json + trajectory.csv");
    plan_cmd->add_option("env", plan_args.env_path, "environment JSON file")->required();
    plan_cmd->add_option("--planner", plan_args.planner, "rrt|est");
    plan_cmd->add_option("--bias", plan_args.bias, "none|clone|weight|rebranch");
    plan_cmd->add_option("--epsilon", plan_args.epsilon, "bias rate in [0,1]");
    plan_cmd->add_option("--goal-bias", plan_args.goal_bias, "goal bias rate");
    plan_cmd->add_option("--edge-steps", plan_args.edge_steps, "steps per tree edge");
    plan_cmd->add_option("--seed", plan_args.seed, "RNG seed");
    plan_cmd->add_option("--time-budget", plan_args.time_budget, "planning budget in seconds");
    plan_cmd->add_option("--max-iterations", plan_args.max_iterations, "iteration cap (0 = unbounded)");
    plan_cmd->add_flag("--no-extero", plan_args.no_extero, "drop all exteroceptive pairs");
    plan_cmd->add_option("--out", plan_args.out_dir, "output directory");

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run a seeded trial batch over a sweep grid");
    bench_cmd->add_option("env", bench_args.env_path, "environment JSON file")->required();
    bench_cmd->add_option("--trials", bench_args.trials, "trials per cell")->required();
    bench_cmd->add_option("--sweep", bench_args.sweep, "e.g. planner=rrt,est;bias=clone;epsilon=0,0.1,0.5");
    bench_cmd->add_option("--time-budget", bench_args.time_budget, "per-trial budget in seconds");
    bench_cmd->add_option("--max-iterations", bench_args.max_iterations, "per-trial iteration cap (0 = unbounded)");
    bench_cmd->add_option("--seed-base", bench_args.seed_base, "seed of trial 0");
    bench_cmd->add_option("--workers", bench_args.workers, "worker threads");
    bench_cmd->add_option("--validate-rollouts", bench_args.validate_rollouts,
                          "execute_plan rollouts per success (0 = off)");
    bench_cmd->add_flag("--no-timing", bench_args.no_timing, "zero wall-time fields for reproducible output");
    bench_cmd->add_flag("--no-trajectories", bench_args.no_trajectories, "skip trajectory CSV export");
    bench_cmd->add_flag("--no-extero", bench_args.no_extero, "drop all exteroceptive pairs");
    bench_cmd->add_option("--out", bench_args.out_dir, "output directory");
    bench_cmd->add_option("--edge-steps", bench_args.base.edge_steps, "steps per tree edge");
    bench_cmd->add_option("--goal-bias", bench_args.base.goal_bias, "goal bias rate");

    ValidateArgs validate_args;
    CLI::App* validate_cmd = app.add_subcommand("validate", "re-validate a plan file and Monte-Carlo execute it");
    validate_cmd->add_option("plan", validate_args.plan_path, "plan JSON file")->required();
    validate_cmd->add_option("--rollouts", validate_args.rollouts, "closed-loop rollouts");
    validate_cmd->add_option("--seed", validate_args.seed, "RNG seed");
    validate_cmd->add_option("--out", validate_args.out_path, "also write the report to this file");

    int theorem_cases = 500;
    std::uint64_t theorem_samples = 100000;
    std::uint64_t theorem_seed = 0;
    CLI::App* thm_cmd = app.add_subcommand("check-theorems", "Monte-Carlo soundness suite for the pairwise checks");
    thm_cmd->add_option("--cases", theorem_cases, "randomized difference beliefs");
    thm_cmd->add_option("--samples", theorem_samples, "Monte-Carlo samples per case");
    thm_cmd->add_option("--seed", theorem_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return run_plan(plan_args);
        if (bench_cmd->parsed()) return run_bench(bench_args);
        if (validate_cmd->parsed()) return run_validate(validate_args);
        if (thm_cmd->parsed()) return run_check_theorems(theorem_cases, theorem_samples, theorem_seed);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitConfig;
}
