#include "coplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "coplan/errors.hpp"

namespace coplan {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return {buf};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

void append_quantiles(std::string& row, const std::vector<double>& values) {
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        row += ',' + format_double(quantile(values, q));
    }
}

} // namespace

std::string CellConfig::label() const {
    return to_string(planner) + "_" + to_string(bias) + "_eps" + format_double(epsilon);
}

double TrialRecord::rejection_rate_obstacle() const {
    return candidates ? static_cast<double>(rejections.obstacle) / static_cast<double>(candidates) : 0.0;
}
double TrialRecord::rejection_rate_robot() const {
    return candidates ? static_cast<double>(rejections.robot_robot) / static_cast<double>(candidates) : 0.0;
}
double TrialRecord::rejection_rate_cl() const {
    return candidates ? static_cast<double>(rejections.cl) / static_cast<double>(candidates) : 0.0;
}
double TrialRecord::rejection_rate_numeric() const {
    return candidates ? static_cast<double>(rejections.numeric) / static_cast<double>(candidates) : 0.0;
}

double CellStats::success_rate() const {
    if (trials.empty()) return 0.0;
    std::uint64_t successes = 0;
    for (const TrialRecord& t : trials) successes += t.success ? 1 : 0;
    return static_cast<double>(successes) / static_cast<double>(trials.size());
}

SweepSpec SweepSpec::parse(const std::string& text, const PlannerConfig& base) {
    SweepSpec spec;
    for (const std::string& clause : split(text, ';')) {
        if (clause.empty()) continue;
        const auto eq = clause.find('=');
        if (eq == std::string::npos) throw ConfigError("sweep: clause '" + clause + "' is not key=values");
        const std::string key = clause.substr(0, eq);
        const std::vector<std::string> values = split(clause.substr(eq + 1), ',');
        if (values.empty()) throw ConfigError("sweep: empty value list for '" + key + "'");
        if (key == "planner") {
            for (const auto& v : values) spec.planners.push_back(planner_kind_from_string(v));
        } else if (key == "bias") {
            for (const auto& v : values) spec.biases.push_back(bias_kind_from_string(v));
        } else if (key == "epsilon") {
            for (const auto& v : values) spec.epsilons.push_back(std::stod(v));
        } else {
            throw ConfigError("sweep: unknown axis '" + key + "'");
        }
    }
    if (spec.planners.empty()) spec.planners.push_back(base.planner);
    if (spec.biases.empty()) spec.biases.push_back(base.bias);
    if (spec.epsilons.empty()) spec.epsilons.push_back(base.epsilon);
    return spec;
}

std::vector<CellConfig> SweepSpec::cells() const {
    std::vector<CellConfig> out;
    for (PlannerKind p : planners) {
        for (BiasKind b : biases) {
            for (double e : epsilons) out.push_back({p, b, e});
        }
    }
    return out;
}

BenchStats run_batch(const Environment& env, const PlannerConfig& base, const SweepSpec& sweep,
                     const BatchOptions& options, std::vector<TrajectoryRecord>* trajectories) {
    if (options.trials < 1) throw ConfigError("run_batch: trials must be >= 1");
    const std::vector<CellConfig> cells = sweep.cells();

    const TeamModel model = env.team_model(options.with_extero);
    const PlanningProblem problem = env.problem();
    const GainSet gains = GainSet::lqr_defaults(model, base.gain_q_scale, base.gain_r_scale);

    BenchStats stats(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        stats[c].config = cells[c];
        stats[c].seed_base = options.seed_base;
        stats[c].trials.resize(static_cast<std::size_t>(options.trials));
    }
    std::vector<TrajectoryRecord> trajs(trajectories ? cells.size() * static_cast<std::size_t>(options.trials) : 0);
    std::vector<char> traj_present(trajs.size(), 0);

    struct Job {
        std::size_t cell;
        int trial;
    };
    std::vector<Job> jobs;
    jobs.reserve(cells.size() * static_cast<std::size_t>(options.trials));
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int t = 0; t < options.trials; ++t) jobs.push_back({c, t});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job job = jobs[j];
            const CellConfig& cell = cells[job.cell];

            PlannerConfig cfg = base;
            cfg.planner = cell.planner;
            cfg.bias = cell.bias;
            cfg.epsilon = cell.epsilon;
            cfg.time_budget_s = options.time_budget_s;
            cfg.max_iterations = options.max_iterations;
            cfg.rng_seed = options.seed_base + static_cast<std::uint64_t>(job.trial);

            PlanResult result = plan(model, problem, cfg);

            TrialRecord rec;
            rec.seed = cfg.rng_seed;
            rec.success = result.success;
            rec.solve_time_s = result.solve_time_s;
            rec.iterations = result.iterations;
            rec.tree_size = result.tree_size;
            rec.candidates = result.candidates;
            rec.rejections = result.rejections;
            rec.horizon = result.success ? result.plan.horizon() : 0;

            if (result.success && options.validate_rollouts > 0) {
                RolloutReport rr = execute_plan(model, problem, gains.composed(), result.plan,
                                                options.validate_rollouts, cfg.rng_seed ^ 0x9e3779b97f4a7c15ull);
                rec.validated = true;
                rec.max_obstacle_rate = rr.max_obstacle_rate();
                rec.max_robot_robot_rate = rr.max_robot_robot_rate();
                rec.max_cl_fail_rate = rr.max_cl_fail_rate();
                rec.min_goal_rate = rr.min_goal_rate();
            }
            if (result.success && trajectories && options.keep_trajectories) {
                const std::size_t slot = job.cell * static_cast<std::size_t>(options.trials)
                                         + static_cast<std::size_t>(job.trial);
                trajs[slot].label = cell.label() + "_trial" + std::to_string(job.trial);
                trajs[slot].plan = std::move(result.plan);
                trajs[slot].gammas = std::move(result.gammas);
                traj_present[slot] = 1;
            }
            stats[job.cell].trials[static_cast<std::size_t>(job.trial)] = std::move(rec);
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (trajectories) {
        for (std::size_t s = 0; s < trajs.size(); ++s) {
            if (traj_present[s]) trajectories->push_back(std::move(trajs[s]));
        }
    }
    return stats;
}

void write_trajectory_csv(const std::string& path, const TeamModel& model, const MotionPlan& plan,
                          const std::vector<Matrix>& gammas) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write trajectory file '" + path + "'");

    const int w = model.workspace_dim();
    out << "step";
    for (int r = 0; r < model.num_robots(); ++r) {
        for (int a = 0; a < w; ++a) out << ",robot" << r << "_x" << a;
        out << ",robot" << r << "_r2sigma";
    }
    out << "\n";

    for (int k = 0; k <= plan.horizon(); ++k) {
        out << k;
        const Vector x = plan.composed_state(model, k);
        const GaussianBelief composed(x, gammas[static_cast<std::size_t>(k)]);
        for (int r = 0; r < model.num_robots(); ++r) {
            const Vector pos = model.workspace_position(r, x);
            for (int a = 0; a < w; ++a) out << ',' << format_double(pos[a]);
            const GaussianBelief ws = marginal(composed, model.workspace_indices(r));
            Eigen::SelfAdjointEigenSolver<Matrix> es(ws.covariance(), Eigen::EigenvaluesOnly);
            const double two_sigma = 2.0 * std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
            out << ',' << format_double(two_sigma);
        }
        out << "\n";
    }
}

void export_results(const BenchStats& stats, const std::vector<TrajectoryRecord>& trajectories,
                    const TeamModel& model, const std::string& out_dir, bool include_timing) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());

    // stats.csv: one row per configuration with distribution quantiles
    {
        std::ofstream out(out_dir + "/stats.csv");
        if (!out) throw ConfigError("cannot write '" + out_dir + "/stats.csv'");
        out << "planner,bias,epsilon,trials,successes,success_rate,seed_base";
        for (const char* metric : {"solve_time_s", "iterations", "tree_size", "rej_obstacle_rate",
                                   "rej_robot_rate", "rej_cl_rate", "rej_numeric_rate"}) {
            for (const char* q : {"min", "p25", "p50", "p75", "max"}) out << ',' << metric << '_' << q;
        }
        out << "\n";
        for (const CellStats& cell : stats) {
            std::uint64_t successes = 0;
            std::vector<double> time_v, iter_v, tree_v, ro_v, rr_v, rc_v, rn_v;
            for (const TrialRecord& t : cell.trials) {
                successes += t.success ? 1 : 0;
                time_v.push_back(include_timing ? t.solve_time_s : 0.0);
                iter_v.push_back(static_cast<double>(t.iterations));
                tree_v.push_back(static_cast<double>(t.tree_size));
                ro_v.push_back(t.rejection_rate_obstacle());
                rr_v.push_back(t.rejection_rate_robot());
                rc_v.push_back(t.rejection_rate_cl());
                rn_v.push_back(t.rejection_rate_numeric());
            }
            std::string row = to_string(cell.config.planner) + ',' + to_string(cell.config.bias) + ','
                              + format_double(cell.config.epsilon) + ',' + std::to_string(cell.trials.size()) + ','
                              + std::to_string(successes) + ',' + format_double(cell.success_rate()) + ','
                              + std::to_string(cell.seed_base);
            append_quantiles(row, time_v);
            append_quantiles(row, iter_v);
            append_quantiles(row, tree_v);
            append_quantiles(row, ro_v);
            append_quantiles(row, rr_v);
            append_quantiles(row, rc_v);
            append_quantiles(row, rn_v);
            out << row << "\n";
        }
    }

    // trials.jsonl: one record per trial
    {
        std::ofstream out(out_dir + "/trials.jsonl");
        if (!out) throw ConfigError("cannot write '" + out_dir + "/trials.jsonl'");
        for (const CellStats& cell : stats) {
            for (std::size_t t = 0; t < cell.trials.size(); ++t) {
                const TrialRecord& rec = cell.trials[t];
                nlohmann::json j;
                j["planner"] = to_string(cell.config.planner);
                j["bias"] = to_string(cell.config.bias);
                j["epsilon"] = cell.config.epsilon;
                j["trial"] = t;
                j["seed"] = rec.seed;
                j["success"] = rec.success;
                j["solve_time_s"] = include_timing ? rec.solve_time_s : 0.0;
                j["iterations"] = rec.iterations;
                j["tree_size"] = rec.tree_size;
                j["candidates"] = rec.candidates;
                j["horizon"] = rec.horizon;
                j["rejections"] = {{"obstacle", rec.rejections.obstacle},
                                   {"robot_robot", rec.rejections.robot_robot},
                                   {"cl", rec.rejections.cl},
                                   {"numeric", rec.rejections.numeric},
                                   {"rebranch", rec.rejections.rebranch}};
                if (rec.validated) {
                    j["rollout"] = {{"max_obstacle_rate", rec.max_obstacle_rate},
                                    {"max_robot_robot_rate", rec.max_robot_robot_rate},
                                    {"max_cl_fail_rate", rec.max_cl_fail_rate},
                                    {"min_goal_rate", rec.min_goal_rate}};
                }
                out << j.dump() << "\n";
            }
        }
    }

    for (const TrajectoryRecord& traj : trajectories) {
        write_trajectory_csv(out_dir + "/trajectory_" + traj.label + ".csv", model, traj.plan, traj.gammas);
    }
}

} // namespace coplan
