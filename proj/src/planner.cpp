#include "coplan/planner.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/QR>

#include "coplan/errors.hpp"

namespace coplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector uniform_ws_sample(const TeamModel& model, const WorkspaceBounds& bounds, Rng& rng) {
    const int w = model.workspace_dim();
    Vector s(static_cast<Index>(w) * model.num_robots());
    for (int r = 0; r < model.num_robots(); ++r) {
        for (int a = 0; a < w; ++a) {
            s[static_cast<Index>(r) * w + a] = rng.uniform(bounds.lo[a], bounds.hi[a]);
        }
    }
    return s;
}

Vector goal_ws_sample(const TeamModel& model, const std::vector<GoalRegion>& goals) {
    const int w = model.workspace_dim();
    Vector s(static_cast<Index>(w) * model.num_robots());
    for (int r = 0; r < model.num_robots(); ++r) {
        s.segment(static_cast<Index>(r) * w, w) = goals[static_cast<std::size_t>(r)].center;
    }
    return s;
}

// Per-robot least-squares steering of the workspace projection toward a
// target point, clamped per axis.
Vector steer_control(const TeamModel& model, const Vector& composed_mean, const Vector& ws_target) {
    const int w = model.workspace_dim();
    Vector u = Vector::Zero(model.control_dim());
    for (int r = 0; r < model.num_robots(); ++r) {
        const RobotModel& rm = model.robot(r);
        const IndexRange sb = model.state_block(r);
        const Vector x = composed_mean.segment(sb.start, sb.size);

        Matrix proj = Matrix::Zero(w, rm.state_dim());
        for (int a = 0; a < w; ++a) proj(a, rm.workspace_proj[static_cast<std::size_t>(a)]) = 1.0;

        const Vector drift = proj * (rm.A * x);
        const Vector delta = ws_target.segment(static_cast<Index>(r) * w, w) - drift;
        Vector ur = (proj * rm.B).completeOrthogonalDecomposition().solve(delta);
        ur = ur.cwiseMax(-rm.u_max).cwiseMin(rm.u_max);
        u.segment(model.control_block(r).start, rm.control_dim()) = ur;
    }
    return u;
}

std::vector<Vector> steered_controls(const TeamModel& model, const Vector& from_mean, const Vector& ws_target,
                                     int steps) {
    std::vector<Vector> controls;
    controls.reserve(static_cast<std::size_t>(steps));
    Vector mean = from_mean;
    for (int k = 0; k < steps; ++k) {
        Vector u = steer_control(model, mean, ws_target);
        mean = model.A() * mean + model.B() * u;
        controls.push_back(std::move(u));
    }
    return controls;
}

std::vector<Vector> random_controls(const TeamModel& model, int steps, Rng& rng) {
    std::vector<Vector> controls;
    controls.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        Vector u(model.control_dim());
        for (int r = 0; r < model.num_robots(); ++r) {
            const RobotModel& rm = model.robot(r);
            const IndexRange cb = model.control_block(r);
            for (Index a = 0; a < cb.size; ++a) {
                u[cb.start + a] = rng.uniform(-rm.u_max, rm.u_max);
            }
        }
        controls.push_back(std::move(u));
    }
    return controls;
}

bool goals_satisfied(const TeamModel& model, const ExpectedBelief& belief,
                     const std::vector<GoalRegion>& goals, double p_safe) {
    const GaussianBelief composed(belief.mean, belief.gamma());
    for (int r = 0; r < model.num_robots(); ++r) {
        const GaussianBelief ws = marginal(composed, model.workspace_indices(r));
        if (!check_goal(ws, goals[static_cast<std::size_t>(r)], p_safe)) return false;
    }
    return true;
}

int sparsity_sample(const BeliefTree& tree, Rng& rng) {
    const double r = rng.uniform() * tree.sparsity_total();
    double acc = 0.0;
    const int n = static_cast<int>(tree.size());
    for (int id = 0; id < n; ++id) {
        acc += tree.sparsity_weight(id);
        if (r < acc) return id;
    }
    return n - 1;
}

} // namespace

std::string to_string(PlannerKind k) { return k == PlannerKind::Rrt ? "rrt" : "est"; }

std::string to_string(BiasKind b) {
    switch (b) {
        case BiasKind::None: return "none";
        case BiasKind::Clone: return "clone";
        case BiasKind::Weight: return "weight";
        case BiasKind::Rebranch: return "rebranch";
    }
    return "none";
}

PlannerKind planner_kind_from_string(const std::string& s) {
    if (s == "rrt") return PlannerKind::Rrt;
    if (s == "est") return PlannerKind::Est;
    throw ConfigError("unknown planner kind '" + s + "' (expected rrt|est)");
}

BiasKind bias_kind_from_string(const std::string& s) {
    if (s == "none") return BiasKind::None;
    if (s == "clone") return BiasKind::Clone;
    if (s == "weight") return BiasKind::Weight;
    if (s == "rebranch") return BiasKind::Rebranch;
    throw ConfigError("unknown bias kind '" + s + "' (expected none|clone|weight|rebranch)");
}

void PlannerConfig::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("planner: epsilon must be in [0,1]");
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw ConfigError("planner: goal_bias must be in [0,1]");
    if (epsilon + goal_bias > 1.0) throw ConfigError("planner: epsilon + goal_bias must not exceed 1");
    if (edge_steps < 1) throw ConfigError("planner: edge_steps must be >= 1");
    if (weight_cap <= 0.0) throw ConfigError("planner: weight_cap must be positive");
}

Vector MotionPlan::composed_control(const TeamModel& model, int k) const {
    Vector u(model.control_dim());
    for (int r = 0; r < model.num_robots(); ++r) {
        const IndexRange cb = model.control_block(r);
        u.segment(cb.start, cb.size) = controls[static_cast<std::size_t>(r)].col(k);
    }
    return u;
}

Vector MotionPlan::composed_state(const TeamModel& model, int k) const {
    Vector x(model.state_dim());
    for (int r = 0; r < model.num_robots(); ++r) {
        const IndexRange sb = model.state_block(r);
        x.segment(sb.start, sb.size) = states[static_cast<std::size_t>(r)].col(k);
    }
    return x;
}

ExpectedBelief root_belief(const PlanningProblem& problem) {
    ExpectedBelief root;
    root.mean = problem.start_mean;
    root.sigma = problem.start_sigma;
    repair_covariance(root.sigma, "start covariance");
    root.lambda = Matrix::Zero(root.sigma.rows(), root.sigma.cols());
    root.time_index = 0;
    return root;
}

RrtSelection select_rrt(const BeliefTree& tree, const PlanningProblem& problem, const PlannerConfig& config,
                        BiasState& bias, Rng& rng) {
    const TeamModel& model = tree.model();
    const double eps_clone = (config.bias == BiasKind::Clone) ? config.epsilon : 0.0;

    RrtSelection sel;
    const double p = rng.uniform();
    if (p < eps_clone) {
        sel.target = clone_sample(uniform_ws_sample(model, problem.ctx.bounds, rng),
                                  model.num_robots(), model.workspace_dim(), bias);
    } else if (p < eps_clone + config.goal_bias) {
        sel.target = goal_ws_sample(model, problem.goals);
    } else {
        sel.target = uniform_ws_sample(model, problem.ctx.bounds, rng);
    }

    if (config.cov_weight == 0.0) {
        sel.node = tree.nearest(sel.target);
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (int id = 0; id < static_cast<int>(tree.size()); ++id) {
            const BeliefNode& n = tree.node(id);
            const double d = (n.ws_means - sel.target).norm() + config.cov_weight * n.belief.gamma().trace();
            if (d < best) {
                best = d;
                sel.node = id;
            }
        }
    }
    return sel;
}

int select_est(const BeliefTree& tree, const PlannerConfig& config, const BiasState& bias, Rng& rng) {
    const double p = rng.uniform();
    if (config.bias == BiasKind::Weight && p < config.epsilon) {
        return biased_pdf_sample(tree, bias, rng);
    }
    return sparsity_sample(tree, rng);
}

GuardedExtension extend(const BeliefTree& tree, int from_node, const std::optional<Vector>& ws_target,
                        const PlanningProblem& problem, const PlannerConfig& config, const Matrix& K, Rng& rng) {
    const TeamModel& model = tree.model();
    const ExpectedBelief& from = tree.node(from_node).belief;

    std::optional<Vector> target = ws_target;
    if (config.planner == PlannerKind::Est) {
        if (rng.uniform() < config.goal_bias) target = goal_ws_sample(model, problem.goals);
    }

    std::vector<Vector> controls = target.has_value()
                                       ? steered_controls(model, from.mean, *target, config.edge_steps)
                                       : random_controls(model, config.edge_steps, rng);
    return propagate_guarded(model, problem.ctx, K, from, controls);
}

MotionPlan extract_plan(const BeliefTree& tree, int goal_node) {
    const TeamModel& model = tree.model();

    std::vector<Vector> composed_controls;
    std::vector<Vector> composed_states;
    MeasurementSchedule schedule;

    composed_states.push_back(tree.node(tree.path_from_root(goal_node).front()).belief.mean);
    for (int id : tree.path_from_root(goal_node)) {
        const BeliefNode& n = tree.node(id);
        if (n.edge < 0) continue;
        const EdgeRecord& e = tree.edge(n.edge);
        for (std::size_t k = 0; k < e.length(); ++k) {
            composed_controls.push_back(e.controls[k]);
            composed_states.push_back(e.states[k + 1]);
            schedule.active_pairs.push_back(e.schedule[k]);
        }
    }

    // nominal replay before handing the plan out
    Vector x = composed_states.front();
    for (std::size_t k = 0; k < composed_controls.size(); ++k) {
        x = model.A() * x + model.B() * composed_controls[k];
        if ((x - composed_states[k + 1]).lpNorm<Eigen::Infinity>() > 1e-9) {
            throw NumericError("extract_plan: nominal replay mismatch at step " + std::to_string(k + 1));
        }
    }

    const int T = static_cast<int>(composed_controls.size());
    MotionPlan plan;
    plan.schedule = std::move(schedule);
    for (int r = 0; r < model.num_robots(); ++r) {
        const IndexRange cb = model.control_block(r);
        const IndexRange sb = model.state_block(r);
        Matrix u(cb.size, T);
        Matrix s(sb.size, T + 1);
        for (int k = 0; k < T; ++k) u.col(k) = composed_controls[static_cast<std::size_t>(k)].segment(cb.start, cb.size);
        for (int k = 0; k <= T; ++k) s.col(k) = composed_states[static_cast<std::size_t>(k)].segment(sb.start, sb.size);
        plan.controls.push_back(std::move(u));
        plan.states.push_back(std::move(s));
    }
    return plan;
}

Revalidation revalidate_plan(const TeamModel& model, const PlanningProblem& problem, const Matrix& K,
                             const MotionPlan& plan) {
    Revalidation out;
    plan.schedule.validate(model);

    ExpectedBelief belief = root_belief(problem);
    out.gammas.push_back(belief.gamma());

    const Violation root_v = first_violation(belief, model, problem.ctx, {});
    if (root_v != Violation::None) {
        out.reason = "root violates constraints";
        return out;
    }

    for (int k = 0; k < plan.horizon(); ++k) {
        const Vector u = plan.composed_control(model, k);
        const auto& active = plan.schedule.active_pairs[static_cast<std::size_t>(k)];
        auto [C, R] = assemble_measurement(model, active);
        try {
            belief = propagate_step(model, belief, u, C, R, K);
        } catch (const NumericError& e) {
            out.reason = std::string("propagation failed at step ") + std::to_string(k + 1) + ": " + e.what();
            return out;
        }
        if ((belief.mean - plan.composed_state(model, k + 1)).lpNorm<Eigen::Infinity>() > 1e-9) {
            out.reason = "nominal state mismatch at step " + std::to_string(k + 1);
            return out;
        }
        const Violation v = first_violation(belief, model, problem.ctx, active);
        if (v != Violation::None) {
            const char* names[] = {"none", "obstacle", "robot-robot", "cl"};
            out.reason = std::string(names[static_cast<int>(v)]) + " violation at step " + std::to_string(k + 1);
            return out;
        }
        out.gammas.push_back(belief.gamma());
    }

    if (!goals_satisfied(model, belief, problem.goals, problem.ctx.budget.p_safe)) {
        out.reason = "goal chance constraint unsatisfied at horizon";
        return out;
    }
    out.valid = true;
    return out;
}

namespace {

void snapshot_tree(const BeliefTree& tree, std::vector<NodeSnapshot>& out) {
    out.clear();
    out.reserve(tree.size());
    for (int id = 0; id < static_cast<int>(tree.size()); ++id) {
        const BeliefNode& n = tree.node(id);
        NodeSnapshot snap;
        snap.belief = n.belief;
        snap.parent = n.parent;
        if (n.edge >= 0 && !tree.edge(n.edge).schedule.empty()) {
            snap.arrival_schedule = tree.edge(n.edge).schedule.back();
        }
        out.push_back(std::move(snap));
    }
}

} // namespace

PlanResult plan(const TeamModel& model, const PlanningProblem& problem, const PlannerConfig& config,
                std::vector<NodeSnapshot>* tree_snapshot) {
    config.validate();
    problem.ctx.budget.validate();
    if (static_cast<int>(problem.goals.size()) != model.num_robots()) {
        throw ConfigError("plan: one goal region per robot required");
    }

    const auto t0 = Clock::now();
    const GainSet gains = GainSet::lqr_defaults(model, config.gain_q_scale, config.gain_r_scale);
    const Matrix& K = gains.composed();

    const double est_radius = config.est_radius > 0.0 ? config.est_radius
                                                      : 0.1 * problem.ctx.bounds.diagonal();

    ExpectedBelief root = root_belief(problem);
    if (!valid_belief(root, model, problem.ctx, {})) {
        throw ConfigError("plan: root belief violates constraints");
    }

    BeliefTree tree(model, est_radius);
    BiasState bias(config.weight_cap);
    Rng rng(config.rng_seed);

    PlanResult result;

    const int root_id = tree.insert(root, -1, {});
    bias.on_insert(tree, root_id);

    if (goals_satisfied(model, root, problem.goals, problem.ctx.budget.p_safe)) {
        result.success = true;
        result.plan = extract_plan(tree, root_id);
        result.gammas.push_back(root.gamma());
        result.tree_size = tree.size();
        result.solve_time_s = seconds_since(t0);
        if (tree_snapshot) snapshot_tree(tree, *tree_snapshot);
        return result;
    }

    while (result.iterations < config.max_iterations && seconds_since(t0) < config.time_budget_s) {
        ++result.iterations;

        int from_node;
        std::optional<Vector> target;
        if (config.planner == PlannerKind::Rrt) {
            RrtSelection sel = select_rrt(tree, problem, config, bias, rng);
            from_node = sel.node;
            target = std::move(sel.target);
        } else {
            from_node = select_est(tree, config, bias, rng);
        }

        if (config.bias == BiasKind::Rebranch && config.epsilon > 0.0 && rng.uniform() < config.epsilon) {
            from_node = rebranch(tree, from_node, problem.ctx, K, bias, result.rejections);
        }

        ++result.candidates;
        GuardedExtension ext = extend(tree, from_node, target, problem, config, K, rng);
        if (!ext.ok) {
            result.rejections.count(ext.cause, ext.numeric_failure);
            continue;
        }

        const int id = tree.insert(std::move(ext.terminal), from_node, std::move(ext.record));
        bias.on_insert(tree, id);

        if (goals_satisfied(model, tree.node(id).belief, problem.goals, problem.ctx.budget.p_safe)) {
            result.success = true;
            result.plan = extract_plan(tree, id);
            Revalidation rv = revalidate_plan(model, problem, K, result.plan);
            if (!rv.valid) {
                throw NumericError("plan: extracted plan failed re-validation: " + rv.reason);
            }
            result.gammas = std::move(rv.gammas);
            break;
        }
    }

    result.tree_size = tree.size();
    result.solve_time_s = seconds_since(t0);
    if (tree_snapshot) snapshot_tree(tree, *tree_snapshot);
    return result;
}

} // namespace coplan
