#include "coplan/rollout.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "coplan/errors.hpp"

namespace coplan {

namespace {

// One sensor block lifted to composed-state columns, with a noise sampler.
struct SensorBlock {
    Matrix C;                 // q x n_N
    GaussianSampler noise;
    int pair_id = -1;         // -1 for proprioceptive blocks
};

} // namespace

RolloutReport execute_plan(const TeamModel& model, const PlanningProblem& problem, const Matrix& K,
                           const MotionPlan& plan, std::uint64_t rollouts, std::uint64_t seed,
                           const ExecuteOptions& options) {
    plan.schedule.validate(model);
    const int T = plan.horizon();
    const int N = model.num_robots();
    const Index n = model.state_dim();

    RolloutReport report;
    report.rollouts = rollouts;
    report.rng_seed = seed;
    report.obstacle_rate = Matrix::Zero(N, std::max(T, 0));
    report.robot_robot_rate = Matrix::Zero(N, std::max(T, 0));
    report.cl_fail_rate = Matrix::Zero(N, std::max(T, 0));
    report.goal_rate = Vector::Zero(N);

    // Precompute composed nominal trajectories and per-sensor blocks.
    std::vector<Vector> u_nom(static_cast<std::size_t>(T));
    std::vector<Vector> x_nom(static_cast<std::size_t>(T) + 1);
    for (int k = 0; k < T; ++k) u_nom[static_cast<std::size_t>(k)] = plan.composed_control(model, k);
    for (int k = 0; k <= T; ++k) x_nom[static_cast<std::size_t>(k)] = plan.composed_state(model, k);

    std::vector<SensorBlock> prop_blocks;
    std::vector<Matrix> prop_R;
    for (int i = 0; i < N; ++i) {
        const RobotModel& rm = model.robot(i);
        if (!rm.C_prop) continue;
        SensorBlock b{Matrix::Zero(rm.C_prop->rows(), n), GaussianSampler(Vector::Zero(rm.C_prop->rows()), *rm.R_prop), -1};
        b.C.block(0, model.state_block(i).start, rm.C_prop->rows(), rm.state_dim()) = *rm.C_prop;
        prop_blocks.push_back(std::move(b));
        prop_R.push_back(*rm.R_prop);
    }
    std::vector<SensorBlock> pair_blocks;
    std::vector<Matrix> pair_R;
    for (int p = 0; p < static_cast<int>(model.pairs().size()); ++p) {
        const ExteroPair& ep = model.pair(p);
        SensorBlock b{Matrix::Zero(ep.C_ext.rows(), n), GaussianSampler(Vector::Zero(ep.C_ext.rows()), ep.R_ext), p};
        const Index ni = model.robot(ep.i).state_dim();
        const Index nj = model.robot(ep.j).state_dim();
        b.C.block(0, model.state_block(ep.i).start, ep.C_ext.rows(), ni) = ep.C_ext.leftCols(ni);
        b.C.block(0, model.state_block(ep.j).start, ep.C_ext.rows(), nj) = ep.C_ext.rightCols(nj);
        pair_blocks.push_back(std::move(b));
        pair_R.push_back(ep.R_ext);
    }

    const GaussianSampler start_sampler(problem.start_mean, problem.start_sigma);
    const GaussianSampler process_sampler(Vector::Zero(n), model.Q());

    // Per-rollout tallies staged locally and committed only if finite.
    Matrix obs_count = Matrix::Zero(N, std::max(T, 0));
    Matrix rr_count = Matrix::Zero(N, std::max(T, 0));
    Matrix cl_count = Matrix::Zero(N, std::max(T, 0));
    Vector goal_count = Vector::Zero(N);
    std::uint64_t success_count = 0;

    std::vector<Matrix> dev_sum;
    if (options.collect_deviation_cov) {
        dev_sum.assign(static_cast<std::size_t>(T) + 1, Matrix::Zero(n, n));
    }

    auto block_update = [&](Vector& xhat, Matrix& sigma, const SensorBlock& block, const Matrix& R,
                            const Vector& y) {
        const Matrix CS = block.C * sigma;
        Matrix S = CS * block.C.transpose() + R;
        Eigen::LLT<Matrix> llt(S);
        if (llt.info() != Eigen::Success) {
            S += 1e-12 * Matrix::Identity(S.rows(), S.cols());
            llt.compute(S);
            if (llt.info() != Eigen::Success) throw NumericError("rollout: innovation not PD");
        }
        const Matrix L = llt.solve(CS).transpose();
        xhat += L * (y - block.C * xhat);
        sigma -= L * CS;
        sigma = ((sigma + sigma.transpose()) / 2.0).eval();
    };

    Rng rng(seed);
    std::uint64_t valid = 0;
    for (std::uint64_t r = 0; r < rollouts; ++r) {
        Vector x = start_sampler.draw(rng);
        Vector xhat = problem.start_mean;
        Matrix sigma = problem.start_sigma;

        Matrix obs_local = Matrix::Zero(N, std::max(T, 0));
        Matrix rr_local = Matrix::Zero(N, std::max(T, 0));
        Matrix cl_local = Matrix::Zero(N, std::max(T, 0));
        std::vector<Matrix> dev_local;
        if (options.collect_deviation_cov) {
            dev_local.assign(static_cast<std::size_t>(T) + 1, Matrix());
            const Vector d0 = x - x_nom[0];
            dev_local[0] = d0 * d0.transpose();
        }

        bool finite = x.allFinite();
        for (int k = 0; k < T && finite; ++k) {
            const Vector u = u_nom[static_cast<std::size_t>(k)] - K * (xhat - x_nom[static_cast<std::size_t>(k)]);
            x = model.A() * x + model.B() * u + process_sampler.draw(rng);

            // KF predict with the applied control
            xhat = model.A() * xhat + model.B() * u;
            sigma = model.A() * sigma * model.A().transpose() + model.Q();
            sigma = ((sigma + sigma.transpose()) / 2.0).eval();

            // proprioceptive stack always delivers
            for (std::size_t b = 0; b < prop_blocks.size(); ++b) {
                const Vector y = prop_blocks[b].C * x + prop_blocks[b].noise.draw(rng);
                block_update(xhat, sigma, prop_blocks[b], prop_R[b], y);
            }
            // scheduled pairs deliver only when the true states allow it
            for (int p : plan.schedule.active_pairs[static_cast<std::size_t>(k)]) {
                const ExteroPair& ep = model.pair(p);
                const Vector pi = model.workspace_position(ep.i, x);
                const Vector pj = model.workspace_position(ep.j, x);
                if ((pi - pj).norm() <= ep.r_ext) {
                    const SensorBlock& blk = pair_blocks[static_cast<std::size_t>(p)];
                    const Vector y = blk.C * x + blk.noise.draw(rng);
                    block_update(xhat, sigma, blk, pair_R[static_cast<std::size_t>(p)], y);
                } else {
                    cl_local(ep.i, k) = 1.0;
                    cl_local(ep.j, k) = 1.0;
                }
            }

            // constraint events against the true state at the arrival step
            for (int i = 0; i < N; ++i) {
                const Vector pos = model.workspace_position(i, x);
                const double body = model.robot(i).body_radius;
                bool hit = !problem.ctx.bounds.contains_disc(pos, body);
                for (const Obstacle& obs : problem.ctx.obstacles) {
                    if (hit) break;
                    hit = obs.distance(pos) <= body;
                }
                if (hit) obs_local(i, k) = 1.0;
            }
            for (int i = 0; i < N; ++i) {
                for (int j = i + 1; j < N; ++j) {
                    const Vector pi = model.workspace_position(i, x);
                    const Vector pj = model.workspace_position(j, x);
                    if ((pi - pj).norm() <= model.robot(i).body_radius + model.robot(j).body_radius) {
                        rr_local(i, k) = 1.0;
                        rr_local(j, k) = 1.0;
                    }
                }
            }

            if (options.collect_deviation_cov) {
                const Vector d = x - x_nom[static_cast<std::size_t>(k) + 1];
                dev_local[static_cast<std::size_t>(k) + 1] = d * d.transpose();
            }
            finite = x.allFinite() && xhat.allFinite() && sigma.allFinite();
        }

        if (!finite) {
            ++report.excluded;
            continue;
        }

        ++valid;
        obs_count += obs_local;
        rr_count += rr_local;
        cl_count += cl_local;
        bool all_goals = true;
        for (int i = 0; i < N; ++i) {
            const Vector pos = model.workspace_position(i, x);
            const bool in_goal = (pos - problem.goals[static_cast<std::size_t>(i)].center).norm()
                                 <= problem.goals[static_cast<std::size_t>(i)].radius;
            if (in_goal) goal_count[i] += 1.0;
            all_goals = all_goals && in_goal;
        }
        if (all_goals) ++success_count;
        if (options.collect_deviation_cov) {
            for (std::size_t k = 0; k < dev_local.size(); ++k) dev_sum[k] += dev_local[k];
        }
    }

    if (valid > 0) {
        const double inv = 1.0 / static_cast<double>(valid);
        report.obstacle_rate = obs_count * inv;
        report.robot_robot_rate = rr_count * inv;
        report.cl_fail_rate = cl_count * inv;
        report.goal_rate = goal_count * inv;
        report.success_rate = static_cast<double>(success_count) * inv;
        if (options.collect_deviation_cov) {
            report.deviation_cov.resize(dev_sum.size());
            for (std::size_t k = 0; k < dev_sum.size(); ++k) report.deviation_cov[k] = dev_sum[k] * inv;
        }
    }
    return report;
}

McEstimate mc_probability(const Vector& mean, const Matrix& cov,
                          const std::function<bool(const Vector&)>& event, std::uint64_t samples, Rng& rng) {
    if (samples < 1000) throw ArgumentError("mc_probability: at least 1000 samples required");
    const GaussianSampler sampler(mean, cov);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        if (event(sampler.draw(rng))) ++hits;
    }
    McEstimate est;
    est.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(samples));
    return est;
}

} // namespace coplan
