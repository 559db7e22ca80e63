#include "coplan/lqr.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "coplan/errors.hpp"

namespace coplan {

double spectral_radius(const Matrix& M) {
    Eigen::EigenSolver<Matrix> es(M, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& Q_cost, const Matrix& R_cost) {
    const Index n = A.rows();
    const Index m = B.cols();
    if (A.cols() != n || B.rows() != n) throw DimensionError("lqr_gain: A/B shape mismatch");
    if (Q_cost.rows() != n || Q_cost.cols() != n) throw DimensionError("lqr_gain: Q_cost shape mismatch");
    if (R_cost.rows() != m || R_cost.cols() != m) throw DimensionError("lqr_gain: R_cost shape mismatch");

    constexpr double tol = 1e-10;
    constexpr int max_iters = 10000;

    Matrix P = Q_cost;
    for (int iter = 0; iter < max_iters; ++iter) {
        const Matrix BtPA = B.transpose() * P * A;
        Matrix S = R_cost + B.transpose() * P * B;
        const Matrix K = S.ldlt().solve(BtPA);
        Matrix P_next = Q_cost + A.transpose() * P * A - BtPA.transpose() * K;
        P_next = ((P_next + P_next.transpose()) / 2.0).eval();
        const double delta = (P_next - P).lpNorm<Eigen::Infinity>();
        P = P_next;
        if (!P.allFinite()) throw ModelError("lqr_gain: Riccati iteration diverged");
        if (delta <= tol * std::max(1.0, P.lpNorm<Eigen::Infinity>())) {
            Matrix S_final = R_cost + B.transpose() * P * B;
            const Matrix gain = S_final.ldlt().solve(B.transpose() * P * A);
            if (spectral_radius(A - B * gain) >= 1.0) {
                throw ModelError("lqr_gain: closed loop not Schur-stable");
            }
            return gain;
        }
    }
    throw ModelError("lqr_gain: Riccati recursion did not converge in " + std::to_string(max_iters) + " iterations");
}

GainSet::GainSet(const TeamModel& model, std::vector<Matrix> per_robot_gains) {
    if (static_cast<int>(per_robot_gains.size()) != model.num_robots()) {
        throw DimensionError("GainSet: one gain per robot required");
    }
    composed_ = Matrix::Zero(model.control_dim(), model.state_dim());
    for (int i = 0; i < model.num_robots(); ++i) {
        const RobotModel& rm = model.robot(i);
        const Matrix& K = per_robot_gains[static_cast<std::size_t>(i)];
        if (K.rows() != rm.control_dim() || K.cols() != rm.state_dim()) {
            throw DimensionError("GainSet: gain " + std::to_string(i) + " shape mismatch");
        }
        if (spectral_radius(rm.A - rm.B * K) >= 1.0) {
            throw ModelError("GainSet: robot " + std::to_string(i) + " closed loop not Schur-stable");
        }
        composed_.block(model.control_block(i).start, model.state_block(i).start,
                        rm.control_dim(), rm.state_dim()) = K;
    }
    gains_ = std::move(per_robot_gains);
}

GainSet GainSet::lqr_defaults(const TeamModel& model, double q_scale, double r_scale) {
    std::vector<Matrix> gains;
    gains.reserve(static_cast<std::size_t>(model.num_robots()));
    for (const RobotModel& rm : model.robots()) {
        const Matrix Qc = q_scale * Matrix::Identity(rm.state_dim(), rm.state_dim());
        const Matrix Rc = r_scale * Matrix::Identity(rm.control_dim(), rm.control_dim());
        gains.push_back(lqr_gain(rm.A, rm.B, Qc, Rc));
    }
    return GainSet(model, std::move(gains));
}

} // namespace coplan
