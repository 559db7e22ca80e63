#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "coplan/chi_square.hpp"
#include "coplan/errors.hpp"
#include "coplan/types.hpp"

namespace coplan {

inline constexpr double kSymmetryTol = 1e-9;
inline constexpr double kEigenvalueFloor = -1e-9;

/// Symmetrize and repair a covariance in place: (M + M^T)/2, then clamp
/// eigenvalues in [kEigenvalueFloor, 0) to zero. Asymmetry beyond tolerance
/// or an eigenvalue below the floor is an error.
template <typename Scalar>
void repair_covariance(Eigen::MatrixX<Scalar>& cov, const char* what = "covariance") {
    if (cov.rows() != cov.cols()) throw DimensionError(std::string(what) + " is not square");
    const Scalar asym = (cov - cov.transpose()).template lpNorm<Eigen::Infinity>();
    const Scalar scale = std::max<Scalar>(Scalar(1), cov.template lpNorm<Eigen::Infinity>());
    if (asym > Scalar(kSymmetryTol) * scale) {
        throw NumericError(std::string(what) + " is not symmetric (asymmetry " + std::to_string(double(asym)) + ")");
    }
    cov = ((cov + cov.transpose()) / Scalar(2)).eval();
    if (cov.rows() == 0) return;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixX<Scalar>> es(cov);
    const Scalar min_eig = es.eigenvalues().minCoeff();
    if (min_eig < Scalar(kEigenvalueFloor)) {
        throw NumericError(std::string(what) + " is not PSD (min eigenvalue " + std::to_string(double(min_eig)) + ")");
    }
    if (min_eig < Scalar(0)) {
        Eigen::VectorX<Scalar> vals = es.eigenvalues().cwiseMax(Scalar(0));
        cov = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
        cov = ((cov + cov.transpose()) / Scalar(2)).eval();
    }
}

/// Gaussian over a real vector: mean plus symmetric PSD covariance.
/// Covariances are symmetrized and eigenvalue-clamped on construction, so a
/// held instance always satisfies the PSD invariant.
template <typename Scalar>
class GaussianBeliefT {
public:
    using VectorT = Eigen::VectorX<Scalar>;
    using MatrixT = Eigen::MatrixX<Scalar>;

    GaussianBeliefT() = default;

    GaussianBeliefT(VectorT mean, MatrixT covariance)
        : mean_(std::move(mean)), cov_(std::move(covariance)) {
        if (mean_.size() != cov_.rows()) throw DimensionError("belief mean/covariance size mismatch");
        repair_covariance(cov_, "belief covariance");
    }

    [[nodiscard]] const VectorT& mean() const { return mean_; }
    [[nodiscard]] const MatrixT& covariance() const { return cov_; }
    [[nodiscard]] Index dim() const { return mean_.size(); }

private:
    VectorT mean_;
    MatrixT cov_;
};

/// Belief over the workspace difference of two robot positions.
template <typename Scalar>
class DifferenceBeliefT {
public:
    using VectorT = Eigen::VectorX<Scalar>;
    using MatrixT = Eigen::MatrixX<Scalar>;

    DifferenceBeliefT() = default;

    DifferenceBeliefT(VectorT mean, MatrixT covariance)
        : mean_(std::move(mean)), cov_(std::move(covariance)) {
        if (mean_.size() != cov_.rows()) throw DimensionError("difference mean/covariance size mismatch");
        repair_covariance(cov_, "difference covariance");
    }

    [[nodiscard]] const VectorT& mean() const { return mean_; }
    [[nodiscard]] const MatrixT& covariance() const { return cov_; }
    [[nodiscard]] Index dim() const { return mean_.size(); }

private:
    VectorT mean_;
    MatrixT cov_;
};

using GaussianBelief = GaussianBeliefT<double>;
using DifferenceBelief = DifferenceBeliefT<double>;

/// Marginal over an arbitrary index list.
template <typename Scalar>
GaussianBeliefT<Scalar> marginal(const GaussianBeliefT<Scalar>& b, const IndexList& idx) {
    for (Index i : idx) {
        if (i < 0 || i >= b.dim()) throw DimensionError("marginal index out of range");
    }
    return GaussianBeliefT<Scalar>(b.mean()(idx), b.covariance()(idx, idx));
}

/// Marginal over a contiguous block [start, start+size).
template <typename Scalar>
GaussianBeliefT<Scalar> marginal(const GaussianBeliefT<Scalar>& b, const IndexRange& block) {
    if (block.start < 0 || block.size < 0 || block.end() > b.dim()) {
        throw DimensionError("marginal block out of range");
    }
    return GaussianBeliefT<Scalar>(b.mean().segment(block.start, block.size),
                                   b.covariance().block(block.start, block.start, block.size, block.size));
}

/// Belief over x_i - x_j for the index lists of two robots' workspace
/// coordinates. The covariance is S_ii + S_jj - S_ij - S_ij^T, the variance
/// of a difference of jointly Gaussian vectors; cross blocks need not be
/// symmetric so the transpose pair is kept explicit.
template <typename Scalar>
DifferenceBeliefT<Scalar> difference_belief(const GaussianBeliefT<Scalar>& b,
                                            const IndexList& proj_i, const IndexList& proj_j) {
    if (proj_i.size() != proj_j.size()) throw DimensionError("difference_belief projection size mismatch");
    for (Index a : proj_i) {
        if (a < 0 || a >= b.dim()) throw DimensionError("difference_belief index out of range");
        for (Index c : proj_j) {
            if (a == c) throw ArgumentError("difference_belief projections overlap");
        }
    }
    for (Index c : proj_j) {
        if (c < 0 || c >= b.dim()) throw DimensionError("difference_belief index out of range");
    }

    Eigen::VectorX<Scalar> mean = b.mean()(proj_i) - b.mean()(proj_j);
    Eigen::MatrixX<Scalar> cross = b.covariance()(proj_i, proj_j);
    Eigen::MatrixX<Scalar> cov = b.covariance()(proj_i, proj_i) + b.covariance()(proj_j, proj_j)
                                 - cross - cross.transpose();
    return DifferenceBeliefT<Scalar>(std::move(mean), std::move(cov));
}

template <typename Scalar>
DifferenceBeliefT<Scalar> difference_belief(const GaussianBeliefT<Scalar>& b,
                                            const IndexRange& proj_i, const IndexRange& proj_j) {
    if (proj_i.overlaps(proj_j)) throw ArgumentError("difference_belief projections overlap");
    return difference_belief(b, proj_i.indices(), proj_j.indices());
}

/// Radius of the origin-centered sphere containing at least 1 - tail_prob
/// probability mass of N(0, cov): sqrt(alpha * lambda_max) with alpha the
/// chi-square quantile at 1 - tail_prob for dof = dim(cov).
template <typename Derived>
double contour_radius(const Eigen::MatrixBase<Derived>& cov, double tail_prob) {
    if (!(tail_prob > 0.0 && tail_prob < 1.0)) throw ArgumentError("contour_radius: tail_prob must be in (0,1)");
    if (cov.rows() != cov.cols()) throw DimensionError("contour_radius: covariance not square");

    Eigen::MatrixXd dense = cov.template cast<double>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    double lambda_max = es.eigenvalues().maxCoeff();
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min < kEigenvalueFloor) throw NumericError("contour_radius: covariance not PSD");
    if (lambda_max < 0.0) lambda_max = 0.0;
    if (lambda_max == 0.0) return 0.0;

    const double alpha = chi_square_quantile(1.0 - tail_prob, static_cast<int>(cov.rows()));
    return std::sqrt(alpha * lambda_max);
}

inline double contour_radius(const DifferenceBelief& d, double tail_prob) {
    return contour_radius(d.covariance(), tail_prob);
}

inline double contour_radius(const GaussianBelief& b, double tail_prob) {
    return contour_radius(b.covariance(), tail_prob);
}

} // namespace coplan
