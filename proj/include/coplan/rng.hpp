#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "coplan/types.hpp"

namespace coplan {

/// Seeded deterministic generator. Distributions are implemented here
/// (uniform via 53-bit mantissa, normal via Box-Muller) rather than through
/// std::*_distribution so that a seed pins the exact stream independent of
/// the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// U[0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// U[lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // rejection-free modulo is biased for huge n; n here is tree/trial sized
        return engine_() % n;
    }

    /// Standard normal, Box-Muller (one value per call, cached pair).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Vector of iid standard normals.
    Vector normal_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Draws from N(mean, cov) through an eigenvalue square root, tolerant of
/// singular (including zero) covariances.
class GaussianSampler {
public:
    GaussianSampler(Vector mean, const Matrix& cov) : mean_(std::move(mean)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
        Vector vals = es.eigenvalues().cwiseMax(0.0);
        factor_ = es.eigenvectors() * vals.cwiseSqrt().asDiagonal();
    }

    Vector draw(Rng& rng) const { return mean_ + factor_ * rng.normal_vector(mean_.size()); }

    Index dim() const { return mean_.size(); }

private:
    Vector mean_;
    Matrix factor_;
};

} // namespace coplan
