#include <doctest.h>

#include <cmath>

#include "coplan/gaussian.hpp"
#include "coplan/rng.hpp"

using namespace coplan;

namespace {

Matrix random_psd_2x2(Rng& rng, double eig_lo, double eig_hi) {
    const double theta = rng.uniform(0.0, M_PI);
    const double l1 = rng.uniform(eig_lo, eig_hi);
    const double l2 = rng.uniform(eig_lo, eig_hi);
    Matrix rot(2, 2);
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return rot * (Vector(2) << l1, l2).finished().asDiagonal() * rot.transpose();
}

} // namespace

TEST_CASE("chi-square quantile matches tabulated values") {
    CHECK(chi_square_quantile(0.95, 2) == doctest::Approx(5.991464547107982).epsilon(1e-10));
    CHECK(chi_square_quantile(0.95, 1) == doctest::Approx(3.841458820694124).epsilon(1e-8));
    CHECK(chi_square_quantile(0.90, 3) == doctest::Approx(6.251388631170325).epsilon(1e-8));
    CHECK(chi_square_quantile(0.95, 3) == doctest::Approx(7.814727903251179).epsilon(1e-8));
    CHECK(chi_square_quantile(0.99, 3) == doctest::Approx(11.344866730144371).epsilon(1e-8));
    CHECK_THROWS_AS(chi_square_quantile(0.0, 2), ArgumentError);
    CHECK_THROWS_AS(chi_square_quantile(1.0, 2), ArgumentError);

    // quantile and CDF are inverses for the dofs in use
    for (int dof : {1, 2, 3}) {
        for (double p : {0.05, 0.5, 0.85, 0.99}) {
            CHECK(chi_square_cdf(chi_square_quantile(p, dof), dof) == doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("belief construction repairs and validates covariances") {
    const Vector mean = Vector::Zero(2);

    SUBCASE("slightly negative eigenvalue is clamped") {
        Matrix cov(2, 2);
        cov << 1.0, 0.0, 0.0, -5e-10;
        const GaussianBelief b(mean, cov);
        Eigen::SelfAdjointEigenSolver<Matrix> es(b.covariance());
        CHECK(es.eigenvalues().minCoeff() >= 0.0);
    }
    SUBCASE("eigenvalue below the floor is rejected") {
        Matrix cov(2, 2);
        cov << 1.0, 0.0, 0.0, -1e-6;
        CHECK_THROWS_AS(GaussianBelief(mean, cov), NumericError);
    }
    SUBCASE("gross asymmetry is rejected") {
        Matrix cov(2, 2);
        cov << 1.0, 0.1, 0.0, 1.0;
        CHECK_THROWS_AS(GaussianBelief(mean, cov), NumericError);
    }
    SUBCASE("mean/covariance size mismatch") {
        CHECK_THROWS_AS(GaussianBelief(Vector::Zero(3), Matrix::Identity(2, 2)), DimensionError);
    }
}

TEST_CASE("marginal extracts sub-mean and principal sub-block") {
    const Vector mean = (Vector(4) << 1, 2, 3, 4).finished();
    const Matrix cov = (Vector(4) << 1, 2, 3, 4).finished().asDiagonal();
    const GaussianBelief b(mean, cov);

    SUBCASE("diagonal block") {
        const GaussianBelief m = marginal(b, IndexRange{2, 2});
        CHECK(m.mean().isApprox((Vector(2) << 3, 4).finished()));
        CHECK(m.covariance().isApprox((Vector(2) << 3, 4).finished().asDiagonal().toDenseMatrix()));
    }
    SUBCASE("identity block") {
        const GaussianBelief m = marginal(b, IndexRange{0, 4});
        CHECK(m.mean().isApprox(b.mean()));
        CHECK(m.covariance().isApprox(b.covariance()));
    }
    SUBCASE("cross terms outside the block are dropped") {
        Matrix c = Matrix::Identity(4, 4);
        c(0, 2) = c(2, 0) = 0.5;
        const GaussianBelief bc(Vector::Zero(4), c);
        const GaussianBelief m = marginal(bc, IndexRange{0, 2});
        CHECK(m.covariance().isApprox(Matrix::Identity(2, 2)));
    }
    SUBCASE("out-of-range block") {
        CHECK_THROWS_AS(marginal(b, IndexRange{2, 3}), DimensionError);
        CHECK_THROWS_AS(marginal(b, IndexList{0, 4}), DimensionError);
    }
}

TEST_CASE("difference_belief implements the cross-covariance formula") {
    SUBCASE("independent robots") {
        Matrix cov = 0.01 * Matrix::Identity(4, 4);
        const GaussianBelief b((Vector(4) << 1, 0, 0, 0).finished(), cov);
        const DifferenceBelief d = difference_belief(b, IndexRange{0, 2}, IndexRange{2, 2});
        CHECK(d.mean().isApprox((Vector(2) << 1, 0).finished()));
        CHECK(d.covariance().isApprox(0.02 * Matrix::Identity(2, 2)));
    }
    SUBCASE("perfectly correlated clones cancel") {
        Matrix s(2, 2);
        s << 0.02, 0.005, 0.005, 0.01;
        Matrix cov(4, 4);
        cov << s, s, s, s;
        const GaussianBelief b(Vector::Zero(4), cov);
        const DifferenceBelief d = difference_belief(b, IndexRange{0, 2}, IndexRange{2, 2});
        CHECK(d.covariance().lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SUBCASE("block formula") {
        Matrix cov(4, 4);
        cov << 2.0, 0.0, 0.5, 0.0,
               0.0, 1.0, 0.0, 0.25,
               0.5, 0.0, 1.0, 0.0,
               0.0, 0.25, 0.0, 1.0;
        const GaussianBelief b(Vector::Zero(4), cov);
        const DifferenceBelief d = difference_belief(b, IndexRange{0, 2}, IndexRange{2, 2});
        CHECK(d.covariance().isApprox((Vector(2) << 2.0, 1.5).finished().asDiagonal().toDenseMatrix()));
    }
    SUBCASE("overlapping projections are rejected") {
        const GaussianBelief b(Vector::Zero(4), Matrix::Identity(4, 4));
        CHECK_THROWS_AS(difference_belief(b, IndexRange{0, 3}, IndexRange{2, 2}), ArgumentError);
    }
}

TEST_CASE("contour_radius closed form and edge cases") {
    SUBCASE("dof-2 closed form") {
        const double r = contour_radius(0.01 * Matrix::Identity(2, 2), 0.05);
        CHECK(r == doctest::Approx(std::sqrt(-2.0 * std::log(0.05) * 0.01)).epsilon(1e-12));
        CHECK(r == doctest::Approx(0.24478).epsilon(1e-4));
    }
    SUBCASE("zero covariance") {
        CHECK(contour_radius(Matrix::Zero(2, 2), 0.05) == 0.0);
    }
    SUBCASE("largest eigenvalue drives the radius") {
        const Matrix cov = (Vector(2) << 0.04, 0.01).finished().asDiagonal();
        CHECK(contour_radius(cov, 0.05) == doctest::Approx(0.48956).epsilon(1e-4));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(contour_radius(Matrix::Identity(2, 2), 0.0), ArgumentError);
        CHECK_THROWS_AS(contour_radius(Matrix::Identity(2, 2), 1.0), ArgumentError);
        Matrix indefinite(2, 2);
        indefinite << 1.0, 0.0, 0.0, -0.5;
        CHECK_THROWS_AS(contour_radius(indefinite, 0.05), NumericError);
    }
}

TEST_CASE("contour_radius monotonicity") {
    Rng rng(7);
    for (int c = 0; c < 50; ++c) {
        const Matrix cov = random_psd_2x2(rng, 1e-4, 0.25);
        const double r = contour_radius(cov, 0.05);
        CHECK(contour_radius((2.0 * cov).eval(), 0.05) >= r);
        CHECK(contour_radius(cov, 0.01) >= r);
        CHECK(contour_radius(cov, 0.10) <= r);
    }
}

TEST_CASE("sphere containment is sound under Monte Carlo") {
    Rng rng(42);
    for (int c = 0; c < 200; ++c) {
        const Matrix cov = random_psd_2x2(rng, 1e-4, 0.25);
        const GaussianSampler sampler(Vector::Zero(2), cov);
        for (double tail : {0.01, 0.05, 0.1}) {
            const double radius = contour_radius(cov, tail);
            const int n = 100000;
            int inside = 0;
            for (int s = 0; s < n; ++s) {
                if (sampler.draw(rng).norm() <= radius) ++inside;
            }
            const double p = 1.0 - tail;
            const double slack = 3.0 * std::sqrt(p * (1.0 - p) / n);
            CHECK(static_cast<double>(inside) / n >= p - slack);
        }
    }
}

TEST_CASE("difference of marginals of a block-diagonal covariance sums the blocks") {
    Rng rng(11);
    for (int c = 0; c < 25; ++c) {
        const Matrix si = random_psd_2x2(rng, 1e-3, 0.3);
        const Matrix sj = random_psd_2x2(rng, 1e-3, 0.3);
        Matrix cov = Matrix::Zero(4, 4);
        cov.topLeftCorner(2, 2) = si;
        cov.bottomRightCorner(2, 2) = sj;
        const GaussianBelief b(Vector::Zero(4), cov);
        const DifferenceBelief d = difference_belief(b, IndexRange{0, 2}, IndexRange{2, 2});
        const GaussianBelief mi = marginal(b, IndexRange{0, 2});
        const GaussianBelief mj = marginal(b, IndexRange{2, 2});
        CHECK(d.covariance().isApprox(mi.covariance() + mj.covariance(), 1e-12));
    }
}
