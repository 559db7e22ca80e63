#pragma once

#include <cmath>
#include <limits>

#include "coplan/errors.hpp"

namespace coplan {

namespace detail {

/// Regularized lower incomplete gamma P(a, x) via series (x < a+1) or
/// continued fraction (otherwise). Standard Lentz/series construction.
template <typename Scalar>
Scalar regularized_gamma_p(Scalar a, Scalar x) {
    if (x < Scalar(0) || a <= Scalar(0)) throw ArgumentError("regularized_gamma_p domain");
    if (x == Scalar(0)) return Scalar(0);

    const Scalar log_gamma_a = std::lgamma(a);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();

    if (x < a + Scalar(1)) {
        // series representation
        Scalar term = Scalar(1) / a;
        Scalar sum = term;
        Scalar ap = a;
        for (int n = 0; n < 500; ++n) {
            ap += Scalar(1);
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
    }

    // continued fraction for Q(a, x), modified Lentz
    const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;
    Scalar b = x + Scalar(1) - a;
    Scalar c = Scalar(1) / tiny;
    Scalar d = Scalar(1) / b;
    Scalar h = d;
    for (int i = 1; i <= 500; ++i) {
        const Scalar an = -Scalar(i) * (Scalar(i) - a);
        b += Scalar(2);
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = Scalar(1) / d;
        const Scalar delta = d * c;
        h *= delta;
        if (std::abs(delta - Scalar(1)) < eps) break;
    }
    const Scalar q = std::exp(-x + a * std::log(x) - log_gamma_a) * h;
    return Scalar(1) - q;
}

} // namespace detail

/// Chi-square CDF with `dof` degrees of freedom evaluated at x.
template <typename Scalar>
Scalar chi_square_cdf(Scalar x, int dof) {
    if (dof < 1) throw ArgumentError("chi_square_cdf: dof must be >= 1");
    if (x <= Scalar(0)) return Scalar(0);
    return detail::regularized_gamma_p(Scalar(dof) / Scalar(2), x / Scalar(2));
}

/// Chi-square quantile: the x with CDF(x) = prob. Closed form for 2 dof,
/// otherwise Newton iteration on the regularized gamma with bisection
/// safeguarding.
template <typename Scalar>
Scalar chi_square_quantile(Scalar prob, int dof) {
    if (!(prob > Scalar(0) && prob < Scalar(1))) throw ArgumentError("chi_square_quantile: prob must be in (0,1)");
    if (dof < 1) throw ArgumentError("chi_square_quantile: dof must be >= 1");

    if (dof == 2) return -Scalar(2) * std::log(Scalar(1) - prob);

    // bracket
    Scalar lo = Scalar(0);
    Scalar hi = Scalar(2) * Scalar(dof);
    while (chi_square_cdf(hi, dof) < prob) {
        lo = hi;
        hi *= Scalar(2);
        if (hi > Scalar(1e10)) throw NumericError("chi_square_quantile: bracket expansion failed");
    }

    Scalar x = Scalar(0.5) * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const Scalar f = chi_square_cdf(x, dof) - prob;
        if (f > Scalar(0)) hi = x; else lo = x;
        // chi-square pdf at x
        const Scalar half = Scalar(dof) / Scalar(2);
        const Scalar pdf = std::exp((half - Scalar(1)) * std::log(x) - x / Scalar(2)
                                    - half * Scalar(M_LN2) - std::lgamma(half));
        Scalar next = (pdf > Scalar(0)) ? x - f / pdf : Scalar(0.5) * (lo + hi);
        if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
        if (std::abs(next - x) <= Scalar(1e-14) * std::max(Scalar(1), x)) return next;
        x = next;
    }
    return x;
}

} // namespace coplan
