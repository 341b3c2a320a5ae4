#pragma once

// Closed-form expected recovery times, the array-code upper bound, and the
// Gumbel limit parameters of the normalized recovery times. The o(1) and
// o(n) remainders are dropped.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>

#include "dnastore/code_analysis.hpp"
#include "dnastore/error.hpp"

namespace dnastore {

inline constexpr double kEulerGamma = 0.5772156649015329;

enum class PredictionKind { Expectation, UpperBound };

constexpr std::string_view to_string(PredictionKind k) noexcept {
    return k == PredictionKind::Expectation ? "expectation" : "upper-bound";
}

/// value = leading + linear_coeff * n.
struct Prediction {
    PredictionKind kind = PredictionKind::Expectation;
    double n = 0.0;
    double value = 0.0;
    double leading = 0.0;
    double linear_coeff = 0.0;
    double gumbel_mu = 0.0;
    double gumbel_beta = 1.0;
};

inline double log_binomial(double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

inline double log_factorial(double k) { return std::lgamma(k + 1.0); }

/// Rounds until every row of the n x (m+rho) marking process holds m marks.
inline Prediction predict_scalar(double n, std::size_t m, std::size_t rho) {
    require(m >= 1, ErrorCode::InvalidArgument, "m must be >= 1");
    require(n >= 2, ErrorCode::InvalidArgument, "n must be >= 2");
    const double scale = n / double(rho + 1);
    const double mu = log_binomial(double(m + rho), double(m - 1));
    Prediction out;
    out.n = n;
    out.leading = scale * std::log(n);
    out.linear_coeff = (mu + kEulerGamma) / double(rho + 1);
    out.value = out.leading + out.linear_coeff * n;
    out.gumbel_mu = mu;
    out.gumbel_beta = 1.0;
    return out;
}

/// Scalar MDS storage with M containers and redundancy r.
inline Prediction predict_corollary(double n, std::size_t M, std::size_t r) {
    require(r >= 1 && r < M, ErrorCode::InvalidArgument, "need 1 <= r < M");
    return predict_scalar(n, M - r, r - 1);
}

/// Maximum over m independent collectors each needing ell copies of n coupons.
/// The (ell-1) n ln ln n term is folded into `leading`.
inline Prediction predict_ccp_max(double n, std::size_t m, std::size_t ell) {
    require(m >= 1 && ell >= 1, ErrorCode::InvalidArgument, "m and ell must be >= 1");
    require(n >= 3 || ell == 1, ErrorCode::InvalidArgument, "ln ln n needs n >= 3");
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    const double copies_const = kEulerGamma - log_factorial(double(ell - 1));
    Prediction out;
    out.n = n;
    out.leading = n * std::log(n) + (ell > 1 ? double(ell - 1) * n * std::log(std::log(n)) : 0.0);
    out.linear_coeff = std::log(double(m)) + copies_const;
    out.value = out.leading + out.linear_coeff * n;
    out.gumbel_mu = std::log(double(m)) - log_factorial(double(ell - 1));
    out.gumbel_beta = 1.0;
    return out;
}

/// Upper bound (n/alpha*) ln n + beta*/(b alpha*) n for an array code.
inline Prediction predict_regen_bound(double n, const BadBlockReport& report) {
    require(report.alpha_star >= 1 && report.beta_star >= 1, ErrorCode::InvalidArgument,
            "report has no bad sets of positive co-size");
    Prediction out;
    out.kind = PredictionKind::UpperBound;
    out.n = n;
    out.leading = n / double(report.alpha_star) * std::log(n);
    out.linear_coeff = double(report.beta_star) / (double(report.b) * double(report.alpha_star));
    out.value = out.leading + out.linear_coeff * n;
    // only a bound is known; no limit law
    out.gumbel_mu = std::numeric_limits<double>::quiet_NaN();
    out.gumbel_beta = std::numeric_limits<double>::quiet_NaN();
    return out;
}

inline double gumbel_cdf(double x, double mu, double beta) {
    require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    return std::exp(-std::exp(-(x - mu) / beta));
}

} // namespace dnastore
