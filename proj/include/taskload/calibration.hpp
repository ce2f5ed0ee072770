#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taskload/distributions.hpp"
#include "taskload/ou_process.hpp"

namespace taskload {

/// Uniformly sampled deviations X_0..X_n.
struct TimeSeries {
    std::vector<double> values;
    double dt = 1.0;  // min

    void validate(std::size_t min_length = 3) const;
};

enum class FitMethod { least_squares, mle };

struct CalibrationReport {
    FitMethod method = FitMethod::least_squares;
    std::optional<OuParams> params;  // empty when kappa cannot be formed (a_hat <= 0)
    double a_hat = 0.0;
    double b_hat = 0.0;
    double sigma_eps_hat = 0.0;  // 1/n normalisation
    double loglik = 0.0;
    double stationary_sd = 0.0;  // sigma_eps / sqrt(1 - a^2); NaN when |a| >= 1
    int iterations = 0;
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const;
};

namespace flag {
inline constexpr const char* no_mean_memory = "no mean-memory detected";
inline constexpr const char* non_mean_reverting = "non-mean-reverting";
inline constexpr const char* not_converged = "not converged";
inline constexpr const char* constant_series = "constant series";
}  // namespace flag

/// Regression of X_{i+1} on X_i, mapped back to (kappa, mu, sigma).
/// Throws DataError when the predictor values have zero variance.
CalibrationReport fit_least_squares(const TimeSeries& ts);

/// Conditional maximum likelihood: alternate the kappa and mu stationarity
/// conditions starting from the regression estimate.
CalibrationReport fit_mle(const TimeSeries& ts, int max_iter = 100, double rtol = 1e-10);

/// Conditional Gaussian log-likelihood of the series under p.
double ou_loglik(const TimeSeries& ts, const OuParams& p);

struct SampleMoments {
    MomentSet moments;
    bool degenerate = false;  // zero variance: beta1/beta2 are NaN
};

/// Unbiased mean and variance; beta1 = m3^2/m2^3 and beta2 = m4/m2^2 from central moments.
SampleMoments sample_moments(const std::vector<double>& values);

}  // namespace taskload
