#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "taskload/axis.hpp"
#include "taskload/random.hpp"

namespace taskload {

/// Johnson S_U parameters: X = scale_lambda * sinh((Z - gamma) / delta) + xi.
struct JohnsonSuParams {
    double gamma = 0.0;
    double delta = 1.0;         // > 0
    double scale_lambda = 1.0;  // > 0, axis spatial unit
    double xi = 0.0;            // axis spatial unit

    void validate() const;
    friend bool operator==(const JohnsonSuParams&, const JohnsonSuParams&) = default;
};

/// First four moments. beta1 is the standard squared skewness mu3^2 / mu2^3;
/// the source moment table prints the denominator as mu2^2, which is not
/// dimensionless and does not reproduce its own 0.243.
struct MomentSet {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

/// Fitted FTE parameters per axis (shared shape, axis-specific scale).
JohnsonSuParams default_fte_params(Axis axis);

double johnson_transform(double z, const JohnsonSuParams& p);
double johnson_inverse(double x, const JohnsonSuParams& p);
double johnson_density(double x, const JohnsonSuParams& p);
double johnson_cdf(double x, const JohnsonSuParams& p);

/// n i.i.d. draws, each johnson_transform of one standard normal from src.
std::vector<double> johnson_sample(const JohnsonSuParams& p, RandomSource& src, std::size_t n);

/// Closed-form moments of the S_U law.
MomentSet johnson_moments(const JohnsonSuParams& p);

std::uint64_t poisson_sample(double intensity_time, RandomSource& src);
double exponential_sample(double rate, RandomSource& src);

double standard_normal_pdf(double z);
double standard_normal_cdf(double z);

}  // namespace taskload
