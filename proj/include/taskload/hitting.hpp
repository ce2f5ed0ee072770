#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taskload/ou_process.hpp"
#include "taskload/pmf.hpp"
#include "taskload/random.hpp"

namespace taskload {

/// Density ordinates at t0 + i*dt_grid (1/min).
struct DensityGrid {
    double t0 = 0.0;
    double dt_grid = 0.05;
    std::vector<double> values;
    std::vector<double> ci_lo;  // optional 95% band, same length as values when present
    std::vector<double> ci_hi;
    std::vector<std::string> flags;

    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt_grid; }
    double span_end() const { return values.empty() ? t0 : time(values.size() - 1); }
    bool empty() const { return values.empty(); }
    /// Trapezoid integral from t0 to `upto` (clamped to the grid; linear
    /// interpolation inside the last cell).
    double integral(double upto) const;
    double integral() const { return integral(span_end()); }
};

inline constexpr double kDefaultDensityStep = 0.05;  // min

struct ClosedFormValue {
    double value = 0.0;
    bool overflow = false;
    bool invalid_domain = false;
    bool negative_ordinate = false;
};

/// One-sided hitting density in the literal published arrangement (prefactor
/// k - X0/sigma^2, X0/sigma^2 groupings, coth term) kept for traceability.
/// Not a valid density in general; downstream code uses fpt_density_oracle.
ClosedFormValue fpt_density_closed_form(const OuParams& p, const Barrier& b, double t);

/// Monte Carlo density of the first hitting time: cloud-in-cell histogram on
/// [0, horizon + resolution] normalised so that the integral equals the
/// hitting probability within the horizon. Flagged "no hits" and empty when
/// nothing hit.
DensityGrid fpt_density_oracle(const OuParams& p, const Barrier& b, double horizon, double resolution,
                               std::uint64_t n_paths, RandomSource& src, const GridOptions& grid = {});

/// Continuous convolution on a common grid starting at 0 (trapezoid rule).
/// Throws std::invalid_argument on a step or origin mismatch.
DensityGrid convolve_density(const DensityGrid& a, const DensityGrid& b);

/// f convolved with itself `order` times (order + 1 copies); order 0 returns f.
DensityGrid autoconvolve_density(const DensityGrid& f, std::size_t order);

/// Renewal count PMF: P[N >= n] = integral over [0, horizon] of the (n-1)-fold
/// autoconvolution. Stops once P[N >= n+1] < eps or at n_max; the remainder is
/// the truncation mass. Throws NumericalError when a probability is negative
/// beyond quadrature error.
TaskloadPmf intervention_pmf(const DensityGrid& f, double horizon, std::size_t n_max = 64, double eps = 1e-6);

}  // namespace taskload
