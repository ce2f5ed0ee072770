#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace taskload {

/// Probability mass over counts n = 0, 1, 2, ...
///
/// Mass that was cut off beyond the last index is carried in
/// truncation_mass, so probs.sum() + truncation_mass == 1. The horizon is
/// the counting window in minutes; PMFs without one (occupancy snapshots)
/// combine with anything.
struct TaskloadPmf {
    std::vector<double> probs;
    double truncation_mass = 0.0;
    std::optional<double> horizon;

    static TaskloadPmf point_mass(std::size_t n, std::optional<double> horizon = std::nullopt);

    double at(std::size_t n) const { return n < probs.size() ? probs[n] : 0.0; }
    std::size_t size() const { return probs.size(); }
    double sum() const;
    double mean() const;
    /// P[N >= n], truncation mass included.
    double tail_at_least(std::size_t n) const;
    std::size_t mode() const;

    /// Throws NumericalError when entries are negative or the total is off by more than tol.
    void validate(double tol = 1e-9) const;
};

inline constexpr std::size_t kMaxSupport = 1u << 14;

/// Discrete convolution (distribution of the sum of independent counts).
/// Throws std::invalid_argument when both horizons are set and differ.
TaskloadPmf convolve_pmf(const TaskloadPmf& p, const TaskloadPmf& q, std::size_t max_support = kMaxSupport);

/// k-fold convolution power; power 0 is the point mass at 0.
TaskloadPmf convolution_power(const TaskloadPmf& p, std::size_t k);

/// Half the L1 distance; truncation masses are compared as one extra bin.
double total_variation(const TaskloadPmf& p, const TaskloadPmf& q);

/// Poisson(mean) truncated once the remaining tail falls below eps.
TaskloadPmf poisson_pmf(double mean, double eps = 1e-15, std::optional<double> horizon = std::nullopt);

/// Distribution of max(N - shift, 0).
TaskloadPmf shift_down(const TaskloadPmf& p, std::size_t shift);

/// Exact integer tallies of observed counts; merging is plain addition.
class CountHistogram {
public:
    void add(std::uint64_t n, std::uint64_t weight = 1);
    void merge(const CountHistogram& other);

    std::uint64_t total() const { return total_; }
    std::uint64_t count(std::uint64_t n) const { return n < bins_.size() ? bins_[n] : 0; }
    const std::vector<std::uint64_t>& bins() const { return bins_; }
    std::size_t size() const { return bins_.size(); }

    TaskloadPmf to_pmf(std::optional<double> horizon = std::nullopt) const;

    friend bool operator==(const CountHistogram&, const CountHistogram&) = default;

private:
    std::vector<std::uint64_t> bins_;
    std::uint64_t total_ = 0;
};

}  // namespace taskload
