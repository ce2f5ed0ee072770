#include "taskload/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "taskload/errors.hpp"

namespace taskload {

namespace {

std::optional<double> merged_horizon(const TaskloadPmf& p, const TaskloadPmf& q) {
    if (p.horizon && q.horizon) {
        const double a = *p.horizon;
        const double b = *q.horizon;
        if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
            throw std::invalid_argument("convolve_pmf: horizon mismatch (" + std::to_string(a) + " vs " +
                                        std::to_string(b) + " min)");
        return a;
    }
    return p.horizon ? p.horizon : q.horizon;
}

void trim_trailing_zeros(std::vector<double>& v) {
    while (v.size() > 1 && v.back() == 0.0) v.pop_back();
}

}  // namespace

TaskloadPmf TaskloadPmf::point_mass(std::size_t n, std::optional<double> horizon) {
    TaskloadPmf p;
    p.probs.assign(n + 1, 0.0);
    p.probs[n] = 1.0;
    p.horizon = horizon;
    return p;
}

double TaskloadPmf::sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

double TaskloadPmf::mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) m += static_cast<double>(n) * probs[n];
    return m;
}

double TaskloadPmf::tail_at_least(std::size_t n) const {
    double t = truncation_mass;
    for (std::size_t i = n; i < probs.size(); ++i) t += probs[i];
    return t;
}

std::size_t TaskloadPmf::mode() const {
    if (probs.empty()) return 0;
    return static_cast<std::size_t>(std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
}

void TaskloadPmf::validate(double tol) const {
    for (std::size_t n = 0; n < probs.size(); ++n)
        if (!(probs[n] >= -tol) || !std::isfinite(probs[n]))
            throw NumericalError("TaskloadPmf: bad probability at n=" + std::to_string(n));
    if (!(truncation_mass >= -tol)) throw NumericalError("TaskloadPmf: negative truncation mass");
    if (std::abs(sum() + truncation_mass - 1.0) > tol)
        throw NumericalError("TaskloadPmf: total mass " + std::to_string(sum() + truncation_mass));
}

TaskloadPmf convolve_pmf(const TaskloadPmf& p, const TaskloadPmf& q, std::size_t max_support) {
    TaskloadPmf r;
    r.horizon = merged_horizon(p, q);
    if (p.probs.empty() || q.probs.empty()) {
        r.probs = {0.0};
        r.truncation_mass = 1.0;
        return r;
    }
    const std::size_t full = p.probs.size() + q.probs.size() - 1;
    const std::size_t len = std::min(full, max_support);
    r.probs.assign(len, 0.0);
    double dropped = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        const double pi = p.probs[i];
        if (pi == 0.0) continue;
        for (std::size_t j = 0; j < q.probs.size(); ++j) {
            const std::size_t k = i + j;
            if (k < len)
                r.probs[k] += pi * q.probs[j];
            else
                dropped += pi * q.probs[j];
        }
    }
    const double tp = std::max(0.0, p.truncation_mass);
    const double tq = std::max(0.0, q.truncation_mass);
    r.truncation_mass = tp + tq - tp * tq + dropped;
    trim_trailing_zeros(r.probs);
    return r;
}

TaskloadPmf convolution_power(const TaskloadPmf& p, std::size_t k) {
    TaskloadPmf result = TaskloadPmf::point_mass(0, p.horizon);
    TaskloadPmf base = p;
    while (k > 0) {
        if (k & 1u) result = convolve_pmf(result, base);
        k >>= 1u;
        if (k > 0) base = convolve_pmf(base, base);
    }
    return result;
}

double total_variation(const TaskloadPmf& p, const TaskloadPmf& q) {
    const std::size_t n = std::max(p.probs.size(), q.probs.size());
    double l1 = std::abs(p.truncation_mass - q.truncation_mass);
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(p.at(i) - q.at(i));
    return 0.5 * l1;
}

TaskloadPmf poisson_pmf(double mean, double eps, std::optional<double> horizon) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson_pmf: mean must be >= 0");
    TaskloadPmf p;
    p.horizon = horizon;
    if (mean == 0.0) {
        p.probs = {1.0};
        return p;
    }
    // Log-space terms avoid underflow of e^{-mean} for large means.
    double cumulative = 0.0;
    const double log_mean = std::log(mean);
    for (std::size_t k = 0;; ++k) {
        const double lp = -mean + static_cast<double>(k) * log_mean - std::lgamma(static_cast<double>(k) + 1.0);
        const double pk = std::exp(lp);
        p.probs.push_back(pk);
        cumulative += pk;
        if (static_cast<double>(k) > mean && 1.0 - cumulative < eps) break;
        if (p.probs.size() >= kMaxSupport) break;
    }
    p.truncation_mass = std::max(0.0, 1.0 - cumulative);
    return p;
}

TaskloadPmf shift_down(const TaskloadPmf& p, std::size_t shift) {
    TaskloadPmf r;
    r.horizon = p.horizon;
    r.truncation_mass = p.truncation_mass;
    double head = 0.0;
    for (std::size_t n = 0; n <= shift && n < p.probs.size(); ++n) head += p.probs[n];
    r.probs.push_back(head);
    for (std::size_t n = shift + 1; n < p.probs.size(); ++n) r.probs.push_back(p.probs[n]);
    return r;
}

void CountHistogram::add(std::uint64_t n, std::uint64_t weight) {
    if (n >= bins_.size()) bins_.resize(n + 1, 0);
    bins_[n] += weight;
    total_ += weight;
}

void CountHistogram::merge(const CountHistogram& other) {
    if (other.bins_.size() > bins_.size()) bins_.resize(other.bins_.size(), 0);
    for (std::size_t i = 0; i < other.bins_.size(); ++i) bins_[i] += other.bins_[i];
    total_ += other.total_;
}

TaskloadPmf CountHistogram::to_pmf(std::optional<double> horizon) const {
    TaskloadPmf p;
    p.horizon = horizon;
    if (total_ == 0) {
        p.probs = {1.0};
        return p;
    }
    p.probs.resize(bins_.size());
    for (std::size_t i = 0; i < bins_.size(); ++i)
        p.probs[i] = static_cast<double>(bins_[i]) / static_cast<double>(total_);
    return p;
}

}  // namespace taskload
