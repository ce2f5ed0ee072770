#include "taskload/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "taskload/errors.hpp"

namespace taskload {

double DensityGrid::integral(double upto) const {
    if (values.size() < 2 || upto <= t0) return 0.0;
    const double u = std::min((upto - t0) / dt_grid, static_cast<double>(values.size() - 1));
    const auto full = static_cast<std::size_t>(std::floor(u));
    double s = 0.0;
    for (std::size_t i = 0; i < full; ++i) s += 0.5 * (values[i] + values[i + 1]);
    s *= dt_grid;
    const double frac = u - static_cast<double>(full);
    if (frac > 0.0 && full + 1 < values.size()) {
        const double right = values[full] + frac * (values[full + 1] - values[full]);
        s += 0.5 * (values[full] + right) * frac * dt_grid;
    }
    return s;
}

ClosedFormValue fpt_density_closed_form(const OuParams& p, const Barrier& b, double t) {
    ClosedFormValue out;
    if (b.kind != BarrierKind::one_sided || !(t > 0.0) || !(p.kappa > 0.0) || !(p.sigma > 0.0) ||
        !(b.origin < b.level)) {
        out.invalid_domain = true;
        return out;
    }
    const double k = b.level;
    const double x0s = b.origin / (p.sigma * p.sigma);
    const double kt = p.kappa * t;
    const double pre = k - x0s;
    if (pre <= 0.0) out.negative_ordinate = true;
    if (pre == 0.0) return out;
    // log sinh and coth stay finite for large kappa*t.
    const double log_sinh = kt + std::log1p(-std::exp(-2.0 * kt)) - std::log(2.0);
    const double coth = 1.0 / std::tanh(kt);
    const double log_base = std::log(p.kappa / (p.sigma * p.sigma)) - log_sinh;
    const double bracket =
        (x0s - p.mu) * (x0s - p.mu) - (k - p.mu) * (k - p.mu) + p.sigma * p.sigma * t - x0s * x0s * coth;
    const double log_mag = std::log(std::abs(pre)) - 0.5 * std::log(2.0 * std::numbers::pi) + 1.5 * log_base +
                           p.kappa / (2.0 * p.sigma * p.sigma) * bracket;
    if (!std::isfinite(log_mag) || log_mag > 700.0) {
        out.overflow = true;
        return out;
    }
    out.value = std::copysign(std::exp(log_mag), pre);
    return out;
}

DensityGrid fpt_density_oracle(const OuParams& p, const Barrier& b, double horizon, double resolution,
                               std::uint64_t n_paths, RandomSource& src, const GridOptions& grid) {
    if (!(resolution > 0.0)) throw std::invalid_argument("fpt_density_oracle: resolution must be > 0");
    const FirstPassageSample sample = first_passage_mc(p, b, horizon, grid, n_paths, src);
    DensityGrid g;
    g.t0 = 0.0;
    g.dt_grid = resolution;
    if (sample.hitting_times.empty()) {
        g.flags.emplace_back("no hits");
        return g;
    }
    if (sample.degenerate) g.flags.emplace_back("degenerate barrier");
    // Nodes 0..N+1 with N = ceil(horizon/h): every hit lands in an interior cell.
    const auto nodes = static_cast<std::size_t>(std::ceil(horizon / resolution - 1e-9)) + 2;
    std::vector<double> mass(nodes, 0.0);
    for (double tau : sample.hitting_times) {
        const double u = tau / resolution;
        auto i = static_cast<std::size_t>(std::floor(u));
        double w = u - static_cast<double>(i);
        if (i + 1 >= nodes) {
            i = nodes - 2;
            w = 1.0;
        }
        mass[i] += 1.0 - w;
        mass[i + 1] += w;
    }
    const double n = static_cast<double>(n_paths);
    const double scale = 1.0 / (n * resolution);
    g.values.resize(nodes);
    g.ci_lo.resize(nodes);
    g.ci_hi.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        // The trapezoid weight of node 0 is one half.
        const double node_scale = i == 0 ? 2.0 * scale : scale;
        g.values[i] = mass[i] * node_scale;
        const Interval ci = wilson_interval(static_cast<std::uint64_t>(std::llround(mass[i])), n_paths);
        g.ci_lo[i] = ci.lo * n * node_scale;
        g.ci_hi[i] = ci.hi * n * node_scale;
    }
    return g;
}

DensityGrid convolve_density(const DensityGrid& a, const DensityGrid& b) {
    if (a.t0 != 0.0 || b.t0 != 0.0) throw std::invalid_argument("convolve_density: grids must start at t = 0");
    if (std::abs(a.dt_grid - b.dt_grid) > 1e-12 * a.dt_grid)
        throw std::invalid_argument("convolve_density: grid step mismatch");
    DensityGrid r;
    r.t0 = 0.0;
    r.dt_grid = a.dt_grid;
    const std::size_t len = std::min(a.values.size(), b.values.size());
    r.values.assign(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        if (k == 0) continue;  // zero-length integral
        double s = 0.0;
        for (std::size_t i = 0; i <= k; ++i) s += a.values[i] * b.values[k - i];
        s -= 0.5 * (a.values[0] * b.values[k] + a.values[k] * b.values[0]);
        r.values[k] = s * r.dt_grid;
    }
    return r;
}

DensityGrid autoconvolve_density(const DensityGrid& f, std::size_t order) {
    DensityGrid r = f;
    for (std::size_t i = 0; i < order; ++i) r = convolve_density(r, f);
    if (order > 0) {
        r.ci_lo.clear();
        r.ci_hi.clear();
    }
    return r;
}

TaskloadPmf intervention_pmf(const DensityGrid& f, double horizon, std::size_t n_max, double eps) {
    if (n_max < 1) throw std::invalid_argument("intervention_pmf: n_max must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("intervention_pmf: horizon must be > 0");
    TaskloadPmf pmf;
    pmf.horizon = horizon;
    if (f.empty()) {
        pmf.probs = {1.0};
        return pmf;
    }
    if (horizon > f.span_end() + 1e-9 * f.dt_grid)
        throw std::invalid_argument("intervention_pmf: horizon beyond the density grid");

    // tail[n] = P[N >= n]
    std::vector<double> tail{1.0};
    DensityGrid conv = f;
    for (std::size_t n = 1; n <= n_max + 1; ++n) {
        if (n > 1) conv = convolve_density(conv, f);
        tail.push_back(conv.integral(horizon));
        if (tail.back() < eps) break;
    }
    const std::size_t last = std::min(tail.size() - 1, n_max + 1);
    pmf.probs.resize(last);
    for (std::size_t n = 0; n < last; ++n) {
        const double pn = tail[n] - tail[n + 1];
        // Trapezoid error on a steep density can push a tail slightly past its predecessor.
        constexpr double kQuadratureSlack = 1e-4;
        if (pn < -kQuadratureSlack) throw NumericalError("intervention_pmf: negative probability at n=" + std::to_string(n));
        pmf.probs[n] = std::max(0.0, pn);
    }
    pmf.truncation_mass = std::max(0.0, tail[last]);
    return pmf;
}

}  // namespace taskload
