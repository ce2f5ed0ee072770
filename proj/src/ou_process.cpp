#include "taskload/ou_process.hpp"

#include <cmath>
#include <stdexcept>

namespace taskload {

namespace {
// Bridge uniforms come from their own child stream so that the path normals
// stay aligned across grid refinements.
constexpr std::uint64_t kCoinStream = 0xC0140000ULL;
}  // namespace

void OuParams::validate() const {
    if (!std::isfinite(kappa) || !std::isfinite(mu) || !std::isfinite(sigma))
        throw std::invalid_argument("OuParams: non-finite field");
    if (kappa < 0.0) throw std::invalid_argument("OuParams: kappa must be >= 0");
    if (sigma < 0.0) throw std::invalid_argument("OuParams: sigma must be >= 0");
}

double OuParams::stationary_sd() const {
    if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
    return sigma / std::sqrt(2.0 * kappa);
}

OuParams default_ou_params(Axis axis) {
    switch (axis) {
        case Axis::lateral: return {3.492, 2.79e-2, 7.27e-2};
        case Axis::vertical: return {1.841, 8.034, 8.683};
        case Axis::longitudinal: return {2.1662, 9.965e-2, 0.2774};
    }
    throw std::invalid_argument("unknown axis");
}

void Barrier::validate() const {
    if (!std::isfinite(level) || !std::isfinite(origin) || !std::isfinite(nominal))
        throw std::invalid_argument("Barrier: non-finite field");
    if (kind == BarrierKind::two_sided && !(level > 0.0))
        throw std::invalid_argument("Barrier: two-sided half-width must be > 0");
}

double Barrier::lower() const {
    return kind == BarrierKind::two_sided ? nominal - level : -std::numeric_limits<double>::infinity();
}

double Barrier::upper() const { return kind == BarrierKind::two_sided ? nominal + level : level; }

OuTransition OuTransition::make(const OuParams& p, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("OU transition: step must be > 0");
    OuTransition tr;
    const double kh = p.kappa * h;
    tr.decay = std::exp(-kh);
    tr.drift = -p.mu * std::expm1(-kh);
    // (1 - e^{-2 kappa h}) / (2 kappa) -> h as kappa -> 0
    const double var_factor = p.kappa > 0.0 ? -std::expm1(-2.0 * kh) / (2.0 * p.kappa) : h;
    tr.sd = p.sigma * std::sqrt(var_factor);
    // Z_t = e^{kappa t}(X_t - mu) is a time-changed Brownian motion with
    // clock sigma^2 (e^{2 kappa t} - 1) / (2 kappa); a fixed bound becomes
    // c e^{kappa t}, approximated by its chord over the step.
    const double clock = p.kappa > 0.0 ? p.sigma * p.sigma * std::expm1(2.0 * kh) / (2.0 * p.kappa)
                                       : p.sigma * p.sigma * h;
    tr.bridge_gain = clock > 0.0 ? 2.0 * std::exp(kh) / clock : std::numeric_limits<double>::infinity();
    return tr;
}

AxisState ou_step(AxisState state, const OuParams& p, double dt, RandomSource& src) {
    const OuTransition tr = OuTransition::make(p, dt);
    return {tr.mean(state.x) + tr.sd * src.normal(), state.t + dt};
}

std::vector<AxisState> ou_path(const OuParams& p, double x0, double horizon, double dt, RandomSource& src) {
    if (!(horizon > 0.0) || !(dt > 0.0)) throw std::invalid_argument("ou_path: horizon and dt must be > 0");
    p.validate();
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    const OuTransition full = OuTransition::make(p, dt);
    std::vector<AxisState> path;
    path.reserve(steps + 1);
    path.push_back({x0, 0.0});
    double x = x0;
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t = std::min(static_cast<double>(i) * dt, horizon);
        const double h = t - path.back().t;
        const OuTransition tr = (std::abs(h - dt) < 1e-12) ? full : OuTransition::make(p, h);
        x = tr.mean(x) + tr.sd * src.normal();
        path.push_back({x, t});
    }
    return path;
}

BarrierWalker::BarrierWalker(const OuParams& p, double lower, double upper, const GridOptions& grid)
    : params_(p),
      lower_(lower),
      upper_(upper),
      dt_(grid.dt),
      bridge_(grid.crossing == CrossingCheck::bridge),
      substeps_(grid.substeps),
      depth_(grid.bridge_depth) {
    p.validate();
    if (!(grid.dt > 0.0)) throw std::invalid_argument("BarrierWalker: dt must be > 0");
    if (grid.substeps < 1) throw std::invalid_argument("BarrierWalker: substeps must be >= 1");
    if (grid.bridge_depth > kMaxBridgeDepth) throw std::invalid_argument("BarrierWalker: bridge_depth too large");
    if (!(lower < upper)) throw std::invalid_argument("BarrierWalker: empty interior");
    full_ = make_step(grid.dt);
}

BarrierWalker::Step BarrierWalker::make_step(double h) const {
    Step st;
    st.sub = OuTransition::make(params_, h / substeps_);
    for (unsigned l = 0; l <= depth_; ++l) {
        const double hl = std::ldexp(h, -static_cast<int>(l));
        const OuTransition whole = OuTransition::make(params_, hl);
        const OuTransition half = OuTransition::make(params_, 0.5 * hl);
        // Midpoint of two exact half-steps conditioned on the far end:
        // mean mu + a (x0 - mu) + a / (1 + a^2) (x1 - mu - a^2 (x0 - mu)), variance v / (1 + a^2).
        const double a = half.decay;
        st.levels[l] = {whole.bridge_gain, a, half.sd / std::sqrt(1.0 + a * a)};
    }
    return st;
}

double BarrierWalker::survival(double x0, double x1, const Step& st, unsigned level, RandomSource& coin) const {
    // Crossing below this exponent has probability above ~6e-6: worth a bisection.
    constexpr double kRefine = 12.0;
    constexpr double kNegligible = 40.0;
    const BridgeLevel& bl = st.levels[level];
    const double eu = bl.gain * (upper_ - x0) * (upper_ - x1);
    const double el = bl.gain * (x0 - lower_) * (x1 - lower_);
    const double closest = std::min(eu, el);
    if (closest >= kNegligible) return 1.0;
    if (level < depth_ && closest < kRefine) {
        const double mu = params_.mu;
        const double a = bl.half_decay;
        const double c0 = x0 - mu;
        const double xm = mu + a * c0 + a / (1.0 + a * a) * (x1 - mu - a * a * c0) + bl.mid_sd * coin.normal();
        if (xm >= upper_ || xm <= lower_) return 0.0;
        const double left = survival(x0, xm, st, level + 1, coin);
        if (left == 0.0) return 0.0;
        return left * survival(xm, x1, st, level + 1, coin);
    }
    // Usually only the nearer bound matters.
    const double su = eu < kNegligible ? -std::expm1(-eu) : 1.0;
    const double sl = el < kNegligible ? -std::expm1(-el) : 1.0;
    return su * sl;
}

BarrierWalker::BarrierWalker(const OuParams& p, const Barrier& b, const GridOptions& grid)
    : BarrierWalker(p, b.lower(), b.upper(), grid) {
    b.validate();
}

bool BarrierWalker::advance(double& x, const Step& st, RandomSource& noise, RandomSource& coin) const {
    double next = x;
    for (unsigned i = 0; i < substeps_; ++i) next = st.sub.mean(next) + st.sub.sd * noise.normal();
    bool contact = next >= upper_ || next <= lower_;
    if (!contact && bridge_) {
        // Both endpoints are strictly inside here, so the exponents are positive.
        const double survive = survival(x, next, st, 0, coin);
        if (survive < 1.0) contact = coin.uniform() >= survive;
    }
    x = next;
    return contact;
}

std::uint32_t BarrierWalker::count(double x0, double t_start, double t_end, double count_from, double reset,
                                   RandomSource& noise, RandomSource& coin) const {
    constexpr double kTimeEps = 1e-9;
    std::uint32_t hits = 0;
    double x = x0;
    if (!(x > lower_ && x < upper_)) {
        if (t_start >= count_from - kTimeEps) ++hits;
        x = reset;
    }
    if (!(t_end > t_start)) return hits;
    const double span = t_end - t_start;
    const auto full_steps = static_cast<std::uint64_t>(std::floor(span / dt_ + kTimeEps));
    for (std::uint64_t i = 1; i <= full_steps; ++i) {
        if (advance(x, full_, noise, coin)) {
            if (t_start + static_cast<double>(i) * dt_ >= count_from - kTimeEps) ++hits;
            x = reset;
        }
    }
    const double rest = span - static_cast<double>(full_steps) * dt_;
    if (rest > kTimeEps * dt_) {
        if (advance(x, make_step(rest), noise, coin)) {
            if (t_end >= count_from - kTimeEps) ++hits;
        }
    }
    return hits;
}

std::optional<double> BarrierWalker::first_hit(double x0, double horizon, RandomSource& noise,
                                              RandomSource& coin) const {
    constexpr double kTimeEps = 1e-9;
    if (!(x0 > lower_ && x0 < upper_)) return 0.0;
    double x = x0;
    const auto full_steps = static_cast<std::uint64_t>(std::floor(horizon / dt_ + kTimeEps));
    for (std::uint64_t i = 1; i <= full_steps; ++i)
        if (advance(x, full_, noise, coin)) return static_cast<double>(i) * dt_;
    const double rest = horizon - static_cast<double>(full_steps) * dt_;
    if (rest > kTimeEps * dt_ && advance(x, make_step(rest), noise, coin)) return horizon;
    return std::nullopt;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

FirstPassageSample first_passage_mc(const OuParams& p, const Barrier& b, double horizon, const GridOptions& grid,
                                    std::uint64_t n_paths, RandomSource& src) {
    if (n_paths == 0) throw std::invalid_argument("first_passage_mc: n_paths must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("first_passage_mc: horizon must be > 0");
    const BarrierWalker walker(p, b, grid);
    RandomSource coin = src.substream(kCoinStream);
    FirstPassageSample out;
    out.n_paths = n_paths;
    out.degenerate = !b.strictly_inside(b.origin);
    if (out.degenerate) {
        out.hitting_times.assign(n_paths, 0.0);
    } else {
        for (std::uint64_t i = 0; i < n_paths; ++i) {
            if (auto t = walker.first_hit(b.origin, horizon, src, coin))
                out.hitting_times.push_back(*t);
            else
                ++out.n_censored;
        }
    }
    const std::uint64_t hits = n_paths - out.n_censored;
    out.probability = static_cast<double>(hits) / static_cast<double>(n_paths);
    out.ci = wilson_interval(hits, n_paths);
    return out;
}

CountHistogram intervention_count_mc(const OuParams& p, const Barrier& b, double horizon, const GridOptions& grid,
                                     double reset, std::uint64_t n_paths, RandomSource& src) {
    if (n_paths == 0) throw std::invalid_argument("intervention_count_mc: n_paths must be >= 1");
    if (!b.strictly_inside(reset)) throw std::invalid_argument("intervention_count_mc: reset must lie inside the barrier");
    const BarrierWalker walker(p, b, grid);
    RandomSource coin = src.substream(kCoinStream);
    CountHistogram hist;
    for (std::uint64_t i = 0; i < n_paths; ++i) hist.add(walker.count(b.origin, 0.0, horizon, 0.0, reset, src, coin));
    return hist;
}

}  // namespace taskload
