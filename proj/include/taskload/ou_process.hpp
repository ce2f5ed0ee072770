#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "taskload/axis.hpp"
#include "taskload/pmf.hpp"
#include "taskload/random.hpp"

namespace taskload {

/// dX = kappa (mu - X) dt + sigma dW, time in minutes.
struct OuParams {
    double kappa = 0.0;  // 1/min
    double mu = 0.0;     // axis unit
    double sigma = 0.0;  // axis unit / sqrt(min)

    void validate() const;
    /// sigma / sqrt(2 kappa); +inf when kappa == 0.
    double stationary_sd() const;
    friend bool operator==(const OuParams&, const OuParams&) = default;
};

/// Calibrated per-axis aircraft model.
OuParams default_ou_params(Axis axis);

struct AxisState {
    double x = 0.0;  // deviation, axis unit
    double t = 0.0;  // min
};

enum class BarrierKind { one_sided, two_sided };

/// One-sided: contact when X >= level.
/// Two-sided: contact when |X - nominal| >= level (level is the half-width).
struct Barrier {
    BarrierKind kind = BarrierKind::two_sided;
    double level = 0.0;
    double origin = 0.0;
    double nominal = 0.0;

    static Barrier one_sided(double level, double origin) { return {BarrierKind::one_sided, level, origin, 0.0}; }
    static Barrier two_sided(double half_width, double origin, double nominal = 0.0) {
        return {BarrierKind::two_sided, half_width, origin, nominal};
    }

    void validate() const;
    double lower() const;
    double upper() const;
    bool strictly_inside(double x) const { return x > lower() && x < upper(); }
};

/// How contacts are detected between grid points.
///   grid:   only the sampled states are tested.
///   bridge: additionally tests the conditional bridge between samples
///           (Brownian bridge in the OU time change, chord boundary). Steps
///           close to a bound are bisected up to bridge_depth times with
///           exact OU-bridge midpoints, which shrinks the chord error.
enum class CrossingCheck { grid, bridge };

inline constexpr unsigned kMaxBridgeDepth = 8;

/// substeps > 1 builds each dt step from that many exact sub-transitions
/// without testing the bounds in between. The law is unchanged; a run at
/// (dt, 2 substeps) consumes normals exactly like a run at (dt/2, 1), which
/// couples the two for discretisation studies.
struct GridOptions {
    double dt = 0.1;  // min
    CrossingCheck crossing = CrossingCheck::bridge;
    unsigned substeps = 1;
    unsigned bridge_depth = 3;
};

/// Exact conditional law of X_{t+h} given X_t for one step length h.
struct OuTransition {
    double decay = 1.0;        // e^{-kappa h}
    double drift = 0.0;        // mu (1 - e^{-kappa h})
    double sd = 0.0;           // sqrt(sigma^2 (1 - e^{-2 kappa h}) / (2 kappa))
    double bridge_gain = 0.0;  // 2 e^{kappa h} / quadratic-variation increment; +inf without noise

    static OuTransition make(const OuParams& p, double h);
    double mean(double x) const { return decay * x + drift; }
};

AxisState ou_step(AxisState state, const OuParams& p, double dt, RandomSource& src);

/// ceil(horizon/dt) + 1 states starting at (x0, 0); the last step may be shorter.
std::vector<AxisState> ou_path(const OuParams& p, double x0, double horizon, double dt, RandomSource& src);

/// Simulates one axis against fixed bounds, with reset-on-contact.
class BarrierWalker {
public:
    BarrierWalker(const OuParams& p, double lower, double upper, const GridOptions& grid);
    BarrierWalker(const OuParams& p, const Barrier& b, const GridOptions& grid);

    /// Number of contacts at grid times t with count_from <= t <= t_end while
    /// walking from (x0, t_start). The axis jumps to `reset` after each
    /// contact; a start outside the bounds is a contact at t_start.
    std::uint32_t count(double x0, double t_start, double t_end, double count_from, double reset,
                        RandomSource& src) const {
        return count(x0, t_start, t_end, count_from, reset, src, src);
    }
    /// As above with separate sources for the path normals and the bridge uniforms.
    std::uint32_t count(double x0, double t_start, double t_end, double count_from, double reset,
                        RandomSource& noise, RandomSource& coin) const;

    /// Elapsed time of the first contact within `horizon`, if any.
    std::optional<double> first_hit(double x0, double horizon, RandomSource& src) const {
        return first_hit(x0, horizon, src, src);
    }
    std::optional<double> first_hit(double x0, double horizon, RandomSource& noise, RandomSource& coin) const;

    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    // Bridge quantities for an interval of length h / 2^level.
    struct BridgeLevel {
        double gain = 0.0;      // chord test
        double half_decay = 1.0;  // e^{-kappa h_level / 2}
        double mid_sd = 0.0;    // sd of the midpoint given both ends
    };
    struct Step {
        OuTransition sub;  // one sub-transition
        std::array<BridgeLevel, kMaxBridgeDepth + 1> levels;
    };
    Step make_step(double h) const;
    bool advance(double& x, const Step& st, RandomSource& noise, RandomSource& coin) const;
    double survival(double x0, double x1, const Step& st, unsigned level, RandomSource& coin) const;

    OuParams params_;
    double lower_;
    double upper_;
    double dt_;
    bool bridge_;
    unsigned substeps_;
    unsigned depth_;
    Step full_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Wilson score interval for k successes out of n (95% by default).
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct FirstPassageSample {
    std::vector<double> hitting_times;  // uncensored paths only, min
    std::uint64_t n_paths = 0;
    std::uint64_t n_censored = 0;
    double probability = 0.0;  // P[tau <= horizon]
    Interval ci;
    bool degenerate = false;  // origin on or outside the barrier
};

FirstPassageSample first_passage_mc(const OuParams& p, const Barrier& b, double horizon, const GridOptions& grid,
                                    std::uint64_t n_paths, RandomSource& src);

/// Per-path intervention counts within `horizon`; the axis restarts at `reset`
/// after each contact.
CountHistogram intervention_count_mc(const OuParams& p, const Barrier& b, double horizon, const GridOptions& grid,
                                     double reset, std::uint64_t n_paths, RandomSource& src);

}  // namespace taskload
