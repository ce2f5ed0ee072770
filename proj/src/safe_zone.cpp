#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "taskload/errors.hpp"
#include "taskload/flow.hpp"

namespace taskload {

void CrossingGeometry::validate() const {
    if (!(alpha_deg > 0.0 && alpha_deg < 180.0)) throw ConfigError("crossing angle must lie in (0, 180) degrees");
    if (!(e1 >= 0.0) || !(e2 >= 0.0) || !std::isfinite(e1) || !std::isfinite(e2))
        throw ConfigError("lateral extents must be finite and >= 0");
    if (!(d_min > 0.0) || !std::isfinite(d_min)) throw ConfigError("d_min must be > 0");
    if (!(speed_kt > 0.0) || !std::isfinite(speed_kt)) throw ConfigError("crossing speed must be > 0");
}

namespace {

// Real roots of a x^2 + b x + c = 0 (a != 0).
std::vector<double> quadratic_roots(double a, double b, double c) {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    const double sq = std::sqrt(disc);
    // Cancellation-free pair.
    const double q = -0.5 * (b + std::copysign(sq, b));
    std::vector<double> r;
    if (q != 0.0) r.push_back(c / q);
    r.push_back(q / a);
    return r;
}

}  // namespace

CrossingGeometry solve_safe_zone(CrossingGeometry g) {
    g.validate();
    const double alpha = g.alpha_deg * std::numbers::pi / 180.0;
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    const double h1 = 0.5 * g.e1;
    const double h2 = 0.5 * g.e2;
    const double d2 = g.d_min * g.d_min;

    // Boundary system, with A = x1 + x2 cos(a) and B = x2 sin(a) - e1/2:
    //   (A - h2 cos a)^2 + (B + h2 sin a)^2 = D^2
    //   (A - h2 sin a)^2 + (B + h2 cos a)^2 = D^2
    // The difference is 2 h2 (sin a - cos a)(A + B) = 0.
    std::vector<std::pair<double, double>> roots;
    const bool coincident = h2 * std::abs(s - c) < 1e-14 * std::max(1.0, g.d_min);
    if (!coincident) {
        // A + B = 0  =>  x1 = e1/2 - x2 (cos a + sin a)
        const double k = c + s;
        // A = h1 - x2 sin a ; substitute into the first equation.
        const double p0 = h1 - h2 * c;  // A - h2 cos a = p0 - x2 s
        const double q0 = h2 * s - h1;  // B + h2 sin a = q0 + x2 s
        const double qa = 2.0 * s * s;
        const double qb = 2.0 * s * (q0 - p0);
        const double qc = p0 * p0 + q0 * q0 - d2;
        for (double x2 : quadratic_roots(qa, qb, qc)) roots.emplace_back(h1 - x2 * k, x2);
    } else {
        // The equations coincide: take the symmetric boundary x1 = x2 = x.
        // (x (1 + cos a) - h2 cos a)^2 + (x sin a - h1 + h2 sin a)^2 = D^2
        const double u0 = 1.0 + c;
        const double u1 = -h2 * c;
        const double v1 = h2 * s - h1;
        const double qa = u0 * u0 + s * s;
        const double qb = 2.0 * (u0 * u1 + s * v1);
        const double qc = u1 * u1 + v1 * v1 - d2;
        for (double x : quadratic_roots(qa, qb, qc)) roots.emplace_back(x, x);
    }
    if (roots.empty()) throw NumericalError("solve_safe_zone: boundary system has no real root");

    // Signed roots are positions along each centreline; the half-length is |x|.
    auto extent = [](const std::pair<double, double>& r) { return std::max(std::abs(r.first), std::abs(r.second)); };
    const auto best = *std::min_element(roots.begin(), roots.end(),
                                        [&](const auto& a, const auto& b) { return extent(a) < extent(b); });
    g.root_x1 = best.first;
    g.root_x2 = best.second;
    const double half = extent(best);
    if (!(half > 0.0)) throw NumericalError("solve_safe_zone: zero-size safe zone");
    g.x1 = half;
    g.x2 = half;
    g.t_safe = 2.0 * half / knots_to_nm_per_minute(g.speed_kt);
    g.solved = true;
    return g;
}

}  // namespace taskload
