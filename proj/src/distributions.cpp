#include "taskload/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace taskload {

void JohnsonSuParams::validate() const {
    if (!std::isfinite(gamma) || !std::isfinite(delta) || !std::isfinite(scale_lambda) || !std::isfinite(xi))
        throw std::invalid_argument("JohnsonSuParams: non-finite field");
    if (!(delta > 0.0)) throw std::invalid_argument("JohnsonSuParams: delta must be > 0");
    if (!(scale_lambda > 0.0)) throw std::invalid_argument("JohnsonSuParams: scale_lambda must be > 0");
}

JohnsonSuParams default_fte_params(Axis axis) {
    switch (axis) {
        case Axis::lateral: return {0.4566, 1.897, 0.0443, -0.01567};
        case Axis::vertical: return {0.4566, 1.897, 7.2907, 10.0362};
        case Axis::longitudinal: return {0.4566, 1.897, 0.2145, -0.0401};
    }
    throw std::invalid_argument("unknown axis");
}

double johnson_transform(double z, const JohnsonSuParams& p) {
    return p.scale_lambda * std::sinh((z - p.gamma) / p.delta) + p.xi;
}

double johnson_inverse(double x, const JohnsonSuParams& p) {
    return p.delta * std::asinh((x - p.xi) / p.scale_lambda) + p.gamma;
}

double johnson_density(double x, const JohnsonSuParams& p) {
    // |1 / g'(g^-1(x))| * phi(g^-1(x)), with g'(z) = (lambda/delta) cosh((z-gamma)/delta)
    // and cosh(asinh(u)) = sqrt(1 + u^2).
    const double u = (x - p.xi) / p.scale_lambda;
    const double z = p.delta * std::asinh(u) + p.gamma;
    return p.delta / (p.scale_lambda * std::hypot(1.0, u)) * standard_normal_pdf(z);
}

double johnson_cdf(double x, const JohnsonSuParams& p) { return standard_normal_cdf(johnson_inverse(x, p)); }

std::vector<double> johnson_sample(const JohnsonSuParams& p, RandomSource& src, std::size_t n) {
    p.validate();
    std::vector<double> out(n);
    for (auto& v : out) v = johnson_transform(src.normal(), p);
    return out;
}

MomentSet johnson_moments(const JohnsonSuParams& p) {
    p.validate();
    const double w = std::exp(1.0 / (p.delta * p.delta));
    const double omega = p.gamma / p.delta;
    const double lam = p.scale_lambda;
    const double wm1 = w - 1.0;

    MomentSet m;
    m.mu1 = p.xi - lam * std::sqrt(w) * std::sinh(omega);
    m.mu2 = 0.5 * lam * lam * wm1 * (w * std::cosh(2.0 * omega) + 1.0);
    const double mu3 = -0.25 * std::pow(lam, 3) * std::sqrt(w) * wm1 * wm1 *
                       (w * (w + 2.0) * std::sinh(3.0 * omega) + 3.0 * std::sinh(omega));
    const double mu4 = 0.125 * std::pow(lam, 4) * wm1 * wm1 *
                       (w * w * (std::pow(w, 4) + 2.0 * std::pow(w, 3) + 3.0 * w * w - 3.0) * std::cosh(4.0 * omega) +
                        4.0 * w * w * (w + 2.0) * std::cosh(2.0 * omega) + 3.0 * (2.0 * w + 1.0));
    m.beta1 = mu3 * mu3 / std::pow(m.mu2, 3);
    m.beta2 = mu4 / (m.mu2 * m.mu2);
    return m;
}

std::uint64_t poisson_sample(double intensity_time, RandomSource& src) { return src.poisson(intensity_time); }

double exponential_sample(double rate, RandomSource& src) { return src.exponential(rate); }

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace taskload
