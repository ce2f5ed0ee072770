#include "taskload/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "taskload/errors.hpp"

namespace taskload {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Regression {
    double a = 0.0;
    double b = 0.0;
};

// Least-squares slope of X_{i+1} on X_i about a fixed centre mu.
double slope_about(const std::vector<double>& x, double mu) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        num += (x[i + 1] - mu) * (x[i] - mu);
        den += (x[i] - mu) * (x[i] - mu);
    }
    return num / den;
}

double residual_variance(const std::vector<double>& x, double a, double b) {
    double ss = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double r = x[i + 1] - a * x[i] - b;
        ss += r * r;
    }
    return ss / static_cast<double>(x.size() - 1);
}

Regression regress(const std::vector<double>& x) {
    const std::size_t n = x.size() - 1;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += x[i + 1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (x[i + 1] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    // Relative threshold so that rescaled constant series are caught too.
    const double scale = std::max(std::abs(mx), 1.0);
    if (!(sxx > 1e-28 * scale * scale * static_cast<double>(n)))
        throw DataError("calibration: predictor values have zero variance");
    const double a = sxy / sxx;
    return {a, my - a * mx};
}

// Fills params, stationary_sd, loglik and flags from (a, b, sigma_eps).
void finish(CalibrationReport& r, const TimeSeries& ts) {
    const double a = r.a_hat;
    r.stationary_sd = std::abs(a) < 1.0 ? r.sigma_eps_hat / std::sqrt(1.0 - a * a) : kNaN;
    if (a <= 0.0) {
        r.flags.emplace_back(flag::no_mean_memory);
    } else if (a >= 1.0) {
        r.flags.emplace_back(flag::non_mean_reverting);
    } else {
        OuParams p;
        p.kappa = -std::log(a) / ts.dt;
        p.mu = r.b_hat / (1.0 - a);
        p.sigma = r.sigma_eps_hat * std::sqrt(-2.0 * std::log(a) / (ts.dt * (1.0 - a * a)));
        r.params = p;
    }
    // Gaussian AR(1) likelihood in (a, b, sigma_eps); coincides with ou_loglik when params exist.
    const double n = static_cast<double>(ts.values.size() - 1);
    const double s2 = r.sigma_eps_hat * r.sigma_eps_hat;
    if (s2 > 0.0)
        r.loglik = -0.5 * n * std::log(2.0 * std::numbers::pi * s2) - 0.5 * n;
    else
        r.loglik = std::numeric_limits<double>::infinity();
}

}  // namespace

void TimeSeries::validate(std::size_t min_length) const {
    if (values.size() < min_length)
        throw DataError("time series needs at least " + std::to_string(min_length) + " values, got " +
                        std::to_string(values.size()));
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DataError("time series dt must be > 0");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i])) throw DataError("time series value " + std::to_string(i) + " is not finite");
}

bool CalibrationReport::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

CalibrationReport fit_least_squares(const TimeSeries& ts) {
    ts.validate();
    const Regression reg = regress(ts.values);
    CalibrationReport r;
    r.method = FitMethod::least_squares;
    r.a_hat = reg.a;
    r.b_hat = reg.b;
    r.sigma_eps_hat = std::sqrt(residual_variance(ts.values, reg.a, reg.b));
    finish(r, ts);
    return r;
}

CalibrationReport fit_mle(const TimeSeries& ts, int max_iter, double rtol) {
    ts.validate();
    const Regression start = regress(ts.values);
    CalibrationReport r;
    r.method = FitMethod::mle;
    double a = start.a;
    double mu = start.a != 1.0 ? start.b / (1.0 - start.a) : kNaN;
    bool converged = false;
    if (a > 0.0 && a < 1.0) {
        const auto& x = ts.values;
        const double n = static_cast<double>(x.size() - 1);
        double xscale = 0.0;
        for (double v : x) xscale = std::max(xscale, std::abs(v));
        for (int it = 1; it <= max_iter; ++it) {
            r.iterations = it;
            const double a_next = slope_about(x, mu);
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) s += x[i + 1] - a_next * x[i];
            const double mu_next = s / (n * (1.0 - a_next));
            const bool small = std::abs(a_next - a) <= rtol * std::abs(a) &&
                               std::abs(mu_next - mu) <= rtol * std::max(std::abs(mu), xscale);
            a = a_next;
            mu = mu_next;
            if (small || !(a > 0.0 && a < 1.0)) {
                converged = small;
                break;
            }
        }
        if (!converged) r.flags.emplace_back(flag::not_converged);
        r.a_hat = a;
        r.b_hat = mu * (1.0 - a);
    } else {
        r.a_hat = start.a;
        r.b_hat = start.b;
    }
    r.sigma_eps_hat = std::sqrt(residual_variance(ts.values, r.a_hat, r.b_hat));
    finish(r, ts);
    return r;
}

double ou_loglik(const TimeSeries& ts, const OuParams& p) {
    ts.validate();
    p.validate();
    const OuTransition tr = OuTransition::make(p, ts.dt);
    const double s2 = tr.sd * tr.sd;
    const double n = static_cast<double>(ts.values.size() - 1);
    double ss = 0.0;
    for (std::size_t i = 0; i + 1 < ts.values.size(); ++i) {
        const double r = ts.values[i + 1] - tr.mean(ts.values[i]);
        ss += r * r;
    }
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * n * std::log(s2) - ss / (2.0 * s2);
}

SampleMoments sample_moments(const std::vector<double>& values) {
    if (values.size() < 4) throw DataError("sample_moments needs at least 4 values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    SampleMoments out;
    out.moments.mu1 = mean;
    out.moments.mu2 = m2 / (n - 1.0);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0 || m2 <= 1e-30 * mean * mean) {
        out.degenerate = true;
        out.moments.mu2 = 0.0;
        out.moments.beta1 = kNaN;
        out.moments.beta2 = kNaN;
    } else {
        out.moments.beta1 = m3 * m3 / (m2 * m2 * m2);
        out.moments.beta2 = m4 / (m2 * m2);
    }
    return out;
}

}  // namespace taskload
