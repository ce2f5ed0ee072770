#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "taskload/distributions.hpp"

using namespace taskload;

namespace {

// Simpson rule over z of phi(z) * g(z)^k, an oracle that never touches the closed form.
double raw_moment_by_quadrature(const JohnsonSuParams& p, int k, double center) {
    const int n = 20000;
    const double a = -14.0, b = 14.0, h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = a + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        s += w * phi * std::pow(johnson_transform(z, p) - center, k);
    }
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("closed-form moments agree with quadrature on every axis") {
    for (Axis a : kAllAxes) {
        const JohnsonSuParams p = default_fte_params(a);
        const MomentSet m = johnson_moments(p);
        const double mean = raw_moment_by_quadrature(p, 1, 0.0);
        const double m2 = raw_moment_by_quadrature(p, 2, mean);
        const double m3 = raw_moment_by_quadrature(p, 3, mean);
        const double m4 = raw_moment_by_quadrature(p, 4, mean);
        CHECK(m.mu1 == doctest::Approx(mean).epsilon(1e-9));
        CHECK(m.mu2 == doctest::Approx(m2).epsilon(1e-9));
        CHECK(m.beta1 == doctest::Approx(m3 * m3 / (m2 * m2 * m2)).epsilon(1e-8));
        CHECK(m.beta2 == doctest::Approx(m4 / (m2 * m2)).epsilon(1e-8));
    }
}

TEST_CASE("frozen moment values") {
    const MomentSet lat = johnson_moments(default_fte_params(Axis::lateral));
    CHECK(lat.mu1 == doctest::Approx(-0.028040853543420275).epsilon(1e-12));
    CHECK(lat.mu2 == doctest::Approx(7.783664025751025e-4).epsilon(1e-12));
    const MomentSet vert = johnson_moments(default_fte_params(Axis::vertical));
    CHECK(vert.mu1 == doctest::Approx(8.00025909866785).epsilon(1e-12));
    CHECK(vert.mu2 == doctest::Approx(21.082159055075806).epsilon(1e-12));
    const MomentSet lon = johnson_moments(default_fte_params(Axis::longitudinal));
    CHECK(lon.mu1 == doctest::Approx(-0.09999950530617718).epsilon(1e-12));
    CHECK(lon.mu2 == doctest::Approx(0.018248670196577364).epsilon(1e-12));
    // Shape is shared, so the standardised moments are too.
    for (const MomentSet& m : {lat, vert, lon}) {
        CHECK(m.beta1 == doctest::Approx(0.24298832471283827).epsilon(1e-10));
        CHECK(m.beta2 == doctest::Approx(5.10696935489367).epsilon(1e-10));
    }
}

TEST_CASE("shape moments match the published 0.243 and 5.107") {
    const MomentSet m = johnson_moments(default_fte_params(Axis::lateral));
    CHECK(std::abs(m.beta1 - 0.243) < 5e-4);
    CHECK(std::abs(m.beta2 - 5.107) < 5e-4);
}

TEST_CASE("transform and inverse are mutual inverses") {
    const JohnsonSuParams p = default_fte_params(Axis::vertical);
    for (double z = -6.0; z <= 6.0; z += 0.37) CHECK(johnson_inverse(johnson_transform(z, p), p) == doctest::Approx(z));
    for (double z : {-2.0, -0.3, 0.0, 1.1}) CHECK(johnson_cdf(johnson_transform(z, p), p) == doctest::Approx(standard_normal_cdf(z)));
}

TEST_CASE("density integrates to the cdf increment") {
    const JohnsonSuParams p = default_fte_params(Axis::lateral);
    const int n = 200000;
    const double a = -1.0, b = 1.0, h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * johnson_density(a + i * h, p);
    }
    s *= h / 3.0;
    CHECK(s == doctest::Approx(johnson_cdf(b, p) - johnson_cdf(a, p)).epsilon(1e-10));
    CHECK(s == doctest::Approx(0.9999999999921736).epsilon(1e-11));
}

TEST_CASE("normal helpers") {
    CHECK(2.0 * standard_normal_cdf(-2.0) == doctest::Approx(0.04550026389635839).epsilon(1e-14));
    CHECK(2.0 * standard_normal_cdf(-2.0) == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-14));
    CHECK(standard_normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("invalid parameters are rejected") {
    JohnsonSuParams p = default_fte_params(Axis::lateral);
    p.delta = 0.0;
    CHECK_THROWS(p.validate());
    p = default_fte_params(Axis::lateral);
    p.scale_lambda = -1.0;
    CHECK_THROWS(p.validate());
    CHECK_NOTHROW(default_fte_params(Axis::lateral).validate());
}

TEST_CASE("random source is keyed by seed and stream") {
    RandomSource a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    bool differ_c = false, differ_d = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        differ_c = differ_c || x != c.normal();
        differ_d = differ_d || x != d.normal();
    }
    CHECK(differ_c);
    CHECK(differ_d);

    // substream is a pure function of the parent key
    RandomSource s1 = RandomSource(5, 9).substream(2);
    RandomSource parent(5, 9);
    parent.normal();
    RandomSource s2 = parent.substream(2);
    CHECK(s1.uniform() == s2.uniform());
}

TEST_CASE("distinct stream ids give distinct engine states") {
    std::set<double> firsts;
    for (std::uint64_t id = 0; id < 2000; ++id) firsts.insert(RandomSource(1, id).uniform());
    CHECK(firsts.size() == 2000);
}

TEST_CASE("sampler moments") {
    RandomSource src(11, 0);
    const std::size_t n = 200000;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = src.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / n) < 5.0 / std::sqrt(double(n)));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));

    const double mean = 3.7;
    double ps = 0.0;
    for (std::size_t i = 0; i < n; ++i) ps += double(poisson_sample(mean, src));
    CHECK(std::abs(ps / n - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(poisson_sample(0.0, src) == 0);

    double es = 0.0;
    for (std::size_t i = 0; i < n; ++i) es += exponential_sample(2.0, src);
    CHECK(std::abs(es / n - 0.5) < 5.0 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("johnson_sample is reproducible and sized") {
    RandomSource a(3, 1), b(3, 1);
    const auto x = johnson_sample(default_fte_params(Axis::lateral), a, 1000);
    const auto y = johnson_sample(default_fte_params(Axis::lateral), b, 1000);
    CHECK(x.size() == 1000);
    CHECK(x == y);
    CHECK(johnson_sample(default_fte_params(Axis::lateral), a, 0).empty());
}
