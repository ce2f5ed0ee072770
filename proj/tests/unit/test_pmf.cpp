#include <doctest.h>

#include <cmath>

#include "taskload/errors.hpp"
#include "taskload/pmf.hpp"

using namespace taskload;

TEST_CASE("poisson pmf") {
    const TaskloadPmf p = poisson_pmf(2.5);
    CHECK(p.at(0) == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
    CHECK(p.at(3) == doctest::Approx(std::exp(-2.5) * 2.5 * 2.5 * 2.5 / 6.0).epsilon(1e-13));
    CHECK(p.mean() == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(p.sum() + p.truncation_mass == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(poisson_pmf(0.0).at(0) == 1.0);
}

TEST_CASE("convolution adds independent counts") {
    const TaskloadPmf a = poisson_pmf(1.2), b = poisson_pmf(0.7);
    const TaskloadPmf c = convolve_pmf(a, b);
    CHECK(total_variation(c, poisson_pmf(1.9)) < 1e-12);
    CHECK(convolution_power(a, 0).at(0) == 1.0);
    CHECK(total_variation(convolution_power(a, 3), poisson_pmf(3.6)) < 1e-12);
}

TEST_CASE("horizons must agree") {
    TaskloadPmf a = TaskloadPmf::point_mass(1, 120.0);
    TaskloadPmf b = TaskloadPmf::point_mass(1, 60.0);
    CHECK_THROWS_AS(convolve_pmf(a, b), std::invalid_argument);
    CHECK(convolve_pmf(a, TaskloadPmf::point_mass(2)).at(3) == 1.0);
}

TEST_CASE("total variation") {
    CHECK(total_variation(TaskloadPmf::point_mass(0), TaskloadPmf::point_mass(1)) == 1.0);
    CHECK(total_variation(poisson_pmf(3.0), poisson_pmf(3.0)) == 0.0);
    TaskloadPmf t{{0.5}, 0.5, std::nullopt};
    CHECK(total_variation(t, TaskloadPmf::point_mass(0)) == doctest::Approx(0.5));
}

TEST_CASE("shift down folds the low bins into zero") {
    const TaskloadPmf p{{0.2, 0.3, 0.4, 0.1}, 0.0, std::nullopt};
    const TaskloadPmf s = shift_down(p, 1);
    CHECK(s.at(0) == doctest::Approx(0.5));
    CHECK(s.at(1) == doctest::Approx(0.4));
    CHECK(s.at(2) == doctest::Approx(0.1));
}

TEST_CASE("tails and mode") {
    const TaskloadPmf p{{0.2, 0.5, 0.2}, 0.1, std::nullopt};
    CHECK(p.tail_at_least(1) == doctest::Approx(0.8));
    CHECK(p.tail_at_least(3) == doctest::Approx(0.1));
    CHECK(p.mode() == 1);
}

TEST_CASE("validation") {
    TaskloadPmf bad{{0.5, -0.1, 0.6}, 0.0, std::nullopt};
    CHECK_THROWS_AS(bad.validate(), NumericalError);
    TaskloadPmf short_mass{{0.5}, 0.0, std::nullopt};
    CHECK_THROWS_AS(short_mass.validate(), NumericalError);
    CHECK_NOTHROW(poisson_pmf(4.0).validate());
}

TEST_CASE("histogram merge is count addition") {
    CountHistogram a, b, both;
    for (std::uint64_t n : {0, 1, 1, 4}) {
        a.add(n);
        both.add(n);
    }
    for (std::uint64_t n : {2, 1, 7}) {
        b.add(n);
        both.add(n);
    }
    CountHistogram m = a;
    m.merge(b);
    CHECK(m == both);
    CountHistogram m2 = b;
    m2.merge(a);
    CHECK(m2 == both);
    CHECK(m.total() == 7);
    const TaskloadPmf p = m.to_pmf(120.0);
    CHECK(p.at(1) == doctest::Approx(3.0 / 7.0));
    CHECK(p.horizon.value() == 120.0);
}
