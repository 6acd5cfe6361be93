#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hybridcd/upsilon.hpp"

using namespace hybridcd;

namespace {

// independent oracle: dense uniform scan of nu_{r,r-1}(w)/w^2, formulas
// written out from scratch
double brute_force_c(double r, int points = 2'000'000, double lo = -50.0, double hi = 50.0) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= points; ++i) {
        const double w = lo + (hi - lo) * i / points;
        if (std::abs(w) < 1e-9) continue;
        const double num = r * (std::exp(w) - 1.0) * w + (std::exp(-w) - 1.0 + w) +
                           (1.0 - r) * (std::exp(w) - 1.0 - w);
        best = std::min(best, num / (w * w));
    }
    return best;
}

} // namespace

TEST_CASE("upsilon point values") {
    CHECK(upsilon(0.0) == 0.0);
    CHECK(upsilon(1.0) == Catch::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
    CHECK(upsilon(-1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("upsilon_prime point values") {
    CHECK(upsilon_prime(0.0) == 0.0);
    CHECK(upsilon_prime(1.0) == Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK(upsilon_prime(-1.0) == Catch::Approx(std::exp(-1.0) - 1.0).epsilon(1e-14));
    CHECK(upsilon_prime(3.0) > 0.0);
    CHECK(upsilon_prime(-3.0) < 0.0);
}

TEST_CASE("upsilon is nonnegative and convex at the origin") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(-20.0, 20.0);
    for (int i = 0; i < 10'000; ++i) {
        const double x = uni(rng);
        CHECK(upsilon(x) >= 0.0);
        CHECK(upsilon(x) >= upsilon_prime(0.0) * x);
    }
}

TEST_CASE("nu point values") {
    CHECK(nu(2.0, 1.0, 0.0) == 0.0);
    // 2 Upsilon'(1) + Upsilon(-1) - Upsilon(1) = e + 1/e
    CHECK(nu(2.0, 1.0, 1.0) ==
          Catch::Approx(std::exp(1.0) + std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("nu(0,-1,w) equals 2(cosh w - 1)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double w = uni(rng);
        CHECK(nu(0.0, -1.0, w) ==
              Catch::Approx(2.0 * (std::cosh(w) - 1.0)).margin(1e-12 * std::cosh(w)));
    }
}

TEST_CASE("nu(2,1,w) matches the fully expanded exponential polynomial") {
    // 2 w e^w - e^w + e^{-w}, multiplied out by hand
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-15.0, 15.0);
    for (int i = 0; i < 10'000; ++i) {
        const double w = uni(rng);
        const double expanded = 2.0 * w * std::exp(w) - std::exp(w) + std::exp(-w);
        CHECK(nu(2.0, 1.0, w) ==
              Catch::Approx(expanded).margin(1e-12 * std::max(1.0, std::abs(expanded))));
    }
}

TEST_CASE("quadratic lower bound nu(r, r-1, w) >= w^2") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ur(0.0, 6.0);
    std::uniform_real_distribution<double> uw(-30.0, 30.0);
    for (int i = 0; i < 20'000; ++i) {
        const double r = ur(rng);
        const double w = uw(rng);
        CHECK(nu(r, r - 1.0, w) >= w * w - 1e-10);
    }
}

TEST_CASE("nu_ratio removable singularity and Taylor handoff") {
    CHECK(nu_ratio(0.0, 0.0) == Catch::Approx(1.0));
    CHECK(nu_ratio(2.0, 0.0) == Catch::Approx(2.0));
    CHECK(nu_ratio(5.0, 0.0) == Catch::Approx(3.5));
    // the two evaluation branches agree around the switch point
    for (double w : {9e-4, 1.1e-3, -9e-4, -1.1e-3}) {
        const double direct = nu(2.0, 1.0, w) / (w * w);
        CHECK(nu_ratio(2.0, w) == Catch::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("c_of_r input validation") {
    CHECK_THROWS_AS(c_of_r(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(c_of_r(2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(c_of_r(2.0, -1e-9), std::invalid_argument);
}

TEST_CASE("C(0) = 1, approached at w -> 0") {
    const auto res = c_of_r(0.0);
    CHECK(res.value == Catch::Approx(1.0).margin(1e-6));
    CHECK(std::abs(res.argmin) < 1e-2);
    CHECK(res.value == Catch::Approx(brute_force_c(0.0)).margin(1e-6));
}

TEST_CASE("C(2) reference value") {
    const auto res = c_of_r(2.0);
    CHECK(res.value == Catch::Approx(1.590).margin(0.01));
    CHECK(res.value == Catch::Approx(brute_force_c(2.0)).margin(1e-6));
    CHECK(res.argmin < 0.0);  // minimiser sits on the negative axis
}

TEST_CASE("C(r) is >= 1 and nondecreasing on a grid") {
    double prev = 0.0;
    for (double r = 0.0; r <= 5.0 + 1e-12; r += 0.5) {
        const auto res = c_of_r(r);
        CHECK(res.value >= 1.0 - 1e-9);
        CHECK(res.value >= prev - 1e-9);
        prev = res.value;
    }
    CHECK(c_of_r(3.0).value >= c_of_r(2.0).value);
}

TEST_CASE("reported minimum never exceeds the ratio at probe points") {
    const auto res = c_of_r(2.0);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-50.0, 50.0);
    for (int i = 0; i < 10'000; ++i) {
        const double w = uni(rng);
        CHECK(res.value <= nu_ratio(2.0, w) + 1e-12);
    }
    CHECK(res.value <= nu_ratio(2.0, res.argmin) + 1e-12);
}

TEST_CASE("c2 caches the r = 2 constant") {
    CHECK(c2() == c_of_r(2.0).value);
}
