#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nk/special.hpp"

using namespace nk;

TEST_CASE("exponential integral E1") {
    // reference values from the 15-digit tables
    CHECK(expint_e1(1.0) == doctest::Approx(0.219383934395520274).epsilon(1e-14));
    CHECK(expint_e1(0.5) == doctest::Approx(0.559773594776160812).epsilon(1e-14));
    CHECK(expint_e1(3.0) == doctest::Approx(0.013048381094197037).epsilon(1e-12));
    CHECK(expint_e1(10.0) == doctest::Approx(4.156968929685324277e-6).epsilon(1e-10));
    CHECK_THROWS_AS(expint_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(expint_e1(-1.0), std::domain_error);
}

TEST_CASE("Mittag-Leffler special values") {
    CHECK(mittag_leffler(0.7, 0.0) == 1.0);
    CHECK(mittag_leffler(1.0, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    // E_{1/2}(z) = exp(z^2) erfc(-z)
    CHECK(mittag_leffler(0.5, -1.0) ==
          doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-13));
    CHECK(mittag_leffler(0.5, -3.0) ==
          doctest::Approx(std::exp(9.0) * std::erfc(3.0)).epsilon(1e-12));
    CHECK(mittag_leffler(0.5, 1.0) ==
          doctest::Approx(std::exp(1.0) * std::erfc(-1.0)).epsilon(1e-13));
}

TEST_CASE("Mittag-Leffler series and integral agree on the overlap window") {
    for (double alpha : {0.5, 0.6, 0.75, 0.9}) {
        for (double z = -6.0; z <= -4.0; z += 0.5) {
            if (-z > std::min(5.0, std::pow(40.0, alpha))) continue;
            double s = mittag_leffler_series(alpha, z);
            double i = mittag_leffler_integral(alpha, z);
            CHECK(std::abs(s - i) < 1e-8);
        }
    }
}

TEST_CASE("Mittag-Leffler is monotone nonincreasing on the negative axis") {
    for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
        double prev = 1.0;
        for (double z = -0.25; z >= -12.0; z -= 0.25) {
            double v = mittag_leffler(alpha, z);
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("Mittag-Leffler rejects unsupported arguments") {
    CHECK_THROWS_AS(mittag_leffler(0.5, 10.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler(0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler(1.5, -1.0), std::domain_error);
}
