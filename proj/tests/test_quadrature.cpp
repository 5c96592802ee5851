#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nk/quadrature.hpp"

using namespace nk;

TEST_CASE("adaptive Gauss-Kronrod on smooth integrands") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
    // int_0^1 x^{-1/2} dx = 2
    CHECK(tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // Beta(1/4, 3/4) = Gamma(1/4)Gamma(3/4)/Gamma(1) = pi / sin(pi/4)
    double beta = tanh_sinh(
        [](double x) { return std::pow(x, -0.75) * std::pow(1.0 - x, -0.25); },
        0.0, 1.0);
    CHECK(beta == doctest::Approx(std::numbers::pi / std::sin(0.25 * std::numbers::pi))
                      .epsilon(1e-10));
    // log singularity
    CHECK(tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0) ==
          doctest::Approx(-1.0).epsilon(1e-11));
}

TEST_CASE("semi-infinite integration by interval doubling") {
    CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_to_infinity([](double x) { return std::exp(-0.05 * x); }, 0.0) ==
          doctest::Approx(20.0).epsilon(1e-9));
    CHECK_THROWS_AS(
        integrate_to_infinity([](double x) { return 1.0 / (1.0 + x); }, 0.0),
        QuadratureError);
}

TEST_CASE("complex-valued integrands") {
    using cd = std::complex<double>;
    auto val = integrate([](double x) { return std::exp(cd(0.0, x)); }, 0.0,
                         std::numbers::pi);
    CHECK(val.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(val.imag() == doctest::Approx(2.0).epsilon(1e-12));
}
