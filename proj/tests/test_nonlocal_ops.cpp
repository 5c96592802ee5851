#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nk/nonlocal_ops.hpp"
#include "nk/quadrature.hpp"
#include "nk/special.hpp"

using namespace nk;

namespace {

SampledFunction sampled(const std::function<double(double)>& f, double upto,
                        std::size_t cells = 4096) {
    return SampledFunction::from_callable(f, upto / static_cast<double>(cells),
                                          cells + 1);
}

}  // namespace

TEST_CASE("Caputo-Dzherbashian reference values") {
    SUBCASE("fractional derivative of the alpha power is one") {
        auto sym = BernsteinSymbol::stable(0.5);
        auto u = sampled(
            [](double s) { return std::sqrt(s) / std::tgamma(1.5); }, 1.0);
        CHECK(caputo_dzherbashian(sym, u, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("constants are annihilated") {
        for (auto sym : {BernsteinSymbol::stable(0.3), BernsteinSymbol::gamma(1, 2),
                         BernsteinSymbol::caputo_fabrizio(0.5)}) {
            auto u = sampled([](double) { return 3.25; }, 1.0, 256);
            CHECK(caputo_dzherbashian(sym, u, 1.0) == doctest::Approx(0.0));
        }
    }
    SUBCASE("telegraph symbol splits into two fractional derivatives") {
        auto sym = BernsteinSymbol::telegraph_sum(0.25);
        auto u = sampled([](double s) { return s; }, 1.0);
        // D^{1/2} s + D^{1/4} s at s=1
        double expect = 1.0 / std::tgamma(1.5) + 1.0 / std::tgamma(1.75);
        CHECK(caputo_dzherbashian(sym, u, 1.0) ==
              doctest::Approx(expect).epsilon(1e-3));
    }
    SUBCASE("linear symbol is the ordinary derivative") {
        auto u = sampled([](double s) { return s * s; }, 1.0, 512);
        CHECK(caputo_dzherbashian(BernsteinSymbol::linear(), u, 0.5) ==
              doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("t = 0 returns 0 by convention") {
        auto u = sampled([](double s) { return s; }, 1.0, 64);
        CHECK(caputo_dzherbashian(BernsteinSymbol::stable(0.5), u, 0.0) == 0.0);
    }
}

TEST_CASE("Marchaud and Riemann-Liouville forms") {
    auto zero_ext = [](const std::function<double(double)>& f) {
        return [f](double y) { return y > 0.0 ? f(y) : 0.0; };
    };
    SUBCASE("zero function maps to zero") {
        auto u = [](double) { return 0.0; };
        CHECK(marchaud_minus(BernsteinSymbol::stable(0.5), u, 1.0) ==
              doctest::Approx(0.0));
        CHECK(riemann_liouville_minus(BernsteinSymbol::stable(0.5), u, 1.0) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("identity function matches the closed form") {
        auto u = zero_ext([](double y) { return y; });
        // D^{1/2} of y at x=1 equals 1/Gamma(3/2) = 2/sqrt(pi)
        double expect = 2.0 / std::sqrt(std::numbers::pi);
        CHECK(marchaud_minus(BernsteinSymbol::stable(0.5), u, 1.0) ==
              doctest::Approx(expect).epsilon(1e-3));
        CHECK(riemann_liouville_minus(BernsteinSymbol::stable(0.5), u, 1.0) ==
              doctest::Approx(expect).epsilon(1e-3));
    }
    SUBCASE("constant with a jump at zero: tail correction appears") {
        auto u = zero_ext([](double) { return 1.0; });
        for (double x : {0.5, 1.0, 2.0}) {
            double expect = BernsteinSymbol::stable(0.5).levy_tail(x);
            CHECK(marchaud_minus(BernsteinSymbol::stable(0.5), u, x) ==
                  doctest::Approx(expect).epsilon(1e-3));
            CHECK(riemann_liouville_minus(BernsteinSymbol::stable(0.5), u, x) ==
                  doctest::Approx(expect).epsilon(1e-3));
        }
    }
    SUBCASE("Caputo-Fabrizio symbol on the identity: non-singular quadrature") {
        auto u = zero_ext([](double y) { return y; });
        double got = marchaud_minus(BernsteinSymbol::caputo_fabrizio(0.5), u, 1.0);
        // 2 int_0^1 y e^{-y} dy + 2 e^{-1}
        double expect = 2.0 * (1.0 - 2.0 * std::exp(-1.0)) + 2.0 * std::exp(-1.0);
        CHECK(got == doctest::Approx(expect).epsilon(1e-6));
        // agrees with the exponential-kernel operator
        auto us = sampled([](double s) { return s; }, 1.0);
        CHECK(caputo_fabrizio_op(0.5, us, 1.0) == doctest::Approx(expect).epsilon(1e-6));
    }
    SUBCASE("operator equivalence battery on C1 functions vanishing at 0") {
        std::vector<std::function<double(double)>> fns = {
            [](double y) { return y * y * std::exp(-y); },
            [](double y) { return 1.0 - std::cos(y); },
            [](double y) { return y * y / (1.0 + y * y); }};
        auto syms = {BernsteinSymbol::stable(0.5), BernsteinSymbol::gamma(1.0, 2.0),
                     BernsteinSymbol::caputo_fabrizio(0.5)};
        for (const auto& f : fns) {
            auto u = zero_ext(f);
            auto us = sampled(f, 4.0, 8192);
            for (const auto& sym : syms) {
                for (double x : {0.5, 1.0, 2.0}) {
                    double ma = marchaud_minus(sym, u, x);
                    double rl = riemann_liouville_minus(sym, u, x);
                    double cd = caputo_dzherbashian(sym, us, x);
                    CHECK(std::abs(ma - rl) < 1e-3);
                    CHECK(std::abs(ma - cd) < 1e-3);
                }
            }
        }
    }
}

TEST_CASE("Caputo-Fabrizio operator") {
    SUBCASE("analytic value on the identity") {
        auto u = sampled([](double s) { return s; }, 1.0);
        CHECK(caputo_fabrizio_op(0.5, u, 1.0) ==
              doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-9));
    }
    SUBCASE("alpha -> 1 recovers the ordinary derivative") {
        auto u = sampled([](double s) { return std::sin(s); }, 1.0, 8192);
        CHECK(caputo_fabrizio_op(0.999, u, 1.0) ==
              doctest::Approx(std::cos(1.0)).epsilon(1e-2));
    }
    SUBCASE("alpha -> 0 recovers u - u(0)") {
        auto u = sampled([](double s) { return std::sin(s); }, 1.0, 8192);
        CHECK(caputo_fabrizio_op(0.001, u, 1.0) ==
              doctest::Approx(std::sin(1.0)).epsilon(1e-2));
    }
    SUBCASE("matches the tail-convolution operator with the CF symbol") {
        auto f = [](double s) { return s * s * std::exp(-0.5 * s); };
        auto u = sampled(f, 2.0, 8192);
        auto sym = BernsteinSymbol::caputo_fabrizio(0.5);
        for (double x : {0.5, 1.0, 2.0}) {
            CHECK(std::abs(caputo_fabrizio_op(0.5, u, x) -
                           caputo_dzherbashian(sym, u, x)) < 1e-6);
        }
    }
    SUBCASE("rejects alpha outside (0,1)") {
        auto u = sampled([](double s) { return s; }, 1.0, 64);
        CHECK_THROWS_AS(caputo_fabrizio_op(1.0, u, 1.0), std::domain_error);
        CHECK_THROWS_AS(caputo_fabrizio_op(0.0, u, 1.0), std::domain_error);
    }
}

TEST_CASE("Young bound for finite Phi'(0+)") {
    // u smooth, compactly supported derivative mass
    auto f = [](double s) {
        return s < 1.0 ? std::sin(std::numbers::pi * s) * std::sin(std::numbers::pi * s)
                       : 0.0;
    };
    for (auto sym : {BernsteinSymbol::caputo_fabrizio(0.5),
                     BernsteinSymbol::gamma(1.0, 2.0)}) {
        auto u = sampled(f, 8.0, 16384);
        const double h = u.step();
        double lhs = 0.0, up_l1 = 0.0;
        for (std::size_t i = 1; i + 1 < u.size(); ++i) {
            lhs += std::abs(caputo_dzherbashian(sym, u, u.grid_at(i))) * h;
            up_l1 += std::abs(u.derivative_at(i)) * h;
        }
        CHECK(lhs <= sym.phi_prime_at_zero().value() * up_l1 + 1e-6);
    }
}

TEST_CASE("Sonine pairs") {
    SUBCASE("stable closed form") {
        auto pair = sonine_pair(BernsteinSymbol::stable(0.5));
        CHECK(pair.kappa(1.0) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
        CHECK(pair.ell(1.0) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
        CHECK(pair.convolution_at_one() == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("unit convolution across stable orders") {
        for (double alpha : {0.25, 0.5, 0.75}) {
            auto pair = sonine_pair(BernsteinSymbol::stable(alpha));
            CHECK(pair.convolution_at_one() == doctest::Approx(1.0).epsilon(1e-6));
            // Beta-integral identity for the closed-form pair
            double beta = std::tgamma(alpha) * std::tgamma(1.0 - alpha);
            CHECK(beta * std::sin(alpha * std::numbers::pi) / std::numbers::pi ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("gamma symbol through the numeric potential density") {
        auto pair = sonine_pair(BernsteinSymbol::gamma(1.0, 2.0));
        CHECK(pair.convolution_at_one() == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("unsupported symbols are rejected") {
        CHECK_THROWS_AS(sonine_pair(BernsteinSymbol::caputo_fabrizio(0.5)),
                        std::invalid_argument);
        CHECK_THROWS_AS(sonine_pair(BernsteinSymbol::linear()), std::invalid_argument);
    }
}

TEST_CASE("SampledFunction plumbing") {
    auto u = sampled([](double s) { return s * s; }, 1.0, 100);
    CHECK(u.index_of(0.5) == 50);
    CHECK_THROWS_AS(u.index_of(0.505), std::invalid_argument);
    CHECK(u.derivative_at(50) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(SampledFunction(0.0, {1.0, 2.0}), std::invalid_argument);
}
