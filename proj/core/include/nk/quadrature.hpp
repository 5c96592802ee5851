#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace nk {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// G7-K15 nodes/weights on [-1,1].
inline constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

inline constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

inline constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

template <class T>
double norm_of(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>)
        return std::abs(v);
    else
        return std::abs(static_cast<double>(v));
}

template <class F, class T = std::invoke_result_t<F, double>>
void gk15(F&& f, double a, double b, T& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T gauss = kGaussWeights[0] * fc;
    kronrod = kKronrodWeights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double x = h * kKronrodNodes[i];
        T fsum = f(c - x) + f(c + x);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= h;
    gauss *= h;
    err = norm_of<T>(kronrod - gauss);
    // standard Kronrod error sharpening
    err = std::min(err, std::pow(200.0 * err, 1.5));
}

}  // namespace detail

// Adaptive bisected G7-K15. Works for real or complex integrands.
template <class F, class T = std::invoke_result_t<F, double>>
T integrate(F&& f, double a, double b, double abs_tol = 1e-10,
            double rel_tol = 1e-10, int max_depth = 50) {
    struct Frame {
        double a, b;
        int depth;
    };
    T total{};
    double tol_scale = 1.0;
    std::vector<Frame> stack{{a, b, 0}};
    // first pass estimate to scale the relative tolerance
    {
        T coarse;
        double e;
        detail::gk15(f, a, b, coarse, e);
        tol_scale = std::max(1.0, detail::norm_of<T>(coarse));
    }
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        T est;
        double err;
        detail::gk15(f, fr.a, fr.b, est, err);
        if (!std::isfinite(err) || !std::isfinite(detail::norm_of<T>(est)))
            throw QuadratureError("integrate: non-finite integrand");
        double local_tol =
            std::max(abs_tol, rel_tol * tol_scale) * (fr.b - fr.a) / (b - a);
        if (err <= local_tol || fr.depth >= max_depth) {
            if (fr.depth >= max_depth && err > 1e3 * local_tol)
                throw QuadratureError("integrate: adaptive refinement failed");
            total += est;
        } else {
            double m = 0.5 * (fr.a + fr.b);
            stack.push_back({fr.a, m, fr.depth + 1});
            stack.push_back({m, fr.b, fr.depth + 1});
        }
    }
    return total;
}

// Tanh-sinh (double exponential) rule; robust for integrable endpoint
// singularities such as x^{a-1} or log terms.
template <class F, class T = std::invoke_result_t<F, double>>
T tanh_sinh(F&& f, double a, double b, double tol = 1e-12) {
    const double half = 0.5 * (b - a);
    const double t_max = 6.5;  // abscissae saturate in double well before this
    auto eval = [&](double t) -> T {
        double u = 0.5 * std::numbers::pi * std::sinh(t);
        // distances to the endpoints, computed without cancellation so that
        // endpoint singularities see relatively accurate abscissae
        double da = half * 2.0 / (1.0 + std::exp(-2.0 * u));   // xx - a
        double db = half * 2.0 / (1.0 + std::exp(2.0 * u));    // b - xx
        double w = 0.5 * std::numbers::pi * std::cosh(t) /
                   std::pow(std::cosh(u), 2);
        double xx = (da < db) ? a + da : b - db;
        if (xx <= a || xx >= b || w == 0.0) return T{};
        return w * f(xx);
    };

    double h = 1.0;
    T sum = eval(0.0);
    for (double t = h; t < t_max; t += h) sum += eval(t) + eval(-t);
    T integral = h * half * sum;

    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        T add{};
        for (double t = h; t < t_max; t += 2.0 * h) add += eval(t) + eval(-t);
        sum += add;
        T refined = h * half * sum;
        double change = detail::norm_of<T>(refined - integral);
        integral = refined;
        if (level >= 4 &&
            change <= tol * std::max(1.0, detail::norm_of<T>(integral)))
            return integral;
    }
    return integral;
}

// Integral over [a, infinity) by interval doubling until the tail is
// negligible. Requires an eventually decaying integrand.
template <class F, class T = std::invoke_result_t<F, double>>
T integrate_to_infinity(F&& f, double a, double abs_tol = 1e-10,
                        double rel_tol = 1e-9) {
    T total{};
    double left = a;
    double width = 1.0;
    int quiet = 0;
    for (int i = 0; i < 64; ++i) {
        T piece = integrate(f, left, left + width, abs_tol * 0.1, rel_tol * 0.1);
        total += piece;
        left += width;
        width *= 2.0;
        double scale = std::max(1.0, detail::norm_of<T>(total));
        if (detail::norm_of<T>(piece) < std::max(abs_tol, rel_tol * scale))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 2) return total;
    }
    throw QuadratureError("integrate_to_infinity: no tail decay detected");
}

}  // namespace nk
