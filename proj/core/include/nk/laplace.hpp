#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace nk {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;
using RealFn = std::function<double(double)>;

// Numerical inverse Laplace transform. Talbot (fixed contour, complex
// evaluations) is the default; Gaver-Stehfest needs only real evaluations
// but fewer reliable digits.
struct LaplaceInverter {
    enum class Method { Talbot, GaverStehfest };

    Method method = Method::Talbot;
    int nodes = 32;

    LaplaceInverter() = default;
    LaplaceInverter(Method m, int n);

    double invert(const ComplexFn& transform, double t) const;
    double invert_real(const RealFn& transform, double t) const;  // Gaver-Stehfest only
};

// Fixed-Talbot rule with M nodes.
double talbot_invert(const ComplexFn& transform, double t, int node_count = 32);

// Gaver-Stehfest with even N terms (N <= 18 in double precision).
double gaver_stehfest_invert(const RealFn& transform, double t, int node_count = 14);

}  // namespace nk
