#include "nk/laplace.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace nk {

LaplaceInverter::LaplaceInverter(Method m, int n) : method(m), nodes(n) {
    if (nodes < 8) throw std::invalid_argument("LaplaceInverter: need >= 8 nodes");
    if (method == Method::GaverStehfest && nodes % 2 != 0)
        throw std::invalid_argument("LaplaceInverter: Gaver-Stehfest needs even node count");
}

double talbot_invert(const ComplexFn& transform, double t, int node_count) {
    if (!(t > 0.0)) throw std::domain_error("talbot_invert: t must be positive");
    const int m = node_count;
    const double r = 2.0 * m / (5.0 * t);
    double sum = 0.5 * std::exp(r * t) * transform(std::complex<double>(r, 0.0)).real();
    for (int k = 1; k < m; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const std::complex<double> term =
            std::exp(s * t) * transform(s) * std::complex<double>(1.0, sigma);
        sum += term.real();
    }
    double result = sum * r / m;
    if (!std::isfinite(result))
        throw NumericError("talbot_invert: overflow or invalid transform value");
    return result;
}

double gaver_stehfest_invert(const RealFn& transform, double t, int node_count) {
    if (!(t > 0.0)) throw std::domain_error("gaver_stehfest_invert: t must be positive");
    if (node_count % 2 != 0 || node_count < 8 || node_count > 18)
        throw std::invalid_argument("gaver_stehfest_invert: N must be even in [8,18]");
    const int n = node_count;
    const int half = n / 2;
    // factorials up to 18! are exact in double
    std::vector<double> fact(n + 1, 1.0);
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;

    const double ln2_t = std::numbers::ln2 / t;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        double w = 0.0;
        const int j0 = (k + 1) / 2;
        const int j1 = std::min(k, half);
        for (int j = j0; j <= j1; ++j) {
            double num = std::pow(static_cast<double>(j), half) * fact[2 * j];
            double den = fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] *
                         fact[2 * j - k];
            w += num / den;
        }
        if ((k + half) % 2 != 0) w = -w;
        sum += w * transform(k * ln2_t);
    }
    double result = ln2_t * sum;
    if (!std::isfinite(result))
        throw NumericError("gaver_stehfest_invert: invalid transform value");
    return result;
}

double LaplaceInverter::invert(const ComplexFn& transform, double t) const {
    if (method == Method::Talbot) return talbot_invert(transform, t, nodes);
    RealFn real_view = [&transform](double lam) {
        return transform(std::complex<double>(lam, 0.0)).real();
    };
    return gaver_stehfest_invert(real_view, t, nodes);
}

double LaplaceInverter::invert_real(const RealFn& transform, double t) const {
    // Talbot needs genuinely complex evaluations; real-only transforms always
    // go through Gaver-Stehfest.
    int n = (method == Method::GaverStehfest) ? nodes : 14;
    return gaver_stehfest_invert(transform, t, n);
}

}  // namespace nk
