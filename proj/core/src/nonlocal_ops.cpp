#include "nk/nonlocal_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nk/laplace.hpp"
#include "nk/quadrature.hpp"

namespace nk {

SampledFunction::SampledFunction(double step, std::vector<double> values)
    : step_(step), values_(std::move(values)) {
    if (!(step_ > 0.0) || values_.size() < 2)
        throw std::invalid_argument("SampledFunction: need step > 0 and >= 2 samples");
    fill_derivatives();
}

SampledFunction::SampledFunction(double step, std::vector<double> values,
                                 std::vector<double> derivatives)
    : step_(step), values_(std::move(values)), derivs_(std::move(derivatives)) {
    if (!(step_ > 0.0) || values_.size() < 2 || derivs_.size() != values_.size())
        throw std::invalid_argument("SampledFunction: inconsistent sizes");
}

SampledFunction SampledFunction::from_callable(
    const std::function<double(double)>& f, double step, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = f(step * static_cast<double>(i));
    return SampledFunction(step, std::move(v));
}

void SampledFunction::fill_derivatives() {
    const std::size_t n = values_.size();
    derivs_.resize(n);
    const double h = step_;
    // second order: central interior, one-sided ends
    derivs_[0] = (-3.0 * values_[0] + 4.0 * values_[1] - values_[2 < n ? 2 : 1]) /
                 (2.0 * h);
    if (n == 2) derivs_[0] = (values_[1] - values_[0]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i)
        derivs_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * h);
    if (n >= 3)
        derivs_[n - 1] =
            (3.0 * values_[n - 1] - 4.0 * values_[n - 2] + values_[n - 3]) / (2.0 * h);
    else
        derivs_[n - 1] = (values_[1] - values_[0]) / h;
}

std::size_t SampledFunction::index_of(double t) const {
    double pos = t / step_;
    auto i = static_cast<std::size_t>(std::llround(pos));
    if (i >= values_.size() || std::abs(pos - static_cast<double>(i)) > 1e-6)
        throw std::invalid_argument("SampledFunction: t is not a grid point");
    return i;
}

// ---------------------------------------------------------------------------

double caputo_dzherbashian(const BernsteinSymbol& sym, const SampledFunction& u,
                           double t) {
    if (t == 0.0) return 0.0;
    if (sym.kind() == SymbolKind::Linear) {
        // ordinary derivative
        return u.derivative_at(u.index_of(t));
    }
    const std::size_t m = u.index_of(t);
    if (m == 0) return 0.0;
    const double h = u.step();
    double acc = 0.0;
    // separated product integration: per cell, exact increment of u times the
    // exact kernel moment. Robust at both singular ends (kernel blowup at
    // s = 0, possible u' blowup at s = t).
    for (std::size_t j = 0; j < m; ++j) {
        const double a = h * static_cast<double>(j);
        const double b = a + h;
        const double du = u.value_at(m - j) - u.value_at(m - j - 1);
        acc += du * sym.tail_moment0(a, b) / h;
    }
    return acc;
}

double marchaud_minus(const BernsteinSymbol& sym,
                      const std::function<double(double)>& u, double x) {
    if (!(x > 0.0)) throw std::domain_error("marchaud_minus: x must be > 0");
    const double ux = u(x);
    if (sym.kind() == SymbolKind::Linear) {
        // pure drift symbol acts as d/dx
        const double h = 1e-6 * std::max(1.0, x);
        return (u(x + h) - u(x - h)) / (2.0 * h);
    }
    if (!sym.has_levy_density()) {
        // finite-activity law with survival kernel: tail integration by parts
        // gives rate * [ int_0^x u'(x-z) S(z) dz + u(0+) S(x) ]
        const double rate = sym.jump_rate();
        auto integrand = [&](double z) {
            const double h = 1e-6;
            double up = (u(x - z + h) - u(x - z - h)) / (2.0 * h);
            return up * sym.levy_tail(z) / rate;
        };
        double head = integrate(integrand, 0.0, x, 1e-11, 1e-10);
        double u0 = u(1e-9);
        return rate * head + u0 * sym.levy_tail(x);
    }
    // singular head: u(x) - u(x-y) ~ u'(x) y, first moment of the measure on
    // [0, head]; levy first moment = m0 of the tail minus boundary terms
    const double head = std::min(1e-4, 0.1 * x);
    const double dh = 1e-6 * std::max(1.0, x);
    const double up_x = (u(x + dh) - u(x - dh)) / (2.0 * dh);
    // int_0^h y phi(dy) = int_0^h (phibar(y) - phibar(h)) dy
    double head_first_moment = sym.tail_moment0(0.0, head) - head * sym.levy_tail(head);
    double acc = up_x * head_first_moment;
    // body on [head, x]
    acc += integrate(
        [&](double y) { return (ux - u(x - y)) * sym.levy_density(y); }, head, x,
        1e-11, 1e-10);
    // tail: u vanishes left of 0, so the difference is exactly u(x)
    acc += ux * sym.levy_tail(x);
    return acc;
}

double riemann_liouville_minus(const BernsteinSymbol& sym,
                               const std::function<double(double)>& u, double x) {
    if (!(x > 0.0)) throw std::domain_error("riemann_liouville_minus: x must be > 0");
    if (sym.kind() == SymbolKind::Linear) {
        const double h = 1e-6 * std::max(1.0, x);
        return (u(x + h) - u(x - h)) / (2.0 * h);
    }
    // G(x) = int_0^x u(x-y) phibar(y) dy by product integration on a fine
    // grid, then a central difference of G
    auto conv = [&](double xx) {
        const int n = 4096;
        const double h = xx / n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = h * j;
            const double b = a + h;
            const double ua = u(xx - a);
            const double ub = u(xx - b);
            const double m0 = sym.tail_moment0(a, b);
            const double m1 = sym.tail_moment1(a, b);
            acc += ua * m0 + (ub - ua) / h * (m1 - a * m0);
        }
        return acc;
    };
    const double dx = std::max(1e-4, 1e-4 * x);
    return (conv(x + dx) - conv(x - dx)) / (2.0 * dx);
}

double caputo_fabrizio_op(double alpha, const SampledFunction& u, double x) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("caputo_fabrizio_op: alpha must be in (0,1)");
    const std::size_t m = u.index_of(x);
    const double h = u.step();
    const double theta = alpha / (1.0 - alpha);
    const double decay = std::exp(-theta * h);
    // with tau = x_k - s: E0 = int_0^h e^{-theta tau} dtau, E1 = int tau e^{...}
    const double e0 = (1.0 - decay) / theta;
    const double e1 = (e0 - h * decay) / theta;
    // J_k = int_0^{x_k} u'(s) e^{-theta(x_k - s)} ds, u' linear per cell;
    // the recurrence is exact for piecewise-linear u'
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        const double up_a = u.derivative_at(k - 1);
        const double up_b = u.derivative_at(k);
        acc = acc * decay + up_a * e0 + (up_b - up_a) * (e0 - e1 / h);
    }
    return acc / (1.0 - alpha);
}

// ---------------------------------------------------------------------------

namespace {

// potential density via the transform 1/Phi(lambda); valid when Phi grows
// without bound (no atom at zero)
std::function<double(double)> numeric_kappa(const BernsteinSymbol& sym) {
    return [sym](double x) {
        ComplexFn tr = [&sym](std::complex<double> lam) { return 1.0 / sym.phi(lam); };
        return talbot_invert(tr, x, 32);
    };
}

}  // namespace

SoninePair sonine_pair(const BernsteinSymbol& sym) {
    if (sym.kind() == SymbolKind::Stable) {
        const double alpha = sym.alpha();
        return SoninePair{
            [alpha](double x) { return std::pow(x, alpha - 1.0) / std::tgamma(alpha); },
            [alpha](double t) {
                return std::pow(t, -alpha) / std::tgamma(1.0 - alpha);
            },
            sym};
    }
    // numeric route requires Phi(lambda) -> infinity (otherwise the potential
    // measure has an atom at zero) and excludes pure drift
    switch (sym.kind()) {
        case SymbolKind::Gamma:
        case SymbolKind::Tempered:
        case SymbolKind::TelegraphSum: {
            auto kappa = numeric_kappa(sym);
            BernsteinSymbol copy = sym;
            return SoninePair{kappa, [copy](double t) { return copy.levy_tail(t); }, sym};
        }
        default:
            throw std::invalid_argument(
                "sonine_pair: unsupported symbol (bounded Phi or degenerate law)");
    }
}

double SoninePair::convolution_at_one() const {
    auto f = [this](double z) { return kappa(z) * ell(1.0 - z); };
    return tanh_sinh(f, 0.0, 1.0, 1e-12);
}

}  // namespace nk
