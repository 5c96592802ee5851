#include "nk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nk/quadrature.hpp"
#include "nk/special.hpp"
#include "nk/subordinate.hpp"

namespace nk {

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr double kGL8Nodes[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
constexpr double kGL8Weights[4] = {0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};

void gl_nodes(double a, double b, int panels, std::vector<double>& xs,
              std::vector<double>& ws) {
    xs.clear();
    ws.clear();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int i = 0; i < 4; ++i) {
            xs.push_back(c - 0.5 * h * kGL8Nodes[i]);
            ws.push_back(0.5 * h * kGL8Weights[i]);
            xs.push_back(c + 0.5 * h * kGL8Nodes[i]);
            ws.push_back(0.5 * h * kGL8Weights[i]);
        }
    }
}

}  // namespace

EigenBasis EigenBasis::interval(double length, BoundaryCondition bc,
                                int truncation) {
    if (!(length > 0.0) || truncation < 1)
        throw std::invalid_argument("EigenBasis::interval: bad parameters");
    EigenBasis basis;
    basis.dim_ = 1;
    basis.len_[0] = length;
    basis.bc_ = bc;
    basis.per_axis_[0] = truncation;
    const int k0 = (bc == BoundaryCondition::Dirichlet) ? 1 : 0;
    for (int k = k0; k < k0 + truncation; ++k) {
        const double w = k * std::numbers::pi / length;
        basis.mu_.push_back(w * w);
        basis.modes_.push_back({k, 0});
    }
    return basis;
}

EigenBasis EigenBasis::rectangle(double a, double b, BoundaryCondition bc,
                                 int per_axis) {
    if (!(a > 0.0) || !(b > 0.0) || per_axis < 1)
        throw std::invalid_argument("EigenBasis::rectangle: bad parameters");
    EigenBasis basis;
    basis.dim_ = 2;
    basis.len_[0] = a;
    basis.len_[1] = b;
    basis.bc_ = bc;
    basis.per_axis_[0] = per_axis;
    basis.per_axis_[1] = per_axis;
    const int k0 = (bc == BoundaryCondition::Dirichlet) ? 1 : 0;
    for (int i = k0; i < k0 + per_axis; ++i) {
        for (int j = k0; j < k0 + per_axis; ++j) {
            const double wx = i * std::numbers::pi / a;
            const double wy = j * std::numbers::pi / b;
            basis.mu_.push_back(wx * wx + wy * wy);
            basis.modes_.push_back({i, j});
        }
    }
    // nondecreasing eigenvalues
    std::vector<std::size_t> order(basis.mu_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
        return basis.mu_[p] < basis.mu_[q];
    });
    std::vector<double> mu2(basis.mu_.size());
    std::vector<std::pair<int, int>> modes2(basis.modes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        mu2[i] = basis.mu_[order[i]];
        modes2[i] = basis.modes_[order[i]];
    }
    basis.mu_ = std::move(mu2);
    basis.modes_ = std::move(modes2);
    return basis;
}

double EigenBasis::axis_eval(int axis, int mode, double x) const {
    const double L = len_[axis];
    if (bc_ == BoundaryCondition::Dirichlet)
        return std::sqrt(2.0 / L) * std::sin(mode * std::numbers::pi * x / L);
    if (mode == 0) return std::sqrt(1.0 / L);
    return std::sqrt(2.0 / L) * std::cos(mode * std::numbers::pi * x / L);
}

double EigenBasis::eval(std::size_t k, double x, double y) const {
    const auto& m = modes_[k];
    double v = axis_eval(0, m.first, x);
    if (dim_ == 2) v *= axis_eval(1, m.second, y);
    return v;
}

std::vector<double> EigenBasis::project(
    const std::function<double(double)>& f) const {
    if (dim_ != 1)
        throw std::invalid_argument("project: 1-d projection on a 2-d basis");
    std::vector<double> xs, ws;
    const int panels = std::max(32, 2 * per_axis_[0]);
    gl_nodes(0.0, len_[0], panels, xs, ws);
    std::vector<double> fv(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fv[i] = f(xs[i]);
    std::vector<double> out(size(), 0.0);
    for (std::size_t k = 0; k < size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            acc += ws[i] * fv[i] * eval(k, xs[i]);
        out[k] = acc;
    }
    return out;
}

std::vector<double> EigenBasis::project2(
    const std::function<double(double, double)>& f) const {
    if (dim_ != 2)
        throw std::invalid_argument("project2: 2-d projection on a 1-d basis");
    std::vector<double> xs, wxs, ys, wys;
    gl_nodes(0.0, len_[0], std::max(16, 2 * per_axis_[0]), xs, wxs);
    gl_nodes(0.0, len_[1], std::max(16, 2 * per_axis_[1]), ys, wys);
    // tabulate f once, then contract axis by axis
    std::vector<double> fv(xs.size() * ys.size());
    for (std::size_t p = 0; p < xs.size(); ++p)
        for (std::size_t q = 0; q < ys.size(); ++q)
            fv[p * ys.size() + q] = f(xs[p], ys[q]);
    const int k0 = (bc_ == BoundaryCondition::Dirichlet) ? 1 : 0;
    const int nx = per_axis_[0];
    // g[i][q] = sum_p wx_p f(p,q) a_i(x_p)
    std::vector<double> g(static_cast<std::size_t>(nx) * ys.size(), 0.0);
    for (int i = 0; i < nx; ++i) {
        for (std::size_t p = 0; p < xs.size(); ++p) {
            const double a = wxs[p] * axis_eval(0, k0 + i, xs[p]);
            if (a == 0.0) continue;
            const double* row = &fv[p * ys.size()];
            double* grow = &g[static_cast<std::size_t>(i) * ys.size()];
            for (std::size_t q = 0; q < ys.size(); ++q) grow[q] += a * row[q];
        }
    }
    std::vector<double> out(size(), 0.0);
    for (std::size_t k = 0; k < size(); ++k) {
        const auto& m = modes_[k];
        const double* grow =
            &g[static_cast<std::size_t>(m.first - k0) * ys.size()];
        double acc = 0.0;
        for (std::size_t q = 0; q < ys.size(); ++q)
            acc += wys[q] * grow[q] * axis_eval(1, m.second, ys[q]);
        out[k] = acc;
    }
    return out;
}

CoefficientVector apply_phi_laplacian(const BernsteinSymbol& sym,
                                      const EigenBasis& basis,
                                      const CoefficientVector& coeffs) {
    if (coeffs.size() != basis.size())
        throw std::invalid_argument("apply_phi_laplacian: size mismatch");
    CoefficientVector out(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        out[k] = sym.compose_multiplier(basis.eigenvalue(k)) * coeffs[k];
    return out;
}

double synthesize(const EigenBasis& basis, const CoefficientVector& coeffs,
                  double x, double y) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        acc += coeffs[k] * basis.eval(k, x, y);
    return acc;
}

std::vector<double> synthesize_grid(const EigenBasis& basis,
                                    const CoefficientVector& coeffs,
                                    const std::vector<double>& xgrid) {
    std::vector<double> out(xgrid.size());
    for (std::size_t i = 0; i < xgrid.size(); ++i)
        out[i] = synthesize(basis, coeffs, xgrid[i]);
    return out;
}

double RelaxationTable::value(const BernsteinSymbol& sym, double mu, double t,
                              const LaplaceInverter& inv) {
    // exact-bits key: nearby parameters must not collide
    std::ostringstream os;
    os << static_cast<int>(sym.kind()) << '|' << std::hexfloat << sym.param1()
       << '|' << sym.param2() << '|' << mu << '|' << t;
    const std::string key = os.str();
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    double v = relaxation(sym, mu, t, inv, nullptr);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, v);
    return v;
}

double relaxation(const BernsteinSymbol& sym, double mu, double t,
                  const LaplaceInverter& inv, RelaxationTable* table) {
    if (t < 0.0) throw std::domain_error("relaxation: t < 0");
    if (t == 0.0) return 1.0;
    if (mu == 0.0) return 1.0;
    if (table) return table->value(sym, mu, t, inv);
    switch (sym.kind()) {
        case SymbolKind::Linear:
            return std::exp(-mu * t);
        case SymbolKind::Stable:
            return mittag_leffler(sym.alpha(), -mu * std::pow(t, sym.alpha()));
        default: {
            ComplexFn tr = [&sym, mu](std::complex<double> lam) {
                auto phi = sym.phi(lam);
                return phi / lam / (phi + mu);
            };
            return inv.invert(tr, t);
        }
    }
}

CoefficientVector solve_space_nonlocal(const BernsteinSymbol& sym,
                                       const EigenBasis& basis,
                                       const CoefficientVector& coeffs, double t) {
    if (t < 0.0) throw std::domain_error("solve_space_nonlocal: t < 0");
    CoefficientVector out(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        out[k] = coeffs[k] * std::exp(-t * sym.phi(basis.eigenvalue(k)));
    return out;
}

CoefficientVector solve_time_nonlocal(const BernsteinSymbol& sym,
                                      const EigenBasis& basis,
                                      const CoefficientVector& coeffs, double t,
                                      const LaplaceInverter& inv,
                                      RelaxationTable* table) {
    if (t < 0.0) throw std::domain_error("solve_time_nonlocal: t < 0");
    CoefficientVector out(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0.0) {
            out[k] = 0.0;
            continue;
        }
        try {
            out[k] = coeffs[k] * relaxation(sym, basis.eigenvalue(k), t, inv, table);
        } catch (const NumericError& e) {
            throw NumericError("solve_time_nonlocal: mode " + std::to_string(k) +
                               ": " + e.what());
        }
    }
    return out;
}

CoefficientVector subordination_quadrature(const EigenBasis& basis,
                                           const BernsteinSymbol& sym,
                                           const CoefficientVector& coeffs,
                                           double t, const LaplaceInverter& inv) {
    if (!(t > 0.0))
        throw std::domain_error("subordination_quadrature: t must be > 0");
    if (sym.kind() == SymbolKind::Linear) {
        // L_t concentrates at s = t
        CoefficientVector out(coeffs.size());
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            out[k] = coeffs[k] * std::exp(-basis.eigenvalue(k) * t);
        return out;
    }
    double mu_pos = 0.0;
    bool has_zero_mode = false;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis.eigenvalue(k) > 0.0) {
            mu_pos = basis.eigenvalue(k);
            break;
        }
        has_zero_mode = true;
    }
    // integrand bounded by e^{-mu s} except for a Neumann zero mode, which
    // needs the full mass of l(t, .); grow the horizon until that mass is in
    double s_max = std::max(mu_pos > 0.0 ? 40.0 / mu_pos : 4.0 * t, 4.0 * t);
    std::vector<double> xs, ws, lv;
    for (int attempt = 0; attempt < 8; ++attempt) {
        gl_nodes(0.0, s_max, 256, xs, ws);
        lv.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            lv[i] = density_l(sym, t, xs[i], inv);
        if (!has_zero_mode) break;
        double mass = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) mass += ws[i] * lv[i];
        if (mass > 1.0 - 1e-8) break;
        s_max *= 2.0;
    }
    CoefficientVector out(coeffs.size(), 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0.0) continue;
        double w = 0.0;
        const double mu = basis.eigenvalue(k);
        for (std::size_t i = 0; i < xs.size(); ++i)
            w += ws[i] * std::exp(-mu * xs[i]) * lv[i];
        out[k] = coeffs[k] * w;
    }
    return out;
}

CoefficientVector solve_elliptic(const BernsteinSymbol& sym,
                                 const EigenBasis& basis,
                                 const CoefficientVector& coeffs,
                                 EllipticMode mode) {
    CoefficientVector out(coeffs.size());
    if (mode == EllipticMode::Subordinated) {
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            double phik = sym.phi(basis.eigenvalue(k));
            if (!(phik > 0.0))
                throw std::domain_error("solve_elliptic: Phi(mu_k) must be positive");
            out[k] = coeffs[k] / phik;
        }
        return out;
    }
    auto p0 = sym.phi_prime_at_zero();
    if (!p0.is_finite())
        throw std::domain_error(
            "solve_elliptic: classical mode needs finite Phi'(0+)");
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        double mu = basis.eigenvalue(k);
        if (!(mu > 0.0))
            throw std::domain_error("solve_elliptic: zero eigenvalue (Neumann mode)");
        out[k] = p0.value() * coeffs[k] / mu;
    }
    return out;
}

namespace {

std::vector<double> convolve_density(
    const BernsteinSymbol& sym, const std::function<double(double)>& f, double t,
    const std::vector<double>& xgrid, bool use_l) {
    std::vector<double> out(xgrid.size(), 0.0);
    for (std::size_t i = 0; i < xgrid.size(); ++i) {
        const double x = xgrid[i];
        if (!(x > 0.0)) {
            out[i] = 0.0;
            continue;
        }
        auto integrand = [&](double y) {
            double dens = use_l ? density_l(sym, t, y) : density_h(sym, t, y);
            return f(x - y) * dens;
        };
        // densities may be singular near 0 (stable h is not, but l can peak);
        // tanh-sinh handles both ends
        out[i] = tanh_sinh(integrand, 0.0, x, 1e-9);
    }
    return out;
}

}  // namespace

std::vector<double> solve_hf(const BernsteinSymbol& sym,
                             const std::function<double(double)>& f, double t,
                             const std::vector<double>& xgrid) {
    if (!(t > 0.0)) throw std::domain_error("solve_hf: t must be > 0");
    return convolve_density(sym, f, t, xgrid, false);
}

std::vector<double> solve_lf(const BernsteinSymbol& sym,
                             const std::function<double(double)>& f, double t,
                             const std::vector<double>& xgrid) {
    if (!(t > 0.0)) throw std::domain_error("solve_lf: t must be > 0");
    return convolve_density(sym, f, t, xgrid, true);
}

}  // namespace nk
