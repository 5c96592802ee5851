#pragma once

#include <functional>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "nk/laplace.hpp"
#include "nk/symbols.hpp"

namespace nk {

enum class BoundaryCondition { Dirichlet, Neumann };

// Analytic eigenpairs of -Laplacian on an interval (0, L) or rectangle
// (0,a)x(0,b), generator convention G = Laplacian (no 1/2 factor).
class EigenBasis {
public:
    static EigenBasis interval(double length, BoundaryCondition bc,
                               int truncation = 64);
    static EigenBasis rectangle(double a, double b, BoundaryCondition bc,
                                int per_axis = 32);

    int dim() const { return dim_; }
    std::size_t size() const { return mu_.size(); }
    double eigenvalue(std::size_t k) const { return mu_[k]; }
    BoundaryCondition bc() const { return bc_; }
    double length() const { return len_[0]; }
    double length_y() const { return len_[1]; }

    // eigenfunction value; y ignored for dim == 1
    double eval(std::size_t k, double x, double y = 0.0) const;

    // L2 inner products (f, e_k) for all modes, composite Gauss-Legendre
    std::vector<double> project(const std::function<double(double)>& f) const;
    std::vector<double> project2(
        const std::function<double(double, double)>& f) const;

private:
    EigenBasis() = default;
    double axis_eval(int axis, int mode, double x) const;

    int dim_ = 1;
    double len_[2] = {1.0, 1.0};
    BoundaryCondition bc_ = BoundaryCondition::Dirichlet;
    int per_axis_[2] = {0, 0};
    std::vector<double> mu_;
    std::vector<std::pair<int, int>> modes_;  // axis mode numbers
};

using CoefficientVector = std::vector<double>;

// multiply coefficient k by Phi(mu_k)
CoefficientVector apply_phi_laplacian(const BernsteinSymbol& sym,
                                      const EigenBasis& basis,
                                      const CoefficientVector& coeffs);

// value of sum_k c_k e_k at x (or (x,y))
double synthesize(const EigenBasis& basis, const CoefficientVector& coeffs,
                  double x, double y = 0.0);

std::vector<double> synthesize_grid(const EigenBasis& basis,
                                    const CoefficientVector& coeffs,
                                    const std::vector<double>& xgrid);

// Shared cache for per-mode relaxation values r(sym, mu, t); safe to use from
// several worker threads.
class RelaxationTable {
public:
    double value(const BernsteinSymbol& sym, double mu, double t,
                 const LaplaceInverter& inv);

private:
    std::mutex mutex_;
    std::unordered_map<std::string, double> cache_;
};

// Mode-wise relaxation for the time-non-local problem: the inverse transform
// of (Phi(lam)/lam) / (Phi(lam) + mu) at t. Closed forms: Linear -> e^{-mu t},
// Stable -> E_alpha(-mu t^alpha).
double relaxation(const BernsteinSymbol& sym, double mu, double t,
                  const LaplaceInverter& inv = {},
                  RelaxationTable* table = nullptr);

// u(t) coefficients for d/dt u = -Phi(-G) u: c_k e^{-t Phi(mu_k)}.
CoefficientVector solve_space_nonlocal(const BernsteinSymbol& sym,
                                       const EigenBasis& basis,
                                       const CoefficientVector& coeffs, double t);

// u(t) coefficients for the time-non-local problem D^Phi_t u = G u.
CoefficientVector solve_time_nonlocal(const BernsteinSymbol& sym,
                                      const EigenBasis& basis,
                                      const CoefficientVector& coeffs, double t,
                                      const LaplaceInverter& inv = {},
                                      RelaxationTable* table = nullptr);

// Same solution through the subordination route: coefficients weighted by
// integral of e^{-mu_k s} l(t, s) ds.
CoefficientVector subordination_quadrature(const EigenBasis& basis,
                                           const BernsteinSymbol& sym,
                                           const CoefficientVector& coeffs,
                                           double t,
                                           const LaplaceInverter& inv = {});

enum class EllipticMode { Subordinated, Classical };

// Subordinated: Phi(-G) u = f  ->  c_k / Phi(mu_k).
// Classical:    -G u = Phi'(0) f -> Phi'(0) c_k / mu_k (finite Phi'(0) only).
CoefficientVector solve_elliptic(const BernsteinSymbol& sym,
                                 const EigenBasis& basis,
                                 const CoefficientVector& coeffs,
                                 EllipticMode mode);

// First-order non-local problems on the half line:
//   h_f(t,x) = int_0^x f(x-y) h(t,y) dy,  l_f(t,x) = int_0^x f(x-y) l(t,y) dy.
std::vector<double> solve_hf(const BernsteinSymbol& sym,
                             const std::function<double(double)>& f, double t,
                             const std::vector<double>& xgrid);
std::vector<double> solve_lf(const BernsteinSymbol& sym,
                             const std::function<double(double)>& f, double t,
                             const std::vector<double>& xgrid);

}  // namespace nk
