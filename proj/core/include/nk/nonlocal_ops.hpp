#pragma once

#include <functional>
#include <vector>

#include "nk/symbols.hpp"

namespace nk {

// Function sampled on a uniform grid starting at 0; derivative values are
// filled by second-order finite differences when absent.
class SampledFunction {
public:
    SampledFunction(double step, std::vector<double> values);
    SampledFunction(double step, std::vector<double> values,
                    std::vector<double> derivatives);

    static SampledFunction from_callable(const std::function<double(double)>& f,
                                         double step, std::size_t count);

    double step() const { return step_; }
    std::size_t size() const { return values_.size(); }
    double grid_at(std::size_t i) const { return step_ * static_cast<double>(i); }
    double value_at(std::size_t i) const { return values_[i]; }
    double derivative_at(std::size_t i) const { return derivs_[i]; }

    // index of a grid point; throws if t is not on the grid
    std::size_t index_of(double t) const;

private:
    void fill_derivatives();
    double step_;
    std::vector<double> values_;
    std::vector<double> derivs_;
};

// Convolution of u' with the Levy tail: int_0^t u'(t-s) phibar(s) ds.
// Product integration with exact tail moments per subinterval, so the
// integrable kernel singularity at 0 costs no accuracy.
double caputo_dzherbashian(const BernsteinSymbol& sym, const SampledFunction& u,
                           double t);

// Marchaud difference form int_0^inf (u(x) - u(x-y)) phi(dy) for u bounded
// and vanishing on (-inf, 0]. Singular head handled by local linearization.
double marchaud_minus(const BernsteinSymbol& sym,
                      const std::function<double(double)>& u, double x);

// Riemann-Liouville form d/dx int_0^x u(x-y) phibar(y) dy via differentiated
// product integration.
double riemann_liouville_minus(const BernsteinSymbol& sym,
                               const std::function<double(double)>& u, double x);

// Exponential-kernel operator (M(alpha)=1, base point 0):
// (1/(1-alpha)) int_0^x u'(s) exp(-alpha (x-s)/(1-alpha)) ds, one O(n) pass.
double caputo_fabrizio_op(double alpha, const SampledFunction& u, double x);

// Associated kernel pair: kappa is the potential density of H, ell the
// boundary density of L; their unit convolution identity is checked by the
// test battery.
struct SoninePair {
    std::function<double(double)> kappa;
    std::function<double(double)> ell;
    BernsteinSymbol symbol;

    // int_0^1 kappa(z) ell(1-z) dz, evaluated with endpoint-singularity-aware
    // quadrature; equals 1 for a valid pair.
    double convolution_at_one() const;
};

SoninePair sonine_pair(const BernsteinSymbol& sym);

}  // namespace nk
