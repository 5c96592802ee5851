#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "nk/rng.hpp"

namespace nk {

// Extended nonnegative real: either a finite value or +infinity. Downstream
// delayed/rushed logic branches on finiteness, so the marker is explicit.
class ExtendedReal {
public:
    static ExtendedReal finite(double v) { return ExtendedReal(v, true); }
    static ExtendedReal infinity() { return ExtendedReal(0.0, false); }

    bool is_finite() const { return finite_; }
    double value() const {
        if (!finite_) throw std::logic_error("ExtendedReal: value() on infinity");
        return value_;
    }

private:
    ExtendedReal(double v, bool f) : value_(v), finite_(f) {}
    double value_;
    bool finite_;
};

// Jump-size law of a compound Poisson subordinator. The survival function is
// the non-singular convolution kernel up to the (rate) prefactor.
class JumpLaw {
public:
    using Survival = std::function<double(double)>;
    using Sampler = std::function<double(Rng&)>;

    static JumpLaw exponential(double rate);
    static JumpLaw mittag_leffler(double alpha, double r);
    static JumpLaw point_mass(double y);
    static JumpLaw pareto(double alpha, double minimum);
    // Arbitrary survival function; sampling falls back to numeric inversion
    // and the mean to quadrature unless provided.
    static JumpLaw custom(Survival survival, Sampler sampler = nullptr,
                          std::optional<ExtendedReal> mean = std::nullopt);

    double survival(double z) const;
    double sample(Rng& rng) const;
    ExtendedReal mean() const;

    const std::string& name() const { return name_; }
    double param(int i) const { return params_[i]; }

private:
    JumpLaw() = default;
    friend class BernsteinSymbol;

    std::string name_;
    double params_[2] = {0.0, 0.0};
    Survival survival_;
    Sampler sampler_;
    std::optional<double> finite_mean_;
    bool infinite_mean_ = false;
};

enum class SymbolKind {
    Stable,           // lambda^alpha, alpha in (0,1)
    Gamma,            // a ln(1 + lambda/b)
    CaputoFabrizio,   // (theta+1) lambda / (theta + lambda), theta = alpha/(1-alpha)
    DriftedCF,        // c alpha lambda + CF part
    TelegraphSum,     // lambda^{2 alpha} + lambda^alpha, alpha in (0, 1/2)
    Tempered,         // sqrt(lambda + (mu/2)^2) - |mu/2|
    CompoundPoisson,  // rate * integral of (1 - e^{-lambda y}) dF(y)
    Linear,           // lambda  (pure drift)
};

// A Bernstein function Phi (Laplace exponent of a subordinator) with its
// Levy tail and cached analytic metadata.
class BernsteinSymbol {
public:
    static BernsteinSymbol stable(double alpha);
    static BernsteinSymbol gamma(double a, double b);
    static BernsteinSymbol caputo_fabrizio(double alpha);
    static BernsteinSymbol drifted_cf(double c, double alpha);
    static BernsteinSymbol telegraph_sum(double alpha);
    static BernsteinSymbol tempered(double mu);
    static BernsteinSymbol compound_poisson(double rate, JumpLaw jump);
    static BernsteinSymbol linear();

    SymbolKind kind() const { return kind_; }

    // Phi(lambda); lambda >= 0.
    double phi(double lambda) const;
    // Analytic continuation used by Laplace inversion contours.
    std::complex<double> phi(std::complex<double> lambda) const;

    // Tail of the Levy measure, phibar(z) = phi((z, infinity)); z > 0.
    double levy_tail(double z) const;

    // lim_{lambda -> 0+} Phi(lambda)/lambda.
    ExtendedReal phi_prime_at_zero() const;

    // Value of the Fourier/spectral multiplier at psi >= 0 (e.g. Phi(mu_k)).
    double compose_multiplier(double psi) const { return phi(psi); }

    // Total Levy mass phi((0, infinity)); finite only for step subordinators.
    ExtendedReal levy_mass() const;
    bool has_finite_levy_mass() const { return levy_mass().is_finite(); }

    // Density of the Levy measure where absolutely continuous. Kinds with
    // atoms (point-mass jumps) have none; callers fall back to tail forms.
    bool has_levy_density() const;
    double levy_density(double y) const;

    // Exact partial moments of the tail: integral over [a,b] of phibar and
    // of s * phibar(s) ds. Closed forms per kind, graded quadrature otherwise.
    double tail_moment0(double a, double b) const;
    double tail_moment1(double a, double b) const;

    // Drift part (only DriftedCF and Linear carry one).
    double drift() const;
    // Jump arrival rate for compound-Poisson type kinds.
    double jump_rate() const;
    const JumpLaw& jump_law() const;

    double alpha() const { return p1_; }  // Stable/CF/DriftedCF/TelegraphSum
    double param1() const { return p1_; }
    double param2() const { return p2_; }
    double theta() const;  // CF kinds: alpha/(1-alpha)

    std::string describe() const;

private:
    BernsteinSymbol(SymbolKind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

    SymbolKind kind_;
    double p1_ = 0.0;
    double p2_ = 0.0;
    std::shared_ptr<const JumpLaw> jump_;  // CompoundPoisson only
};

// Compound Poisson symbol from an arrival rate and a jump survival function;
// kernel K(z) = rate * P(Y > z). Validates monotonicity and survival(0)=1.
BernsteinSymbol symbol_from_jump_law(double rate, JumpLaw law);
BernsteinSymbol symbol_from_jump_law(double rate, JumpLaw::Survival survival);

}  // namespace nk
