#include "nk/symbols.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nk/quadrature.hpp"
#include "nk/special.hpp"

namespace nk {

namespace {

double require_in(double v, double lo, double hi, const char* what,
                  bool open_lo = true, bool open_hi = true) {
    bool ok = (open_lo ? v > lo : v >= lo) && (open_hi ? v < hi : v <= hi);
    if (!ok) throw std::domain_error(std::string(what) + ": parameter out of range");
    return v;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// JumpLaw

JumpLaw JumpLaw::exponential(double rate) {
    require_in(rate, 0.0, kInf, "JumpLaw::exponential");
    JumpLaw law;
    law.name_ = "exponential";
    law.params_[0] = rate;
    law.survival_ = [rate](double z) { return z <= 0.0 ? 1.0 : std::exp(-rate * z); };
    law.sampler_ = [rate](Rng& rng) { return rng.exponential(rate); };
    law.finite_mean_ = 1.0 / rate;
    return law;
}

JumpLaw JumpLaw::mittag_leffler(double alpha, double r) {
    require_in(alpha, 0.0, 1.0, "JumpLaw::mittag_leffler", true, false);
    require_in(r, 0.0, kInf, "JumpLaw::mittag_leffler");
    JumpLaw law;
    law.name_ = "mittag_leffler";
    law.params_[0] = alpha;
    law.params_[1] = r;
    law.survival_ = [alpha, r](double z) {
        return z <= 0.0 ? 1.0 : nk::mittag_leffler(alpha, -r * std::pow(z, alpha));
    };
    law.sampler_ = [alpha, r](Rng& rng) { return rng.mittag_leffler(alpha, r); };
    if (alpha == 1.0)
        law.finite_mean_ = 1.0 / r;
    else
        law.infinite_mean_ = true;
    return law;
}

JumpLaw JumpLaw::point_mass(double y) {
    require_in(y, 0.0, kInf, "JumpLaw::point_mass");
    JumpLaw law;
    law.name_ = "point_mass";
    law.params_[0] = y;
    law.survival_ = [y](double z) { return z < y ? 1.0 : 0.0; };
    law.sampler_ = [y](Rng&) { return y; };
    law.finite_mean_ = y;
    return law;
}

JumpLaw JumpLaw::pareto(double alpha, double minimum) {
    require_in(alpha, 0.0, kInf, "JumpLaw::pareto");
    require_in(minimum, 0.0, kInf, "JumpLaw::pareto");
    JumpLaw law;
    law.name_ = "pareto";
    law.params_[0] = alpha;
    law.params_[1] = minimum;
    law.survival_ = [alpha, minimum](double z) {
        return z <= minimum ? 1.0 : std::pow(minimum / z, alpha);
    };
    law.sampler_ = [alpha, minimum](Rng& rng) {
        return minimum * std::pow(rng.uniform(), -1.0 / alpha);
    };
    if (alpha > 1.0)
        law.finite_mean_ = minimum * alpha / (alpha - 1.0);
    else
        law.infinite_mean_ = true;
    return law;
}

JumpLaw JumpLaw::custom(Survival survival, Sampler sampler,
                        std::optional<ExtendedReal> mean) {
    if (!survival) throw std::invalid_argument("JumpLaw::custom: null survival");
    JumpLaw law;
    law.name_ = "custom";
    law.survival_ = std::move(survival);
    law.sampler_ = std::move(sampler);
    if (mean) {
        if (mean->is_finite())
            law.finite_mean_ = mean->value();
        else
            law.infinite_mean_ = true;
    }
    return law;
}

double JumpLaw::survival(double z) const { return survival_(z); }

double JumpLaw::sample(Rng& rng) const {
    if (sampler_) return sampler_(rng);
    // numeric inversion of the survival function on a monotone bracket
    double u = rng.uniform();
    double hi = 1.0;
    while (survival_(hi) > u && hi < 1e12) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (survival_(mid) > u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ExtendedReal JumpLaw::mean() const {
    if (finite_mean_) return ExtendedReal::finite(*finite_mean_);
    if (infinite_mean_) return ExtendedReal::infinity();
    // E[Y] = integral of the survival function
    double total = 0.0;
    double left = 0.0, width = 1.0;
    for (int i = 0; i < 48; ++i) {
        double piece = integrate([this](double z) { return survival_(z); },
                                 left, left + width, 1e-11, 1e-10);
        total += piece;
        if (piece < 1e-12 * std::max(1.0, total)) return ExtendedReal::finite(total);
        left += width;
        width *= 2.0;
    }
    return ExtendedReal::infinity();
}

// ---------------------------------------------------------------------------
// BernsteinSymbol factories

BernsteinSymbol BernsteinSymbol::stable(double alpha) {
    require_in(alpha, 0.0, 1.0, "BernsteinSymbol::stable");
    return BernsteinSymbol(SymbolKind::Stable, alpha, 0.0);
}

BernsteinSymbol BernsteinSymbol::gamma(double a, double b) {
    require_in(a, 0.0, kInf, "BernsteinSymbol::gamma");
    require_in(b, 0.0, kInf, "BernsteinSymbol::gamma");
    return BernsteinSymbol(SymbolKind::Gamma, a, b);
}

BernsteinSymbol BernsteinSymbol::caputo_fabrizio(double alpha) {
    require_in(alpha, 0.0, 1.0, "BernsteinSymbol::caputo_fabrizio", true, false);
    return BernsteinSymbol(SymbolKind::CaputoFabrizio, alpha, 0.0);
}

BernsteinSymbol BernsteinSymbol::drifted_cf(double c, double alpha) {
    require_in(c, 0.0, kInf, "BernsteinSymbol::drifted_cf", false, true);
    require_in(alpha, 0.0, 1.0, "BernsteinSymbol::drifted_cf", true, false);
    return BernsteinSymbol(SymbolKind::DriftedCF, alpha, c);
}

BernsteinSymbol BernsteinSymbol::telegraph_sum(double alpha) {
    require_in(alpha, 0.0, 0.5, "BernsteinSymbol::telegraph_sum");
    return BernsteinSymbol(SymbolKind::TelegraphSum, alpha, 0.0);
}

BernsteinSymbol BernsteinSymbol::tempered(double mu) {
    return BernsteinSymbol(SymbolKind::Tempered, std::abs(mu), 0.0);
}

BernsteinSymbol BernsteinSymbol::compound_poisson(double rate, JumpLaw jump) {
    require_in(rate, 0.0, kInf, "BernsteinSymbol::compound_poisson");
    BernsteinSymbol sym(SymbolKind::CompoundPoisson, rate, 0.0);
    sym.jump_ = std::make_shared<const JumpLaw>(std::move(jump));
    return sym;
}

BernsteinSymbol BernsteinSymbol::linear() {
    return BernsteinSymbol(SymbolKind::Linear, 0.0, 0.0);
}

double BernsteinSymbol::theta() const {
    if (kind_ != SymbolKind::CaputoFabrizio && kind_ != SymbolKind::DriftedCF)
        throw std::logic_error("theta(): not a Caputo-Fabrizio kind");
    return p1_ / (1.0 - p1_);
}

// ---------------------------------------------------------------------------
// Phi

namespace {

template <class T>
T phi_closed_form(SymbolKind kind, double p1, double p2, T lambda) {
    switch (kind) {
        case SymbolKind::Stable:
            return std::pow(lambda, T(p1));
        case SymbolKind::Gamma:
            return p1 * std::log(1.0 + lambda / p2);
        case SymbolKind::CaputoFabrizio: {
            double th = p1 / (1.0 - p1);
            return (th + 1.0) * lambda / (th + lambda);
        }
        case SymbolKind::DriftedCF: {
            double th = p1 / (1.0 - p1);
            return p2 * p1 * lambda + (th + 1.0) * lambda / (th + lambda);
        }
        case SymbolKind::TelegraphSum:
            return std::pow(lambda, T(2.0 * p1)) + std::pow(lambda, T(p1));
        case SymbolKind::Tempered: {
            double m = 0.5 * p1;
            return std::sqrt(lambda + m * m) - m;
        }
        case SymbolKind::Linear:
            return lambda;
        default:
            throw std::logic_error("phi_closed_form: kind has no closed form");
    }
}

}  // namespace

double BernsteinSymbol::phi(double lambda) const {
    if (lambda < 0.0) throw std::domain_error("phi: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    if (kind_ == SymbolKind::CompoundPoisson) {
        // rate * lambda * int_0^inf e^{-lambda y} S(y) dy
        const auto& law = *jump_;
        double integral = integrate_to_infinity(
            [&](double y) { return std::exp(-lambda * y) * law.survival(y); },
            0.0, 1e-12, 1e-11);
        return p1_ * lambda * integral;
    }
    if (kind_ == SymbolKind::CaputoFabrizio && p1_ == 1.0) return lambda;
    return phi_closed_form(kind_, p1_, p2_, lambda);
}

std::complex<double> BernsteinSymbol::phi(std::complex<double> lambda) const {
    if (lambda == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    if (kind_ == SymbolKind::CompoundPoisson) {
        // transform of a bounded survival function; converges only in the
        // right half plane
        if (lambda.real() <= 0.0)
            throw std::domain_error(
                "phi: compound Poisson symbol needs Re(lambda) > 0");
        const auto& law = *jump_;
        auto integral = integrate_to_infinity(
            [&](double y) { return std::exp(-lambda * y) * law.survival(y); },
            0.0, 1e-12, 1e-11);
        return p1_ * lambda * integral;
    }
    if (kind_ == SymbolKind::CaputoFabrizio && p1_ == 1.0) return lambda;
    return phi_closed_form(kind_, p1_, p2_, lambda);
}

double BernsteinSymbol::levy_tail(double z) const {
    if (!(z > 0.0)) throw std::domain_error("levy_tail: z must be > 0");
    switch (kind_) {
        case SymbolKind::Stable:
            return std::pow(z, -p1_) / std::tgamma(1.0 - p1_);
        case SymbolKind::Gamma:
            return p1_ * expint_e1(p2_ * z);
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF: {
            if (p1_ == 1.0) return 0.0;  // pure drift limit
            double th = theta();
            return (th + 1.0) * std::exp(-th * z);
        }
        case SymbolKind::TelegraphSum:
            return std::pow(z, -2.0 * p1_) / std::tgamma(1.0 - 2.0 * p1_) +
                   std::pow(z, -p1_) / std::tgamma(1.0 - p1_);
        case SymbolKind::Tempered: {
            double m = 0.5 * p1_;
            if (m == 0.0) return std::pow(z, -0.5) / std::tgamma(0.5);
            return std::exp(-m * m * z) / std::sqrt(std::numbers::pi * z) -
                   m * std::erfc(m * std::sqrt(z));
        }
        case SymbolKind::CompoundPoisson:
            return p1_ * jump_->survival(z);
        case SymbolKind::Linear:
            return 0.0;
    }
    throw std::logic_error("levy_tail: unreachable");
}

ExtendedReal BernsteinSymbol::phi_prime_at_zero() const {
    switch (kind_) {
        case SymbolKind::Stable:
        case SymbolKind::TelegraphSum:
            return ExtendedReal::infinity();
        case SymbolKind::Gamma:
            return ExtendedReal::finite(p1_ / p2_);
        case SymbolKind::CaputoFabrizio:
            return ExtendedReal::finite(1.0 / p1_);
        case SymbolKind::DriftedCF:
            return ExtendedReal::finite(p2_ * p1_ + 1.0 / p1_);
        case SymbolKind::Tempered: {
            double m = 0.5 * p1_;
            if (m == 0.0) return ExtendedReal::infinity();
            return ExtendedReal::finite(0.5 / m);
        }
        case SymbolKind::CompoundPoisson: {
            auto mean = jump_->mean();
            if (!mean.is_finite()) return ExtendedReal::infinity();
            return ExtendedReal::finite(p1_ * mean.value());
        }
        case SymbolKind::Linear:
            return ExtendedReal::finite(1.0);
    }
    throw std::logic_error("phi_prime_at_zero: unreachable");
}

ExtendedReal BernsteinSymbol::levy_mass() const {
    switch (kind_) {
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF:
            if (p1_ == 1.0) return ExtendedReal::finite(0.0);
            return ExtendedReal::finite(theta() + 1.0);
        case SymbolKind::CompoundPoisson:
            return ExtendedReal::finite(p1_);
        case SymbolKind::Linear:
            return ExtendedReal::finite(0.0);
        default:
            return ExtendedReal::infinity();
    }
}

bool BernsteinSymbol::has_levy_density() const {
    switch (kind_) {
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF:
            return p1_ < 1.0;
        case SymbolKind::Stable:
        case SymbolKind::Gamma:
        case SymbolKind::TelegraphSum:
        case SymbolKind::Tempered:
            return true;
        default:
            return false;
    }
}

double BernsteinSymbol::levy_density(double y) const {
    if (!(y > 0.0)) throw std::domain_error("levy_density: y must be > 0");
    switch (kind_) {
        case SymbolKind::Stable:
            return p1_ / std::tgamma(1.0 - p1_) * std::pow(y, -p1_ - 1.0);
        case SymbolKind::Gamma:
            return p1_ * std::exp(-p2_ * y) / y;
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF: {
            double th = theta();
            return (th + 1.0) * th * std::exp(-th * y);
        }
        case SymbolKind::TelegraphSum:
            return 2.0 * p1_ / std::tgamma(1.0 - 2.0 * p1_) * std::pow(y, -2.0 * p1_ - 1.0) +
                   p1_ / std::tgamma(1.0 - p1_) * std::pow(y, -p1_ - 1.0);
        case SymbolKind::Tempered: {
            double m = 0.5 * p1_;
            return std::exp(-m * m * y) * std::pow(y, -1.5) /
                   (2.0 * std::sqrt(std::numbers::pi));
        }
        default:
            throw std::logic_error("levy_density: kind has no density");
    }
}

// ---------------------------------------------------------------------------
// Exact tail moments

namespace {

// int z^{-p} dz and int z^{1-p} dz on [a,b], p in (0,1) handled at a=0.
double power_moment(double p, double a, double b, int order) {
    double e = static_cast<double>(order) + 1.0 - p;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

double BernsteinSymbol::tail_moment0(double a, double b) const {
    if (a < 0.0 || b < a) throw std::domain_error("tail_moment0: bad interval");
    if (a == b) return 0.0;
    switch (kind_) {
        case SymbolKind::Stable:
            return power_moment(p1_, a, b, 0) / std::tgamma(1.0 - p1_);
        case SymbolKind::TelegraphSum:
            return power_moment(2.0 * p1_, a, b, 0) / std::tgamma(1.0 - 2.0 * p1_) +
                   power_moment(p1_, a, b, 0) / std::tgamma(1.0 - p1_);
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF: {
            if (p1_ == 1.0) return 0.0;
            double th = theta();
            return (th + 1.0) / th * (std::exp(-th * a) - std::exp(-th * b));
        }
        case SymbolKind::Gamma: {
            // antiderivative of E1(bz): (z E1(bz) - e^{-bz}/b)
            auto anti = [this](double z) {
                if (z == 0.0) return -1.0 / p2_;
                return z * expint_e1(p2_ * z) - std::exp(-p2_ * z) / p2_;
            };
            return p1_ * (anti(b) - anti(a));
        }
        case SymbolKind::Linear:
            return 0.0;
        case SymbolKind::CompoundPoisson:
            return p1_ * integrate([this](double z) { return jump_->survival(z); },
                                   a, b, 1e-12, 1e-11);
        case SymbolKind::Tempered: {
            // graded head: integrable z^{-1/2} singularity at 0
            auto f = [this](double z) { return levy_tail(z); };
            if (a == 0.0) return tanh_sinh(f, 0.0, b, 1e-12);
            return integrate(f, a, b, 1e-12, 1e-11);
        }
    }
    throw std::logic_error("tail_moment0: unreachable");
}

double BernsteinSymbol::tail_moment1(double a, double b) const {
    if (a < 0.0 || b < a) throw std::domain_error("tail_moment1: bad interval");
    if (a == b) return 0.0;
    switch (kind_) {
        case SymbolKind::Stable:
            return power_moment(p1_, a, b, 1) / std::tgamma(1.0 - p1_);
        case SymbolKind::TelegraphSum:
            return power_moment(2.0 * p1_, a, b, 1) / std::tgamma(1.0 - 2.0 * p1_) +
                   power_moment(p1_, a, b, 1) / std::tgamma(1.0 - p1_);
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF: {
            if (p1_ == 1.0) return 0.0;
            double th = theta();
            auto anti = [th](double z) {
                return -(th + 1.0) * std::exp(-th * z) * (z / th + 1.0 / (th * th));
            };
            return anti(b) - anti(a);
        }
        case SymbolKind::Gamma: {
            // int z E1(bz) dz = z^2/2 E1(bz) - (bz+1) e^{-bz} / (2 b^2)
            auto anti = [this](double z) {
                if (z == 0.0) return -1.0 / (2.0 * p2_ * p2_);
                return 0.5 * z * z * expint_e1(p2_ * z) -
                       (p2_ * z + 1.0) * std::exp(-p2_ * z) / (2.0 * p2_ * p2_);
            };
            return p1_ * (anti(b) - anti(a));
        }
        case SymbolKind::Linear:
            return 0.0;
        case SymbolKind::CompoundPoisson:
            return p1_ * integrate(
                             [this](double z) { return z * jump_->survival(z); },
                             a, b, 1e-12, 1e-11);
        case SymbolKind::Tempered: {
            auto f = [this](double z) { return z * levy_tail(z); };
            if (a == 0.0) return tanh_sinh(f, 0.0, b, 1e-12);
            return integrate(f, a, b, 1e-12, 1e-11);
        }
    }
    throw std::logic_error("tail_moment1: unreachable");
}

double BernsteinSymbol::drift() const {
    switch (kind_) {
        case SymbolKind::Linear:
            return 1.0;
        case SymbolKind::DriftedCF:
            return p2_ * p1_;
        case SymbolKind::CaputoFabrizio:
            return p1_ == 1.0 ? 1.0 : 0.0;
        default:
            return 0.0;
    }
}

double BernsteinSymbol::jump_rate() const {
    auto mass = levy_mass();
    if (!mass.is_finite())
        throw std::logic_error("jump_rate: infinite activity symbol");
    return mass.value();
}

const JumpLaw& BernsteinSymbol::jump_law() const {
    if (kind_ == SymbolKind::CompoundPoisson) return *jump_;
    throw std::logic_error("jump_law: only CompoundPoisson carries a jump law");
}

std::string BernsteinSymbol::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case SymbolKind::Stable: os << "stable(alpha=" << p1_ << ")"; break;
        case SymbolKind::Gamma: os << "gamma(a=" << p1_ << ",b=" << p2_ << ")"; break;
        case SymbolKind::CaputoFabrizio: os << "caputo_fabrizio(alpha=" << p1_ << ")"; break;
        case SymbolKind::DriftedCF:
            os << "drifted_cf(c=" << p2_ << ",alpha=" << p1_ << ")";
            break;
        case SymbolKind::TelegraphSum: os << "telegraph_sum(alpha=" << p1_ << ")"; break;
        case SymbolKind::Tempered: os << "tempered(mu=" << p1_ << ")"; break;
        case SymbolKind::CompoundPoisson:
            os << "compound_poisson(rate=" << p1_ << ",jump=" << jump_->name() << ")";
            break;
        case SymbolKind::Linear: os << "linear"; break;
    }
    return os.str();
}

BernsteinSymbol symbol_from_jump_law(double rate, JumpLaw law) {
    // survival must start at 1 and be nonincreasing
    if (std::abs(law.survival(0.0) - 1.0) > 1e-9)
        throw std::invalid_argument("symbol_from_jump_law: survival(0) must be 1");
    double prev = 1.0 + 1e-12;
    for (double z = 0.0; z <= 16.0; z += 0.0625) {
        double s = law.survival(z);
        if (s < -1e-12 || s > 1.0 + 1e-12 || s > prev + 1e-9)
            throw std::invalid_argument(
                "symbol_from_jump_law: survival must be nonincreasing in [0,1]");
        prev = s;
    }
    return BernsteinSymbol::compound_poisson(rate, std::move(law));
}

BernsteinSymbol symbol_from_jump_law(double rate, JumpLaw::Survival survival) {
    return symbol_from_jump_law(rate, JumpLaw::custom(std::move(survival)));
}

}  // namespace nk
