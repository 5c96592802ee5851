#include "nk/subordinate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nk {

namespace {

bool is_step_type(const BernsteinSymbol& sym) {
    switch (sym.kind()) {
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF:
            return sym.alpha() < 1.0;
        case SymbolKind::CompoundPoisson:
            return true;
        default:
            return false;
    }
}

}  // namespace

SubordinatorPath::SubordinatorPath(BernsteinSymbol symbol, double horizon,
                                   double dt, std::uint64_t seed)
    : symbol_(std::move(symbol)), dt_(dt), horizon_(0.0), seed_(seed) {
    if (!(dt > 0.0) || horizon < dt)
        throw std::domain_error("SubordinatorPath: need horizon >= dt > 0");
    drift_ = symbol_.drift();
    if (is_step_type(symbol_)) exact_jumps_.emplace();
    values_.push_back(0.0);  // H_0 = 0
    Rng rng = Rng::stream(seed_, 0);
    append_increments(0.0, horizon, rng);
    horizon_ = time_at(values_.size() - 1);
}

void SubordinatorPath::append_increments(double from, double to, Rng& rng) {
    const std::size_t first = values_.size();
    const auto n_new = static_cast<std::size_t>(std::ceil((to - from) / dt_ - 1e-9));
    values_.reserve(first + n_new);

    switch (symbol_.kind()) {
        case SymbolKind::Linear: {
            for (std::size_t i = 0; i < n_new; ++i)
                values_.push_back(drift_ * dt_ * static_cast<double>(first + i));
            return;
        }
        case SymbolKind::Stable: {
            const double scale = std::pow(dt_, 1.0 / symbol_.alpha());
            for (std::size_t i = 0; i < n_new; ++i)
                values_.push_back(values_.back() +
                                  scale * rng.stable_positive(symbol_.alpha()));
            return;
        }
        case SymbolKind::TelegraphSum: {
            const double a = symbol_.alpha();
            const double s1 = std::pow(dt_, 1.0 / (2.0 * a));
            const double s2 = std::pow(dt_, 1.0 / a);
            for (std::size_t i = 0; i < n_new; ++i)
                values_.push_back(values_.back() +
                                  s1 * rng.stable_positive(2.0 * a) +
                                  s2 * rng.stable_positive(a));
            return;
        }
        case SymbolKind::Gamma: {
            const double shape = symbol_.param1() * dt_;
            const double rate = symbol_.param2();
            for (std::size_t i = 0; i < n_new; ++i)
                values_.push_back(values_.back() + rng.gamma(shape, rate));
            return;
        }
        case SymbolKind::Tempered: {
            // exponential tilting of the stable(1/2) increment; acceptance
            // rate e^{-m dt} per draw
            const double m = 0.5 * symbol_.param1();
            const double scale = dt_ * dt_;
            for (std::size_t i = 0; i < n_new; ++i) {
                double inc;
                do {
                    inc = scale * rng.stable_positive(0.5);
                } while (rng.uniform() > std::exp(-m * m * inc));
                values_.push_back(values_.back() + inc);
            }
            return;
        }
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF:
        case SymbolKind::CompoundPoisson: {
            if (symbol_.kind() == SymbolKind::CaputoFabrizio && symbol_.alpha() == 1.0) {
                for (std::size_t i = 0; i < n_new; ++i)
                    values_.push_back(dt_ * static_cast<double>(first + i));
                return;
            }
            const double rate = symbol_.jump_rate();
            auto sample_jump = [&](Rng& r) -> double {
                if (symbol_.kind() == SymbolKind::CompoundPoisson)
                    return symbol_.jump_law().sample(r);
                return r.exponential(symbol_.theta());
            };
            // running sum of jumps; grid values carry the drift explicitly
            double jump_sum =
                values_.back() - drift_ * time_at(values_.size() - 1);
            std::vector<double> step_times;
            for (std::size_t i = 0; i < n_new; ++i) {
                const std::size_t idx = first + i;
                const double t0 = dt_ * static_cast<double>(idx - 1);
                auto n_jumps = rng.poisson(rate * dt_);
                step_times.clear();
                for (std::uint64_t j = 0; j < n_jumps; ++j)
                    step_times.push_back(t0 + dt_ * rng.uniform());
                std::sort(step_times.begin(), step_times.end());
                for (double jt : step_times) {
                    double js = sample_jump(rng);
                    exact_jumps_->push_back({jt, js});
                    jump_sum += js;
                }
                values_.push_back(drift_ * dt_ * static_cast<double>(idx) + jump_sum);
            }
            return;
        }
    }
    throw std::logic_error("append_increments: unreachable");
}

double SubordinatorPath::value(double s) const {
    if (s < 0.0) throw std::domain_error("SubordinatorPath::value: s < 0");
    if (s > horizon_ + 1e-12)
        throw HorizonError("SubordinatorPath::value: beyond horizon");
    if (has_exact_jumps()) {
        double v = drift_ * s;
        for (const auto& j : *exact_jumps_) {
            if (j.time <= s) v += j.size;
            else break;
        }
        return v;
    }
    const double pos = s / dt_;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) return values_.back();
    double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double SubordinatorPath::value_left(double s) const {
    if (!has_exact_jumps()) return value(s);
    if (s > horizon_ + 1e-12)
        throw HorizonError("SubordinatorPath::value_left: beyond horizon");
    double v = drift_ * s;
    for (const auto& j : *exact_jumps_) {
        if (j.time < s) v += j.size;
        else break;
    }
    return v;
}

void SubordinatorPath::extend_to(double new_horizon) {
    if (new_horizon <= horizon_) return;
    ++extension_count_;
    Rng rng = Rng::stream(seed_, extension_count_);
    append_increments(horizon_, new_horizon, rng);
    horizon_ = time_at(values_.size() - 1);
}

SubordinatorPath sample_path(const BernsteinSymbol& symbol, double horizon,
                             double dt, std::uint64_t seed) {
    return SubordinatorPath(symbol, horizon, dt, seed);
}

double sample_increment(const BernsteinSymbol& symbol, double span, Rng& rng) {
    if (span < 0.0) throw std::domain_error("sample_increment: negative span");
    if (span == 0.0) return 0.0;
    switch (symbol.kind()) {
        case SymbolKind::Linear:
            return span;
        case SymbolKind::Stable:
            return std::pow(span, 1.0 / symbol.alpha()) *
                   rng.stable_positive(symbol.alpha());
        case SymbolKind::TelegraphSum: {
            const double a = symbol.alpha();
            return std::pow(span, 1.0 / (2.0 * a)) * rng.stable_positive(2.0 * a) +
                   std::pow(span, 1.0 / a) * rng.stable_positive(a);
        }
        case SymbolKind::Gamma:
            return rng.gamma(symbol.param1() * span, symbol.param2());
        case SymbolKind::Tempered: {
            const double m = 0.5 * symbol.param1();
            double inc;
            do {
                inc = span * span * rng.stable_positive(0.5);
            } while (rng.uniform() > std::exp(-m * m * inc));
            return inc;
        }
        case SymbolKind::CaputoFabrizio:
        case SymbolKind::DriftedCF: {
            if (symbol.alpha() == 1.0) return span;  // pure drift limit
            double acc = symbol.drift() * span;
            auto n = rng.poisson(symbol.jump_rate() * span);
            for (std::uint64_t j = 0; j < n; ++j)
                acc += rng.exponential(symbol.theta());
            return acc;
        }
        case SymbolKind::CompoundPoisson: {
            double acc = 0.0;
            auto n = rng.poisson(symbol.jump_rate() * span);
            for (std::uint64_t j = 0; j < n; ++j)
                acc += symbol.jump_law().sample(rng);
            return acc;
        }
    }
    throw std::logic_error("sample_increment: unreachable");
}

namespace {

// First passage on the exact jump skeleton: returns crossing time.
double invert_jump_path(const SubordinatorPath& path, double drift, double t,
                        double* overshoot_out) {
    double level = 0.0;
    double time = 0.0;
    const double total_drift = drift + path.drift_rate();
    for (const auto& j : path.jumps()) {
        // drift segment from (time, level) to (j.time, level + drift * dz)
        if (total_drift > 0.0) {
            double reach = level + total_drift * (j.time - time);
            if (reach >= t) {
                if (overshoot_out) *overshoot_out = 0.0;
                return time + (t - level) / total_drift;
            }
            level = reach;
        }
        time = j.time;
        level += j.size;
        if (level >= t) {
            if (overshoot_out) *overshoot_out = level - t;
            return time;
        }
    }
    // trailing drift up to horizon
    if (total_drift > 0.0) {
        double reach = level + total_drift * (path.horizon() - time);
        if (reach >= t) {
            if (overshoot_out) *overshoot_out = 0.0;
            return time + (t - level) / total_drift;
        }
    }
    throw HorizonError("invert: time level beyond simulated horizon");
}

}  // namespace

double invert_path(const SubordinatorPath& path, double t) {
    if (t < 0.0) throw std::domain_error("invert_path: t < 0");
    if (t == 0.0) return 0.0;
    if (path.has_exact_jumps()) return invert_jump_path(path, 0.0, t, nullptr);
    const auto& v = path.values();
    auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it == v.end())
        throw HorizonError("invert_path: time level beyond simulated horizon");
    auto i = static_cast<std::size_t>(it - v.begin());
    if (i == 0) return 0.0;
    const double lo = v[i - 1], hi = v[i];
    double frac = (hi > lo) ? (t - lo) / (hi - lo) : 1.0;
    return path.dt() * (static_cast<double>(i - 1) + frac);
}

double invert_drifted(const SubordinatorPath& path, double drift, double t) {
    if (drift < 0.0) throw std::domain_error("invert_drifted: negative drift");
    if (t < 0.0) throw std::domain_error("invert_drifted: t < 0");
    if (t == 0.0) return 0.0;
    if (path.has_exact_jumps()) return invert_jump_path(path, drift, t, nullptr);
    const auto& v = path.values();
    // Hbar on the grid is strictly increasing when drift > 0
    double prev = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double cur = drift * path.time_at(i) + v[i];
        if (cur >= t) {
            double frac = (cur > prev) ? (t - prev) / (cur - prev) : 1.0;
            return path.dt() * (static_cast<double>(i - 1) + frac);
        }
        prev = cur;
    }
    throw HorizonError("invert_drifted: time level beyond simulated horizon");
}

double overshoot(const SubordinatorPath& path, double t) {
    if (t < 0.0) throw std::domain_error("overshoot: t < 0");
    if (t == 0.0) return 0.0;
    if (path.has_exact_jumps()) {
        double over = 0.0;
        (void)invert_jump_path(path, 0.0, t, &over);
        return over;
    }
    const auto& v = path.values();
    auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it == v.end())
        throw HorizonError("overshoot: time level beyond simulated horizon");
    // grid crossing value; for diffuse kinds this tends to the true
    // overshoot as dt -> 0 (jump-dominated crossings)
    return *it - t;
}

double PathCursor::invert(double t) {
    const auto& path = *path_;
    if (t < 0.0) throw std::domain_error("PathCursor::invert: t < 0");
    if (t == 0.0) return 0.0;
    if (path.has_exact_jumps()) {
        // restart scan only when queries go backwards
        return invert_jump_path(path, 0.0, t, nullptr);
    }
    const auto& v = path.values();
    if (idx_ > 0 && v[idx_ - 1] >= t) idx_ = 0;  // non-monotone query
    while (idx_ < v.size() && v[idx_] < t) ++idx_;
    if (idx_ >= v.size())
        throw HorizonError("PathCursor::invert: beyond simulated horizon");
    if (idx_ == 0) return 0.0;
    const double lo = v[idx_ - 1], hi = v[idx_];
    double frac = (hi > lo) ? (t - lo) / (hi - lo) : 1.0;
    return path.dt() * (static_cast<double>(idx_ - 1) + frac);
}

// ---------------------------------------------------------------------------
// Densities

double density_h(const BernsteinSymbol& symbol, double t, double x,
                 const LaplaceInverter& inv) {
    if (!(t > 0.0) || !(x > 0.0))
        throw std::domain_error("density_h: t and x must be positive");
    switch (symbol.kind()) {
        case SymbolKind::Stable:
            if (symbol.alpha() == 0.5) {
                // evaluated in log form: the direct product overflows to
                // inf * 0 for x far into the left tail
                double logv = std::log(t) - 1.5 * std::log(x) -
                              t * t / (4.0 * x) -
                              std::log(2.0 * std::sqrt(std::numbers::pi));
                return std::exp(logv);
            }
            break;
        case SymbolKind::Gamma: {
            const double a = symbol.param1(), b = symbol.param2();
            return std::exp(a * t * std::log(b) + (a * t - 1.0) * std::log(x) -
                            b * x - std::lgamma(a * t));
        }
        case SymbolKind::Linear:
            throw std::domain_error("density_h: linear symbol has a degenerate law");
        default:
            break;
    }
    // transform of h(t, .) in x is exp(-t Phi); step-type kinds carry an atom
    // at zero whose constant transform must be removed first
    const bool step = symbol.has_finite_levy_mass();
    double atom = 0.0;
    if (step) atom = std::exp(-t * symbol.levy_mass().value());
    ComplexFn transform = [&symbol, t, atom](std::complex<double> lam) {
        return std::exp(-t * symbol.phi(lam)) - atom;
    };
    return laplace_invert(transform, x, inv);
}

double density_l(const BernsteinSymbol& symbol, double t, double x,
                 const LaplaceInverter& inv) {
    if (!(t > 0.0) || x < 0.0)
        throw std::domain_error("density_l: need t > 0 and x >= 0");
    if (symbol.kind() == SymbolKind::Stable && symbol.alpha() == 0.5) {
        return std::exp(-x * x / (4.0 * t)) / std::sqrt(std::numbers::pi * t);
    }
    if (symbol.kind() == SymbolKind::Linear)
        throw std::domain_error("density_l: linear symbol has a degenerate law");
    ComplexFn transform = [&symbol, x](std::complex<double> lam) {
        auto phi = symbol.phi(lam);
        return phi / lam * std::exp(-x * phi);
    };
    return laplace_invert(transform, t, inv);
}

double laplace_invert(const ComplexFn& transform, double t,
                      const LaplaceInverter& inv) {
    return inv.invert(transform, t);
}

}  // namespace nk
