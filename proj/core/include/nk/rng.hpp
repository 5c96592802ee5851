#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace nk {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that streams are
// reproducible across compilers and standard libraries; every stochastic
// result in this project is pinned to a master seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_spare_ = false;
    }

    // Independent child stream; (seed, stream) pairs never collide for
    // distinct stream ids under the same parent seed.
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t sm = master_seed;
        std::uint64_t a = splitmix64(sm);
        std::uint64_t b = stream_id;
        std::uint64_t mix = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
        std::uint64_t sm2 = mix;
        (void)splitmix64(sm2);
        return Rng(mix ^ splitmix64(sm2));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0,1); never returns 0 or 1.
    double uniform() {
        std::uint64_t u = next_u64() >> 11;          // 53 bits
        double x = (static_cast<double>(u) + 0.5) * 0x1.0p-53;
        return x;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

    // Marsaglia polar method with spare caching.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Knuth multiplication method; adequate for the small means used in
    // per-step jump counts (mean = rate * dt).
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw std::domain_error("poisson: negative mean");
        if (mean == 0.0) return 0;
        if (mean < 30.0) {
            double limit = std::exp(-mean);
            double prod = uniform();
            std::uint64_t n = 0;
            while (prod > limit) {
                ++n;
                prod *= uniform();
            }
            return n;
        }
        // split large means to stay in the multiplication method's range
        std::uint64_t n = poisson(mean * 0.5);
        return n + poisson(mean - mean * 0.5);
    }

    // Marsaglia-Tsang; shape < 1 handled by the boost G(a) = G(a+1) U^{1/a}.
    double gamma(double shape, double rate = 1.0) {
        if (shape <= 0.0 || rate <= 0.0) throw std::domain_error("gamma: bad parameters");
        if (shape < 1.0) {
            double u = uniform();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    // Positive alpha-stable variate with E[exp(-s S)] = exp(-s^alpha)
    // (Kanter's representation), alpha in (0,1).
    double stable_positive(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::domain_error("stable_positive: alpha must be in (0,1)");
        const double u = uniform(0.0, std::numbers::pi);
        const double w = exponential();
        const double a = std::pow(std::sin(alpha * u), alpha / (1.0 - alpha)) *
                         std::sin((1.0 - alpha) * u) /
                         std::pow(std::sin(u), 1.0 / (1.0 - alpha));
        return std::pow(a / w, (1.0 - alpha) / alpha);
    }

    // Mittag-Leffler variate: P(Y > y) = E_alpha(-r y^alpha). Exact via the
    // product of an exponential power and a positive stable variate.
    double mittag_leffler(double alpha, double r) {
        if (!(alpha > 0.0 && alpha <= 1.0) || !(r > 0.0))
            throw std::domain_error("mittag_leffler: bad parameters");
        double w = exponential();
        if (alpha == 1.0) return w / r;
        return std::pow(w / r, 1.0 / alpha) * stable_positive(alpha);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_;
};

}  // namespace nk
