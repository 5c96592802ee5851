#include "nk/walker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nk {

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(s);
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, count == 0 ? 1 : static_cast<unsigned>(count));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(64);
                if (i >= count) return;
                std::size_t hi = std::min(count, i + 64);
                for (std::size_t k = i; k < hi; ++k) body(k);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// 1-d base walk

double PathRecord1D::position(double s) const {
    if (s < 0.0) throw std::domain_error("PathRecord1D::position: s < 0");
    if (killed() && s >= lifetime) return exit_point;
    const double p = s / dt;
    auto i = static_cast<std::size_t>(p);
    if (i + 1 >= pos.size()) return pos.back();
    const double frac = p - static_cast<double>(i);
    return pos[i] + frac * (pos[i + 1] - pos[i]);
}

double PathRecord1D::local_time(double s) const {
    if (gamma.empty()) return 0.0;
    const double p = s / dt;
    auto i = static_cast<std::size_t>(p);
    if (i + 1 >= gamma.size()) return gamma.back();
    const double frac = p - static_cast<double>(i);
    return gamma[i] + frac * (gamma[i + 1] - gamma[i]);
}

namespace {

struct StepOutcome {
    double x;
    bool contact = false;
    int side = 0;
    bool killed = false;
    double kill_frac = 0.0;  // fraction of the step before the crossing
    double exit_point = 0.0;
};

// One Euler step with the spec's boundary treatment (kill or specular fold).
StepOutcome advance_1d(const WalkSpec1D& spec, double x, double xn, double eps) {
    StepOutcome out{xn};
    if (spec.free_space) return out;
    const bool kill = spec.mode == BoundaryMode::Kill;
    if (kill) {
        if (xn <= spec.left) {
            out.killed = true;
            out.kill_frac = (x - spec.left) / (x - xn);
            out.exit_point = spec.left;
            return out;
        }
        if (!spec.half_line && xn >= spec.right) {
            out.killed = true;
            out.kill_frac = (spec.right - x) / (xn - x);
            out.exit_point = spec.right;
            return out;
        }
        out.x = xn;
        return out;
    }
    // reflecting family: fold into the domain
    bool touched = false;
    int side = 0;
    for (int guard = 0; guard < 64; ++guard) {
        if (xn < spec.left) {
            xn = 2.0 * spec.left - xn;
            touched = true;
            side = 0;
            continue;
        }
        if (!spec.half_line && xn > spec.right) {
            xn = 2.0 * spec.right - xn;
            touched = true;
            side = 1;
            continue;
        }
        break;
    }
    if (xn < spec.left) xn = spec.left;
    if (!spec.half_line && xn > spec.right) xn = spec.right;
    out.x = xn;
    if (touched) {
        out.contact = true;
        out.side = side;
    } else if (xn - spec.left < eps) {
        out.contact = true;
        out.side = 0;
    } else if (!spec.half_line && spec.right - xn < eps) {
        out.contact = true;
        out.side = 1;
    }
    return out;
}

void check_start(const WalkSpec1D& spec) {
    if (spec.free_space) return;
    const bool ok = spec.x0 >= spec.left &&
                    (spec.half_line || spec.x0 <= spec.right);
    if (!ok) throw std::domain_error("walker: start outside the domain closure");
    if (!(spec.dt > 0.0)) throw std::domain_error("walker: dt must be positive");
}

}  // namespace

PathRecord1D simulate_base_path(const WalkSpec1D& spec, double horizon,
                                std::uint64_t seed) {
    check_start(spec);
    if (!(horizon > 0.0)) throw std::domain_error("walker: horizon must be > 0");
    Rng rng = Rng::stream(seed, 1);
    const double dt = spec.dt;
    const double eps = contact_epsilon(dt);
    const double dgamma = local_time_increment(dt);
    const double step_scale = std::sqrt(2.0 * dt);
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));

    PathRecord1D rec;
    rec.dt = dt;
    rec.horizon = dt * static_cast<double>(steps);
    rec.pos.reserve(std::min<std::size_t>(steps + 1, 1u << 22));
    rec.pos.push_back(spec.x0);
    const bool track_gamma = spec.mode != BoundaryMode::Kill && !spec.free_space;
    if (track_gamma) {
        rec.gamma.reserve(rec.pos.capacity());
        rec.gamma.push_back(0.0);
    }

    double x = spec.x0;
    double g = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double xn = x + step_scale * rng.normal();
        auto out = advance_1d(spec, x, xn, eps);
        if (out.killed) {
            rec.lifetime = dt * (static_cast<double>(k) + out.kill_frac);
            rec.exit_point = out.exit_point;
            return rec;
        }
        x = out.x;
        rec.pos.push_back(x);
        if (track_gamma) {
            if (out.contact) {
                g += dgamma;
                rec.contacts.push_back({k + 1, out.side});
            }
            rec.gamma.push_back(g);
        }
    }
    return rec;
}

std::pair<PathRecord1D, PathRecord1D> simulate_coupled_pair(
    const WalkSpec1D& spec, double horizon, std::uint64_t seed) {
    check_start(spec);
    Rng rng = Rng::stream(seed, 1);
    WalkSpec1D fine_spec = spec;
    fine_spec.dt = 0.5 * spec.dt;
    const double hf = fine_spec.dt;
    const double eps_f = contact_epsilon(hf);
    const double eps_c = contact_epsilon(spec.dt);
    const double dg_f = local_time_increment(hf);
    const double dg_c = local_time_increment(spec.dt);
    const double sf = std::sqrt(2.0 * hf);
    const auto csteps = static_cast<std::size_t>(std::ceil(horizon / spec.dt - 1e-9));

    PathRecord1D fine, coarse;
    fine.dt = hf;
    coarse.dt = spec.dt;
    fine.horizon = 2.0 * static_cast<double>(csteps) * hf;
    coarse.horizon = static_cast<double>(csteps) * spec.dt;
    fine.pos.push_back(spec.x0);
    coarse.pos.push_back(spec.x0);
    const bool track_gamma = spec.mode != BoundaryMode::Kill && !spec.free_space;
    if (track_gamma) {
        fine.gamma.push_back(0.0);
        coarse.gamma.push_back(0.0);
    }

    double xf = spec.x0, xc = spec.x0, gf = 0.0, gc = 0.0;
    bool fine_dead = false, coarse_dead = false;
    for (std::size_t k = 0; k < csteps && (!fine_dead || !coarse_dead); ++k) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        for (int half = 0; half < 2 && !fine_dead; ++half) {
            const double z = half == 0 ? z1 : z2;
            auto out = advance_1d(fine_spec, xf, xf + sf * z, eps_f);
            const std::size_t fk = 2 * k + static_cast<std::size_t>(half);
            if (out.killed) {
                fine.lifetime = hf * (static_cast<double>(fk) + out.kill_frac);
                fine.exit_point = out.exit_point;
                fine_dead = true;
                break;
            }
            xf = out.x;
            fine.pos.push_back(xf);
            if (track_gamma) {
                if (out.contact) {
                    gf += dg_f;
                    fine.contacts.push_back({fk + 1, out.side});
                }
                fine.gamma.push_back(gf);
            }
        }
        if (!coarse_dead) {
            const double xn = xc + sf * (z1 + z2);
            auto out = advance_1d(spec, xc, xn, eps_c);
            if (out.killed) {
                coarse.lifetime = spec.dt * (static_cast<double>(k) + out.kill_frac);
                coarse.exit_point = out.exit_point;
                coarse_dead = true;
            } else {
                xc = out.x;
                coarse.pos.push_back(xc);
                if (track_gamma) {
                    if (out.contact) {
                        gc += dg_c;
                        coarse.contacts.push_back({k + 1, out.side});
                    }
                    coarse.gamma.push_back(gc);
                }
            }
        }
    }
    return {fine, coarse};
}

// ---------------------------------------------------------------------------
// time changes

namespace {

constexpr std::uint64_t kBaseStream = 11;
constexpr std::uint64_t kClockStream = 22;
constexpr std::uint64_t kSpaceStream = 33;

SubordinatorPath clock_path_through(const BernsteinSymbol& sym, double level,
                                    double dt, std::uint64_t seed) {
    double guess = 1.0;
    auto p0 = sym.phi_prime_at_zero();
    if (p0.is_finite() && p0.value() > 0.0)
        guess = std::max(1.0, 2.0 * level / p0.value());
    SubordinatorPath path(sym, guess, dt, seed);
    while (path.max_value() < level) {
        if (path.horizon() > 1e9)
            throw HorizonError("clock_path_through: runaway horizon");
        path.extend_to(path.horizon() * 2.0);
    }
    return path;
}

double gaussian_at_inner_time(const WalkSpec1D& spec, double inner, Rng& rng) {
    return spec.x0 + std::sqrt(2.0 * std::max(inner, 0.0)) * rng.normal();
}

}  // namespace

TerminalSample time_change_L(const WalkSpec1D& spec, const BernsteinSymbol& sym,
                             double t, std::uint64_t seed) {
    if (t < 0.0) throw std::domain_error("time_change_L: t < 0");
    TerminalSample s;
    if (sym.kind() == SymbolKind::Linear) {
        // identity clock
        auto rec = simulate_base_path(spec, std::max(t, spec.dt), path_seed(seed, kBaseStream));
        s.position = rec.position(t);
        s.alive = rec.alive_at(t);
        s.weight = spec.mode == BoundaryMode::Elastic
                       ? std::exp(-(spec.c / spec.sigma) * rec.local_time(t))
                       : 1.0;
        return s;
    }
    auto clock = clock_path_through(sym, t, spec.dt, path_seed(seed, kClockStream));
    const double inner = invert_path(clock, t);
    if (spec.free_space) {
        Rng rng = Rng::stream(path_seed(seed, kBaseStream), 1);
        s.position = gaussian_at_inner_time(spec, inner, rng);
        return s;
    }
    auto rec = simulate_base_path(spec, std::max(inner, spec.dt),
                                  path_seed(seed, kBaseStream));
    s.position = rec.position(inner);
    s.alive = rec.alive_at(inner);
    if (spec.mode == BoundaryMode::Elastic)
        s.weight = std::exp(-(spec.c / spec.sigma) * rec.local_time(inner));
    return s;
}

TerminalSample time_change_H(const WalkSpec1D& spec, const BernsteinSymbol& sym,
                             double t, std::uint64_t seed) {
    if (t < 0.0) throw std::domain_error("time_change_H: t < 0");
    TerminalSample s;
    double inner = t;
    if (sym.kind() != SymbolKind::Linear) {
        SubordinatorPath clock(sym, std::max(t, spec.dt), spec.dt,
                               path_seed(seed, kClockStream));
        inner = clock.value(t);
    }
    if (spec.free_space) {
        // the base law at a fixed inner time is exactly Gaussian
        Rng rng = Rng::stream(path_seed(seed, kBaseStream), 1);
        s.position = gaussian_at_inner_time(spec, inner, rng);
        return s;
    }
    // simulate only as far as the kill (or the inner time, whichever first)
    auto rec = simulate_base_path(spec, std::max(inner, spec.dt),
                                  path_seed(seed, kBaseStream));
    s.position = rec.position(inner);
    s.alive = rec.alive_at(inner);
    if (spec.mode == BoundaryMode::Elastic)
        s.weight = std::exp(-(spec.c / spec.sigma) * rec.local_time(inner));
    return s;
}

TerminalSample sticky_elastic_path(const WalkSpec1D& spec, double t,
                                   std::uint64_t seed) {
    if (!(spec.eta >= 0.0) || !(spec.sigma > 0.0))
        throw std::domain_error("sticky_elastic_path: need eta >= 0, sigma > 0");
    if (!spec.time_symbol && spec.eta > 0.0)
        throw std::invalid_argument("sticky_elastic_path: missing time symbol");
    const double dgamma = local_time_increment(spec.dt);
    const double span = spec.eta / spec.sigma * dgamma;

    double horizon = std::max(2.0 * t + 1.0, 8.0 * spec.dt);
    for (int attempt = 0; attempt < 12; ++attempt) {
        auto rec = simulate_base_path(spec, horizon, path_seed(seed, kBaseStream));
        Rng boundary_rng = Rng::stream(path_seed(seed, kClockStream), 1);
        // Vbar jumps by an independent H increment at every contact; walk the
        // contact list and invert Vbar at the requested outer time
        double shift = 0.0;
        TerminalSample s;
        bool resolved = false;
        for (const auto& contact : rec.contacts) {
            const double u_c = rec.dt * static_cast<double>(contact.step);
            if (t < u_c + shift) {
                // interior stretch before this contact
                const double inner = t - shift;
                s.position = rec.position(inner);
                s.weight = std::exp(-(spec.c / spec.sigma) * rec.local_time(inner));
                resolved = true;
                break;
            }
            const double wait =
                spec.eta > 0.0
                    ? sample_increment(*spec.time_symbol, span, boundary_rng)
                    : 0.0;
            if (t < u_c + shift + wait) {
                // frozen at the boundary inside this plateau
                s.position = contact.side == 0 ? spec.left : spec.right;
                s.at_boundary = true;
                s.weight =
                    std::exp(-(spec.c / spec.sigma) * rec.local_time(u_c));
                resolved = true;
                break;
            }
            shift += wait;
        }
        if (resolved) return s;
        const double inner = t - shift;
        if (inner <= rec.horizon) {
            s.position = rec.position(inner);
            s.weight = std::exp(-(spec.c / spec.sigma) * rec.local_time(inner));
            return s;
        }
        horizon *= 2.0;  // not enough inner time recorded; grow and retry
    }
    throw std::runtime_error("sticky_elastic_path: horizon growth failed");
}

TerminalSample hat_process_path(const WalkSpec1D& spec, double t,
                                std::uint64_t seed) {
    if (!spec.time_symbol && spec.eta > 0.0)
        throw std::invalid_argument("hat_process_path: missing time symbol");
    check_start(spec);
    Rng rng = Rng::stream(path_seed(seed, kBaseStream), 1);
    Rng boundary_rng = Rng::stream(path_seed(seed, kClockStream), 1);
    const double dt = spec.dt;
    const double eps = contact_epsilon(dt);
    const double dgamma = local_time_increment(dt);
    const double span = spec.eta / spec.sigma * dgamma;
    const double step_scale = std::sqrt(2.0 * dt);

    double x = spec.x0;
    double g = 0.0;
    double outer = 0.0;
    std::uint64_t steps = 0;
    TerminalSample s;
    while (true) {
        if (++steps > 80'000'000ULL) {
            s.censored = true;
            s.position = x;
            return s;
        }
        const double xn = x + step_scale * rng.normal();
        auto out = advance_1d(spec, x, xn, eps);
        if (outer + dt >= t) {
            // requested time falls inside this interior step
            const double frac = (t - outer) / dt;
            s.position = x + frac * (out.x - x);
            s.weight = std::exp(-(spec.c / spec.sigma) * g);
            return s;
        }
        outer += dt;
        x = out.x;
        if (out.contact) {
            g += dgamma;
            if (spec.eta > 0.0) {
                const double wait =
                    sample_increment(*spec.time_symbol, span, boundary_rng);
                if (outer + wait >= t) {
                    s.position = out.side == 0 ? spec.left : spec.right;
                    s.at_boundary = true;
                    s.weight = std::exp(-(spec.c / spec.sigma) * g);
                    return s;
                }
                outer += wait;
            }
        }
    }
}

namespace {

// Lazy first-passage ladder of a finite-activity subordinator with drift;
// reports the overshoot each time the running level is crossed.
class LazyLadder {
public:
    LazyLadder(const BernsteinSymbol& sym, Rng& rng) : sym_(&sym), rng_(&rng) {
        drift_ = sym.drift();
        if (sym.kind() == SymbolKind::Linear) {
            rate_ = 0.0;
        } else {
            auto mass = sym.levy_mass();
            if (!mass.is_finite())
                throw std::invalid_argument(
                    "jump_and_stop: space symbol must have finite activity");
            rate_ = mass.value();
            if (rate_ > 0.0) next_gap_ = rng_->exponential(rate_);
        }
    }

    // advance the ladder past `level`; returns the overshoot and sets
    // crossed_by_jump when a jump carried the path over
    double advance(double level, bool& crossed_by_jump) {
        crossed_by_jump = false;
        if (h_ >= level) {
            // still above from a previous jump
            return h_ - level;
        }
        for (;;) {
            if (rate_ == 0.0) {
                if (drift_ <= 0.0)
                    throw std::runtime_error("jump_and_stop: degenerate space symbol");
                h_ = level;
                return 0.0;
            }
            // drift segment until the next jump epoch
            if (drift_ > 0.0 && h_ + drift_ * next_gap_ >= level) {
                const double used = (level - h_) / drift_;
                next_gap_ -= used;
                h_ = level;
                return 0.0;
            }
            h_ += drift_ * next_gap_;
            h_ += sample_jump();
            next_gap_ = rng_->exponential(rate_);
            if (h_ >= level) {
                crossed_by_jump = true;
                return h_ - level;
            }
        }
    }

private:
    double sample_jump() {
        if (sym_->kind() == SymbolKind::CompoundPoisson)
            return sym_->jump_law().sample(*rng_);
        return rng_->exponential(sym_->theta());
    }

    const BernsteinSymbol* sym_;
    Rng* rng_;
    double drift_ = 0.0;
    double rate_ = 0.0;
    double h_ = 0.0;
    double next_gap_ = 0.0;
};

}  // namespace

TerminalSample jump_and_stop_path(const WalkSpec1D& spec, double t,
                                  std::uint64_t seed,
                                  std::vector<double>* jump_collector) {
    if (!spec.half_line)
        throw std::invalid_argument("jump_and_stop_path: needs a half-line domain");
    if (!spec.space_symbol)
        throw std::invalid_argument("jump_and_stop_path: missing space symbol");
    if (spec.eta > 0.0 && !spec.time_symbol)
        throw std::invalid_argument("jump_and_stop_path: missing time symbol");
    check_start(spec);
    Rng rng = Rng::stream(path_seed(seed, kBaseStream), 1);
    Rng boundary_rng = Rng::stream(path_seed(seed, kClockStream), 1);
    Rng space_rng = Rng::stream(path_seed(seed, kSpaceStream), 1);
    LazyLadder ladder(*spec.space_symbol, space_rng);

    const double dt = spec.dt;
    const double eps = contact_epsilon(dt);
    const double dgamma = local_time_increment(dt);
    const double span = spec.eta / spec.sigma * dgamma;
    const double step_scale = std::sqrt(2.0 * dt);

    double x = spec.x0;
    double g = 0.0;
    double outer = 0.0;
    double r_shift = 0.0;  // current overshoot R at the local-time level
    std::uint64_t steps = 0;
    TerminalSample s;
    while (true) {
        if (++steps > 80'000'000ULL) {
            s.censored = true;
            s.position = x + r_shift;
            return s;
        }
        const double xn = x + step_scale * rng.normal();
        auto out = advance_1d(spec, x, xn, eps);
        if (outer + dt >= t) {
            const double frac = (t - outer) / dt;
            s.position = x + frac * (out.x - x) + r_shift;
            return s;
        }
        outer += dt;
        x = out.x;
        if (out.contact) {
            g += dgamma;
            bool by_jump = false;
            r_shift = ladder.advance(g, by_jump);
            if (by_jump && jump_collector) jump_collector->push_back(r_shift);
            if (spec.eta > 0.0) {
                const double wait =
                    sample_increment(*spec.time_symbol, span, boundary_rng);
                if (outer + wait >= t) {
                    s.position = spec.left + r_shift;
                    s.at_boundary = (r_shift == 0.0);
                    return s;
                }
                outer += wait;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// estimators

namespace {

double sample_lifetime(const WalkSpec1D& spec, std::uint64_t seed, double cap,
                       bool& censored) {
    WalkSpec1D kill_spec = spec;
    kill_spec.mode = BoundaryMode::Kill;
    double horizon = 2.0;
    while (true) {
        auto rec = simulate_base_path(kill_spec, horizon, seed);
        if (rec.killed()) return rec.lifetime;
        if (horizon >= cap) {
            censored = true;
            return cap;
        }
        horizon = std::min(2.0 * horizon, cap);
    }
}

}  // namespace

MCEstimate mean_exit_time(const WalkSpec1D& spec, TimeChangeTag tag,
                          const BernsteinSymbol* change_symbol,
                          const MCOptions& opt) {
    if (opt.paths < 100)
        throw std::invalid_argument("mean_exit_time: need at least 100 paths");
    if (tag != TimeChangeTag::None && change_symbol == nullptr)
        throw std::invalid_argument("mean_exit_time: missing change symbol");
    std::vector<double> vals(static_cast<std::size_t>(opt.paths));
    std::vector<std::uint8_t> cens(static_cast<std::size_t>(opt.paths), 0);
    const double cap = static_cast<double>(opt.step_cap) * spec.dt;
    parallel_for(static_cast<std::size_t>(opt.paths), opt.threads,
                 [&](std::size_t i) {
        const std::uint64_t ps = path_seed(opt.seed, i);
        bool censored = false;
        const double zeta =
            sample_lifetime(spec, path_seed(ps, kBaseStream), cap, censored);
        double value = zeta;
        if (!censored && tag == TimeChangeTag::InverseL) {
            // lifetime of X(L_.) is the first outer time s with L_s >= zeta;
            // solved by exponential search + bisection on the inverse path
            auto clock = clock_path_through(*change_symbol, zeta, spec.dt,
                                            path_seed(ps, kClockStream));
            double hi = spec.dt;
            while (invert_path(clock, hi) < zeta) {
                hi *= 2.0;
                if (hi > 1e12) throw std::runtime_error("mean_exit_time: runaway");
            }
            double lo = 0.0;
            for (int it = 0; it < 64; ++it) {
                double mid = 0.5 * (lo + hi);
                (invert_path(clock, mid) < zeta ? lo : hi) = mid;
            }
            value = 0.5 * (lo + hi);
        } else if (!censored && tag == TimeChangeTag::DirectH) {
            // first passage of the clock through the base lifetime
            auto clock = clock_path_through(*change_symbol, zeta, spec.dt,
                                            path_seed(ps, kClockStream));
            value = invert_path(clock, zeta);
        }
        vals[i] = value;
        cens[i] = censored ? 1 : 0;
    });
    MCEstimate est;
    std::vector<double> kept;
    kept.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (cens[i])
            ++est.censored;
        else
            kept.push_back(vals[i]);
    }
    est.stat = mean_se(kept);
    return est;
}

MCEstimate mc_mean_custom(
    int paths, std::uint64_t seed, int threads,
    const std::function<TerminalSample(std::uint64_t)>& sampler,
    const std::function<double(const TerminalSample&)>& f) {
    std::vector<double> vals(static_cast<std::size_t>(paths));
    std::vector<std::uint8_t> cens(static_cast<std::size_t>(paths), 0);
    parallel_for(static_cast<std::size_t>(paths), threads, [&](std::size_t i) {
        TerminalSample s = sampler(path_seed(seed, i));
        vals[i] = f(s);
        cens[i] = s.censored ? 1 : 0;
    });
    MCEstimate est;
    est.stat = mean_se(vals);
    for (auto c : cens) est.censored += c;
    return est;
}

MCEstimate mc_mean(const WalkSpec1D& spec, TimeChangeTag tag,
                   const BernsteinSymbol* change_symbol, double t,
                   const std::function<double(const TerminalSample&)>& f,
                   const MCOptions& opt) {
    std::vector<double> vals(static_cast<std::size_t>(opt.paths));
    std::vector<std::uint8_t> cens(static_cast<std::size_t>(opt.paths), 0);
    parallel_for(static_cast<std::size_t>(opt.paths), opt.threads,
                 [&](std::size_t i) {
        const std::uint64_t ps = path_seed(opt.seed, i);
        TerminalSample s;
        switch (spec.mode) {
            case BoundaryMode::StickyNonlocal:
                s = sticky_elastic_path(spec, t, ps);
                break;
            case BoundaryMode::JumpAndStop:
                s = jump_and_stop_path(spec, t, ps);
                break;
            default:
                if (tag == TimeChangeTag::DirectH)
                    s = time_change_H(spec, *change_symbol, t, ps);
                else if (tag == TimeChangeTag::InverseL)
                    s = time_change_L(spec, *change_symbol, t, ps);
                else {
                    auto rec = simulate_base_path(spec, std::max(t, spec.dt),
                                                  path_seed(ps, kBaseStream));
                    s.position = rec.position(t);
                    s.alive = rec.alive_at(t);
                    if (spec.mode == BoundaryMode::Elastic)
                        s.weight = std::exp(-(spec.c / spec.sigma) *
                                            rec.local_time(t));
                }
        }
        vals[i] = f(s);
        cens[i] = s.censored ? 1 : 0;
    });
    MCEstimate est;
    est.stat = mean_se(vals);
    for (auto c : cens) est.censored += c;
    return est;
}

DelayClassification classify_delay(const WalkSpec1D& spec,
                                   const BernsteinSymbol& sym, TimeChangeTag tag,
                                   const MCOptions& opt) {
    DelayClassification out{};
    if (tag == TimeChangeTag::InverseL && !sym.phi_prime_at_zero().is_finite()) {
        // mean lifetime of the changed process is infinite; no simulation
        out.verdict = DelayVerdict::InfiniteMean;
        return out;
    }
    if (sym.kind() == SymbolKind::Linear) {
        out.verdict = DelayVerdict::Neutral;
        return out;
    }
    MCOptions base_opt = opt;
    base_opt.seed = path_seed(opt.seed, 101);
    MCOptions changed_opt = opt;
    changed_opt.seed = path_seed(opt.seed, 202);
    out.base = mean_exit_time(spec, TimeChangeTag::None, nullptr, base_opt).stat;
    out.changed = mean_exit_time(spec, tag, &sym, changed_opt).stat;
    const double gap = out.changed.mean - out.base.mean;
    const double se = 3.0 * combined_se(out.base, out.changed);
    if (gap > se)
        out.verdict = DelayVerdict::Delayed;
    else if (gap < -se)
        out.verdict = DelayVerdict::Rushed;
    else {
        out.verdict = DelayVerdict::Neutral;
        out.ci_overlap = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// planar walks

World2D::World2D(std::vector<Segment> segments, std::optional<Circle> target,
                 bool kill_boundary)
    : grid_(segments), target_(target), kill_boundary_(kill_boundary) {
    std::vector<Vec2> features;
    for (const auto& s : segments) {
        features.push_back(s.a);
        features.push_back(s.b);
    }
    features_ = FeatureDistanceField(features, grid_.bounds());
}

World2D World2D::from_domain(const PrefractalDomain& dom,
                             std::optional<Circle> target, bool kill_boundary) {
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < dom.boundary.size(); ++i)
        segs.push_back({dom.boundary[i],
                        dom.boundary[(i + 1) % dom.boundary.size()], 0});
    for (const auto& w : dom.walls) segs.push_back(w);
    return World2D(std::move(segs), target, kill_boundary);
}

World2D World2D::rectangle(double w, double h, std::optional<Circle> target,
                           bool kill_boundary) {
    std::vector<Segment> segs{{{0, 0}, {w, 0}, 0},
                              {{w, 0}, {w, h}, 0},
                              {{w, h}, {0, h}, 0},
                              {{0, h}, {0, 0}, 0}};
    return World2D(std::move(segs), target, kill_boundary);
}

World2D World2D::disk(Vec2 center, double radius, int facets,
                      std::optional<Circle> target, bool kill_boundary) {
    std::vector<Segment> segs;
    for (int i = 0; i < facets; ++i) {
        double a0 = 2.0 * std::numbers::pi * i / facets;
        double a1 = 2.0 * std::numbers::pi * (i + 1) / facets;
        segs.push_back({{center.x + radius * std::cos(a0),
                         center.y + radius * std::sin(a0)},
                        {center.x + radius * std::cos(a1),
                         center.y + radius * std::sin(a1)},
                        0});
    }
    return World2D(std::move(segs), target, kill_boundary);
}

bool World2D::contains(Vec2 p) const { return grid_.contains(p); }

namespace {

std::optional<double> circle_hit_param(Vec2 p, Vec2 d, const Circle& c) {
    const Vec2 m = p - c.center;
    const double a = d.norm2();
    if (a == 0.0) return std::nullopt;
    const double b = 2.0 * m.dot(d);
    const double cc = m.norm2() - c.radius * c.radius;
    if (cc <= 0.0) return 0.0;  // already inside
    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0) return std::nullopt;
    const double s = (-b - std::sqrt(disc)) / (2.0 * a);
    if (s < 0.0 || s > 1.0) return std::nullopt;
    return s;
}

}  // namespace

Walk2DResult walk_until_absorbed(const World2D& world, Vec2 x0,
                                 const Walk2DOptions& opt, std::uint64_t seed) {
    Walk2DResult res;
    if (!world.contains(x0))
        throw std::domain_error("walk_until_absorbed: start outside the domain");
    if (world.target() &&
        (x0 - world.target()->center).norm() <= world.target()->radius) {
        res.absorbed = true;
        res.end = x0;
        return res;
    }
    Rng rng = Rng::stream(seed, 2);
    Vec2 p = x0;
    double t = 0.0;
    std::uint64_t steps = 0;
    while (true) {
        if (++steps > opt.step_cap || t > opt.time_cap) {
            res.censored = true;
            res.time = t;
            res.end = p;
            return res;
        }
        double dt_local = opt.dt;
        if (opt.adaptive) {
            const double d = world.feature_distance(p);
            dt_local = std::clamp(d * d / 32.0, opt.dt_floor, opt.dt);
        }
        const double scale = std::sqrt(2.0 * dt_local);
        Vec2 d{scale * rng.normal(), scale * rng.normal()};
        double remaining = 1.0;  // fraction of this step still to travel
        for (int bounce = 0; bounce < 16; ++bounce) {
            std::optional<double> ball_s;
            if (world.target()) ball_s = circle_hit_param(p, d, *world.target());
            auto hit = world.segments().first_hit(p, d);
            if (ball_s && (!hit || *ball_s < hit->t)) {
                res.absorbed = true;
                res.time = t + dt_local * remaining * (*ball_s);
                res.end = p + d * (*ball_s);
                return res;
            }
            if (!hit) {
                p = p + d;
                break;
            }
            const Segment& seg = world.segments().segments()[hit->segment];
            if (seg.edge_class == 0 && world.kill_boundary()) {
                res.absorbed = true;
                res.time = t + dt_local * remaining * hit->t;
                res.end = hit->point;
                return res;
            }
            // specular reflection of the remaining displacement
            const Vec2 rest = d * (1.0 - hit->t);
            const Vec2 n = hit->normal;
            p = hit->point + n * 1e-12;
            d = rest - n * (2.0 * rest.dot(n));
            remaining *= (1.0 - hit->t);
            if (bounce == 15) {
                // give up on this step's leftover displacement
                break;
            }
        }
        t += dt_local;
    }
}

std::vector<std::uint64_t> reflected_occupancy(const World2D& world, Vec2 x0,
                                               double dt, double burn_in,
                                               double total_time,
                                               double sample_every, int bins_x,
                                               int bins_y, std::uint64_t seed) {
    std::vector<std::uint64_t> counts(
        static_cast<std::size_t>(bins_x) * static_cast<std::size_t>(bins_y), 0);
    Rng rng = Rng::stream(seed, 2);
    Vec2 p = x0;
    const auto& b = world.segments().bounds();
    const double wx = (b.xmax - b.xmin) / bins_x;
    const double wy = (b.ymax - b.ymin) / bins_y;
    double t = 0.0;
    double next_sample = burn_in;
    const double scale = std::sqrt(2.0 * dt);
    while (t < total_time) {
        Vec2 d{scale * rng.normal(), scale * rng.normal()};
        for (int bounce = 0; bounce < 16; ++bounce) {
            auto hit = world.segments().first_hit(p, d);
            if (!hit) {
                p = p + d;
                break;
            }
            const Vec2 rest = d * (1.0 - hit->t);
            const Vec2 n = hit->normal;
            p = hit->point + n * 1e-12;
            d = rest - n * (2.0 * rest.dot(n));
        }
        t += dt;
        if (t >= next_sample) {
            next_sample += sample_every;
            int ix = std::clamp(static_cast<int>((p.x - b.xmin) / wx), 0, bins_x - 1);
            int iy = std::clamp(static_cast<int>((p.y - b.ymin) / wy), 0, bins_y - 1);
            ++counts[static_cast<std::size_t>(iy) * bins_x + ix];
        }
    }
    return counts;
}

TrapScanResult trap_scan(const World2D& world, const std::vector<Vec2>& starts,
                         int paths_per_start, const Walk2DOptions& opt,
                         std::uint64_t seed, int threads) {
    if (!world.target())
        throw std::invalid_argument("trap_scan: world has no target ball");
    TrapScanResult out;
    out.rows.resize(starts.size());
    for (std::size_t si = 0; si < starts.size(); ++si) {
        std::vector<double> times(static_cast<std::size_t>(paths_per_start));
        std::vector<std::uint8_t> cens(times.size(), 0);
        parallel_for(times.size(), threads, [&](std::size_t i) {
            auto r = walk_until_absorbed(
                world, starts[si], opt,
                path_seed(seed, si * 1000003ULL + i));
            times[i] = r.time;
            cens[i] = r.censored ? 1 : 0;
        });
        std::vector<double> kept;
        kept.reserve(times.size());
        std::size_t censored = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (cens[i])
                ++censored;
            else
                kept.push_back(times[i]);
        }
        if (kept.empty())
            throw std::runtime_error("trap_scan: all paths censored at a start");
        out.rows[si] = {starts[si], mean_se(kept), censored};
    }
    out.sup_estimate = out.rows.front().hitting_time;
    for (const auto& row : out.rows)
        if (row.hitting_time.mean > out.sup_estimate.mean)
            out.sup_estimate = row.hitting_time;
    return out;
}

}  // namespace nk
