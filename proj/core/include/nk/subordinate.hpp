#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nk/laplace.hpp"
#include "nk/rng.hpp"
#include "nk/symbols.hpp"

namespace nk {

struct HorizonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One recorded jump of a step-type subordinator (time within the grid span).
struct JumpRecord {
    double time;
    double size;
};

// Discretized nondecreasing path of a subordinator H on a uniform grid.
// Step-type kinds additionally carry their exact jump list so first-passage
// inversion can resolve plateaus and overshoots exactly.
class SubordinatorPath {
public:
    SubordinatorPath(BernsteinSymbol symbol, double horizon, double dt,
                     std::uint64_t seed);

    const BernsteinSymbol& symbol() const { return symbol_; }
    double dt() const { return dt_; }
    double horizon() const { return horizon_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t size() const { return values_.size(); }
    double time_at(std::size_t i) const { return dt_ * static_cast<double>(i); }
    double value_at(std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    double max_value() const { return values_.back(); }

    bool has_exact_jumps() const { return exact_jumps_.has_value(); }
    const std::vector<JumpRecord>& jumps() const { return *exact_jumps_; }
    double drift_rate() const { return drift_; }

    // H evaluated at inner time s (linear interpolation for diffuse kinds,
    // exact drift+jump reconstruction for step kinds).
    double value(double s) const;
    // Left limit H(s-), the quantity lifetimes of L-changed processes need.
    double value_left(double s) const;

    // Extends the horizon in place using a child stream of the stored seed.
    void extend_to(double new_horizon);

private:
    void append_increments(double from, double to, Rng& rng);

    BernsteinSymbol symbol_;
    double dt_;
    double horizon_;
    std::uint64_t seed_;
    double drift_ = 0.0;
    std::vector<double> values_;
    std::optional<std::vector<JumpRecord>> exact_jumps_;
    std::uint64_t extension_count_ = 0;
};

// Samples H on [0, horizon] with step dt; increments are exact per kind.
SubordinatorPath sample_path(const BernsteinSymbol& symbol, double horizon,
                             double dt, std::uint64_t seed);

// One increment of H over a time span, exact in distribution.
double sample_increment(const BernsteinSymbol& symbol, double span, Rng& rng);

// First passage time L_t = inf{s >= 0 : H_s >= t}. Linear interpolation
// between bracketing grid points for continuous crossings; jump crossings
// map to the jump time so plateaus of L are preserved. Throws HorizonError
// past the simulated horizon.
double invert_path(const SubordinatorPath& path, double t);

// First passage of the drifted path Hbar_s = drift * s + H_s through t.
double invert_drifted(const SubordinatorPath& path, double drift, double t);

// Overshoot R_t = H(L_t) - t; zero when H crosses t continuously.
double overshoot(const SubordinatorPath& path, double t);

// Incremental first-passage evaluation for monotone query sequences.
class PathCursor {
public:
    explicit PathCursor(const SubordinatorPath& path) : path_(&path) {}
    double invert(double t);  // same semantics as invert_path
private:
    const SubordinatorPath* path_;
    std::size_t idx_ = 0;
    std::size_t jump_idx_ = 0;
};

// Marginal density of H_t at x. Closed forms for Stable(1/2) and Gamma;
// otherwise numerical Laplace inversion of exp(-t Phi(lambda)) in the x
// variable (with the atom at zero subtracted for step-type kinds).
double density_h(const BernsteinSymbol& symbol, double t, double x,
                 const LaplaceInverter& inv = {});

// Marginal density of the inverse L_t at x: numerical inversion in t of
// (Phi(lambda)/lambda) exp(-x Phi(lambda)); closed form for Stable(1/2).
double density_l(const BernsteinSymbol& symbol, double t, double x,
                 const LaplaceInverter& inv = {});

// Numerical inverse Laplace transform at t (thin wrapper dispatching on the
// inverter method).
double laplace_invert(const ComplexFn& transform, double t,
                      const LaplaceInverter& inv = {});

}  // namespace nk
