#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "nk/geometry.hpp"
#include "nk/koch.hpp"
#include "nk/rng.hpp"
#include "nk/stats.hpp"
#include "nk/subordinate.hpp"
#include "nk/symbols.hpp"

namespace nk {

// Generator convention is G = Laplacian throughout: one-dimensional steps
// have variance 2 dt, the killed-interval mean exit time is x(1-x)/2.

enum class BoundaryMode { Kill, Reflect, Elastic, StickyNonlocal, JumpAndStop };

struct WalkSpec1D {
    double left = 0.0;
    double right = 1.0;
    bool half_line = false;   // [left, infinity), boundary at left only
    bool free_space = false;  // no boundary at all (whole line)
    double x0 = 0.5;
    double dt = 1e-4;
    BoundaryMode mode = BoundaryMode::Kill;
    // boundary constants (eta D_t + sigma d_n + c)
    double eta = 1.0;
    double sigma = 1.0;
    double c = 0.0;
    // H^Psi driving boundary waiting times (sticky / jump-and-stop)
    std::optional<BernsteinSymbol> time_symbol;
    // H^Phi driving boundary jumps (jump-and-stop)
    std::optional<BernsteinSymbol> space_symbol;
};

// local-time increment per boundary contact event and the contact window;
// both are pinned functions of dt (see the elastic calibration test)
inline double local_time_increment(double dt) {
    return std::sqrt(2.0 * dt / std::numbers::pi);
}
inline double contact_epsilon(double dt) { return std::sqrt(dt); }

struct Contact {
    std::size_t step;  // grid index at which the contact was registered
    int side;          // 0 = left boundary, 1 = right
};

// Base-path record on the inner-time grid.
struct PathRecord1D {
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<double> pos;
    std::vector<double> gamma;     // cumulative local time
    std::vector<Contact> contacts;
    double lifetime = std::numeric_limits<double>::infinity();
    double exit_point = 0.0;

    bool killed() const { return std::isfinite(lifetime); }
    double position(double s) const;  // linear interpolation
    double local_time(double s) const;
    bool alive_at(double s) const { return s < lifetime; }
};

// Euler walk with specular reflection; local time accumulated per contact.
PathRecord1D simulate_base_path(const WalkSpec1D& spec, double horizon,
                                std::uint64_t seed);

// Same normal draws, two resolutions: the fine path at dt/2 and the coarse
// path from pairwise-summed increments. Used by grid-refinement checks.
std::pair<PathRecord1D, PathRecord1D> simulate_coupled_pair(
    const WalkSpec1D& spec, double horizon, std::uint64_t seed);

struct TerminalSample {
    double position = 0.0;
    bool alive = true;
    bool at_boundary = false;
    bool censored = false;  // a step cap bit before the requested time
    double weight = 1.0;    // elastic survival weight
};

// X at the inverse-subordinator clock L_t (continuous delaying change).
TerminalSample time_change_L(const WalkSpec1D& spec, const BernsteinSymbol& sym,
                             double t, std::uint64_t seed);

// X at the subordinator clock H_t (jumping change).
TerminalSample time_change_H(const WalkSpec1D& spec, const BernsteinSymbol& sym,
                             double t, std::uint64_t seed);

// Time-changed elastic construction: X+ composed with the inverse of
// Vbar_u = u + H((eta/sigma) gamma_u), weight exp(-(c/sigma) gamma).
TerminalSample sticky_elastic_path(const WalkSpec1D& spec, double t,
                                   std::uint64_t seed);

// Equivalent event-driven construction: the clock runs ordinarily in the
// interior and elapses subordinator waiting periods at boundary contacts.
TerminalSample hat_process_path(const WalkSpec1D& spec, double t,
                                std::uint64_t seed);

// Half-line boundary with interior jumps R (overshoot ladder of H^Phi read
// at the local-time level) plus sticky waiting via H^Psi.
TerminalSample jump_and_stop_path(const WalkSpec1D& spec, double t,
                                  std::uint64_t seed,
                                  std::vector<double>* jump_collector = nullptr);

enum class TimeChangeTag { None, InverseL, DirectH };

struct MCOptions {
    int paths = 10000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    double horizon = 4.0;
    std::uint64_t step_cap = 1'000'000;
};

struct MCEstimate {
    MeanSE stat;
    std::size_t censored = 0;
};

// Mean lifetime of the (possibly time-changed) killed walk.
MCEstimate mean_exit_time(const WalkSpec1D& spec, TimeChangeTag tag,
                          const BernsteinSymbol* change_symbol,
                          const MCOptions& opt);

// Monte Carlo mean of f at the time-changed state, dead paths contributing 0.
MCEstimate mc_mean(const WalkSpec1D& spec, TimeChangeTag tag,
                   const BernsteinSymbol* change_symbol, double t,
                   const std::function<double(const TerminalSample&)>& f,
                   const MCOptions& opt);

// Same reduction over terminal samples from a caller-supplied sampler (used
// for representation cross-checks).
MCEstimate mc_mean_custom(
    int paths, std::uint64_t seed, int threads,
    const std::function<TerminalSample(std::uint64_t)>& sampler,
    const std::function<double(const TerminalSample&)>& f);

enum class DelayVerdict { Delayed, Rushed, Neutral, InfiniteMean };

struct DelayClassification {
    DelayVerdict verdict;
    bool ci_overlap = false;  // verdict Neutral forced by overlapping intervals
    MeanSE base;
    MeanSE changed;
};

DelayClassification classify_delay(const WalkSpec1D& spec,
                                   const BernsteinSymbol& sym, TimeChangeTag tag,
                                   const MCOptions& opt);

// ---------------------------------------------------------------------------
// Planar walks

struct Circle {
    Vec2 center;
    double radius;
};

// Reflecting world made of boundary segments and interior walls, with an
// optional absorbing ball.
class World2D {
public:
    World2D(std::vector<Segment> segments, std::optional<Circle> target,
            bool kill_boundary);

    static World2D from_domain(const PrefractalDomain& dom,
                               std::optional<Circle> target, bool kill_boundary);
    static World2D rectangle(double w, double h, std::optional<Circle> target,
                             bool kill_boundary);
    static World2D disk(Vec2 center, double radius, int facets,
                        std::optional<Circle> target, bool kill_boundary);

    bool contains(Vec2 p) const;
    const SegmentGrid& segments() const { return grid_; }
    const std::optional<Circle>& target() const { return target_; }
    bool kill_boundary() const { return kill_boundary_; }
    double feature_distance(Vec2 p) const { return features_.lower_bound(p); }

private:
    SegmentGrid grid_;
    std::optional<Circle> target_;
    bool kill_boundary_;
    FeatureDistanceField features_;
};

struct Walk2DResult {
    double time = 0.0;
    bool absorbed = false;  // reached the target ball / killed at boundary
    bool censored = false;
    Vec2 end{};
};

struct Walk2DOptions {
    double dt = 1e-4;
    bool adaptive = false;       // shrink dt near features (openings, corners)
    double dt_floor = 1e-9;
    double time_cap = 1e6;
    std::uint64_t step_cap = 1'000'000;
};

// Runs until the ball is hit (or the boundary kills, or caps bite).
Walk2DResult walk_until_absorbed(const World2D& world, Vec2 x0,
                                 const Walk2DOptions& opt, std::uint64_t seed);

// Occupancy histogram of the reflected walk sampled every sample_every time
// units after burn-in; used by the uniformity test.
std::vector<std::uint64_t> reflected_occupancy(const World2D& world, Vec2 x0,
                                               double dt, double burn_in,
                                               double total_time,
                                               double sample_every, int bins_x,
                                               int bins_y, std::uint64_t seed);

struct TrapScanRow {
    Vec2 start;
    MeanSE hitting_time;
    std::size_t censored = 0;
};

struct TrapScanResult {
    std::vector<TrapScanRow> rows;
    MeanSE sup_estimate;  // row with the largest mean
};

TrapScanResult trap_scan(const World2D& world, const std::vector<Vec2>& starts,
                         int paths_per_start, const Walk2DOptions& opt,
                         std::uint64_t seed, int threads = 0);

// Deterministic per-path seeding; reductions are index-ordered so results do
// not depend on the thread count.
std::uint64_t path_seed(std::uint64_t master, std::uint64_t index);

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace nk
