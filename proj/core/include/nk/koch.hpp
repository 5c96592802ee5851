#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nk/geometry.hpp"
#include "nk/rng.hpp"

namespace nk {

// Four contractive similitudes psi_1..psi_4 on the plane with common ratio
// 1/ell, chaining the unit segment into the Koch generator. Affine maps are
// stored as complex coefficients: psi(z) = c z + d.
struct SimilitudeFamily {
    double ell;                    // reciprocal contraction factor, in (2,4)
    double theta;                  // arcsin(sqrt(ell(4-ell))/2)
    std::complex<double> coeff[4]; // c_i
    std::complex<double> shift[4]; // d_i

    std::complex<double> apply(int i, std::complex<double> z) const {
        return coeff[i] * z + shift[i];
    }
};

// Builds the family for a given ell and verifies the endpoint chaining
// psi_1(P2)=psi_2(P1), psi_2(P2)=psi_3(P1), psi_3(P2)=psi_4(P1) along with
// the fixed points psi_1(P1)=P1, psi_4(P2)=P2, to 1e-12.
SimilitudeFamily build_family(double ell);

// Per-level choice of contraction factor: either a fixed list or an i.i.d.
// stream over a finite alphabet of ell values.
class EnvironmentSequence {
public:
    static EnvironmentSequence deterministic(std::vector<double> ells);
    static EnvironmentSequence constant(double ell);
    static EnvironmentSequence iid(std::vector<double> ells,
                                   std::vector<double> probabilities,
                                   std::uint64_t seed);

    // realization of the first n factors (throws if a fixed list is shorter)
    std::vector<double> realize(int n) const;

    bool is_random() const { return random_; }
    double mean_ell() const;
    double mean_log_ell() const;
    const std::vector<double>& alphabet() const { return ells_; }
    const std::vector<double>& probabilities() const { return probs_; }
    std::uint64_t seed() const { return seed_; }

private:
    EnvironmentSequence() = default;
    std::vector<double> ells_;
    std::vector<double> probs_;
    std::vector<double> fixed_;
    bool random_ = false;
    std::uint64_t seed_ = 0;
};

enum class CurveOrientation { Inward, Outward };

// Level-n prefractal curve over the unit segment: 4^n + 1 vertices ordered
// from (0,0) to (1,0), with the realized factors attached.
struct PrefractalCurve {
    std::vector<Vec2> points;
    std::vector<double> ells;  // realization, one factor per level
    int level = 0;

    double total_length() const;
};

PrefractalCurve generate_curve(const EnvironmentSequence& env, int level);

// Opening fraction per construction level for the walled (trap) variant;
// values are clamped to (0, 1], 1 meaning no wall.
using OpeningSchedule = std::function<double(int)>;

// Planar domain: a regular m-gon with each side replaced by the level-n
// curve. Walls (trap variant) are kept separate from the boundary polygon so
// the polygon stays simple.
struct PrefractalDomain {
    std::vector<Vec2> boundary;   // closed simple polygon, CCW
    std::vector<Segment> walls;   // zero-thickness reflecting segments
    int polygon_sides = 0;
    int level = 0;
    CurveOrientation orientation = CurveOrientation::Outward;
    std::vector<double> ells;
    double sigma_weight = 1.0;    // ell^{(xi|n)} / 4^n

    std::size_t boundary_segments() const { return boundary.size(); }
    double boundary_length() const;
};

PrefractalDomain build_domain(int polygon_sides, const EnvironmentSequence& env,
                              int level, CurveOrientation orientation);

// Same construction with a wall across each triangular cell's mouth, leaving
// a centered gap of schedule(k) times the mouth width at construction level k.
PrefractalDomain build_trapped_domain(int polygon_sides,
                                      const EnvironmentSequence& env, int level,
                                      CurveOrientation orientation,
                                      const OpeningSchedule& schedule);

// ln 4^n / ln ell^{(xi|n)} for a realization.
double dimension_estimate(const std::vector<double>& ells);
// ln 4 / E[ln ell] for the distribution.
double dimension_limit(const EnvironmentSequence& env);

// Uniform cell measure 4^{-n} plus the cell's segment on the level-n curve.
struct CellMeasure {
    double weight;
    Vec2 from;
    Vec2 to;
};
CellMeasure volume_measure_weight(const PrefractalCurve& curve,
                                  const std::vector<int>& word);

// Number of grid boxes of side r met by the polyline.
std::size_t box_count(const std::vector<Vec2>& points, double r);

// Least-squares slope of log N(r) against log(1/r).
double box_dimension(const std::vector<Vec2>& points,
                     const std::vector<double>& scales);

}  // namespace nk
