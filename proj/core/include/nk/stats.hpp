#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace nk {

// Neumaier compensated sum.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;

    double half_width(double z = 3.0) const { return z * se; }
};

// Deterministic reduction: always sums in index order with compensation,
// so the result is independent of how samples were produced in parallel.
inline MeanSE mean_se(std::span<const double> samples) {
    MeanSE r;
    r.count = samples.size();
    if (samples.empty()) return r;
    KahanSum s;
    for (double x : samples) s.add(x);
    r.mean = s.value() / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        KahanSum sq;
        for (double x : samples) {
            double d = x - r.mean;
            sq.add(d * d);
        }
        double var = sq.value() / static_cast<double>(samples.size() - 1);
        r.se = std::sqrt(var / static_cast<double>(samples.size()));
    }
    return r;
}

inline double combined_se(const MeanSE& a, const MeanSE& b) {
    return std::sqrt(a.se * a.se + b.se * b.se);
}

// |a - b| within z combined standard errors.
inline bool agree_within_se(const MeanSE& a, const MeanSE& b, double z = 3.0,
                            double extra_tol = 0.0) {
    return std::abs(a.mean - b.mean) <= z * combined_se(a, b) + extra_tol;
}

inline bool agree_with_value(const MeanSE& a, double v, double z = 3.0,
                             double extra_tol = 0.0) {
    return std::abs(a.mean - v) <= z * a.se + extra_tol;
}

}  // namespace nk
