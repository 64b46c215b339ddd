#pragma once

// Bowen-type averaged metrics, empirical-measure covering numbers, the
// explicit section-4 grids F(i), and the grid shadowing check.

#include <cstdint>
#include <string>
#include <vector>

#include "nilab/flows.hpp"
#include "nilab/heisenberg.hpp"

namespace nilab::complexity {

using heis::PhasePoint;
using flows::SkewProductSpec;

// ---------------------------------------------------------------------------
// Sample clouds with cached orbits
// ---------------------------------------------------------------------------

struct SampleCloud {
    std::vector<PhasePoint> points;
    std::string provenance;
    long long n_max = 0;
    // orbits[i][j] = step^j applied to points[i], j = 0..n_max
    std::vector<std::vector<PhasePoint>> orbits;

    std::size_t size() const { return points.size(); }
};

SampleCloud make_haar_cloud(const SkewProductSpec& spec, std::size_t count, long long n_max,
                            std::uint64_t seed);
SampleCloud make_orbit_cloud(const SkewProductSpec& spec, const PhasePoint& p0,
                             std::size_t count, long long gap, long long n_max,
                             long long burn_in = 0);

// ---------------------------------------------------------------------------
// Bowen metric
// ---------------------------------------------------------------------------

/// (1/n) sum_{j<n} d(T^j x, T^j y) from the cached orbits.
double bar_d_n(const SampleCloud& cloud, std::size_t i, std::size_t k, long long n);

/// Direct two-point version (no caches).
double bar_d_n(const SkewProductSpec& spec, const PhasePoint& p1, const PhasePoint& p2,
               long long n);

// ---------------------------------------------------------------------------
// Covering numbers
// ---------------------------------------------------------------------------

struct CoveringReport {
    long long n = 0;
    double epsilon = 0.0;
    int s_n = 0;
    std::vector<int> centers;
    double covered_mass = 0.0;
    double seconds = 0.0;
};

/// Greedy set cover over the pairwise bar_d_n ball incidence; deterministic
/// given the cloud order (ties broken by lowest index). Upper-bounds the
/// empirical s_n.
CoveringReport covering_number(const SampleCloud& cloud, long long n, double epsilon);

struct ComplexityScan {
    std::vector<CoveringReport> rows;
    double slope = 0.0;      // least-squares slope of log s_n vs log n
    double intercept = 0.0;
    double max_residual = 0.0;
};

/// Covering estimates at each n in ns (ascending) with one shared pairwise
/// accumulation pass, plus the fitted log-log growth exponent.
ComplexityScan complexity_scan(const SampleCloud& cloud, std::vector<long long> ns,
                               double epsilon);

// ---------------------------------------------------------------------------
// Section-4 grids
// ---------------------------------------------------------------------------

inline constexpr long long kDefaultGridCap = 10'000'000;

/// Lazy description of F(i) = F1(i) x F2(i): t in {j eps/(L q_i)}, lattice
/// spacing (q_i^2 L)^{-1} in x, y, z.
struct GridSpec {
    long long q_i = 1;
    long long inv_epsilon = 1;
    long long L = 1;
    long long t_count = 0;       // eps^{-1} L q_i
    long long lattice_side = 0;  // q_i^2 L
    long long cardinality = 0;   // eps^{-1} L^4 q_i^7

    PhasePoint at(long long ti, long long j1, long long j2, long long j3) const;
};

GridSpec plan_grid_F(long long q_i, long long inv_epsilon, long long L,
                     long long cap = kDefaultGridCap);

struct GridF {
    GridSpec spec;
    std::vector<PhasePoint> points;
    long long cardinality = 0;
};

/// Materialized grid; throws CapacityError above the cap.
GridF build_grid_F(long long q_i, long long inv_epsilon, long long L,
                   long long cap = kDefaultGridCap);

// ---------------------------------------------------------------------------
// Grid shadowing
// ---------------------------------------------------------------------------

struct ShadowingReport {
    double worst = 0.0;  // max over sample of min over grid of bar_d_{n_i}
    double bound = 0.0;  // (14 max(|k|,1) + 6) eps
    long long n_i = 0;   // q_i^{B-1}
    long long grid_cardinality = 0;
    double c1 = 0.0, c2 = 0.0;
    bool c1c2_check = false;          // (C1+C2)/q_i < eps
    bool epsilon_inverse_check = false;  // L > 1/eps
    bool pass = false;                // worst <= bound
};

/// Worst shadowing distance of random points by the grid F(i) over n_i =
/// q_i^{B-1} iterates of T1. L must dominate the Lipschitz bounds of the T1
/// data; the two analytic side conditions are evaluated and reported.
ShadowingReport grid_shadowing_check(const SkewProductSpec& spec_T1, long long q_i, double B,
                                     long long inv_epsilon, long long L,
                                     const std::vector<PhasePoint>& sample, double C1,
                                     long long cap = kDefaultGridCap);

}  // namespace nilab::complexity
