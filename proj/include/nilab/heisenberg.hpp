#pragma once

// The 3-dimensional Heisenberg group, its integer-lattice quotient, Mal'cev
// coordinates and the computable metric bounds used everywhere downstream.
//
// An element is the upper unitriangular matrix
//     [ 1  y  z ]
//     [ 0  1  x ]
//     [ 0  0  1 ]
// stored by its three free entries (x, y, z).

#include <algorithm>
#include <array>
#include <cmath>

#include "nilab/common.hpp"

namespace nilab::heis {

struct HeisenbergElement {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const HeisenbergElement&) const = default;
};

inline HeisenbergElement identity() { return {}; }

/// Matrix product. z picks up the shear term y1*x2.
inline HeisenbergElement mul(const HeisenbergElement& a, const HeisenbergElement& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z + a.y * b.x};
}

inline HeisenbergElement inv(const HeisenbergElement& g) {
    return {-g.x, -g.y, -g.z + g.x * g.y};
}

/// Mal'cev coordinates adapted to the lower central series: (x, y, z - x*y).
inline std::array<double, 3> malcev_kappa(const HeisenbergElement& g) {
    return {g.x, g.y, g.z - g.x * g.y};
}

inline double linf(const std::array<double, 3>& v) {
    return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])});
}

/// Coset representative with all coordinates in [0,1).
struct NilmanifoldPoint {
    HeisenbergElement rep;
};

/// Point of the product phase space T x Gamma\G.
struct PhasePoint {
    double t = 0.0;
    NilmanifoldPoint coset;
};

struct CanonicalResult {
    NilmanifoldPoint point;
    HeisenbergElement gamma;  // integer entries; point.rep == mul(gamma, g)
};

/// Left-translate g into the fundamental domain [0,1)^3.
/// gamma = (a, b, c) with a = -floor(x), b = -floor(y), c = -floor(z + b*x).
inline CanonicalResult canonical_rep(const HeisenbergElement& g) {
    const double a = -std::floor(g.x);
    const double b = -std::floor(g.y);
    const double c = -std::floor(g.z + b * g.x);
    HeisenbergElement gamma{a, b, c};
    HeisenbergElement rep = mul(gamma, g);
    // floor can leave an exact 1.0 after rounding; fold it back.
    if (rep.x >= 1.0) rep.x -= 1.0;
    if (rep.x < 0.0) rep.x += 1.0;
    if (rep.y >= 1.0) rep.y -= 1.0;
    if (rep.y < 0.0) rep.y += 1.0;
    if (rep.z >= 1.0) rep.z -= 1.0;
    if (rep.z < 0.0) rep.z += 1.0;
    return {NilmanifoldPoint{rep}, gamma};
}

/// One-hop upper bound on the left-invariant metric d_G:
/// min(|kappa(g1^-1 g2)|_inf, |kappa(g2^-1 g1)|_inf).
/// kappa(u^-1) = (-x, -y, -z), so the two chain directions share the
/// x/y entries and differ only in the central coordinate.
inline double dG_upper(const HeisenbergElement& g1, const HeisenbergElement& g2) {
    const HeisenbergElement d = mul(inv(g1), g2);
    const double zc = d.z - d.x * d.y;            // kappa(d)
    const double zr = d.z;                        // |kappa(d^-1)| central entry
    return std::max({std::fabs(d.x), std::fabs(d.y), std::min(std::fabs(zc), std::fabs(zr))});
}

/// Search window for the Gamma-infimum over canonical representatives.
/// |a| >= 2 or |b| >= 2 forces |kappa| >= 1 while an in-window candidate
/// already achieves <= 1/2 + O(1), so ab = 1 suffices. The central offset of
/// canonical reps ranges over (-4, 4), hence c = 4.
struct GammaWindow {
    int ab = 1;  // a, b in {-ab..ab}
    int c = 4;   // c in {-c..c}
};

/// Quotient metric upper bound: min over the gamma window of
/// dG_upper(p1.rep, gamma * p2.rep). Any gamma outside the default window
/// forces |kappa| >= 1 for canonical reps while an in-window candidate is < 1.
double quotient_dist(const NilmanifoldPoint& p1, const NilmanifoldPoint& p2,
                     const GammaWindow& window = {});

/// l-infinity product metric on T x Gamma\G.
inline double phase_dist(const PhasePoint& p1, const PhasePoint& p2,
                         const GammaWindow& window = {}) {
    return std::max(circle_dist(p1.t, p2.t), quotient_dist(p1.coset, p2.coset, window));
}

}  // namespace nilab::heis
