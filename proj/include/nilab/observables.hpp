#pragma once

// The dense observable families: theta-like psi_mj / psi*_mj on Gamma\G with
// controlled Gaussian truncation, class-A phase observables, and class-B
// product observables (z-independent by construction).

#include <vector>

#include "nilab/common.hpp"
#include "nilab/heisenberg.hpp"
#include "nilab/periodic.hpp"

namespace nilab::obs {

inline constexpr int kDefaultTrunc = 12;

/// Gaussian tail beyond the truncation window: 2 exp(-pi (trunc-2)^2).
double psi_tail_bound(int trunc);

/// psi_mj(g) = e(mz + jx) sum_b exp(-pi (y+b+j/m)^2) e(mbx), truncated to a
/// window of radius trunc around the Gaussian center. Gamma-invariant.
cplx eval_psi(int m, int j, const heis::HeisenbergElement& g, int trunc = kDefaultTrunc);

/// psi*_mj(g) = i e(mz + jx) sum_b exp(-pi (y+b+j/m+1/2)^2)
///                           e( (y+b+j/m)/2 + mbx ).
cplx eval_psi_star(int m, int j, const heis::HeisenbergElement& g, int trunc = kDefaultTrunc);

enum class PsiVariant { Psi, PsiBar, PsiStar, PsiStarBar };

struct ObservableSpec {
    enum class Class { A, B, Typical };
    Class cls = Class::Typical;

    // class A: e(xi1 t + xi2 x + xi3 y) * variant_{mj}(coset)
    int xi1 = 0, xi2 = 0, xi3 = 0;
    int m = 1, j = 0;
    PsiVariant variant = PsiVariant::Psi;

    // class B: f1(t) * f2(x, y); f2 is a two-index trig table on T^2
    periodic::PeriodicFunction f1;
    std::vector<std::tuple<int, int, cplx>> f2;  // (mode_x, mode_y, coeff)

    static ObservableSpec classA(int xi1, int xi2, int xi3, int m, int j,
                                 PsiVariant variant = PsiVariant::Psi);
    static ObservableSpec classB(periodic::PeriodicFunction f1,
                                 std::vector<std::tuple<int, int, cplx>> f2);
    /// The typical class-A observable e(t+x+y+z) sum_l exp(-pi(y+l)^2) e(lx).
    static ObservableSpec typical();
};

cplx eval_observable(const ObservableSpec& spec, const heis::PhasePoint& p,
                     int trunc = kDefaultTrunc);

/// Uniform bound on |f| over the phase space (used for report sanity checks).
double observable_sup_bound(const ObservableSpec& spec, int trunc = kDefaultTrunc);

}  // namespace nilab::obs
