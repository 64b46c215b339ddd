#pragma once

// Trigonometric-polynomial periodic functions with exact coefficient algebra:
// Fourier analysis, resonant/non-resonant splitting by the M1(B) mode set,
// and the small-divisor coboundary solver.

#include <random>
#include <utility>
#include <vector>

#include "nilab/arith.hpp"
#include "nilab/common.hpp"

namespace nilab::periodic {

class PeriodicFunction {
public:
    PeriodicFunction() = default;

    /// Coefficient table (unsorted pairs allowed). When real_valued, the table
    /// must satisfy c_{-m} = conj(c_m) to 1e-12.
    static PeriodicFunction from_coeffs(std::vector<std::pair<int, cplx>> coeffs,
                                        bool real_valued);

    static PeriodicFunction zero() { return {}; }
    static PeriodicFunction constant(double c);
    /// cos(2 pi m t) and sin(2 pi m t)
    static PeriodicFunction cosine(int m = 1);
    static PeriodicFunction sine(int m = 1);

    const std::vector<std::pair<int, cplx>>& coeffs() const { return coeffs_; }
    bool real_valued() const { return real_valued_; }
    bool is_zero() const { return coeffs_.empty(); }
    int max_mode() const;
    cplx coeff(int m) const;

    cplx eval_complex(double t) const;
    /// Real-path evaluation; requires real_valued().
    double eval(double t) const;

    /// hat f(0) — the mean over one period.
    double mean() const { return coeff(0).real(); }

    /// 2 pi sum |m| |c_m|, a Lipschitz constant w.r.t. circle distance.
    double lipschitz_bound() const;

    /// sum |c_m| — a uniform bound on |f|.
    double sup_bound() const;

    PeriodicFunction plus(const PeriodicFunction& other) const;
    PeriodicFunction minus(const PeriodicFunction& other) const;
    PeriodicFunction scaled(cplx factor) const;

private:
    std::vector<std::pair<int, cplx>> coeffs_;  // sorted by mode, no exact zeros
    bool real_valued_ = true;

    void normalize();
};

/// DFT coefficient extraction from 2^k equispaced samples on [0,1), k >= 3.
/// Output modes |m| <= 2^{k-1}-1; magnitudes below 1e-15 are zeroed.
PeriodicFunction from_samples(const std::vector<double>& samples);

inline constexpr long long kDefaultModeBudget = 1 << 20;

/// Coefficient convolution. Exact algebra on the tables; throws
/// SupportOverflowError naming the required budget when the combined support
/// exceeds mode_budget.
PeriodicFunction product(const PeriodicFunction& f, const PeriodicFunction& g,
                         long long mode_budget = kDefaultModeBudget);

struct ResonantSplit {
    double B = 0.0;
    PeriodicFunction part1;  // modes in M1(B)
    PeriodicFunction part2;  // modes in M2(B)
};

/// Exact coefficient partition by the M1(B) predicate. Membership must be
/// decidable for every supported mode (UndeterminedMembershipError otherwise).
ResonantSplit split_resonant(const PeriodicFunction& f,
                             const arith::DenominatorClassification& cls);
ResonantSplit split_resonant(const PeriodicFunction& f, const arith::ContinuedFraction& cf,
                             double B);

inline constexpr double kSmallDivisorFloor = 1e-12;

/// Solve g(t+alpha) - g(t) = f2(t) for trig-polynomial f2 with no mode 0:
/// hat g(m) = hat f2(m) / (e(m alpha) - 1).
PeriodicFunction solve_coboundary(const PeriodicFunction& f2, const arith::AlphaSpec& alpha,
                                  double divisor_floor = kSmallDivisorFloor);

/// sup |f| over an n-point equispaced grid.
double sup_on_grid(const PeriodicFunction& f, int n);

/// Random real trig polynomial with modes 1..max_mode, coefficient scale
/// decaying like m^{-decay}; mean zero.
PeriodicFunction random_real_trig(int max_mode, std::mt19937_64& rng, double decay = 2.0);

}  // namespace nilab::periodic
