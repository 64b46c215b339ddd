#pragma once

// The skew products S, T, T1, T1-tilde on T x Gamma\G, drift-free orbit
// iteration, Birkhoff sums S1..S4 with their closed forms, the resonant sums
// Phi_n / H_n / Psi_n, and the conjugation machinery R, R-tilde.

#include <functional>
#include <vector>

#include "nilab/arith.hpp"
#include "nilab/common.hpp"
#include "nilab/heisenberg.hpp"
#include "nilab/periodic.hpp"

namespace nilab::flows {

using heis::HeisenbergElement;
using heis::NilmanifoldPoint;
using heis::PhasePoint;
using periodic::PeriodicFunction;

// ---------------------------------------------------------------------------
// Skew product specifications
// ---------------------------------------------------------------------------

class SkewProductSpec {
public:
    enum class Kind { S, T, T1, T1Tilde };

    static SkewProductSpec make_S(arith::AlphaSpec alpha, PeriodicFunction phi1,
                                  PeriodicFunction phi2, PeriodicFunction psi);
    /// theorem2 asserts the mean-zero hypothesis on phi.
    static SkewProductSpec make_T(arith::AlphaSpec alpha, double k, PeriodicFunction phi,
                                  PeriodicFunction psi, bool theorem2 = false);
    static SkewProductSpec make_T1(arith::AlphaSpec alpha, double k, PeriodicFunction phi1,
                                   PeriodicFunction eta1, PeriodicFunction psi1);
    static SkewProductSpec make_T1_tilde(arith::AlphaSpec alpha, double c);
    /// Finite-Q# branch constant: c = -k/2 * hat eta(0) + hat psi(0).
    static SkewProductSpec make_T1_tilde_from_data(arith::AlphaSpec alpha, double k,
                                                   const PeriodicFunction& eta,
                                                   const PeriodicFunction& psi);

    Kind kind() const { return kind_; }
    const arith::AlphaSpec& alpha() const { return alpha_; }
    double k() const { return k_; }
    double central_constant() const { return c_; }
    bool theorem2() const { return theorem2_; }

    const PeriodicFunction& phi1() const { return phi1_; }  // phi for kind T
    const PeriodicFunction& phi2() const { return phi2_; }  // S only
    const PeriodicFunction& psi() const { return psi_; }    // psi / psi1
    const PeriodicFunction& eta1() const { return eta1_; }  // T1 only

    /// The fiber translation M(t) the step right-multiplies by.
    HeisenbergElement fiber_matrix(double t) const;

private:
    Kind kind_ = Kind::T1Tilde;
    arith::AlphaSpec alpha_ = arith::AlphaSpec::rational(0, 1);
    double k_ = 0.0;
    double c_ = 0.0;
    bool theorem2_ = false;
    PeriodicFunction phi1_, phi2_, psi_, eta1_;
};

/// One application of the skew product: t -> t + alpha (mod 1),
/// coset -> canonical(rep * M(t)).
PhasePoint step(const SkewProductSpec& spec, const PhasePoint& p);

// ---------------------------------------------------------------------------
// Drift-free phase of the base rotation
// ---------------------------------------------------------------------------

/// t0 + n*alpha mod 1 without O(n ulp) drift: exact residue arithmetic for
/// rational alpha, compensated incremental addition otherwise.
class PhaseTracker {
public:
    PhaseTracker(const arith::AlphaSpec& alpha, double t0);

    double current() const;
    void advance();
    long long steps() const { return n_; }

private:
    bool rational_ = false;
    long long a_ = 0, q_ = 1, res_ = 0;  // rational path: n*a mod q
    double t0_ = 0.0;
    double alpha_ = 0.0;
    double t_ = 0.0, comp_ = 0.0;  // compensated path
    long long n_ = 0;
};

/// Orbit iterator with the drift-free base phase.
class OrbitIterator {
public:
    OrbitIterator(const SkewProductSpec& spec, const PhasePoint& start);

    const PhasePoint& current() const { return current_; }
    void advance();
    long long index() const { return tracker_.steps(); }

private:
    const SkewProductSpec* spec_;
    PhaseTracker tracker_;
    PhasePoint current_;
};

/// P0, T^stride P0, T^{2 stride} P0, ... for exponents <= n.
std::vector<PhasePoint> orbit(const SkewProductSpec& spec, const PhasePoint& p0, long long n,
                              long long stride = 1);

// ---------------------------------------------------------------------------
// Birkhoff sums for S and the closed orbit form
// ---------------------------------------------------------------------------

struct BirkhoffSums {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

/// Incremental S1..S4 along the base orbit of t0; S4 is maintained through a
/// prefix recurrence, O(1) work per step.
class BirkhoffAccumulator {
public:
    BirkhoffAccumulator(const SkewProductSpec& spec_S, double t0);

    long long n() const { return n_; }
    BirkhoffSums current() const;
    void advance();

private:
    const SkewProductSpec* spec_;
    PhaseTracker tracker_;
    long long n_ = 0;
    KahanSum s1_, s2_, s3_;
    KahanSum lag_b_;  // sum_{l<=n-2} phi2(t_l)
    KahanSum lag_c_;  // sum_{l<=n-2} phi2(t_l) * S1(l+1)
    double prev_phi2_ = 0.0;
    bool have_prev_ = false;
};

BirkhoffSums birkhoff_S(const SkewProductSpec& spec_S, long long n, double t0);

/// g0 right-multiplied by the matrix with entries (S2, S3+S4, S1).
HeisenbergElement state_from_sums(const HeisenbergElement& g0, const BirkhoffSums& sums);

// ---------------------------------------------------------------------------
// Rational-alpha block sums and the polynomial models
// ---------------------------------------------------------------------------

struct BlockSums {
    long long a = 0, q = 1;
    double t0 = 0.0;
    // gamma(h, b) for b = 0..q; gamma(h) = gamma(h, q)/q
    std::vector<double> gamma_phi1, gamma_phi2, gamma_psi;
    double mean_phi1 = 0.0, mean_phi2 = 0.0, mean_psi = 0.0;

    // Per residue class b: affine models for S1..S3 and a quadratic Newton
    // form for S4 anchored at n = b with spacing q.
    struct Quad {
        double base = 0.0;  // b
        double d0 = 0.0, d1 = 0.0, d2 = 0.0;
        double spacing = 1.0;
        double eval(double n) const {
            return d0 + d1 * (n - base) + d2 * (n - base) * (n - base - spacing);
        }
    };
    std::vector<Quad> s4_model;

    BirkhoffSums eval(long long n) const;
};

/// Fits the per-class polynomial models from exact direct sums and validates
/// each class at a fourth point.
BlockSums block_sums(const SkewProductSpec& spec_S, double t0);

// ---------------------------------------------------------------------------
// Resonant sums Phi_n, H_n, Psi_n
// ---------------------------------------------------------------------------

struct ResonantSums {
    double phi = 0.0, eta = 0.0, psi = 0.0;
};

/// Direct summation over l < n of phi1, eta1, psi1 at l*alpha + t.
ResonantSums resonant_sums(const SkewProductSpec& spec_T1, long long n, double t);

/// Per-mode geometric series; exact fractional parts of m*alpha keep the
/// small divisors accurate. Requires |m*n| within int64.
double resonant_sum_fast(const PeriodicFunction& f, const arith::AlphaSpec& alpha, long long n,
                         double t);
ResonantSums resonant_sums_fast(const SkewProductSpec& spec_T1, long long n, double t);

/// Closed-form n-iterate of T1 through (Phi_n, H_n, Psi_n).
PhasePoint t1_iterate_closed(const SkewProductSpec& spec_T1, const PhasePoint& p, long long n);

// ---------------------------------------------------------------------------
// The conjugator R and the Theorem-2 pipeline
// ---------------------------------------------------------------------------

/// R: (t, Gamma g) -> (t, Gamma g * M(t)) with
/// M(t) = [x = g_phi, y = k g_phi, z = k/2 g_phi^2 - k/2 g_eta + g_psi](t).
class ConjugationMap {
public:
    ConjugationMap() = default;
    ConjugationMap(double k, PeriodicFunction g_phi, PeriodicFunction g_eta,
                   PeriodicFunction g_psi);

    HeisenbergElement matrix(double t) const;
    PhasePoint apply(const PhasePoint& p) const;
    PhasePoint apply_inverse(const PhasePoint& p) const;

private:
    double k_ = 0.0;
    PeriodicFunction g_phi_, g_eta_, g_psi_;
};

ConjugationMap build_R(double k, PeriodicFunction g_phi, PeriodicFunction g_eta,
                       PeriodicFunction g_psi);

/// max over the sample of phase_dist(T1(P), R^-1(T(R(P)))).
double conjugation_residual(const SkewProductSpec& spec_T, const ConjugationMap& R,
                            const SkewProductSpec& spec_T1,
                            const std::vector<PhasePoint>& sample);

/// Everything section-4 builds from (alpha, k, phi, psi, B): the splits, the
/// coboundary solutions, T, T1 and R. Works for both the infinite-Q# branch
/// (split by M1(B)) and, via build_finite_branch, the finite one.
struct Theorem2Pipeline {
    arith::AlphaSpec alpha = arith::AlphaSpec::rational(0, 1);
    double k = 0.0;
    double B = 0.0;
    arith::ContinuedFraction cf;
    arith::DenominatorClassification cls;
    PeriodicFunction phi, eta, psi;
    periodic::ResonantSplit phi_split, eta_split, psi_split;
    PeriodicFunction g_phi, g_eta, g_psi;
    SkewProductSpec spec_T = SkewProductSpec::make_T1_tilde(arith::AlphaSpec::rational(0, 1), 0.0);
    SkewProductSpec spec_T1 = spec_T;
    ConjugationMap R;
};

Theorem2Pipeline build_theorem2_pipeline(const arith::AlphaSpec& alpha, double k,
                                         const PeriodicFunction& phi,
                                         const PeriodicFunction& psi, double B,
                                         int cf_terms = 64);

/// Finite-Q# branch: coboundaries over all modes != 0, and T1-tilde with
/// c = -k/2 hat eta(0) + hat psi(0). Reuses the pipeline struct with
/// part1 = the mode-0 component and part2 = everything else.
Theorem2Pipeline build_finite_branch(const arith::AlphaSpec& alpha, double k,
                                     const PeriodicFunction& phi, const PeriodicFunction& psi,
                                     int cf_terms = 64);

/// sup over an n-point grid of |omega_long(t) - omega_simplified(t)| where
/// omega_long is the ten-term display produced by the conjugation and
/// omega_simplified = k/2 phi1^2 - k/2 eta1 + psi1.
double omega_identity_residual(const Theorem2Pipeline& pipe, int grid_n);

// ---------------------------------------------------------------------------
// Class-A closed form for rational alpha
// ---------------------------------------------------------------------------

/// Theta-type kernel omega(u, v) = sum_l exp(-pi (v + y0 + l)^2) e(l (u + x0)).
cplx omega_kernel(double u, double v, double x0, double y0, int trunc = 12);

/// f(S^n(start)) for the typical class-A observable, evaluated through the
/// omega kernel and the Birkhoff phase polynomial instead of orbit iteration.
cplx closed_form_classA(const SkewProductSpec& spec_S, long long n, const PhasePoint& start,
                        int trunc = 12);

// ---------------------------------------------------------------------------
// Factor map to T^3
// ---------------------------------------------------------------------------

struct TorusPoint {
    double t = 0.0, x = 0.0, y = 0.0;
};

inline TorusPoint pi_project(const PhasePoint& p) {
    return {p.t, p.coset.rep.x, p.coset.rep.y};
}

/// S-tilde (t, x, y) -> (t + alpha, x + phi1(t), y + phi2(t)) on T^3.
TorusPoint factor_step(const SkewProductSpec& spec_S, const TorusPoint& p);

// ---------------------------------------------------------------------------
// Lemma-4.3-style decay scan
// ---------------------------------------------------------------------------

struct DecayRow {
    long long qi = 0;
    double sup_phi = 0.0, sup_eta = 0.0, sup_psi = 0.0;
};

/// sup over a grid of |Phi_{q_i}|, |H_{q_i} - q_i hat eta(0)|,
/// |Psi_{q_i} - q_i hat psi(0)| for each sharp q_i.
std::vector<DecayRow> lemma43_scan(const Theorem2Pipeline& pipe, int grid_n);

}  // namespace nilab::flows
