#pragma once

// Number-theoretic substrate: Mobius sieve, Mertens sums, Mobius-twisted
// polynomial exponential sums, and continued-fraction analysis of the
// rotation number with the Q-sharp / Q-flat denominator classification.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilab/common.hpp"

namespace nilab::arith {

// ---------------------------------------------------------------------------
// Mobius function
// ---------------------------------------------------------------------------

struct MobiusTable {
    std::int64_t limit = 0;
    std::vector<std::int8_t> values;  // values[n] = mu(n) for 1 <= n <= limit; index 0 unused

    int mu(std::int64_t n) const { return values[static_cast<std::size_t>(n)]; }

    // One byte per entry; the segmented sieve never holds more than a segment
    // of cofactors at a time, so the table itself is the memory bound.
    static constexpr std::int64_t kDefaultCap = 200'000'000;
};

/// Segmented sieve of mu(n) for 1 <= n <= N.
MobiusTable mobius_sieve(std::int64_t N, std::int64_t cap = MobiusTable::kDefaultCap);

/// Mertens sum M(N) = sum_{n<=N} mu(n).
long long mertens(const MobiusTable& table, std::int64_t N);

/// Binary persistence: 16-byte header (magic "MOBI", u32 version, u64 N,
/// both little-endian) followed by N signed bytes values[1..N].
void save_mobius(const MobiusTable& table, const std::string& path);
MobiusTable load_mobius(const std::string& path);

// ---------------------------------------------------------------------------
// Mobius-twisted polynomial exponential sums
// ---------------------------------------------------------------------------

/// Phase recurrence for e(f(n)) along n = n0, n0+q, n0+2q, ... using the
/// forward-difference table of the polynomial f (degree <= 4). The multiply
/// cascade drifts in phase like steps^d / d! * ulp, so the table is re-seeded
/// exactly on a degree-dependent cadence (2^16, 2^10, 128, 64 for d = 1..4)
/// that keeps the worst-case window drift below 1e-10; reseeding also resets
/// the magnitudes.
class PolyPhaseRecurrence {
public:
    /// coeffs = (alpha_d, ..., alpha_0), highest degree first.
    PolyPhaseRecurrence(const std::vector<double>& coeffs, std::int64_t n0, std::int64_t q);

    cplx current() const { return diffs_.empty() ? cplx{1.0, 0.0} : diffs_[0]; }
    void advance();

    static constexpr int kMaxDegree = 4;
    static std::uint32_t reseed_period(int degree);

private:
    void seed(std::int64_t n);

    std::vector<std::vector<long double>> diff_polys_;  // Delta^j f, highest-first
    std::uint32_t reseed_period_ = 1u << 16;
    std::int64_t q_ = 1;
    std::int64_t n_ = 0;
    std::vector<cplx> diffs_;  // diffs_[j] = e(Delta^j f(n)) at the current n
    std::uint32_t steps_since_reseed_ = 0;
};

/// sum_{n<=N, n==a mod q, n>=1} mu(n) e(f(n)) with f given by coeffs
/// (alpha_d..alpha_0). Requires 0 <= a < q, N <= table.limit, degree <= 4.
cplx hua_sum(const std::vector<double>& f_coeffs, std::int64_t a, std::int64_t q,
             std::int64_t N, const MobiusTable& table);

// ---------------------------------------------------------------------------
// Rotation numbers and continued fractions
// ---------------------------------------------------------------------------

/// The rotation number alpha in [0,1), in one of four exact-enough forms.
class AlphaSpec {
public:
    enum class Kind { Rational, QuadraticIrrational, PartialQuotients, Decimal };

    static AlphaSpec rational(long long p, long long q);
    /// (sqrt(d)+p)/q with d > 0 non-square, q > 0, value in (0,1).
    static AlphaSpec quadratic_irrational(long long d, long long p, long long q);
    static AlphaSpec partial_quotients(std::vector<long long> a);
    /// Decimal string such as "0.6180339887" with a declared absolute precision.
    static AlphaSpec decimal(const std::string& digits, double precision);

    /// (sqrt(5)-1)/2, the golden mean conjugate.
    static AlphaSpec golden() { return quadratic_irrational(5, -1, 2); }

    Kind kind() const { return kind_; }
    double value() const;

    /// Signed fractional part of m*alpha, reduced to [-1/2, 1/2).
    /// Exact integer arithmetic per form; the result has full double accuracy
    /// regardless of the size of m*alpha.
    double signed_frac_times(long long m) const;

    /// ||m*alpha|| — distance from m*alpha to the nearest integer.
    double norm_dist_times(long long m) const { return std::fabs(signed_frac_times(m)); }

    /// e(m*alpha) - 1 without cancellation.
    cplx e_times_minus_one(long long m) const { return e2pi_minus_one(signed_frac_times(m)); }

    // Form access (used by cf_expand and the flows phase tracker).
    long long rat_p() const { return p_; }
    long long rat_q() const { return q_; }
    long long quad_d() const { return d_; }
    const std::vector<long long>& given_quotients() const { return pq_; }
    double declared_precision() const { return precision_; }

private:
    AlphaSpec() = default;

    Kind kind_ = Kind::Rational;
    long long p_ = 0, q_ = 1;       // rational / decimal-as-rational / pq final convergent
    long long d_ = 0;               // quadratic radicand (possibly scaled)
    std::vector<long long> pq_;     // partial quotients when given directly
    double precision_ = 0.0;        // decimal form only
};

struct Convergent {
    long long l = 0;
    long long q = 1;
};

enum class CfTermination {
    Complete,            // rational alpha fully expanded
    StopRule,            // max_terms / max_q reached, or given quotient list exhausted
    PrecisionExhausted,  // decimal form: further terms untrusted (q_i^2 > 1/precision)
    Overflow             // convergent recurrence left the int64 range
};

struct ContinuedFraction {
    std::vector<long long> a;             // partial quotients a_1..a_I
    std::vector<Convergent> convergents;  // (l_i, q_i), i = 1..I
    CfTermination termination = CfTermination::Complete;
    // Quadratic irrationals only: first index (0-based into a) of the periodic
    // tail and its length, when the stop rule allowed a full cycle.
    std::optional<int> period_start;
    std::optional<int> period_length;

    bool complete() const { return termination == CfTermination::Complete; }
    int terms() const { return static_cast<int>(a.size()); }
};

struct CfStop {
    std::optional<int> max_terms;
    std::optional<long long> max_q;
};

ContinuedFraction cf_expand(const AlphaSpec& alpha, const CfStop& stop);

// ---------------------------------------------------------------------------
// Q-sharp / Q-flat classification and the resonant mode set M1(B)
// ---------------------------------------------------------------------------

struct SharpRange {
    long long q = 0;       // q_i in Q#(B)
    long long q_next = 0;  // q_{i+1}
    int index = 0;         // 1-based position i in the expansion
};

struct DenominatorClassification {
    double B = 0.0;
    std::vector<long long> sharp;  // q_i with q_{i+1} > q_i^B > 1
    std::vector<long long> flat;   // remaining computed q_i, plus 1
    std::vector<SharpRange> sharp_ranges;
    std::vector<int> ties;  // 1-based indices where the outward-rounded compare straddled
    // M1 membership is decidable for |m| < decidable_below. INT64_MAX when the
    // expansion is complete (rational alpha).
    long long decidable_below = 0;
};

DenominatorClassification classify_denominators(const ContinuedFraction& cf, double B);

/// true iff m = 0 or q_i <= |m| < q_{i+1} with q_i | m for some q_i in Q#(B).
/// Throws UndeterminedMembershipError when |m| >= cls.decidable_below.
bool in_M1(long long m, const DenominatorClassification& cls);
bool in_M1(long long m, const ContinuedFraction& cf, double B);

}  // namespace nilab::arith
