#include "nilab/arith.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <numeric>

#include "nilab/parallel.hpp"

namespace nilab::arith {

using i64 = std::int64_t;
using i128 = __int128;

namespace {

i64 isqrt64(i64 n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    auto r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

i128 isqrt128(i128 n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    auto r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<i64> primes_upto(i64 n) {
    std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
    std::vector<i64> primes;
    for (i64 p = 2; p <= n; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        primes.push_back(p);
        for (i64 m = p * p; m <= n; m += p) composite[static_cast<std::size_t>(m)] = true;
    }
    return primes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mobius sieve
// ---------------------------------------------------------------------------

MobiusTable mobius_sieve(i64 N, i64 cap) {
    if (N < 1) throw std::invalid_argument("mobius_sieve: N must be >= 1");
    if (N > cap)
        throw CapacityError("mobius_sieve: N=" + std::to_string(N) +
                            " exceeds the table capacity cap of " + std::to_string(cap) +
                            " entries (one byte each)");

    MobiusTable table;
    table.limit = N;
    table.values.assign(static_cast<std::size_t>(N) + 1, 1);
    table.values[0] = 0;

    const std::vector<i64> primes = primes_upto(isqrt64(N));
    constexpr i64 kSegment = 1 << 20;
    const i64 nsegments = (N + kSegment - 1) / kSegment;

    // Segments are independent; each keeps its own cofactor scratch.
    parallel_for_chunks(0, nsegments, [&](i64 seg_lo, i64 seg_hi) {
        std::vector<std::uint64_t> rem(kSegment);
        for (i64 seg = seg_lo; seg < seg_hi; ++seg) {
            const i64 lo = seg * kSegment + 1;
            const i64 hi = std::min(N, lo + kSegment - 1);
            for (i64 n = lo; n <= hi; ++n) rem[static_cast<std::size_t>(n - lo)] = static_cast<std::uint64_t>(n);
            std::int8_t* mu = table.values.data();
            for (i64 p : primes) {
                i64 start = ((lo + p - 1) / p) * p;
                for (i64 m = start; m <= hi; m += p) {
                    rem[static_cast<std::size_t>(m - lo)] /= static_cast<std::uint64_t>(p);
                    if (mu[m] != 0) mu[m] = static_cast<std::int8_t>(-mu[m]);
                }
                const i64 p2 = p * p;
                if (p2 > hi) continue;
                i64 start2 = ((lo + p2 - 1) / p2) * p2;
                for (i64 m = start2; m <= hi; m += p2) mu[m] = 0;
            }
            // surviving cofactor > 1 is a single prime above sqrt(N)
            for (i64 n = lo; n <= hi; ++n) {
                if (mu[n] != 0 && rem[static_cast<std::size_t>(n - lo)] > 1)
                    mu[n] = static_cast<std::int8_t>(-mu[n]);
            }
        }
    });

    return table;
}

long long mertens(const MobiusTable& table, i64 N) {
    if (N < 1 || N > table.limit)
        throw std::out_of_range("mertens: N=" + std::to_string(N) + " outside table limit " +
                                std::to_string(table.limit));
    long long sum = 0;
    for (i64 n = 1; n <= N; ++n) sum += table.values[static_cast<std::size_t>(n)];
    return sum;
}

// ---------------------------------------------------------------------------
// Binary persistence
// ---------------------------------------------------------------------------

namespace {

void put_u32_le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64_le(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64_le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void save_mobius(const MobiusTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_mobius: cannot open " + path);
    os.write("MOBI", 4);
    put_u32_le(os, 1);
    put_u64_le(os, static_cast<std::uint64_t>(table.limit));
    os.write(reinterpret_cast<const char*>(table.values.data() + 1), table.limit);
    if (!os) throw std::runtime_error("save_mobius: write failed for " + path);
}

MobiusTable load_mobius(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_mobius: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "MOBI")
        throw std::runtime_error("load_mobius: bad magic in " + path);
    const std::uint32_t version = get_u32_le(is);
    if (version != 1)
        throw std::runtime_error("load_mobius: unsupported version " + std::to_string(version));
    const auto N = static_cast<i64>(get_u64_le(is));
    MobiusTable table;
    table.limit = N;
    table.values.assign(static_cast<std::size_t>(N) + 1, 0);
    is.read(reinterpret_cast<char*>(table.values.data() + 1), N);
    if (!is) throw std::runtime_error("load_mobius: truncated table in " + path);
    return table;
}

// ---------------------------------------------------------------------------
// Polynomial phase recurrence and hua_sum
// ---------------------------------------------------------------------------

namespace {

// Q(x) = P(x+q) - P(x) expanded symbolically (coefficients highest-first).
// Differencing polynomial *coefficients* avoids the catastrophic cancellation
// of differencing large polynomial *values*.
std::vector<long double> delta_poly(const std::vector<long double>& p, i64 q) {
    if (p.size() <= 1) return {};  // constant  ->  zero polynomial
    const int dp = static_cast<int>(p.size()) - 1;
    std::vector<long double> shifted(p.size(), 0.0L);  // P(x+q)
    for (int idx = 0; idx <= dp; ++idx) {
        const long double c = p[static_cast<std::size_t>(idx)];
        const int power = dp - idx;
        long double term = c;  // c * C(power,k) * q^k accumulated over k
        for (int k = 0; k <= power; ++k) {
            shifted[static_cast<std::size_t>(dp - (power - k))] += term;
            term *= static_cast<long double>(power - k) / (k + 1) * static_cast<long double>(q);
        }
    }
    std::vector<long double> diff(p.size() - 1);  // degree drops by one
    for (std::size_t idx = 1; idx < p.size(); ++idx)
        diff[idx - 1] = shifted[idx] - p[idx];
    // leading coefficients cancel exactly; the remaining entries are shifted
    // by one because shifted[0] == p[0]
    return diff;
}

}  // namespace

PolyPhaseRecurrence::PolyPhaseRecurrence(const std::vector<double>& coeffs, i64 n0, i64 q)
    : q_(q), n_(n0) {
    const int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree > kMaxDegree)
        throw std::invalid_argument("PolyPhaseRecurrence: polynomial degree " +
                                    std::to_string(degree) + " exceeds supported maximum " +
                                    std::to_string(kMaxDegree));
    if (degree < 0) return;  // zero polynomial: phase identically 1

    diff_polys_.emplace_back(coeffs.begin(), coeffs.end());
    for (int j = 1; j <= degree; ++j) diff_polys_.push_back(delta_poly(diff_polys_.back(), q));
    reseed_period_ = reseed_period(degree);
    seed(n0);
}

std::uint32_t PolyPhaseRecurrence::reseed_period(int degree) {
    switch (degree) {
        case 3: return 128;
        case 4: return 64;
        case 2: return 1u << 10;
        default: return 1u << 16;
    }
}

void PolyPhaseRecurrence::seed(i64 n) {
    diffs_.resize(diff_polys_.size());
    for (std::size_t j = 0; j < diff_polys_.size(); ++j) {
        long double acc = 0.0L;
        for (long double c : diff_polys_[j]) acc = acc * n + c;
        diffs_[j] = e2pi(static_cast<double>(acc - std::floor(acc)));
    }
    steps_since_reseed_ = 0;
}

void PolyPhaseRecurrence::advance() {
    const std::size_t d = diffs_.size();
    n_ += q_;
    if (d <= 1) return;
    if (++steps_since_reseed_ >= reseed_period_) {
        seed(n_);
        return;
    }
    for (std::size_t j = 0; j + 1 < d; ++j) diffs_[j] *= diffs_[j + 1];
}

cplx hua_sum(const std::vector<double>& f_coeffs, i64 a, i64 q, i64 N,
             const MobiusTable& table) {
    if (q < 1) throw std::invalid_argument("hua_sum: q must be positive");
    if (a < 0 || a >= q) throw std::invalid_argument("hua_sum: residue a must satisfy 0 <= a < q");
    if (N > table.limit)
        throw std::out_of_range("hua_sum: N=" + std::to_string(N) + " outside table limit " +
                                std::to_string(table.limit));

    const i64 n0 = (a == 0) ? q : a;
    if (n0 > N) return {0.0, 0.0};

    PolyPhaseRecurrence rec(f_coeffs, n0, q);
    KahanSumComplex acc;
    for (i64 n = n0; n <= N; n += q) {
        const int mu = table.mu(n);
        if (mu != 0) acc.add(static_cast<double>(mu) * rec.current());
        rec.advance();
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// AlphaSpec
// ---------------------------------------------------------------------------

AlphaSpec AlphaSpec::rational(long long p, long long q) {
    if (q < 1) throw std::invalid_argument("AlphaSpec::rational: q must be positive");
    if (p < 0 || p >= q) throw std::invalid_argument("AlphaSpec::rational: need 0 <= p < q");
    const long long g = std::gcd(p, q);
    AlphaSpec s;
    s.kind_ = Kind::Rational;
    s.p_ = (g > 0) ? p / g : p;
    s.q_ = (g > 0) ? q / g : q;
    return s;
}

AlphaSpec AlphaSpec::quadratic_irrational(long long d, long long p, long long q) {
    if (d < 1) throw std::invalid_argument("AlphaSpec::quadratic_irrational: d must be positive");
    if (q == 0) throw std::invalid_argument("AlphaSpec::quadratic_irrational: q must be nonzero");
    const i64 r = isqrt64(d);
    if (r * r == d)
        throw std::invalid_argument("AlphaSpec::quadratic_irrational: d must be non-square");
    const long double v =
        (std::sqrt(static_cast<long double>(d)) + static_cast<long double>(p)) / static_cast<long double>(q);
    if (!(v > 0.0L && v < 1.0L))
        throw std::invalid_argument("AlphaSpec::quadratic_irrational: value not in (0,1)");
    AlphaSpec s;
    s.kind_ = Kind::QuadraticIrrational;
    s.d_ = d;
    s.p_ = p;
    s.q_ = q;
    return s;
}

AlphaSpec AlphaSpec::partial_quotients(std::vector<long long> a) {
    for (long long t : a)
        if (t < 1) throw std::invalid_argument("AlphaSpec::partial_quotients: terms must be >= 1");
    AlphaSpec s;
    s.kind_ = Kind::PartialQuotients;
    // Final convergent doubles as the numeric value of alpha (within 1/q_I^2).
    long long l2 = 1, q2 = 0, l1 = 0, q1 = 1;
    for (long long t : a) {
        long long l = 0, q = 0;
        if (__builtin_mul_overflow(t, l1, &l) || __builtin_add_overflow(l, l2, &l) ||
            __builtin_mul_overflow(t, q1, &q) || __builtin_add_overflow(q, q2, &q))
            break;
        l2 = l1; q2 = q1; l1 = l; q1 = q;
    }
    s.p_ = l1;
    s.q_ = q1;
    s.pq_ = std::move(a);
    return s;
}

AlphaSpec AlphaSpec::decimal(const std::string& digits, double precision) {
    if (!(precision > 0.0))
        throw std::invalid_argument("AlphaSpec::decimal: declared precision must be positive");
    std::size_t i = 0;
    if (i < digits.size() && digits[i] == '0') ++i;
    if (i < digits.size() && digits[i] == '.') ++i;
    long long num = 0, den = 1;
    bool any = false;
    for (; i < digits.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i])))
            throw std::invalid_argument("AlphaSpec::decimal: malformed decimal string '" + digits + "'");
        if (den > 100'000'000'000'000'000LL)
            throw std::invalid_argument("AlphaSpec::decimal: more than 18 fractional digits");
        num = num * 10 + (digits[i] - '0');
        den *= 10;
        any = true;
    }
    if (!any && !(digits == "0" || digits == "0." || digits == "0.0"))
        throw std::invalid_argument("AlphaSpec::decimal: malformed decimal string '" + digits + "'");
    if (num >= den) throw std::invalid_argument("AlphaSpec::decimal: value must lie in [0,1)");
    AlphaSpec s;
    s.kind_ = Kind::Decimal;
    s.p_ = num;
    s.q_ = den;
    s.precision_ = precision;
    return s;
}

double AlphaSpec::value() const {
    switch (kind_) {
        case Kind::QuadraticIrrational:
            return static_cast<double>(
                (std::sqrt(static_cast<long double>(d_)) + static_cast<long double>(p_)) /
                static_cast<long double>(q_));
        default:
            return static_cast<double>(static_cast<long double>(p_) / static_cast<long double>(q_));
    }
}

namespace {

// signed fractional part in [-1/2, 1/2) of (r + theta)/q with 0 <= theta < 1
double signed_frac_from_parts(i128 numer, long long q, long double theta) {
    i128 r = numer % q;
    if (r < 0) r += q;
    long double f = (static_cast<long double>(r) + theta) / static_cast<long double>(q);
    if (f >= 0.5L) f -= 1.0L;
    if (f < -0.5L) f += 1.0L;
    return static_cast<double>(f);
}

}  // namespace

double AlphaSpec::signed_frac_times(long long m) const {
    if (m == 0) return 0.0;
    if (kind_ != Kind::QuadraticIrrational)
        return signed_frac_from_parts(static_cast<i128>(m) * p_, q_, 0.0L);

    // m*(sqrt(d)+p)/q: reduce to positive m and q, flip the result if needed
    long long mm = m, qq = q_;
    bool flip = false;
    if (mm < 0) { mm = -mm; flip = !flip; }
    if (qq < 0) { qq = -qq; flip = !flip; }

    const i128 A = static_cast<i128>(mm) * mm * d_;  // (m sqrt d)^2
    const i128 s = isqrt128(A);
    const i128 delta = A - s * s;
    const long double theta =
        static_cast<long double>(delta) /
        (std::sqrt(static_cast<long double>(A)) + static_cast<long double>(s));

    double f = signed_frac_from_parts(s + static_cast<i128>(mm) * p_, qq, theta);
    if (flip) {
        f = -f;
        if (f >= 0.5) f -= 1.0;  // -(-1/2) wraps back
    }
    return f;
}

// ---------------------------------------------------------------------------
// Continued fractions
// ---------------------------------------------------------------------------

namespace {

// Incremental convergent builder with the standard seeds
// (l_-1, q_-1) = (1, 0), (l_0, q_0) = (0, 1).
struct ConvergentBuilder {
    long long l2 = 1, q2 = 0;
    long long l1 = 0, q1 = 1;

    // Returns the would-be next convergent or nullopt on int64 overflow.
    std::optional<Convergent> next(long long a) const {
        long long l = 0, q = 0;
        if (__builtin_mul_overflow(a, l1, &l) || __builtin_add_overflow(l, l2, &l)) return std::nullopt;
        if (__builtin_mul_overflow(a, q1, &q) || __builtin_add_overflow(q, q2, &q)) return std::nullopt;
        return Convergent{l, q};
    }
    void push(const Convergent& c) {
        l2 = l1; q2 = q1;
        l1 = c.l; q1 = c.q;
    }
};

bool stop_rule_hit(const CfStop& stop, int terms_emitted, long long next_q) {
    if (stop.max_terms && terms_emitted >= *stop.max_terms) return true;
    if (stop.max_q && next_q > *stop.max_q) return true;
    return false;
}

// Exact floor((sqrt(d)+P)/Q) for non-square d > 0, Q != 0.
long long floor_surd(i128 d, i128 P, i128 Q) {
    const i128 s = isqrt128(d);
    auto floor_div = [](i128 a, i128 b) {
        i128 q = a / b, r = a % b;
        if (r != 0 && ((r < 0) != (b < 0))) --q;
        return q;
    };
    // sqrt(d) > t  <=>  (t < 0) or d > t^2   (equality impossible: d non-square)
    auto surd_above = [d](i128 t) { return t < 0 || d > t * t; };
    // a <= (sqrt(d)+P)/Q  <=>  sqrt(d) >= aQ - P (Q>0), or sqrt(d) <= aQ - P (Q<0)
    auto le_value = [&](i128 a) {
        const i128 t = a * Q - P;
        return Q > 0 ? surd_above(t) : !surd_above(t);
    };
    i128 a = floor_div(s + P, Q) - 2;
    while (le_value(a + 1)) ++a;
    return static_cast<long long>(a);
}

ContinuedFraction expand_rational(long long num, long long den, const CfStop& stop,
                                  bool decimal_form, double precision) {
    ContinuedFraction cf;
    ConvergentBuilder cb;
    long long x = num, y = den;
    while (x != 0) {
        const long long a = y / x;
        const long long r = y % x;
        auto next = cb.next(a);
        if (!next) { cf.termination = CfTermination::Overflow; return cf; }
        if (decimal_form) {
            // q_i^2 beyond 1/precision means this term is already untrusted
            const double qd = static_cast<double>(next->q);
            if (qd * qd > 1.0 / precision) {
                cf.termination = CfTermination::PrecisionExhausted;
                return cf;
            }
        }
        if (stop_rule_hit(stop, cf.terms(), next->q)) {
            cf.termination = CfTermination::StopRule;
            return cf;
        }
        cf.a.push_back(a);
        cf.convergents.push_back(*next);
        cb.push(*next);
        y = x;
        x = r;
    }
    cf.termination = CfTermination::Complete;
    return cf;
}

ContinuedFraction expand_given(const std::vector<long long>& terms, const CfStop& stop) {
    ContinuedFraction cf;
    ConvergentBuilder cb;
    for (long long a : terms) {
        auto next = cb.next(a);
        if (!next) { cf.termination = CfTermination::Overflow; return cf; }
        if (stop_rule_hit(stop, cf.terms(), next->q)) {
            cf.termination = CfTermination::StopRule;
            return cf;
        }
        cf.a.push_back(a);
        cf.convergents.push_back(*next);
        cb.push(*next);
    }
    cf.termination = CfTermination::StopRule;  // the true expansion continues past the list
    return cf;
}

ContinuedFraction expand_quadratic(long long d0, long long p0, long long q0, const CfStop& stop) {
    // Normalize so that Q | d - P^2, scaling the radicand if necessary.
    i128 d = d0, P = p0, Q = q0;
    if ((d - P * P) % Q != 0) {
        const i128 aq = Q < 0 ? -Q : Q;
        d *= aq * aq;
        P *= aq;
        Q *= aq;
    }

    // a_0 = floor(alpha) = 0 for alpha in (0,1); the emitted terms start at
    // xi_1 = 1/alpha = (sqrt(d) - P) / ((d - P^2)/Q).
    i128 Pn = -P;
    i128 Qn = (d - P * P) / Q;

    ContinuedFraction cf;
    ConvergentBuilder cb;
    std::vector<std::pair<i128, i128>> seen;  // (P, Q) states for period detection
    while (true) {
        if (Qn == 0) throw std::logic_error("expand_quadratic: degenerate surd");
        if (!cf.period_start) {
            for (std::size_t k = 0; k < seen.size(); ++k) {
                if (seen[k].first == Pn && seen[k].second == Qn) {
                    cf.period_start = static_cast<int>(k);
                    cf.period_length = static_cast<int>(seen.size() - k);
                    break;
                }
            }
            if (!cf.period_start) seen.emplace_back(Pn, Qn);
        }

        const long long a = floor_surd(d, Pn, Qn);
        if (a < 1) throw std::logic_error("expand_quadratic: nonpositive partial quotient");
        auto next = cb.next(a);
        if (!next) { cf.termination = CfTermination::Overflow; return cf; }
        if (stop_rule_hit(stop, cf.terms(), next->q)) {
            cf.termination = CfTermination::StopRule;
            return cf;
        }
        cf.a.push_back(a);
        cf.convergents.push_back(*next);
        cb.push(*next);

        const i128 Pnext = static_cast<i128>(a) * Qn - Pn;
        Qn = (d - Pnext * Pnext) / Qn;
        Pn = Pnext;
        if (cf.terms() > 100000)
            throw std::logic_error("expand_quadratic: runaway expansion without stop rule");
    }
}

}  // namespace

ContinuedFraction cf_expand(const AlphaSpec& alpha, const CfStop& stop) {
    switch (alpha.kind()) {
        case AlphaSpec::Kind::Rational:
            return expand_rational(alpha.rat_p(), alpha.rat_q(), stop, false, 0.0);
        case AlphaSpec::Kind::Decimal:
            return expand_rational(alpha.rat_p(), alpha.rat_q(), stop, true,
                                   alpha.declared_precision());
        case AlphaSpec::Kind::PartialQuotients:
            return expand_given(alpha.given_quotients(), stop);
        case AlphaSpec::Kind::QuadraticIrrational:
            if (!stop.max_terms && !stop.max_q)
                throw std::invalid_argument(
                    "cf_expand: quadratic irrational expansion needs a stop rule");
            return expand_quadratic(alpha.quad_d(), alpha.rat_p(), alpha.rat_q(), stop);
    }
    throw std::logic_error("cf_expand: unknown AlphaSpec kind");
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace {

enum class PowCompare { Sharp, Flat, Tie };

// Decide q_next > q^B (with q^B > 1 meaning q >= 2).
PowCompare compare_against_power(long long q, long long q_next, double B) {
    if (q < 2) return PowCompare::Flat;  // q^B = 1 fails the "> 1" clause
    if (B == std::floor(B) && B <= 63.0) {
        const auto e = static_cast<int>(B);
        i128 pow = 1;
        for (int k = 0; k < e; ++k) {
            pow *= q;
            if (pow > static_cast<i128>(std::numeric_limits<long long>::max()))
                return PowCompare::Flat;  // q^B beyond int64 certainly exceeds q_next
        }
        return q_next > static_cast<long long>(pow) ? PowCompare::Sharp : PowCompare::Flat;
    }
    // Non-integral B: outward-rounded comparison of logs; report a tie when the
    // bounds straddle instead of guessing.
    const long double lhs = std::log(static_cast<long double>(q_next));
    const long double rhs = static_cast<long double>(B) * std::log(static_cast<long double>(q));
    const long double margin = 1e-16L * (std::fabs(lhs) + std::fabs(rhs) + 1.0L) * 8.0L;
    if (lhs > rhs + margin) return PowCompare::Sharp;
    if (lhs < rhs - margin) return PowCompare::Flat;
    return PowCompare::Tie;
}

}  // namespace

DenominatorClassification classify_denominators(const ContinuedFraction& cf, double B) {
    if (!(B > 2.0)) throw std::invalid_argument("classify_denominators: require B > 2");

    DenominatorClassification cls;
    cls.B = B;
    const int n = static_cast<int>(cf.convergents.size());
    for (int i = 1; i <= n; ++i) {
        const long long qi = cf.convergents[static_cast<std::size_t>(i - 1)].q;
        if (i < n) {
            const long long qn = cf.convergents[static_cast<std::size_t>(i)].q;
            switch (compare_against_power(qi, qn, B)) {
                case PowCompare::Sharp:
                    cls.sharp.push_back(qi);
                    cls.sharp_ranges.push_back({qi, qn, i});
                    continue;
                case PowCompare::Tie:
                    cls.ties.push_back(i);
                    break;  // classified flat, with the tie reported
                case PowCompare::Flat:
                    break;
            }
        }
        // i == n: the successor is unknown (or absent, for complete expansions)
        cls.flat.push_back(qi);
    }
    cls.flat.push_back(1);
    std::sort(cls.flat.begin(), cls.flat.end());
    cls.flat.erase(std::unique(cls.flat.begin(), cls.flat.end()), cls.flat.end());

    cls.decidable_below = cf.complete() ? std::numeric_limits<long long>::max()
                          : (n > 0 ? cf.convergents.back().q : 0);
    return cls;
}

bool in_M1(long long m, const DenominatorClassification& cls) {
    if (m == 0) return true;
    const long long am = m < 0 ? -m : m;
    if (am >= cls.decidable_below)
        throw UndeterminedMembershipError(
            "in_M1: |m|=" + std::to_string(am) + " is at or beyond the largest classified range (" +
            std::to_string(cls.decidable_below) + "); expand more continued-fraction terms");
    for (const SharpRange& r : cls.sharp_ranges) {
        if (am < r.q) break;
        if (am < r.q_next) return am % r.q == 0;
    }
    return false;
}

bool in_M1(long long m, const ContinuedFraction& cf, double B) {
    return in_M1(m, classify_denominators(cf, B));
}

}  // namespace nilab::arith
