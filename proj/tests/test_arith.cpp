#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "nilab/arith.hpp"

using namespace nilab;
using namespace nilab::arith;

namespace {

// Trial-division oracle for mu(n), independent of the sieve.
int mu_by_factorization(long long n) {
    int factors = 0;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        ++factors;
    }
    if (n > 1) ++factors;
    return (factors % 2 == 0) ? 1 : -1;
}

// Second, independently coded sieve: start from all ones, flip the sign once
// per prime divisor, zero out multiples of squares. Used only to pin the
// Mertens value.
long long mertens_by_flip_sieve(long long N) {
    std::vector<std::int8_t> mu(static_cast<std::size_t>(N) + 1, 1);
    std::vector<bool> is_prime(static_cast<std::size_t>(N) + 1, true);
    for (long long p = 2; p <= N; ++p) {
        if (!is_prime[static_cast<std::size_t>(p)]) continue;
        for (long long m = 2 * p; m <= N; m += p) is_prime[static_cast<std::size_t>(m)] = false;
        for (long long m = p; m <= N; m += p) mu[static_cast<std::size_t>(m)] = -mu[static_cast<std::size_t>(m)];
        if (p <= N / p)
            for (long long m = p * p; m <= N; m += p * p) mu[static_cast<std::size_t>(m)] = 0;
    }
    long long sum = 0;
    for (long long n = 1; n <= N; ++n) sum += mu[static_cast<std::size_t>(n)];
    return sum;
}

}  // namespace

TEST_CASE("mobius sieve small values") {
    const MobiusTable t10 = mobius_sieve(10);
    const int expected[10] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (int n = 1; n <= 10; ++n) CHECK(t10.mu(n) == expected[n - 1]);

    CHECK(mobius_sieve(1).mu(1) == 1);
    CHECK(mobius_sieve(4).mu(4) == 0);
}

TEST_CASE("sieve agrees with trial-division factorization up to 1e5") {
    const MobiusTable table = mobius_sieve(100000);
    for (long long n = 1; n <= 100000; ++n) REQUIRE(table.mu(n) == mu_by_factorization(n));
}

TEST_CASE("sieve capacity error names the cap") {
    CHECK_THROWS_WITH_AS(mobius_sieve(100, 10), doctest::Contains("cap"), CapacityError);
}

TEST_CASE("mertens") {
    const MobiusTable table = mobius_sieve(1000000);
    CHECK(mertens(table, 1) == 1);
    CHECK(mertens(table, 2) == 0);
    const long long oracle = mertens_by_flip_sieve(1000000);
    CHECK(mertens(table, 1000000) == oracle);
    CHECK(oracle == 212);  // frozen from the flip-sieve oracle
    CHECK_THROWS_AS(mertens(table, 2000000), std::out_of_range);
}

TEST_CASE("mobius table binary round trip") {
    const MobiusTable table = mobius_sieve(1000);
    const std::string path = (std::filesystem::temp_directory_path() / "mu_roundtrip.bin").string();
    save_mobius(table, path);

    std::ifstream is(path, std::ios::binary);
    char header[16];
    is.read(header, 16);
    CHECK(std::string(header, 4) == "MOBI");
    CHECK(header[4] == 1);  // version, little-endian u32
    CHECK(header[8] == static_cast<char>(1000 & 0xFF));
    CHECK(header[9] == static_cast<char>((1000 >> 8) & 0xFF));
    is.close();

    const MobiusTable loaded = load_mobius(path);
    CHECK(loaded.limit == table.limit);
    CHECK(loaded.values == table.values);
    std::filesystem::remove(path);
}

TEST_CASE("hua_sum basics") {
    const MobiusTable table = mobius_sieve(10000);
    SUBCASE("zero polynomial reduces to Mertens") {
        const cplx s = hua_sum({}, 0, 1, 10, table);
        CHECK(s.real() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(s.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("constant phase factors out") {
        const double c = 0.37;
        const cplx s = hua_sum({c}, 0, 1, 1000, table);
        const cplx expected = e2pi(c) * static_cast<double>(mertens(table, 1000));
        CHECK(std::abs(s - expected) < 1e-10);
    }
    SUBCASE("degree cap") {
        CHECK_THROWS_AS(hua_sum({1, 0, 0, 0, 0, 0}, 0, 1, 10, table), std::invalid_argument);
    }
    SUBCASE("residue classes partition the full sum") {
        const std::vector<double> f{std::sqrt(2.0), 0.0, 0.0};
        cplx by_classes{0.0, 0.0};
        for (long long a = 0; a < 3; ++a) by_classes += hua_sum(f, a, 3, 5000, table);
        const cplx full = hua_sum(f, 0, 1, 5000, table);
        CHECK(std::abs(by_classes - full) < 1e-7);
    }
}

TEST_CASE("phase recurrence matches per-term evaluation to 1e-9") {
    auto direct_phase = [](const std::vector<long double>& coeffs, long long n) {
        long double acc = 0.0L;
        for (long double c : coeffs) acc = acc * n + c;
        acc -= std::floor(acc);
        return cplx{static_cast<double>(std::cos(2.0L * 3.14159265358979323846264338327950288L * acc)),
                    static_cast<double>(std::sin(2.0L * 3.14159265358979323846264338327950288L * acc))};
    };

    SUBCASE("quadratic sqrt2 phase, q=1") {
        const std::vector<double> f{std::sqrt(2.0), 0.0, 0.0};
        const std::vector<long double> fl(f.begin(), f.end());
        PolyPhaseRecurrence rec(f, 1, 1);
        double worst = 0.0;
        for (long long n = 1; n <= 10000; ++n) {
            worst = std::max(worst, std::abs(rec.current() - direct_phase(fl, n)));
            rec.advance();
        }
        CHECK(worst < 1e-9);
    }
    SUBCASE("degree 4 along a progression") {
        const std::vector<double> f{1.37e-12, -5.9e-9, 1e-6 * std::sqrt(3.0), 0.25, 0.8};
        const std::vector<long double> fl(f.begin(), f.end());
        PolyPhaseRecurrence rec(f, 3, 7);
        double worst = 0.0;
        for (long long n = 3; n <= 9000; n += 7) {
            worst = std::max(worst, std::abs(rec.current() - direct_phase(fl, n)));
            rec.advance();
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("cf_expand rational") {
    const auto cf = cf_expand(AlphaSpec::rational(7, 16), {});
    REQUIRE(cf.a == std::vector<long long>{2, 3, 2});
    REQUIRE(cf.convergents.size() == 3);
    CHECK(cf.convergents[0].l == 1);
    CHECK(cf.convergents[0].q == 2);
    CHECK(cf.convergents[1].l == 3);
    CHECK(cf.convergents[1].q == 7);
    CHECK(cf.convergents[2].l == 7);
    CHECK(cf.convergents[2].q == 16);
    CHECK(cf.complete());

    CHECK(cf_expand(AlphaSpec::rational(0, 1), {}).a.empty());
    CHECK(cf_expand(AlphaSpec::rational(0, 1), {}).complete());
}

TEST_CASE("cf_expand golden mean") {
    const auto cf = cf_expand(AlphaSpec::golden(), CfStop{25, std::nullopt});
    REQUIRE(cf.terms() == 25);
    for (long long a : cf.a) CHECK(a == 1);
    long long f_prev = 1, f_cur = 1;  // Fibonacci: q_i = 1, 2, 3, 5, 8, ...
    for (const auto& c : cf.convergents) {
        CHECK(c.q == f_cur);
        const long long next = f_prev + f_cur;
        f_prev = f_cur;
        f_cur = next;
    }
    REQUIRE(cf.period_start.has_value());
    CHECK(*cf.period_start == 0);
    CHECK(*cf.period_length == 1);
}

TEST_CASE("cf_expand sqrt(2)-1 period") {
    const auto cf = cf_expand(AlphaSpec::quadratic_irrational(2, -1, 1), CfStop{12, std::nullopt});
    for (long long a : cf.a) CHECK(a == 2);  // sqrt(2)-1 = [0; 2, 2, 2, ...]
}

TEST_CASE("continued fraction identities") {
    auto check_invariants = [](const ContinuedFraction& cf, long double alpha) {
        long long l_prev = 0, q_prev = 1;  // virtual predecessor of the first convergent
        for (std::size_t p = 0; p < cf.convergents.size(); ++p) {
            const auto [l, q] = cf.convergents[p];
            const long long det = l * q_prev - l_prev * q;
            CHECK(det == ((p % 2 == 0) ? 1 : -1));
            if (p > 0) CHECK(q > q_prev);
            if (p + 1 < cf.convergents.size()) {
                const long double err = std::fabs(alpha - static_cast<long double>(l) / q);
                CHECK(static_cast<double>(err * q * cf.convergents[p + 1].q) <= 1.0 + 1e-12);
            }
            l_prev = l;
            q_prev = q;
        }
    };
    check_invariants(cf_expand(AlphaSpec::rational(7, 16), {}), 7.0L / 16.0L);
    check_invariants(cf_expand(AlphaSpec::rational(355, 1130), {}), 355.0L / 1130.0L);
    check_invariants(cf_expand(AlphaSpec::golden(), CfStop{40, std::nullopt}),
                     (std::sqrt(5.0L) - 1.0L) / 2.0L);
    check_invariants(cf_expand(AlphaSpec::quadratic_irrational(2, -1, 1), CfStop{20, std::nullopt}),
                     std::sqrt(2.0L) - 1.0L);
}

TEST_CASE("cf_expand decimal precision guard") {
    // golden to 10 digits: trusted terms stop once q_i^2 > 1e10
    const auto cf = cf_expand(AlphaSpec::decimal("0.6180339887", 1e-10), {});
    CHECK(cf.termination == CfTermination::PrecisionExhausted);
    REQUIRE(cf.terms() >= 20);
    for (long long a : cf.a) CHECK(a == 1);
    for (const auto& c : cf.convergents) CHECK(static_cast<double>(c.q) * c.q <= 1e10);
}

TEST_CASE("signed fractional parts are exact") {
    SUBCASE("rational") {
        const auto alpha = AlphaSpec::rational(3, 7);
        CHECK(alpha.signed_frac_times(7) == 0.0);
        CHECK(alpha.signed_frac_times(1) == doctest::Approx(3.0 / 7).epsilon(1e-15));
        CHECK(alpha.signed_frac_times(2) == doctest::Approx(6.0 / 7 - 1.0).epsilon(1e-15));
        CHECK(alpha.norm_dist_times(5) == doctest::Approx(1.0 / 7).epsilon(1e-14));
    }
    SUBCASE("quadratic vs long-double evaluation") {
        const auto alpha = AlphaSpec::golden();
        const long double a = (std::sqrt(5.0L) - 1.0L) / 2.0L;
        for (long long m : {1LL, 2LL, 13LL, 144LL, 987LL, 10946LL, 832040LL}) {
            long double f = std::fmod(static_cast<long double>(m) * a, 1.0L);
            if (f >= 0.5L) f -= 1.0L;
            CHECK(std::fabs(alpha.signed_frac_times(m) - static_cast<double>(f)) < 1e-12);
            CHECK(alpha.signed_frac_times(-m) ==
                  doctest::Approx(-alpha.signed_frac_times(m)).epsilon(1e-15));
        }
        // ||q_i alpha|| sits in (1/(q_{i+1}+q_i), 1/q_{i+1})
        const auto cf = cf_expand(alpha, CfStop{30, std::nullopt});
        for (std::size_t p = 0; p + 1 < cf.convergents.size(); ++p) {
            const double nd = alpha.norm_dist_times(cf.convergents[p].q);
            const auto qn = static_cast<double>(cf.convergents[p + 1].q);
            const auto qi = static_cast<double>(cf.convergents[p].q);
            CHECK(nd < 1.0 / qn);
            CHECK(nd > 1.0 / (qn + qi));
        }
    }
}

TEST_CASE("denominator classification") {
    SUBCASE("golden, B=3: no sharp denominators") {
        const auto cf = cf_expand(AlphaSpec::golden(), CfStop{30, std::nullopt});
        const auto cls = classify_denominators(cf, 3.0);
        CHECK(cls.sharp.empty());
        CHECK(cls.ties.empty());
        CHECK(std::find(cls.flat.begin(), cls.flat.end(), 1) != cls.flat.end());
    }
    SUBCASE("Liouville-type preset: q2, q3, q4 sharp at B=3") {
        const auto alpha = AlphaSpec::partial_quotients({2, 1, 9, 841, 595040846});
        const auto cf = cf_expand(alpha, {});
        REQUIRE(cf.terms() == 5);
        // q = 2, 3, 29, 24392, ...
        CHECK(cf.convergents[1].q == 3);
        CHECK(cf.convergents[2].q == 29);
        CHECK(cf.convergents[3].q == 24392);
        const auto cls = classify_denominators(cf, 3.0);
        CHECK(cls.sharp == std::vector<long long>{3, 29, 24392});
        CHECK(cls.decidable_below == cf.convergents.back().q);
    }
    SUBCASE("non-integral B") {
        const auto cf = cf_expand(AlphaSpec::rational(7, 16), {});
        const auto cls = classify_denominators(cf, 2.5);
        // q1=2: q2=7 > 2^2.5 = 5.66 -> sharp; q2=7: q3=16 < 7^2.5 -> flat
        CHECK(cls.sharp == std::vector<long long>{2});
        CHECK(cls.ties.empty());
    }
    SUBCASE("B must exceed 2") {
        const auto cf = cf_expand(AlphaSpec::rational(7, 16), {});
        CHECK_THROWS_AS(classify_denominators(cf, 2.0), std::invalid_argument);
    }
}

TEST_CASE("M1 membership") {
    const auto alpha = AlphaSpec::partial_quotients({2, 1, 9, 841, 595040846});
    const auto cf = cf_expand(alpha, {});
    const auto cls = classify_denominators(cf, 3.0);

    CHECK(in_M1(0, cls));
    CHECK(in_M1(3, cls));
    CHECK(in_M1(-3, cls));
    CHECK(in_M1(6, cls));
    CHECK(in_M1(27, cls));
    CHECK_FALSE(in_M1(7, cls));
    CHECK_FALSE(in_M1(28, cls));   // 28 in [3,29) not a multiple of 3... 28 = 4*7
    CHECK_FALSE(in_M1(30, cls));   // in [29, 24392) but not a multiple of 29
    CHECK(in_M1(29, cls));
    CHECK(in_M1(29 * 5, cls));
    CHECK(in_M1(24392 * 3, cls));
    CHECK_THROWS_AS(in_M1(cf.convergents.back().q, cls), UndeterminedMembershipError);

    SUBCASE("partition within a sharp range is exactly the multiples") {
        for (long long m = 3; m < 29; ++m)
            CHECK(in_M1(m, cls) == (m % 3 == 0));
        for (long long m = 29; m < 1000; ++m)
            CHECK(in_M1(m, cls) == (m % 29 == 0));
    }
    SUBCASE("golden: M1 = {0}") {
        const auto gcf = cf_expand(AlphaSpec::golden(), CfStop{30, std::nullopt});
        const auto gcls = classify_denominators(gcf, 3.0);
        CHECK(in_M1(0, gcls));
        for (long long m = 1; m < 1000; ++m) CHECK_FALSE(in_M1(m, gcls));
    }
}

TEST_CASE("alpha spec validation") {
    CHECK_THROWS_AS(AlphaSpec::rational(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSpec::rational(7, 5), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSpec::quadratic_irrational(4, 0, 2), std::invalid_argument);  // square
    CHECK_THROWS_AS(AlphaSpec::quadratic_irrational(5, 3, 2), std::invalid_argument);  // > 1
    CHECK_THROWS_AS(AlphaSpec::decimal("0.12x", 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSpec::decimal("0.5", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSpec::partial_quotients({1, 0, 2}), std::invalid_argument);
}
