#include <doctest.h>

#include <random>

#include "nilab/periodic.hpp"

using namespace nilab;
using namespace nilab::periodic;
using arith::AlphaSpec;

TEST_CASE("evaluation") {
    const auto one = PeriodicFunction::constant(1.0);
    for (double t : {0.0, 0.3, 0.77}) CHECK(one.eval(t) == doctest::Approx(1.0).epsilon(1e-15));

    const auto cos1 = PeriodicFunction::cosine();
    CHECK(cos1.eval(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cos1.eval(0.25) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cos1.eval(0.5) == doctest::Approx(-1.0).epsilon(1e-14));

    const auto sin1 = PeriodicFunction::sine();
    CHECK(sin1.eval(0.25) == doctest::Approx(1.0).epsilon(1e-14));

    // eval matches the defining sum on a grid
    std::mt19937_64 rng(3);
    const auto f = random_real_trig(8, rng);
    for (int i = 0; i < 64; ++i) {
        const double t = i / 64.0;
        cplx direct{0, 0};
        for (const auto& [m, c] : f.coeffs()) direct += c * e2pi(m * t);
        CHECK(std::abs(f.eval_complex(t) - direct) < 1e-12);
        CHECK(std::abs(f.eval_complex(t).imag()) < 1e-12);  // real-valued
    }
}

TEST_CASE("real-valued symmetry enforced") {
    CHECK_THROWS_AS(PeriodicFunction::from_coeffs({{1, {0.5, 0.0}}}, true), std::invalid_argument);
    CHECK_NOTHROW(PeriodicFunction::from_coeffs({{1, {0.5, 0.0}}}, false));
}

TEST_CASE("from_samples") {
    SUBCASE("constant") {
        const auto f = from_samples(std::vector<double>(16, 1.0));
        REQUIRE(f.coeffs().size() == 1);
        CHECK(f.coeff(0).real() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("cosine with k=4") {
        std::vector<double> samples(16);
        for (int j = 0; j < 16; ++j) samples[j] = std::cos(kTwoPi * j / 16.0);
        const auto f = from_samples(samples);
        CHECK(std::abs(f.coeff(1) - cplx{0.5, 0.0}) < 1e-12);
        CHECK(std::abs(f.coeff(-1) - cplx{0.5, 0.0}) < 1e-12);
        CHECK(f.coeffs().size() == 2);
    }
    SUBCASE("cos^2 via half-angle") {
        std::vector<double> samples(32);
        for (int j = 0; j < 32; ++j) {
            const double c = std::cos(kTwoPi * j / 32.0);
            samples[j] = c * c;
        }
        const auto f = from_samples(samples);
        CHECK(std::abs(f.coeff(0) - cplx{0.5, 0.0}) < 1e-12);
        CHECK(std::abs(f.coeff(2) - cplx{0.25, 0.0}) < 1e-12);
        CHECK(std::abs(f.coeff(-2) - cplx{0.25, 0.0}) < 1e-12);
    }
    SUBCASE("grid round trip") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> samples(64);
        // band-limit below the Nyquist mode so the DFT is an interpolation
        std::vector<double> base(64);
        for (auto& s : base) s = u(rng);
        const auto smooth = from_samples(base);
        for (int j = 0; j < 64; ++j) samples[j] = smooth.eval(j / 64.0);
        const auto f = from_samples(samples);
        for (int j = 0; j < 64; ++j)
            CHECK(std::fabs(f.eval(j / 64.0) - samples[j]) < 1e-10);
    }
    SUBCASE("sample count must be a power of two, >= 8") {
        CHECK_THROWS_AS(from_samples(std::vector<double>(12, 0.0)), std::invalid_argument);
        CHECK_THROWS_AS(from_samples(std::vector<double>(4, 0.0)), std::invalid_argument);
    }
}

TEST_CASE("product") {
    const auto cos1 = PeriodicFunction::cosine();
    SUBCASE("multiplicative identity") {
        const auto g = product(PeriodicFunction::constant(1.0), cos1);
        CHECK(std::abs(g.coeff(1) - cplx{0.5, 0.0}) < 1e-15);
        CHECK(g.coeffs().size() == 2);
    }
    SUBCASE("cos * cos") {
        const auto g = product(cos1, cos1);
        CHECK(g.coeff(0).real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(g.coeff(2).real() == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(g.coeff(-2).real() == doctest::Approx(0.25).epsilon(1e-15));
        for (int i = 0; i < 32; ++i) {
            const double t = i / 32.0;
            CHECK(std::fabs(g.eval(t) - cos1.eval(t) * cos1.eval(t)) < 1e-10);
        }
    }
    SUBCASE("Parseval for the mean of a product") {
        std::mt19937_64 rng(7);
        const auto f = random_real_trig(6, rng);
        const auto g = random_real_trig(6, rng);
        cplx parseval{0, 0};
        for (const auto& [m, c] : f.coeffs()) parseval += c * g.coeff(-m);
        CHECK(std::abs(product(f, g).coeff(0) - parseval) < 1e-14);
    }
    SUBCASE("support overflow names the required budget") {
        const auto f = PeriodicFunction::cosine(600000);
        try {
            product(f, f, 1000000);
            FAIL("expected SupportOverflowError");
        } catch (const SupportOverflowError& e) {
            CHECK(e.required_support == 1200000);
        }
    }
}

TEST_CASE("split_resonant") {
    const auto preset = AlphaSpec::partial_quotients({2, 1, 9, 841, 595040846});
    const auto cf = cf_expand(preset, {});

    SUBCASE("mode zero always lands in part1") {
        const auto f = PeriodicFunction::constant(2.5);
        const auto split = split_resonant(f, cf, 3.0);
        CHECK(split.part1.coeff(0).real() == doctest::Approx(2.5));
        CHECK(split.part2.is_zero());
    }
    SUBCASE("golden: every nonzero mode is non-resonant") {
        const auto gcf = cf_expand(AlphaSpec::golden(), arith::CfStop{30, std::nullopt});
        std::mt19937_64 rng(11);
        const auto f = random_real_trig(8, rng);
        const auto split = split_resonant(f, gcf, 3.0);
        CHECK(split.part1.is_zero());
        CHECK(split.part2.coeffs() == f.coeffs());
    }
    SUBCASE("resonant-only support") {
        const auto f = PeriodicFunction::cosine(3);  // q2 = 3 is sharp
        const auto split = split_resonant(f, cf, 3.0);
        CHECK(split.part1.coeffs() == f.coeffs());
        CHECK(split.part2.is_zero());
    }
    SUBCASE("partition is exact") {
        std::mt19937_64 rng(13);
        const auto f = random_real_trig(40, rng);
        const auto split = split_resonant(f, cf, 3.0);
        const auto sum = split.part1.plus(split.part2);
        REQUIRE(sum.coeffs().size() == f.coeffs().size());
        for (std::size_t i = 0; i < sum.coeffs().size(); ++i) {
            CHECK(sum.coeffs()[i].first == f.coeffs()[i].first);
            CHECK(sum.coeffs()[i].second == f.coeffs()[i].second);  // bitwise: moved, not recomputed
        }
    }
    SUBCASE("undetermined membership propagates") {
        const auto f = PeriodicFunction::cosine(24392 * 2);  // still fine
        CHECK_NOTHROW(split_resonant(f, cf, 3.0));
        // beyond the last classified range: q5
        const auto far = PeriodicFunction::from_coeffs(
            {{static_cast<int>(1 << 30), {0.0, 0.5}}}, false);
        // modes are ints; q5 = 14514926466477 exceeds int, so emulate with the
        // classification cut directly
        const auto cls = classify_denominators(cf, 3.0);
        CHECK_THROWS_AS((void)in_M1(cf.convergents.back().q, cls),
                        UndeterminedMembershipError);
        (void)far;
    }
}

TEST_CASE("solve_coboundary") {
    SUBCASE("single mode, rational alpha") {
        const auto f2 = PeriodicFunction::from_coeffs({{1, {1.0, 0.0}}}, false);
        const auto alpha = AlphaSpec::rational(1, 3);
        const auto g = solve_coboundary(f2, alpha);
        const cplx expected = 1.0 / (e2pi(1.0 / 3) - 1.0);
        CHECK(std::abs(g.coeff(1) - expected) < 1e-14);
        double worst = 0.0;
        for (int i = 0; i < 1024; ++i) {
            const double t = i / 1024.0;
            const cplx resid = g.eval_complex(t + 1.0 / 3) - g.eval_complex(t) - f2.eval_complex(t);
            worst = std::max(worst, std::abs(resid));
        }
        CHECK(worst < 1e-13);
    }
    SUBCASE("zero input") {
        CHECK(solve_coboundary(PeriodicFunction::zero(), AlphaSpec::golden()).is_zero());
    }
    SUBCASE("cosine against the golden rotation") {
        const auto alpha = AlphaSpec::golden();
        const auto g = solve_coboundary(PeriodicFunction::cosine(), alpha);
        const double a = alpha.value();
        double worst = 0.0;
        for (int i = 0; i < 1024; ++i) {
            const double t = i / 1024.0;
            const double resid = g.eval(frac(t + a)) - g.eval(t) - std::cos(kTwoPi * t);
            worst = std::max(worst, std::fabs(resid));
        }
        CHECK(worst < 1e-12);
    }
    SUBCASE("constant obstruction") {
        CHECK_THROWS_AS(solve_coboundary(PeriodicFunction::constant(1.0), AlphaSpec::golden()),
                        ConstantObstructionError);
    }
    SUBCASE("small divisor error names the mode") {
        const auto f2 = PeriodicFunction::cosine(3);
        try {
            solve_coboundary(f2, AlphaSpec::rational(1, 3));  // e(3/3) - 1 = 0
            FAIL("expected SmallDivisorError");
        } catch (const SmallDivisorError& e) {
            CHECK(std::llabs(e.mode) == 3);
            CHECK(e.norm_dist == 0.0);
        }
    }
}

TEST_CASE("mean and Lipschitz bound") {
    CHECK(PeriodicFunction::constant(1.0).mean() == 1.0);
    CHECK(PeriodicFunction::cosine().mean() == 0.0);
    const auto cos2 = product(PeriodicFunction::cosine(), PeriodicFunction::cosine());
    CHECK(cos2.mean() == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(PeriodicFunction::constant(3.0).lipschitz_bound() == 0.0);
    CHECK(PeriodicFunction::cosine().lipschitz_bound() == doctest::Approx(kTwoPi));
    const auto two_quarters = PeriodicFunction::from_coeffs(
        {{2, {0.25, 0.0}}, {-2, {0.25, 0.0}}}, true);
    CHECK(two_quarters.lipschitz_bound() == doctest::Approx(kTwoPi));

    SUBCASE("bound dominates sampled difference quotients") {
        std::mt19937_64 rng(17);
        const auto f = random_real_trig(10, rng);
        const double bound = f.lipschitz_bound();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 10000; ++trial) {
            const double t1 = u(rng), t2 = u(rng);
            const double dist = circle_dist(t1, t2);
            if (dist < 1e-9) continue;
            CHECK(std::fabs(f.eval(t1) - f.eval(t2)) <= bound * dist * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("absolute convergence surrogate for the resonant solver") {
    // |a(m)| <= |m|^{-2B} over M2(B) modes: partial sums of |a(m)/(e(m alpha)-1)|
    // must be Cauchy at the observed truncations.
    const auto alpha = AlphaSpec::golden();
    const double B = 3.0;
    auto partial = [&](int M) {
        double s = 0.0;
        for (int m = 1; m <= M; ++m) {
            const double am = std::pow(static_cast<double>(m), -2.0 * B);
            s += 2.0 * am / std::abs(alpha.e_times_minus_one(m));
        }
        return s;
    };
    const double s500 = partial(500), s1000 = partial(1000), s2000 = partial(2000);
    CHECK(std::isfinite(s2000));
    CHECK(s1000 - s500 < 1e-6);
    CHECK(s2000 - s1000 < 1e-7);
    CHECK(s2000 - s1000 < s1000 - s500);
}
