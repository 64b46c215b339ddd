#include <doctest.h>

#include "nilab/json_io.hpp"
#include "nilab/reports.hpp"

using namespace nilab;
using arith::AlphaSpec;
using periodic::PeriodicFunction;
using nlohmann::json;

TEST_CASE("csv fields") {
    CHECK(report::csv_field("plain") == "plain");
    CHECK(report::csv_field("with,comma") == "\"with,comma\"");
    CHECK(report::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(report::csv_row({"a", "b"}) == "a,b\r\n");
    CHECK(report::format_double(0.1) == "0.10000000000000001");
    CHECK(report::format_double(1e6) == "1000000");
}

TEST_CASE("svg chart is well formed") {
    report::SvgSeries s;
    s.x = {1, 10, 100};
    s.y = {0.5, 0.1, 0.01};
    s.label = "series";
    const std::string svg = report::svg_line_chart({s}, true, "demo");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
}

TEST_CASE("correlate with the constant observable reduces to Mertens") {
    const auto table = arith::mobius_sieve(10000);
    const auto spec = flows::SkewProductSpec::make_T(AlphaSpec::rational(1, 2), 1.0,
                                                     PeriodicFunction::cosine(),
                                                     PeriodicFunction::sine());
    const auto f = obs::ObservableSpec::classB(PeriodicFunction::constant(1.0),
                                               {{0, 0, {1.0, 0.0}}});
    const auto rep = cli::correlate(spec, f, {0.1, {{0.2, 0.3, 0.4}}}, 10000,
                                    {10, 100, 10000}, table);
    REQUIRE(rep.checkpoints.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const long long n = rep.checkpoints[i];
        const double expected = static_cast<double>(arith::mertens(table, n)) / n;
        CHECK(rep.averages[i].real() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::fabs(rep.averages[i].imag()) < 1e-12);
        CHECK(rep.magnitudes[i] <= rep.observable_sup + 1e-12);
    }
}

TEST_CASE("unit-weight diagnostic is a plain Birkhoff average") {
    const auto table = arith::mobius_sieve(1000);
    const auto spec = flows::SkewProductSpec::make_T(AlphaSpec::rational(1, 3), 0.0,
                                                     PeriodicFunction::zero(),
                                                     PeriodicFunction::zero());
    const auto f = obs::ObservableSpec::classB(PeriodicFunction::constant(1.0),
                                               {{0, 0, {1.0, 0.0}}});
    const auto rep = cli::correlate(spec, f, {0.0, {{0, 0, 0}}}, 1000, {1000}, table,
                                    obs::kDefaultTrunc, /*unit_weights=*/true);
    CHECK(rep.averages[0].real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation checkpoints are partial sums of one pass") {
    const auto table = arith::mobius_sieve(5000);
    const auto spec = flows::SkewProductSpec::make_T(AlphaSpec::golden(), 2.0,
                                                     PeriodicFunction::cosine(),
                                                     PeriodicFunction::sine());
    const auto full = cli::correlate(spec, obs::ObservableSpec::typical(),
                                     {0.25, {{0.5, 0.5, 0.5}}}, 5000, {100, 5000}, table);
    const auto fresh = cli::correlate(spec, obs::ObservableSpec::typical(),
                                      {0.25, {{0.5, 0.5, 0.5}}}, 100, {100}, table);
    CHECK(std::abs(full.averages[0] - fresh.averages[0]) < 1e-12);
    // A recomputable from the stored partial sums
    for (std::size_t i = 0; i < full.checkpoints.size(); ++i)
        CHECK(std::abs(full.partial_sums[i] / static_cast<double>(full.checkpoints[i]) -
                       full.averages[i]) < 1e-15);
}

TEST_CASE("json round trips") {
    SUBCASE("alpha forms") {
        for (const auto& alpha :
             {AlphaSpec::rational(3, 7), AlphaSpec::golden(),
              AlphaSpec::partial_quotients({2, 1, 9}), AlphaSpec::decimal("0.125", 1e-9)}) {
            const auto back = json_io::alpha_from_json(json_io::to_json(alpha));
            CHECK(back.kind() == alpha.kind());
            CHECK(back.value() == doctest::Approx(alpha.value()).epsilon(1e-15));
        }
    }
    SUBCASE("periodic function") {
        std::mt19937_64 rng(5);
        const auto f = periodic::random_real_trig(6, rng);
        const auto back = json_io::periodic_from_json(json_io::to_json(f));
        REQUIRE(back.coeffs().size() == f.coeffs().size());
        for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
            CHECK(back.coeffs()[i].first == f.coeffs()[i].first);
            CHECK(std::abs(back.coeffs()[i].second - f.coeffs()[i].second) == 0.0);
        }
    }
    SUBCASE("phase point canonicalizes on input") {
        const auto p = json_io::phase_point_from_json(
            json{{"t", 1.25}, {"x", -0.5}, {"y", 2.5}, {"z", 0.75}});
        CHECK(p.t == doctest::Approx(0.25));
        CHECK(p.coset.rep.x == doctest::Approx(0.5));
        CHECK(p.coset.rep.y == doctest::Approx(0.5));
    }
    SUBCASE("skew product specs") {
        const auto spec = flows::SkewProductSpec::make_T(AlphaSpec::golden(), 2.0,
                                                         PeriodicFunction::cosine(),
                                                         PeriodicFunction::sine(), true);
        const auto back = json_io::spec_from_json(json_io::to_json(spec));
        CHECK(back.kind() == spec.kind());
        CHECK(back.k() == spec.k());
        CHECK(back.theorem2());
        const auto tilde = flows::SkewProductSpec::make_T1_tilde(AlphaSpec::rational(1, 4), 0.3);
        CHECK(json_io::spec_from_json(json_io::to_json(tilde)).central_constant() == 0.3);
    }
    SUBCASE("observables and presets") {
        const auto spec = obs::ObservableSpec::classA(1, 2, 3, 2, 1, obs::PsiVariant::PsiStarBar);
        const auto back = json_io::observable_from_json(json_io::to_json(spec));
        CHECK(back.cls == obs::ObservableSpec::Class::A);
        CHECK(back.xi2 == 2);
        CHECK(back.variant == obs::PsiVariant::PsiStarBar);
        CHECK(json_io::observable_from_json_or_preset(json("typical")).cls ==
              obs::ObservableSpec::Class::Typical);
        CHECK(json_io::observable_from_json_or_preset(json("classB_cos_cos")).cls ==
              obs::ObservableSpec::Class::B);
        CHECK_THROWS_AS(json_io::observable_from_json_or_preset(json("nope")),
                        std::invalid_argument);
    }
}
