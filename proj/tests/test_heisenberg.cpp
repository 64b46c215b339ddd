#include <doctest.h>

#include <random>

#include "nilab/heisenberg.hpp"

using namespace nilab;
using namespace nilab::heis;

namespace {

HeisenbergElement random_element(std::mt19937_64& rng, double span = 5.0) {
    std::uniform_real_distribution<double> u(-span, span);
    return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("group law") {
    const HeisenbergElement g1{1, 2, 3}, g2{4, 5, 6};
    const HeisenbergElement p = mul(g1, g2);
    CHECK(p.x == 5.0);
    CHECK(p.y == 7.0);
    CHECK(p.z == 17.0);  // 3 + 6 + 2*4

    const HeisenbergElement g{0.3, -1.2, 0.7};
    CHECK(mul(g, identity()) == g);
    CHECK(mul(identity(), g) == g);

    const HeisenbergElement gi = mul(g, inv(g));
    CHECK(std::fabs(gi.x) < 1e-12);
    CHECK(std::fabs(gi.y) < 1e-12);
    CHECK(std::fabs(gi.z) < 1e-12);
}

TEST_CASE("inverse") {
    CHECK(inv(identity()) == identity());
    const HeisenbergElement g{1, 2, 5};
    const HeisenbergElement gi = inv(g);
    CHECK(gi.x == -1.0);
    CHECK(gi.y == -2.0);
    CHECK(gi.z == -3.0);
    CHECK(inv(inv(g)) == g);
}

TEST_CASE("associativity on random triples") {
    std::mt19937_64 rng(41);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
        const auto lhs = mul(mul(a, b), c);
        const auto rhs = mul(a, mul(b, c));
        worst = std::max({worst, std::fabs(lhs.x - rhs.x), std::fabs(lhs.y - rhs.y),
                          std::fabs(lhs.z - rhs.z)});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("canonical representative") {
    const auto [p, gamma] = canonical_rep({1.5, -0.25, 2.0});
    CHECK(p.rep.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.rep.y == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(p.rep.z == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gamma.x == -1.0);
    CHECK(gamma.y == 1.0);
    CHECK(gamma.z == -3.0);

    const HeisenbergElement already{0.25, 0.5, 0.75};
    const auto [p2, gamma2] = canonical_rep(already);
    CHECK(p2.rep == already);
    CHECK(gamma2 == identity());

    const auto [p3, gamma3] = canonical_rep({0.0, 0.0, 7.25});
    CHECK(p3.rep.x == 0.0);
    CHECK(p3.rep.y == 0.0);
    CHECK(p3.rep.z == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("canonical_rep is idempotent with an integer gamma") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto g = random_element(rng, 20.0);
        const auto [p, gamma] = canonical_rep(g);
        CHECK(p.rep.x >= 0.0);
        CHECK(p.rep.x < 1.0);
        CHECK(p.rep.y >= 0.0);
        CHECK(p.rep.y < 1.0);
        CHECK(p.rep.z >= 0.0);
        CHECK(p.rep.z < 1.0);
        CHECK(gamma.x == std::round(gamma.x));
        CHECK(gamma.y == std::round(gamma.y));
        CHECK(gamma.z == std::round(gamma.z));
        const auto again = canonical_rep(p.rep);
        CHECK(again.gamma == identity());
        CHECK(again.point.rep == p.rep);
        const auto rebuilt = mul(gamma, g);
        CHECK(std::fabs(rebuilt.x - p.rep.x) < 1e-12);
        CHECK(std::fabs(rebuilt.y - p.rep.y) < 1e-12);
        CHECK(std::fabs(rebuilt.z - p.rep.z) < 1e-12);
    }
}

TEST_CASE("Mal'cev coordinates") {
    const auto k = malcev_kappa({1, 2, 5});
    CHECK(k[0] == 1.0);
    CHECK(k[1] == 2.0);
    CHECK(k[2] == 3.0);
    CHECK(malcev_kappa(identity()) == std::array<double, 3>{0, 0, 0});
    CHECK(malcev_kappa({0, 0, 0.7})[2] == 0.7);
}

TEST_CASE("dG upper bound") {
    const HeisenbergElement g{0.1, 0.9, 0.4};
    CHECK(dG_upper(g, g) < 1e-15);
    CHECK(dG_upper(identity(), {0.3, 0, 0}) == doctest::Approx(0.3));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_element(rng), b = random_element(rng), h = random_element(rng);
        CHECK(dG_upper(a, b) == doctest::Approx(dG_upper(b, a)).epsilon(1e-12));
        CHECK(dG_upper(mul(h, a), mul(h, b)) == doctest::Approx(dG_upper(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("quotient distance") {
    const NilmanifoldPoint p{{0.2, 0.3, 0.4}};
    CHECK(quotient_dist(p, p) == 0.0);

    const NilmanifoldPoint a{{0.0, 0.0, 0.0}};
    const NilmanifoldPoint b{{0.0, 0.0, 0.999}};
    CHECK(quotient_dist(a, b) <= 0.001 + 1e-12);

    const NilmanifoldPoint c{{0.999, 0.0, 0.0}};
    CHECK(quotient_dist(c, a) <= 0.0011);
    CHECK(quotient_dist(c, a) < 0.999);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> shift(-1, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const NilmanifoldPoint p1{{u(rng), u(rng), u(rng)}};
        const NilmanifoldPoint p2{{u(rng), u(rng), u(rng)}};
        CHECK(quotient_dist(p1, p2) == doctest::Approx(quotient_dist(p2, p1)).epsilon(1e-12));
        // invariance under gamma-translating one argument and re-canonicalizing
        const HeisenbergElement gamma{static_cast<double>(shift(rng)),
                                      static_cast<double>(shift(rng)),
                                      static_cast<double>(shift(rng))};
        const auto translated = canonical_rep(mul(gamma, p2.rep)).point;
        CHECK(quotient_dist(p1, translated) ==
              doctest::Approx(quotient_dist(p1, p2)).epsilon(1e-10));
    }
}

TEST_CASE("phase metric") {
    const PhasePoint p{0.1, {{0.2, 0.3, 0.4}}};
    CHECK(phase_dist(p, p) == 0.0);

    PhasePoint q = p;
    q.t = 0.5;
    CHECK(phase_dist(p, q) == doctest::Approx(0.4));
    CHECK(circle_dist(0.9, 0.05) == doctest::Approx(0.15));

    // crude coordinate bound from the kappa estimate
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const PhasePoint a{u(rng), {{u(rng), u(rng), u(rng)}}};
        const PhasePoint b{u(rng), {{u(rng), u(rng), u(rng)}}};
        const double crude = std::fabs(a.coset.rep.x - b.coset.rep.x) +
                             std::fabs(a.coset.rep.y - b.coset.rep.y) +
                             std::fabs(a.coset.rep.z - b.coset.rep.z) + 1.0;
        CHECK(quotient_dist(a.coset, b.coset) <= crude);
    }
}
