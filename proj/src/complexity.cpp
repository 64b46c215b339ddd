#include "nilab/complexity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "nilab/parallel.hpp"

namespace nilab::complexity {

namespace {

std::vector<std::vector<PhasePoint>> cache_orbits(const SkewProductSpec& spec,
                                                  const std::vector<PhasePoint>& points,
                                                  long long n_max) {
    std::vector<std::vector<PhasePoint>> orbits(points.size());
    parallel_for_chunks(0, static_cast<std::int64_t>(points.size()), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            auto& orb = orbits[static_cast<std::size_t>(i)];
            orb.reserve(static_cast<std::size_t>(n_max) + 1);
            flows::OrbitIterator it(spec, points[static_cast<std::size_t>(i)]);
            orb.push_back(it.current());
            for (long long j = 0; j < n_max; ++j) {
                it.advance();
                orb.push_back(it.current());
            }
        }
    });
    return orbits;
}

}  // namespace

SampleCloud make_haar_cloud(const SkewProductSpec& spec, std::size_t count, long long n_max,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SampleCloud cloud;
    cloud.provenance = "haar(seed=" + std::to_string(seed) + ")";
    cloud.n_max = n_max;
    cloud.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        PhasePoint p;
        p.t = unit(rng);
        p.coset.rep = {unit(rng), unit(rng), unit(rng)};
        cloud.points.push_back(p);
    }
    cloud.orbits = cache_orbits(spec, cloud.points, n_max);
    return cloud;
}

SampleCloud make_orbit_cloud(const SkewProductSpec& spec, const PhasePoint& p0,
                             std::size_t count, long long gap, long long n_max,
                             long long burn_in) {
    if (gap < 1) throw std::invalid_argument("make_orbit_cloud: gap must be >= 1");
    SampleCloud cloud;
    cloud.provenance = "orbit(gap=" + std::to_string(gap) +
                       ", burn_in=" + std::to_string(burn_in) + ")";
    cloud.n_max = n_max;
    flows::OrbitIterator it(spec, p0);
    for (long long j = 0; j < burn_in; ++j) it.advance();
    cloud.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        cloud.points.push_back(it.current());
        for (long long j = 0; j < gap; ++j) it.advance();
    }
    cloud.orbits = cache_orbits(spec, cloud.points, n_max);
    return cloud;
}

double bar_d_n(const SampleCloud& cloud, std::size_t i, std::size_t k, long long n) {
    if (n < 1) throw std::invalid_argument("bar_d_n: n must be >= 1");
    if (n > cloud.n_max + 1)
        throw std::out_of_range("bar_d_n: cached orbits cover n <= " +
                                std::to_string(cloud.n_max + 1));
    const auto& oi = cloud.orbits[i];
    const auto& ok = cloud.orbits[k];
    KahanSum acc;
    for (long long j = 0; j < n; ++j)
        acc.add(heis::phase_dist(oi[static_cast<std::size_t>(j)], ok[static_cast<std::size_t>(j)]));
    return acc.value() / static_cast<double>(n);
}

double bar_d_n(const SkewProductSpec& spec, const PhasePoint& p1, const PhasePoint& p2,
               long long n) {
    if (n < 1) throw std::invalid_argument("bar_d_n: n must be >= 1");
    flows::OrbitIterator it1(spec, p1), it2(spec, p2);
    KahanSum acc;
    for (long long j = 0; j < n; ++j) {
        acc.add(heis::phase_dist(it1.current(), it2.current()));
        it1.advance();
        it2.advance();
    }
    return acc.value() / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Covering
// ---------------------------------------------------------------------------

namespace {

struct PairSums {
    std::size_t m = 0;
    long long steps_done = 0;                 // distances summed for j < steps_done
    std::vector<double> sums;                 // upper-triangular pair sums

    explicit PairSums(std::size_t m_) : m(m_), sums(m_ * (m_ - 1) / 2, 0.0) {}

    std::size_t index(std::size_t i, std::size_t k) const {  // i < k
        return i * m - i * (i + 1) / 2 + (k - i - 1);
    }

    void advance_to(const SampleCloud& cloud, long long n) {
        for (long long j = steps_done; j < n; ++j) {
            parallel_for_chunks(0, static_cast<std::int64_t>(m) - 1, [&](std::int64_t lo, std::int64_t hi) {
                for (std::int64_t i = lo; i < hi; ++i) {
                    const auto& pi = cloud.orbits[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    double* row = sums.data() + index(static_cast<std::size_t>(i), static_cast<std::size_t>(i) + 1);
                    const std::size_t rowlen = m - static_cast<std::size_t>(i) - 1;
                    for (std::size_t r = 0; r < rowlen; ++r) {
                        const auto& pk = cloud.orbits[static_cast<std::size_t>(i) + 1 + r][static_cast<std::size_t>(j)];
                        row[r] += heis::phase_dist(pi, pk);
                    }
                }
            });
            ++steps_done;
        }
    }
};

CoveringReport greedy_cover(const SampleCloud& cloud, const PairSums& pairs, long long n,
                            double epsilon) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::size_t m = cloud.size();
    const std::size_t words = (m + 63) / 64;
    const double radius = epsilon * static_cast<double>(n);

    // ball incidence: within[i] marks the cloud points inside B_{bar d_n}(x_i, eps)
    std::vector<std::uint64_t> within(m * words, 0);
    auto set_bit = [&](std::size_t i, std::size_t k) {
        within[i * words + k / 64] |= (1ULL << (k % 64));
    };
    for (std::size_t i = 0; i < m; ++i) set_bit(i, i);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double* row = pairs.sums.data() + pairs.index(i, i + 1);
        for (std::size_t k = i + 1; k < m; ++k) {
            if (row[k - i - 1] < radius) {
                set_bit(i, k);
                set_bit(k, i);
            }
        }
    }

    CoveringReport report;
    report.n = n;
    report.epsilon = epsilon;

    std::vector<std::uint64_t> uncovered(words, ~0ULL);
    if (m % 64 != 0) uncovered[words - 1] = (1ULL << (m % 64)) - 1;
    std::size_t covered_count = 0;
    const double target = (1.0 - epsilon) * static_cast<double>(m);

    while (static_cast<double>(covered_count) <= target) {
        std::size_t best_center = m;
        int best_gain = -1;
        for (std::size_t i = 0; i < m; ++i) {
            int gain = 0;
            const std::uint64_t* bits = &within[i * words];
            for (std::size_t w = 0; w < words; ++w)
                gain += std::popcount(bits[w] & uncovered[w]);
            if (gain > best_gain) {  // strict: ties keep the lowest index
                best_gain = gain;
                best_center = i;
            }
        }
        if (best_center == m || best_gain <= 0)
            throw std::logic_error("covering_number: greedy cover stalled");
        const std::uint64_t* bits = &within[best_center * words];
        for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~bits[w];
        covered_count += static_cast<std::size_t>(best_gain);
        report.centers.push_back(static_cast<int>(best_center));
    }

    report.s_n = static_cast<int>(report.centers.size());
    report.covered_mass = static_cast<double>(covered_count) / static_cast<double>(m);
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace

CoveringReport covering_number(const SampleCloud& cloud, long long n, double epsilon) {
    if (cloud.size() < 10) throw std::invalid_argument("covering_number: cloud size must be >= 10");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("covering_number: epsilon must lie in (0,1)");
    PairSums pairs(cloud.size());
    pairs.advance_to(cloud, n);
    return greedy_cover(cloud, pairs, n, epsilon);
}

ComplexityScan complexity_scan(const SampleCloud& cloud, std::vector<long long> ns,
                               double epsilon) {
    if (cloud.size() < 10) throw std::invalid_argument("complexity_scan: cloud size must be >= 10");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("complexity_scan: epsilon must lie in (0,1)");
    std::sort(ns.begin(), ns.end());

    ComplexityScan scan;
    PairSums pairs(cloud.size());
    for (long long n : ns) {
        pairs.advance_to(cloud, n);
        scan.rows.push_back(greedy_cover(cloud, pairs, n, epsilon));
    }

    // least squares on (log n, log s_n)
    const std::size_t cnt = scan.rows.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : scan.rows) {
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(static_cast<double>(row.s_n));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = cnt * sxx - sx * sx;
    if (cnt >= 2 && std::fabs(denom) > 1e-12) {
        scan.slope = (cnt * sxy - sx * sy) / denom;
        scan.intercept = (sy - scan.slope * sx) / cnt;
    } else {
        scan.slope = 0.0;
        scan.intercept = cnt > 0 ? sy / cnt : 0.0;
    }
    for (const auto& row : scan.rows) {
        const double fit = scan.intercept + scan.slope * std::log(static_cast<double>(row.n));
        scan.max_residual =
            std::max(scan.max_residual, std::fabs(std::log(static_cast<double>(row.s_n)) - fit));
    }
    return scan;
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

PhasePoint GridSpec::at(long long ti, long long j1, long long j2, long long j3) const {
    PhasePoint p;
    p.t = static_cast<double>(ti) / static_cast<double>(t_count);
    const auto side = static_cast<double>(lattice_side);
    p.coset.rep = {static_cast<double>(j1) / side, static_cast<double>(j2) / side,
                   static_cast<double>(j3) / side};
    return p;
}

GridSpec plan_grid_F(long long q_i, long long inv_epsilon, long long L, long long cap) {
    if (q_i < 1 || inv_epsilon < 1 || L < 1)
        throw std::invalid_argument("plan_grid_F: q_i, eps^-1 and L must be positive integers");
    GridSpec spec;
    spec.q_i = q_i;
    spec.inv_epsilon = inv_epsilon;
    spec.L = L;
    spec.t_count = inv_epsilon * L * q_i;
    spec.lattice_side = q_i * q_i * L;
    const __int128 card = static_cast<__int128>(spec.t_count) * spec.lattice_side *
                          spec.lattice_side * spec.lattice_side;
    if (card > cap)
        throw CapacityError("plan_grid_F: cardinality eps^-1 L^4 q_i^7 = " +
                            std::to_string(static_cast<double>(card)) + " exceeds the cap " +
                            std::to_string(cap));
    spec.cardinality = static_cast<long long>(card);
    return spec;
}

GridF build_grid_F(long long q_i, long long inv_epsilon, long long L, long long cap) {
    GridF grid;
    grid.spec = plan_grid_F(q_i, inv_epsilon, L, cap);
    grid.cardinality = grid.spec.cardinality;
    grid.points.reserve(static_cast<std::size_t>(grid.cardinality));
    for (long long ti = 0; ti < grid.spec.t_count; ++ti)
        for (long long j1 = 0; j1 < grid.spec.lattice_side; ++j1)
            for (long long j2 = 0; j2 < grid.spec.lattice_side; ++j2)
                for (long long j3 = 0; j3 < grid.spec.lattice_side; ++j3)
                    grid.points.push_back(grid.spec.at(ti, j1, j2, j3));
    return grid;
}

// ---------------------------------------------------------------------------
// Grid shadowing
// ---------------------------------------------------------------------------

ShadowingReport grid_shadowing_check(const SkewProductSpec& spec_T1, long long q_i, double B,
                                     long long inv_epsilon, long long L,
                                     const std::vector<PhasePoint>& sample, double C1,
                                     long long cap) {
    if (spec_T1.kind() != SkewProductSpec::Kind::T1 &&
        spec_T1.kind() != SkewProductSpec::Kind::T1Tilde)
        throw std::invalid_argument("grid_shadowing_check: spec must be T1 or T1-tilde");
    const double eps = 1.0 / static_cast<double>(inv_epsilon);

    const double lip = std::max({spec_T1.phi1().lipschitz_bound(), spec_T1.eta1().lipschitz_bound(),
                                 spec_T1.psi().lipschitz_bound()});
    if (static_cast<double>(L) < lip)
        throw std::invalid_argument("grid_shadowing_check: L=" + std::to_string(L) +
                                    " below the Lipschitz bound " + std::to_string(lip));

    ShadowingReport report;
    report.n_i = static_cast<long long>(std::llround(std::pow(static_cast<double>(q_i), B - 1.0)));
    report.c1 = C1;
    constexpr int kSupGrid = 1 << 10;
    report.c2 = std::max({periodic::sup_on_grid(spec_T1.phi1(), kSupGrid),
                          periodic::sup_on_grid(spec_T1.eta1(), kSupGrid),
                          periodic::sup_on_grid(spec_T1.psi(), kSupGrid)});
    report.c1c2_check = (report.c1 + report.c2) / static_cast<double>(q_i) < eps;
    report.epsilon_inverse_check = static_cast<double>(L) > 1.0 / eps;
    report.bound = (14.0 * std::max(std::fabs(spec_T1.k()), 1.0) + 6.0) * eps;

    const GridSpec grid = plan_grid_F(q_i, inv_epsilon, L, cap);
    report.grid_cardinality = grid.cardinality;
    const long long n_i = report.n_i;

    double worst = 0.0;
    for (const PhasePoint& raw : sample) {
        const PhasePoint p{frac(raw.t), heis::canonical_rep(raw.coset.rep).point};
        std::vector<PhasePoint> orb_p;
        orb_p.reserve(static_cast<std::size_t>(n_i));
        flows::OrbitIterator itp(spec_T1, p);
        for (long long j = 0; j < n_i; ++j) {
            orb_p.push_back(itp.current());
            itp.advance();
        }

        double best = std::numeric_limits<double>::infinity();
        for (long long ti = 0; ti < grid.t_count; ++ti) {
            // the t-distance is rotation-invariant, so it lower-bounds bar_d_n
            const double td = circle_dist(static_cast<double>(ti) / static_cast<double>(grid.t_count), p.t);
            if (td >= best) continue;
            for (long long j1 = 0; j1 < grid.lattice_side; ++j1)
                for (long long j2 = 0; j2 < grid.lattice_side; ++j2)
                    for (long long j3 = 0; j3 < grid.lattice_side; ++j3) {
                        const PhasePoint gpt = grid.at(ti, j1, j2, j3);
                        flows::OrbitIterator itg(spec_T1, gpt);
                        double acc = 0.0;
                        const double cutoff = best * static_cast<double>(n_i);
                        bool pruned = false;
                        for (long long j = 0; j < n_i; ++j) {
                            acc += std::max(td, heis::quotient_dist(orb_p[static_cast<std::size_t>(j)].coset,
                                                                    itg.current().coset));
                            if (acc >= cutoff) { pruned = true; break; }
                            itg.advance();
                        }
                        if (!pruned) best = acc / static_cast<double>(n_i);
                    }
        }
        worst = std::max(worst, best);
    }
    report.worst = worst;
    report.pass = worst <= report.bound;
    return report;
}

}  // namespace nilab::complexity
