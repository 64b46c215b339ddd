#include "nilab/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nilab::periodic {

namespace {
constexpr double kCoeffZeroTol = 1e-15;
}

void PeriodicFunction::normalize() {
    std::sort(coeffs_.begin(), coeffs_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, cplx>> merged;
    for (const auto& [m, c] : coeffs_) {
        if (!merged.empty() && merged.back().first == m)
            merged.back().second += c;
        else
            merged.emplace_back(m, c);
    }
    std::erase_if(merged, [](const auto& p) { return std::abs(p.second) == 0.0; });
    coeffs_ = std::move(merged);
}

PeriodicFunction PeriodicFunction::from_coeffs(std::vector<std::pair<int, cplx>> coeffs,
                                               bool real_valued) {
    PeriodicFunction f;
    f.coeffs_ = std::move(coeffs);
    f.real_valued_ = real_valued;
    f.normalize();
    if (real_valued) {
        for (const auto& [m, c] : f.coeffs_) {
            const cplx cc = f.coeff(-m);
            if (std::abs(c - std::conj(cc)) > 1e-12)
                throw std::invalid_argument(
                    "PeriodicFunction: real_valued table violates c_{-m} = conj(c_m) at m=" +
                    std::to_string(m));
        }
    }
    return f;
}

PeriodicFunction PeriodicFunction::constant(double c) {
    return from_coeffs({{0, {c, 0.0}}}, true);
}

PeriodicFunction PeriodicFunction::cosine(int m) {
    return from_coeffs({{m, {0.5, 0.0}}, {-m, {0.5, 0.0}}}, true);
}

PeriodicFunction PeriodicFunction::sine(int m) {
    return from_coeffs({{m, {0.0, -0.5}}, {-m, {0.0, 0.5}}}, true);
}

int PeriodicFunction::max_mode() const {
    int mm = 0;
    for (const auto& [m, c] : coeffs_) mm = std::max(mm, std::abs(m));
    return mm;
}

cplx PeriodicFunction::coeff(int m) const {
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), m,
                               [](const auto& p, int key) { return p.first < key; });
    if (it != coeffs_.end() && it->first == m) return it->second;
    return {0.0, 0.0};
}

cplx PeriodicFunction::eval_complex(double t) const {
    if (coeffs_.empty()) return {0.0, 0.0};
    const int mm = max_mode();
    // powers of e(t) up to the max mode; coefficients are sparse but small
    const cplx z = e2pi(t);
    cplx acc{0.0, 0.0};
    if (mm <= 64) {
        cplx pow_table[65];
        pow_table[0] = {1.0, 0.0};
        for (int k = 1; k <= mm; ++k) pow_table[k] = pow_table[k - 1] * z;
        for (const auto& [m, c] : coeffs_) {
            const cplx w = pow_table[std::abs(m)];
            acc += c * (m >= 0 ? w : std::conj(w));
        }
    } else {
        for (const auto& [m, c] : coeffs_) acc += c * e2pi(m * t);
    }
    return acc;
}

double PeriodicFunction::eval(double t) const {
    if (!real_valued_)
        throw std::logic_error("PeriodicFunction::eval: real path on a complex-valued function");
    return eval_complex(t).real();
}

double PeriodicFunction::lipschitz_bound() const {
    double s = 0.0;
    for (const auto& [m, c] : coeffs_) s += std::abs(m) * std::abs(c);
    return kTwoPi * s;
}

double PeriodicFunction::sup_bound() const {
    double s = 0.0;
    for (const auto& [m, c] : coeffs_) s += std::abs(c);
    return s;
}

PeriodicFunction PeriodicFunction::plus(const PeriodicFunction& other) const {
    std::vector<std::pair<int, cplx>> merged = coeffs_;
    merged.insert(merged.end(), other.coeffs_.begin(), other.coeffs_.end());
    PeriodicFunction f;
    f.coeffs_ = std::move(merged);
    f.real_valued_ = real_valued_ && other.real_valued_;
    f.normalize();
    return f;
}

PeriodicFunction PeriodicFunction::minus(const PeriodicFunction& other) const {
    return plus(other.scaled({-1.0, 0.0}));
}

PeriodicFunction PeriodicFunction::scaled(cplx factor) const {
    PeriodicFunction f;
    f.coeffs_ = coeffs_;
    for (auto& [m, c] : f.coeffs_) c *= factor;
    f.real_valued_ = real_valued_ && factor.imag() == 0.0;
    f.normalize();
    return f;
}

// ---------------------------------------------------------------------------
// DFT extraction
// ---------------------------------------------------------------------------

namespace {

// In-place iterative radix-2 FFT, forward transform (sign -1 in the exponent).
void fft_inplace(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cplx wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

PeriodicFunction from_samples(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 8 || (n & (n - 1)) != 0)
        throw std::invalid_argument("from_samples: sample count must be a power of two, >= 8");

    std::vector<cplx> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = {samples[j], 0.0};
    fft_inplace(a);

    const int half = static_cast<int>(n) / 2;
    std::vector<std::pair<int, cplx>> coeffs;
    for (int m = -(half - 1); m <= half - 1; ++m) {
        const std::size_t idx = static_cast<std::size_t>((m + static_cast<int>(n)) % static_cast<int>(n));
        cplx c = a[idx] / static_cast<double>(n);
        if (std::abs(c) < kCoeffZeroTol) continue;
        coeffs.emplace_back(m, c);
    }
    // real input: enforce exact conjugate symmetry against FFT rounding
    std::map<int, cplx> table(coeffs.begin(), coeffs.end());
    for (auto& [m, c] : table) {
        if (m <= 0) continue;
        auto it = table.find(-m);
        const cplx other = (it == table.end()) ? cplx{0.0, 0.0} : it->second;
        const cplx sym = 0.5 * (c + std::conj(other));
        c = sym;
        if (it != table.end()) it->second = std::conj(sym);
    }
    if (auto it = table.find(0); it != table.end()) it->second = {it->second.real(), 0.0};
    return PeriodicFunction::from_coeffs({table.begin(), table.end()}, true);
}

// ---------------------------------------------------------------------------
// Product / split / coboundary
// ---------------------------------------------------------------------------

PeriodicFunction product(const PeriodicFunction& f, const PeriodicFunction& g,
                         long long mode_budget) {
    const long long required = static_cast<long long>(f.max_mode()) + g.max_mode();
    if (required > mode_budget)
        throw SupportOverflowError(required, "product: combined support needs modes up to " +
                                                 std::to_string(required) + ", budget is " +
                                                 std::to_string(mode_budget));
    std::map<int, cplx> conv;
    for (const auto& [m1, c1] : f.coeffs())
        for (const auto& [m2, c2] : g.coeffs()) conv[m1 + m2] += c1 * c2;
    return PeriodicFunction::from_coeffs({conv.begin(), conv.end()},
                                         f.real_valued() && g.real_valued());
}

ResonantSplit split_resonant(const PeriodicFunction& f,
                             const arith::DenominatorClassification& cls) {
    std::vector<std::pair<int, cplx>> part1, part2;
    for (const auto& [m, c] : f.coeffs()) {
        if (arith::in_M1(m, cls))
            part1.emplace_back(m, c);
        else
            part2.emplace_back(m, c);
    }
    ResonantSplit split;
    split.B = cls.B;
    split.part1 = PeriodicFunction::from_coeffs(std::move(part1), f.real_valued());
    split.part2 = PeriodicFunction::from_coeffs(std::move(part2), f.real_valued());
    return split;
}

ResonantSplit split_resonant(const PeriodicFunction& f, const arith::ContinuedFraction& cf,
                             double B) {
    return split_resonant(f, arith::classify_denominators(cf, B));
}

PeriodicFunction solve_coboundary(const PeriodicFunction& f2, const arith::AlphaSpec& alpha,
                                  double divisor_floor) {
    std::vector<std::pair<int, cplx>> out;
    out.reserve(f2.coeffs().size());
    for (const auto& [m, c] : f2.coeffs()) {
        if (m == 0)
            throw ConstantObstructionError(
                "solve_coboundary: input has a mode-0 coefficient (constant obstruction)");
        const cplx denom = alpha.e_times_minus_one(m);
        if (std::abs(denom) < divisor_floor)
            throw SmallDivisorError(m, alpha.norm_dist_times(m),
                                    "solve_coboundary: |e(m alpha)-1| below floor at m=" +
                                        std::to_string(m) +
                                        ", ||m alpha||=" + std::to_string(alpha.norm_dist_times(m)));
        out.emplace_back(m, c / denom);
    }
    return PeriodicFunction::from_coeffs(std::move(out), f2.real_valued());
}

double sup_on_grid(const PeriodicFunction& f, int n) {
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / n;
        sup = std::max(sup, std::abs(f.eval_complex(t)));
    }
    return sup;
}

PeriodicFunction random_real_trig(int max_mode, std::mt19937_64& rng, double decay) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<int, cplx>> coeffs;
    for (int m = 1; m <= max_mode; ++m) {
        const double scale = std::pow(static_cast<double>(m), -decay);
        const cplx c{gauss(rng) * scale * 0.5, gauss(rng) * scale * 0.5};
        coeffs.emplace_back(m, c);
        coeffs.emplace_back(-m, std::conj(c));
    }
    return PeriodicFunction::from_coeffs(std::move(coeffs), true);
}

}  // namespace nilab::periodic
