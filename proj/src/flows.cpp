#include "nilab/flows.hpp"

#include <algorithm>
#include <cmath>

namespace nilab::flows {

using arith::AlphaSpec;

// ---------------------------------------------------------------------------
// SkewProductSpec
// ---------------------------------------------------------------------------

SkewProductSpec SkewProductSpec::make_S(AlphaSpec alpha, PeriodicFunction phi1,
                                        PeriodicFunction phi2, PeriodicFunction psi) {
    SkewProductSpec s;
    s.kind_ = Kind::S;
    s.alpha_ = std::move(alpha);
    s.phi1_ = std::move(phi1);
    s.phi2_ = std::move(phi2);
    s.psi_ = std::move(psi);
    return s;
}

SkewProductSpec SkewProductSpec::make_T(AlphaSpec alpha, double k, PeriodicFunction phi,
                                        PeriodicFunction psi, bool theorem2) {
    if (theorem2 && std::fabs(phi.mean()) > 1e-14)
        throw std::invalid_argument(
            "SkewProductSpec::make_T: theorem2 flag requires mean(phi) = 0, got " +
            std::to_string(phi.mean()));
    SkewProductSpec s;
    s.kind_ = Kind::T;
    s.alpha_ = std::move(alpha);
    s.k_ = k;
    s.theorem2_ = theorem2;
    s.phi1_ = std::move(phi);
    s.psi_ = std::move(psi);
    return s;
}

SkewProductSpec SkewProductSpec::make_T1(AlphaSpec alpha, double k, PeriodicFunction phi1,
                                         PeriodicFunction eta1, PeriodicFunction psi1) {
    SkewProductSpec s;
    s.kind_ = Kind::T1;
    s.alpha_ = std::move(alpha);
    s.k_ = k;
    s.phi1_ = std::move(phi1);
    s.eta1_ = std::move(eta1);
    s.psi_ = std::move(psi1);
    return s;
}

SkewProductSpec SkewProductSpec::make_T1_tilde(AlphaSpec alpha, double c) {
    SkewProductSpec s;
    s.kind_ = Kind::T1Tilde;
    s.alpha_ = std::move(alpha);
    s.c_ = c;
    return s;
}

SkewProductSpec SkewProductSpec::make_T1_tilde_from_data(AlphaSpec alpha, double k,
                                                         const PeriodicFunction& eta,
                                                         const PeriodicFunction& psi) {
    return make_T1_tilde(std::move(alpha), -0.5 * k * eta.mean() + psi.mean());
}

HeisenbergElement SkewProductSpec::fiber_matrix(double t) const {
    switch (kind_) {
        case Kind::S:
            return {phi1_.eval(t), phi2_.eval(t), psi_.eval(t)};
        case Kind::T: {
            const double ph = phi1_.eval(t);
            return {ph, k_ * ph, psi_.eval(t)};
        }
        case Kind::T1: {
            const double ph = phi1_.eval(t);
            return {ph, k_ * ph, 0.5 * k_ * ph * ph - 0.5 * k_ * eta1_.eval(t) + psi_.eval(t)};
        }
        case Kind::T1Tilde:
            return {0.0, 0.0, c_};
    }
    throw std::logic_error("fiber_matrix: unknown kind");
}

PhasePoint step(const SkewProductSpec& spec, const PhasePoint& p) {
    const auto reduced = heis::canonical_rep(heis::mul(p.coset.rep, spec.fiber_matrix(p.t)));
    return {frac(p.t + spec.alpha().value()), reduced.point};
}

// ---------------------------------------------------------------------------
// PhaseTracker / OrbitIterator
// ---------------------------------------------------------------------------

PhaseTracker::PhaseTracker(const AlphaSpec& alpha, double t0) : t0_(t0) {
    if (alpha.kind() == AlphaSpec::Kind::QuadraticIrrational) {
        alpha_ = alpha.value();
        t_ = frac(t0);
    } else {
        // rational, decimal and partial-quotient forms carry an exact p/q
        rational_ = true;
        a_ = alpha.rat_p() % alpha.rat_q();
        q_ = alpha.rat_q();
    }
}

double PhaseTracker::current() const {
    if (rational_)
        return frac(t0_ + static_cast<double>(res_) / static_cast<double>(q_));
    return t_;
}

void PhaseTracker::advance() {
    ++n_;
    if (rational_) {
        res_ += a_;
        if (res_ >= q_) res_ -= q_;
        return;
    }
    const double y = alpha_ - comp_;
    const double s = t_ + y;
    comp_ = (s - t_) - y;
    t_ = s;
    if (t_ >= 1.0) t_ -= 1.0;  // exact for t in [1,2)
}

OrbitIterator::OrbitIterator(const SkewProductSpec& spec, const PhasePoint& start)
    : spec_(&spec), tracker_(spec.alpha(), start.t) {
    current_ = {tracker_.current(), start.coset};
}

void OrbitIterator::advance() {
    const double t = tracker_.current();
    const auto reduced = heis::canonical_rep(heis::mul(current_.coset.rep, spec_->fiber_matrix(t)));
    tracker_.advance();
    current_ = {tracker_.current(), reduced.point};
}

std::vector<PhasePoint> orbit(const SkewProductSpec& spec, const PhasePoint& p0, long long n,
                              long long stride) {
    if (n < 0) throw std::invalid_argument("orbit: n must be nonnegative");
    if (stride < 1) throw std::invalid_argument("orbit: stride must be >= 1");
    std::vector<PhasePoint> points;
    points.reserve(static_cast<std::size_t>(n / stride) + 1);
    OrbitIterator it(spec, p0);
    points.push_back(it.current());
    for (long long j = stride; j <= n; j += stride) {
        for (long long s = 0; s < stride; ++s) it.advance();
        points.push_back(it.current());
    }
    return points;
}

// ---------------------------------------------------------------------------
// Birkhoff sums
// ---------------------------------------------------------------------------

BirkhoffAccumulator::BirkhoffAccumulator(const SkewProductSpec& spec_S, double t0)
    : spec_(&spec_S), tracker_(spec_S.alpha(), t0) {
    if (spec_S.kind() != SkewProductSpec::Kind::S)
        throw std::invalid_argument("BirkhoffAccumulator: spec must be of kind S");
}

BirkhoffSums BirkhoffAccumulator::current() const {
    BirkhoffSums s;
    s.s1 = s1_.value();
    s.s2 = s2_.value();
    s.s3 = s3_.value();
    s.s4 = s1_.value() * lag_b_.value() - lag_c_.value();
    return s;
}

void BirkhoffAccumulator::advance() {
    // Fold index n-1 into the S4 lag sums, then add index n.
    if (have_prev_) {
        lag_b_.add(prev_phi2_);
        lag_c_.add(prev_phi2_ * s1_.value());
    }
    const double t = tracker_.current();
    s1_.add(spec_->phi1().eval(t));
    s2_.add(spec_->phi2().eval(t));
    s3_.add(spec_->psi().eval(t));
    prev_phi2_ = spec_->phi2().eval(t);
    have_prev_ = true;
    tracker_.advance();
    ++n_;
}

BirkhoffSums birkhoff_S(const SkewProductSpec& spec_S, long long n, double t0) {
    if (n < 0) throw std::invalid_argument("birkhoff_S: n must be nonnegative");
    BirkhoffAccumulator acc(spec_S, t0);
    for (long long j = 0; j < n; ++j) acc.advance();
    return acc.current();
}

HeisenbergElement state_from_sums(const HeisenbergElement& g0, const BirkhoffSums& sums) {
    return heis::mul(g0, {sums.s1, sums.s2, sums.s3 + sums.s4});
}

// ---------------------------------------------------------------------------
// Block sums (rational alpha)
// ---------------------------------------------------------------------------

BirkhoffSums BlockSums::eval(long long n) const {
    if (n < 0) throw std::invalid_argument("BlockSums::eval: n must be nonnegative");
    const long long b = n % q;
    const auto nb = static_cast<double>(n - b);
    BirkhoffSums s;
    s.s1 = nb * mean_phi1 + gamma_phi1[static_cast<std::size_t>(b)];
    s.s2 = nb * mean_phi2 + gamma_phi2[static_cast<std::size_t>(b)];
    s.s3 = nb * mean_psi + gamma_psi[static_cast<std::size_t>(b)];
    s.s4 = (n <= 1) ? 0.0 : s4_model[static_cast<std::size_t>(b)].eval(static_cast<double>(n));
    return s;
}

BlockSums block_sums(const SkewProductSpec& spec_S, double t0) {
    if (spec_S.kind() != SkewProductSpec::Kind::S)
        throw std::invalid_argument("block_sums: spec must be of kind S");
    if (spec_S.alpha().kind() != AlphaSpec::Kind::Rational)
        throw std::invalid_argument("block_sums: alpha must be rational");

    BlockSums bs;
    bs.a = spec_S.alpha().rat_p();
    bs.q = spec_S.alpha().rat_q();
    bs.t0 = t0;
    const long long q = bs.q;

    bs.gamma_phi1.assign(static_cast<std::size_t>(q) + 1, 0.0);
    bs.gamma_phi2.assign(static_cast<std::size_t>(q) + 1, 0.0);
    bs.gamma_psi.assign(static_cast<std::size_t>(q) + 1, 0.0);
    PhaseTracker tracker(spec_S.alpha(), t0);
    for (long long l = 0; l < q; ++l) {
        const double t = tracker.current();
        bs.gamma_phi1[static_cast<std::size_t>(l + 1)] =
            bs.gamma_phi1[static_cast<std::size_t>(l)] + spec_S.phi1().eval(t);
        bs.gamma_phi2[static_cast<std::size_t>(l + 1)] =
            bs.gamma_phi2[static_cast<std::size_t>(l)] + spec_S.phi2().eval(t);
        bs.gamma_psi[static_cast<std::size_t>(l + 1)] =
            bs.gamma_psi[static_cast<std::size_t>(l)] + spec_S.psi().eval(t);
        tracker.advance();
    }
    bs.mean_phi1 = bs.gamma_phi1[static_cast<std::size_t>(q)] / static_cast<double>(q);
    bs.mean_phi2 = bs.gamma_phi2[static_cast<std::size_t>(q)] / static_cast<double>(q);
    bs.mean_psi = bs.gamma_psi[static_cast<std::size_t>(q)] / static_cast<double>(q);

    // Direct S4 values up to the largest fit/validation point.
    const long long nmax = (q - 1) + 3 * q;
    std::vector<double> s4_direct(static_cast<std::size_t>(nmax) + 1, 0.0);
    BirkhoffAccumulator acc(spec_S, t0);
    for (long long n = 0; n <= nmax; ++n) {
        s4_direct[static_cast<std::size_t>(n)] = acc.current().s4;
        acc.advance();
    }

    const auto qd = static_cast<double>(q);
    for (long long b = 0; b < q; ++b) {
        const double v0 = s4_direct[static_cast<std::size_t>(b)];
        const double v1 = s4_direct[static_cast<std::size_t>(b + q)];
        const double v2 = s4_direct[static_cast<std::size_t>(b + 2 * q)];
        BlockSums::Quad quad;
        quad.base = static_cast<double>(b);
        quad.spacing = qd;
        quad.d0 = v0;
        quad.d1 = (v1 - v0) / qd;
        quad.d2 = (v2 - 2.0 * v1 + v0) / (2.0 * qd * qd);
        // Degree <= 2 is the claim; a fourth exact point validates the fit.
        const double v3 = s4_direct[static_cast<std::size_t>(b + 3 * q)];
        const double model3 = quad.eval(static_cast<double>(b + 3 * q));
        if (std::fabs(model3 - v3) > 1e-8 * std::max(1.0, std::fabs(v3)))
            throw std::logic_error("block_sums: quadratic S4 model failed validation at class " +
                                   std::to_string(b));
        bs.s4_model.push_back(quad);
    }
    return bs;
}

// ---------------------------------------------------------------------------
// Resonant sums
// ---------------------------------------------------------------------------

ResonantSums resonant_sums(const SkewProductSpec& spec_T1, long long n, double t) {
    if (spec_T1.kind() != SkewProductSpec::Kind::T1)
        throw std::invalid_argument("resonant_sums: spec must be of kind T1");
    if (n < 0) throw std::invalid_argument("resonant_sums: n must be nonnegative");
    PhaseTracker tracker(spec_T1.alpha(), t);
    KahanSum sp, se, ss;
    for (long long l = 0; l < n; ++l) {
        const double tl = tracker.current();
        sp.add(spec_T1.phi1().eval(tl));
        se.add(spec_T1.eta1().eval(tl));
        ss.add(spec_T1.psi().eval(tl));
        tracker.advance();
    }
    return {sp.value(), se.value(), ss.value()};
}

double resonant_sum_fast(const PeriodicFunction& f, const AlphaSpec& alpha, long long n,
                         double t) {
    KahanSumComplex acc;
    for (const auto& [m, c] : f.coeffs()) {
        if (m == 0) {
            acc.add(c * static_cast<double>(n));
            continue;
        }
        const double sf = alpha.signed_frac_times(m);
        const cplx phase = e2pi(frac(static_cast<double>(m) * t));
        if (sf == 0.0) {
            acc.add(c * phase * static_cast<double>(n));
            continue;
        }
        if (std::llabs(m) > std::numeric_limits<long long>::max() / std::max<long long>(1, std::llabs(n)))
            throw std::overflow_error("resonant_sum_fast: m*n exceeds int64");
        const cplx num = e2pi_minus_one(alpha.signed_frac_times(m * n));
        const cplx den = e2pi_minus_one(sf);
        acc.add(c * phase * num / den);
    }
    return acc.value().real();
}

ResonantSums resonant_sums_fast(const SkewProductSpec& spec_T1, long long n, double t) {
    if (spec_T1.kind() != SkewProductSpec::Kind::T1)
        throw std::invalid_argument("resonant_sums_fast: spec must be of kind T1");
    return {resonant_sum_fast(spec_T1.phi1(), spec_T1.alpha(), n, t),
            resonant_sum_fast(spec_T1.eta1(), spec_T1.alpha(), n, t),
            resonant_sum_fast(spec_T1.psi(), spec_T1.alpha(), n, t)};
}

PhasePoint t1_iterate_closed(const SkewProductSpec& spec_T1, const PhasePoint& p, long long n) {
    const ResonantSums sums = resonant_sums_fast(spec_T1, n, p.t);
    const double k = spec_T1.k();
    const HeisenbergElement y{sums.phi, k * sums.phi,
                              0.5 * k * sums.phi * sums.phi - 0.5 * k * sums.eta + sums.psi};
    const double tn = frac(p.t + spec_T1.alpha().signed_frac_times(n));
    return {tn, heis::canonical_rep(heis::mul(p.coset.rep, y)).point};
}

// ---------------------------------------------------------------------------
// Conjugation
// ---------------------------------------------------------------------------

ConjugationMap::ConjugationMap(double k, PeriodicFunction g_phi, PeriodicFunction g_eta,
                               PeriodicFunction g_psi)
    : k_(k), g_phi_(std::move(g_phi)), g_eta_(std::move(g_eta)), g_psi_(std::move(g_psi)) {}

HeisenbergElement ConjugationMap::matrix(double t) const {
    const double gp = g_phi_.eval(t);
    return {gp, k_ * gp, 0.5 * k_ * gp * gp - 0.5 * k_ * g_eta_.eval(t) + g_psi_.eval(t)};
}

PhasePoint ConjugationMap::apply(const PhasePoint& p) const {
    return {p.t, heis::canonical_rep(heis::mul(p.coset.rep, matrix(p.t))).point};
}

PhasePoint ConjugationMap::apply_inverse(const PhasePoint& p) const {
    return {p.t, heis::canonical_rep(heis::mul(p.coset.rep, heis::inv(matrix(p.t)))).point};
}

ConjugationMap build_R(double k, PeriodicFunction g_phi, PeriodicFunction g_eta,
                       PeriodicFunction g_psi) {
    return {k, std::move(g_phi), std::move(g_eta), std::move(g_psi)};
}

double conjugation_residual(const SkewProductSpec& spec_T, const ConjugationMap& R,
                            const SkewProductSpec& spec_T1,
                            const std::vector<PhasePoint>& sample) {
    double worst = 0.0;
    for (const PhasePoint& p : sample) {
        const PhasePoint lhs = step(spec_T1, p);
        const PhasePoint rhs = R.apply_inverse(step(spec_T, R.apply(p)));
        worst = std::max(worst, heis::phase_dist(lhs, rhs));
    }
    return worst;
}

Theorem2Pipeline build_theorem2_pipeline(const AlphaSpec& alpha, double k,
                                         const PeriodicFunction& phi,
                                         const PeriodicFunction& psi, double B, int cf_terms) {
    Theorem2Pipeline pipe;
    pipe.alpha = alpha;
    pipe.k = k;
    pipe.B = B;
    pipe.cf = arith::cf_expand(alpha, arith::CfStop{cf_terms, std::nullopt});
    pipe.cls = arith::classify_denominators(pipe.cf, B);
    pipe.phi = phi;
    pipe.psi = psi;
    pipe.eta = periodic::product(phi, phi);
    pipe.phi_split = periodic::split_resonant(pipe.phi, pipe.cls);
    pipe.eta_split = periodic::split_resonant(pipe.eta, pipe.cls);
    pipe.psi_split = periodic::split_resonant(pipe.psi, pipe.cls);
    pipe.g_phi = periodic::solve_coboundary(pipe.phi_split.part2, alpha);
    pipe.g_eta = periodic::solve_coboundary(pipe.eta_split.part2, alpha);
    pipe.g_psi = periodic::solve_coboundary(pipe.psi_split.part2, alpha);
    pipe.spec_T = SkewProductSpec::make_T(alpha, k, phi, psi, /*theorem2=*/true);
    pipe.spec_T1 = SkewProductSpec::make_T1(alpha, k, pipe.phi_split.part1,
                                            pipe.eta_split.part1, pipe.psi_split.part1);
    pipe.R = build_R(k, pipe.g_phi, pipe.g_eta, pipe.g_psi);
    return pipe;
}

namespace {

// Split into the mode-0 component and the rest (the finite-branch analogue of
// the resonant split, M1 reduced to {0}).
periodic::ResonantSplit mean_split(const PeriodicFunction& f) {
    periodic::ResonantSplit split;
    std::vector<std::pair<int, cplx>> zero_part, rest;
    for (const auto& [m, c] : f.coeffs()) {
        (m == 0 ? zero_part : rest).emplace_back(m, c);
    }
    split.part1 = PeriodicFunction::from_coeffs(std::move(zero_part), f.real_valued());
    split.part2 = PeriodicFunction::from_coeffs(std::move(rest), f.real_valued());
    return split;
}

}  // namespace

Theorem2Pipeline build_finite_branch(const AlphaSpec& alpha, double k,
                                     const PeriodicFunction& phi, const PeriodicFunction& psi,
                                     int cf_terms) {
    Theorem2Pipeline pipe;
    pipe.alpha = alpha;
    pipe.k = k;
    pipe.B = 0.0;  // not used: the branch replaces M2(B) by Z \ {0}
    pipe.cf = arith::cf_expand(alpha, arith::CfStop{cf_terms, std::nullopt});
    pipe.phi = phi;
    pipe.psi = psi;
    pipe.eta = periodic::product(phi, phi);
    pipe.phi_split = mean_split(pipe.phi);
    pipe.eta_split = mean_split(pipe.eta);
    pipe.psi_split = mean_split(pipe.psi);
    pipe.g_phi = periodic::solve_coboundary(pipe.phi_split.part2, alpha);
    pipe.g_eta = periodic::solve_coboundary(pipe.eta_split.part2, alpha);
    pipe.g_psi = periodic::solve_coboundary(pipe.psi_split.part2, alpha);
    pipe.spec_T = SkewProductSpec::make_T(alpha, k, phi, psi, /*theorem2=*/true);
    pipe.spec_T1 = SkewProductSpec::make_T1_tilde_from_data(alpha, k, pipe.eta, pipe.psi);
    pipe.R = build_R(k, pipe.g_phi, pipe.g_eta, pipe.g_psi);
    return pipe;
}

double omega_identity_residual(const Theorem2Pipeline& pipe, int grid_n) {
    const double k = pipe.k;
    const double alpha = pipe.alpha.value();
    const auto& gp = pipe.g_phi;
    const auto& ge = pipe.g_eta;
    const auto& gs = pipe.g_psi;
    double worst = 0.0;
    for (int j = 0; j < grid_n; ++j) {
        const double t = static_cast<double>(j) / grid_n;
        const double ta = frac(t + alpha);
        const double gpt = gp.eval(t), gpa = gp.eval(ta);
        const double long_form = 0.5 * k * gpa * gpa + 0.5 * k * gpt * gpt - k * gpt * gpa +
                                 0.5 * k * ge.eval(ta) - gs.eval(ta) -
                                 k * pipe.phi.eval(t) * gpa + pipe.psi.eval(t) +
                                 k * pipe.phi.eval(t) * gpt - 0.5 * k * ge.eval(t) + gs.eval(t);
        const double p1 = pipe.phi_split.part1.eval(t);
        const double simplified =
            0.5 * k * p1 * p1 - 0.5 * k * pipe.eta_split.part1.eval(t) + pipe.psi_split.part1.eval(t);
        worst = std::max(worst, std::fabs(long_form - simplified));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Class-A closed form
// ---------------------------------------------------------------------------

cplx omega_kernel(double u, double v, double x0, double y0, int trunc) {
    const double center = -(v + y0);
    const auto l0 = static_cast<long long>(std::llround(center));
    KahanSumComplex acc;
    for (long long l = l0 - trunc; l <= l0 + trunc; ++l) {
        const double g = v + y0 + static_cast<double>(l);
        const double w = std::exp(-kPi * g * g);
        acc.add(w * e2pi(frac(static_cast<double>(l) * (u + x0))));
    }
    return acc.value();
}

cplx closed_form_classA(const SkewProductSpec& spec_S, long long n, const PhasePoint& start,
                        int trunc) {
    if (spec_S.alpha().kind() != AlphaSpec::Kind::Rational)
        throw std::invalid_argument("closed_form_classA: alpha must be rational");
    const BirkhoffSums sums = birkhoff_S(spec_S, n, start.t);
    const double x0 = start.coset.rep.x;
    const double y0 = start.coset.rep.y;
    const double z0 = start.coset.rep.z;
    const cplx rho = e2pi(frac(start.t + x0 + y0 + z0));
    const double n_alpha = spec_S.alpha().signed_frac_times(n);
    const double phase =
        frac(n_alpha + (y0 + 1.0) * sums.s1 + sums.s2 + sums.s3 + sums.s4);
    return rho * omega_kernel(sums.s1, sums.s2, x0, y0, trunc) * e2pi(phase);
}

TorusPoint factor_step(const SkewProductSpec& spec, const TorusPoint& p) {
    double f1 = 0.0, f2 = 0.0;
    switch (spec.kind()) {
        case SkewProductSpec::Kind::S:
            f1 = spec.phi1().eval(p.t);
            f2 = spec.phi2().eval(p.t);
            break;
        case SkewProductSpec::Kind::T:
            f1 = spec.phi1().eval(p.t);
            f2 = spec.k() * f1;
            break;
        default:
            throw std::invalid_argument("factor_step: spec must be of kind S or T");
    }
    return {frac(p.t + spec.alpha().value()), frac(p.x + f1), frac(p.y + f2)};
}

// ---------------------------------------------------------------------------
// Decay scan
// ---------------------------------------------------------------------------

std::vector<DecayRow> lemma43_scan(const Theorem2Pipeline& pipe, int grid_n) {
    const PeriodicFunction phi1 = pipe.phi_split.part1;
    const PeriodicFunction eta1c =
        pipe.eta_split.part1.minus(PeriodicFunction::constant(pipe.eta_split.part1.mean()));
    const PeriodicFunction psi1c =
        pipe.psi_split.part1.minus(PeriodicFunction::constant(pipe.psi_split.part1.mean()));

    std::vector<DecayRow> rows;
    for (const auto& range : pipe.cls.sharp_ranges) {
        DecayRow row;
        row.qi = range.q;
        for (int j = 0; j < grid_n; ++j) {
            const double t = static_cast<double>(j) / grid_n;
            row.sup_phi = std::max(row.sup_phi,
                                   std::fabs(resonant_sum_fast(phi1, pipe.alpha, range.q, t)));
            row.sup_eta = std::max(row.sup_eta,
                                   std::fabs(resonant_sum_fast(eta1c, pipe.alpha, range.q, t)));
            row.sup_psi = std::max(row.sup_psi,
                                   std::fabs(resonant_sum_fast(psi1c, pipe.alpha, range.q, t)));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nilab::flows
