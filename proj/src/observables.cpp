#include "nilab/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace nilab::obs {

double psi_tail_bound(int trunc) {
    const double r = static_cast<double>(trunc) - 2.0;
    return 2.0 * std::exp(-kPi * r * r);
}

namespace {

void check_psi_args(int m, int j, int trunc) {
    if (m < 1) throw std::invalid_argument("psi_mj: m must be >= 1");
    if (j < 0 || j >= m) throw std::invalid_argument("psi_mj: need 0 <= j < m");
    if (trunc < 8) throw std::invalid_argument("psi_mj: trunc must be >= 8");
}

}  // namespace

cplx eval_psi(int m, int j, const heis::HeisenbergElement& g, int trunc) {
    check_psi_args(m, j, trunc);
    const double shift = g.y + static_cast<double>(j) / m;
    const auto b0 = static_cast<long long>(std::llround(-shift));
    KahanSumComplex acc;
    for (long long b = b0 - trunc; b <= b0 + trunc; ++b) {
        const double gb = shift + static_cast<double>(b);
        const double w = std::exp(-kPi * gb * gb);
        acc.add(w * e2pi(frac(static_cast<double>(m) * static_cast<double>(b) * g.x)));
    }
    return e2pi(frac(m * g.z + j * g.x)) * acc.value();
}

cplx eval_psi_star(int m, int j, const heis::HeisenbergElement& g, int trunc) {
    check_psi_args(m, j, trunc);
    const double shift = g.y + static_cast<double>(j) / m;
    const auto b0 = static_cast<long long>(std::llround(-(shift + 0.5)));
    KahanSumComplex acc;
    for (long long b = b0 - trunc; b <= b0 + trunc; ++b) {
        const double u = shift + static_cast<double>(b);
        const double gb = u + 0.5;
        const double w = std::exp(-kPi * gb * gb);
        acc.add(w * e2pi(frac(0.5 * u + static_cast<double>(m) * static_cast<double>(b) * g.x)));
    }
    return cplx{0.0, 1.0} * e2pi(frac(m * g.z + j * g.x)) * acc.value();
}

ObservableSpec ObservableSpec::classA(int xi1, int xi2, int xi3, int m, int j,
                                      PsiVariant variant) {
    ObservableSpec s;
    s.cls = Class::A;
    s.xi1 = xi1;
    s.xi2 = xi2;
    s.xi3 = xi3;
    s.m = m;
    s.j = j;
    s.variant = variant;
    return s;
}

ObservableSpec ObservableSpec::classB(periodic::PeriodicFunction f1,
                                      std::vector<std::tuple<int, int, cplx>> f2) {
    ObservableSpec s;
    s.cls = Class::B;
    s.f1 = std::move(f1);
    s.f2 = std::move(f2);
    return s;
}

ObservableSpec ObservableSpec::typical() {
    ObservableSpec s;
    s.cls = Class::Typical;
    return s;
}

cplx eval_observable(const ObservableSpec& spec, const heis::PhasePoint& p, int trunc) {
    const heis::HeisenbergElement& g = p.coset.rep;
    switch (spec.cls) {
        case ObservableSpec::Class::A: {
            cplx psi;
            switch (spec.variant) {
                case PsiVariant::Psi: psi = eval_psi(spec.m, spec.j, g, trunc); break;
                case PsiVariant::PsiBar: psi = std::conj(eval_psi(spec.m, spec.j, g, trunc)); break;
                case PsiVariant::PsiStar: psi = eval_psi_star(spec.m, spec.j, g, trunc); break;
                case PsiVariant::PsiStarBar:
                    psi = std::conj(eval_psi_star(spec.m, spec.j, g, trunc));
                    break;
            }
            return e2pi(frac(spec.xi1 * p.t + spec.xi2 * g.x + spec.xi3 * g.y)) * psi;
        }
        case ObservableSpec::Class::B: {
            cplx f2{0.0, 0.0};
            for (const auto& [mx, my, c] : spec.f2) f2 += c * e2pi(frac(mx * g.x + my * g.y));
            return spec.f1.eval_complex(p.t) * f2;
        }
        case ObservableSpec::Class::Typical: {
            // e(t+x+y+z) sum_l exp(-pi (y+l)^2) e(lx) = e(t+x+y) psi_{1,0}(g)
            return e2pi(frac(p.t + g.x + g.y)) * eval_psi(1, 0, g, trunc);
        }
    }
    throw std::logic_error("eval_observable: unknown class");
}

namespace {

// max over y in [0,1) of the Gaussian comb sum_b exp(-pi (y+b)^2); the max is
// at y = 0 where the comb equals the theta constant.
double comb_bound(int trunc) {
    double s = 0.0;
    for (int b = -trunc; b <= trunc; ++b) s += std::exp(-kPi * static_cast<double>(b) * b);
    return s + psi_tail_bound(trunc);
}

}  // namespace

double observable_sup_bound(const ObservableSpec& spec, int trunc) {
    switch (spec.cls) {
        case ObservableSpec::Class::A:
        case ObservableSpec::Class::Typical:
            return comb_bound(trunc);
        case ObservableSpec::Class::B: {
            double s2 = 0.0;
            for (const auto& [mx, my, c] : spec.f2) s2 += std::abs(c);
            return spec.f1.sup_bound() * s2;
        }
    }
    throw std::logic_error("observable_sup_bound: unknown class");
}

}  // namespace nilab::obs
