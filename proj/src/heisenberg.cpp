#include "nilab/heisenberg.hpp"

namespace nilab::heis {

// dG_upper(r1, gamma*r2) expanded: with gamma = (a,b,c),
//   u = r1^-1 * gamma * r2 has
//   u.x = x2 + a - x1
//   u.y = y2 + b - y1
//   u.z = (z2 + c + b*x2) - z1 + x1*y1 - y1*(x2 + a)
// and the two chain directions share |u.x|, |u.y| and differ only in the
// central entry (|u.z - u.x*u.y| vs |u.z|). c enters u.z additively, so the
// best c in a range is found directly instead of enumerated.
double quotient_dist(const NilmanifoldPoint& p1, const NilmanifoldPoint& p2,
                     const GammaWindow& window) {
    const HeisenbergElement& r1 = p1.rep;
    const HeisenbergElement& r2 = p2.rep;
    const double cmax = window.c;

    auto best_central = [cmax](double base) {
        // min over integer c in [-cmax, cmax] of |base + c|
        double c = std::clamp(-std::round(base), -cmax, cmax);
        return std::fabs(base + c);
    };

    double best = std::numeric_limits<double>::infinity();
    for (int a = -window.ab; a <= window.ab; ++a) {
        const double dx = r2.x + a - r1.x;
        const double adx = std::fabs(dx);
        if (adx >= best) continue;
        for (int b = -window.ab; b <= window.ab; ++b) {
            const double dy = r2.y + b - r1.y;
            const double lo = std::max(adx, std::fabs(dy));
            if (lo >= best) continue;
            const double z0 = (r2.z + b * r2.x) - r1.z + r1.x * r1.y - r1.y * (r2.x + a);
            const double central =
                std::min(best_central(z0 - dx * dy), best_central(z0));
            best = std::min(best, std::max(lo, central));
        }
    }
    return best;
}

}  // namespace nilab::heis
