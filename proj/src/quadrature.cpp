#include "twostep/quadrature.hpp"

#include <cmath>
#include <string>

#include "twostep/errors.hpp"

namespace twostep::quadrature {

namespace {

struct Legendre4 {
    double value;
    double derivative;
};

Legendre4 legendre4(double x) {
    const double x2 = x * x;
    return {(35.0 * x2 * x2 - 30.0 * x2 + 3.0) / 8.0, (140.0 * x2 * x - 60.0 * x) / 8.0};
}

double bisect_root(double lo, double hi) {
    double flo = legendre4(lo).value;
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fmid = legendre4(mid).value;
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ReferenceRule build_reference() {
    // P4 is even; its positive zeros are separated by the zero of
    // P4' at sqrt(3/7), so [0, sqrt(3/7)] and [sqrt(3/7), 1] each bracket one.
    const double split = std::sqrt(3.0 / 7.0);
    const double inner = bisect_root(0.0, split);
    const double outer = bisect_root(split, 1.0);

    ReferenceRule rule{{-outer, -inner, inner, outer}, {}};
    for (int i = 0; i < 4; ++i) {
        const double x = rule.nodes[i];
        const double d = legendre4(x).derivative;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * d * d);
    }
    return rule;
}

}  // namespace

const ReferenceRule& gauss_legendre4() {
    static const ReferenceRule rule = build_reference();
    return rule;
}

QuadratureRule composite_gl4(std::size_t n) {
    if (n < 4 || n % 4 != 0) {
        throw InvalidSize("composite Gauss-Legendre rule needs n >= 4 divisible by 4, got " +
                          std::to_string(n));
    }
    const ReferenceRule& ref = gauss_legendre4();
    const std::size_t cells = n / 4;
    const double width = 1.0 / static_cast<double>(cells);

    QuadratureRule rule;
    rule.n = n;
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    // Walk cells right to left and reference nodes largest first, so the
    // output is strictly decreasing.
    for (std::size_t cell = cells; cell-- > 0;) {
        const double left = static_cast<double>(cell) * width;
        for (int i = 3; i >= 0; --i) {
            rule.nodes.push_back(left + 0.5 * width * (1.0 + ref.nodes[i]));
            rule.weights.push_back(0.5 * width * ref.weights[i]);
        }
    }
    return rule;
}

}  // namespace twostep::quadrature
