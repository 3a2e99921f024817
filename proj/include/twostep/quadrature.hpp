#pragma once

#include <cstddef>
#include <vector>

namespace twostep::quadrature {

/// Nodes in (0,1), strictly decreasing, with positive weights summing to 1.
struct QuadratureRule {
    std::size_t n = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// The four zeros of the degree-4 Legendre polynomial on [−1, 1] in
/// ascending order, found by bisection, with their Gauss weights.
struct ReferenceRule {
    double nodes[4];
    double weights[4];
};
const ReferenceRule& gauss_legendre4();

/// Splits [0,1] into n/4 equal cells and applies the 4-point Gauss–Legendre
/// rule in each. Output is ordered with the largest node first.
/// Throws InvalidSize unless n ≥ 4 and n is a multiple of 4.
QuadratureRule composite_gl4(std::size_t n);

}  // namespace twostep::quadrature
