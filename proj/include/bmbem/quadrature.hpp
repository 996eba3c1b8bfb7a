#pragma once

#include <array>
#include <vector>

namespace bmbem::quadrature {

/// Rule on the reference triangle in barycentric coordinates; weights sum to 1
/// and are multiplied by the element area at use.
struct TriangleRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;
    int degree;  // polynomial degree integrated exactly

    std::size_t size() const { return weights.size(); }
};

/// Fully symmetric rules with 1, 3, 6, 7, 12 or 13 points (degrees 1, 2, 4,
/// 5, 6, 7). The 13 point rule has one negative weight.
const TriangleRule& symmetric_rule(int points);

/// Conical product rule from Gauss-Legendre nodes: (order + 1) * order points, exact to
/// degree 2*order - 1. Not symmetric under vertex permutation.
TriangleRule collapsed_gauss_rule(int order);

struct LineRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Gauss-Legendre nodes and weights on [a, b].
LineRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

}  // namespace bmbem::quadrature
