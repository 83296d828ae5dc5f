#pragma once

#include <vector>

#include "surfstokes/fem/reference_element.hpp"

namespace surfstokes::fem {

/// Quadrature on the reference triangle, weights summing to 1/2.
struct QuadratureRule {
    std::vector<RefPoint> points;
    std::vector<double> weights;
    int exactness = 0;

    int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxQuadratureExactness = 20;

/// Collapsed Gauss-Legendre product rule exact for polynomials of total
/// degree <= exactness. Throws Config for exactness outside 0..20.
QuadratureRule make_quadrature(int exactness);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace surfstokes::fem
