#pragma once

#include <functional>
#include <span>
#include <vector>

namespace marcink::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a, double b);

// Budget nodes spread over the segments [b_0,b_1], [b_1,b_2], ... with one
// Gauss-Legendre rule per segment; the per-segment order is proportional to
// the segment's logarithmic length (minimum 4). Nodes come out sorted.
Rule segmented_gauss(int budget, std::span<const double> breakpoints);

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10);

}  // namespace marcink::quadrature
