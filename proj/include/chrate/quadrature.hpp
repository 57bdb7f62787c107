#pragma once

#include <vector>

namespace chrate {

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int npts);

// Nodes/weights mapped to [a,b].
void gauss_on_interval(int npts, double a, double b, std::vector<double>& x,
                       std::vector<double>& w);

}  // namespace chrate
