#include "flexscat/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace flexscat {

Grid square_grid(double h, double half_width) {
  if (!(h > 0.0) || !(half_width >= 0.0)) throw std::invalid_argument("square_grid: h > 0 and half_width >= 0 required");
  Grid g;
  g.h = h;
  g.nx = g.ny = int(std::ceil(half_width / h - 1e-9)) + 1;
  return g;
}

}  // namespace flexscat
