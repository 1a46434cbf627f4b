#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace flexscat {

using cdouble = std::complex<double>;

// Uniform square lattice. Node (c, r) sits at (x0 + h (c - nx + 1), y0 + h (r - ny + 1))
// for 0 <= c < 2 nx - 1, 0 <= r < 2 ny - 1, i.e. lattice indices |i1| < nx, |i2| < ny.
struct Grid {
  double h = 1.0;
  int nx = 1, ny = 1;
  double x0 = 0.0, y0 = 0.0;

  int cols() const { return 2 * nx - 1; }
  int rows() const { return 2 * ny - 1; }
  std::size_t size() const { return std::size_t(cols()) * rows(); }
  double x(int c) const { return x0 + h * (c - nx + 1); }
  double y(int r) const { return y0 + h * (r - ny + 1); }
  std::size_t index(int c, int r) const { return std::size_t(r) * cols() + c; }
  bool operator==(const Grid&) const = default;
};

// Grid centred at the origin covering [-half_width, half_width]^2 with spacing h.
Grid square_grid(double h, double half_width);

struct DensityGrid {
  Grid grid;
  std::vector<cdouble> values;

  DensityGrid() = default;
  explicit DensityGrid(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  cdouble& at(int c, int r) { return values[grid.index(c, r)]; }
  const cdouble& at(int c, int r) const { return values[grid.index(c, r)]; }
};

}  // namespace flexscat
