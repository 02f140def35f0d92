#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ppenkf {

/// Regular 2D cell grid with physical extent. Cell (i,j) has its center at
/// ((i+0.5)*dx, (j+0.5)*dy); linear cell indices are row-major, c = j*nx + i.
struct Grid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  Grid() = default;
  Grid(int nx_, int ny_, double dx_, double dy_) : nx(nx_), ny(ny_), dx(dx_), dy(dy_) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("Grid: nx and ny must be >= 1");
    if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("Grid: dx and dy must be > 0");
  }

  int n_cells() const { return nx * ny; }

  int cell_index(int i, int j) const {
    if (i < 0 || i >= nx || j < 0 || j >= ny)
      throw std::out_of_range("Grid::cell_index: (" + std::to_string(i) + "," +
                              std::to_string(j) + ") outside " + std::to_string(nx) + "x" +
                              std::to_string(ny));
    return j * nx + i;
  }

  int cell_i(int c) const { return c % nx; }
  int cell_j(int c) const { return c / nx; }

  bool contains(int c) const { return c >= 0 && c < n_cells(); }

  double cell_x(int c) const { return (cell_i(c) + 0.5) * dx; }
  double cell_y(int c) const { return (cell_j(c) + 0.5) * dy; }

  /// Cell whose center is nearest to the physical point (x,y); the point must
  /// lie inside the domain.
  int cell_at(double x, double y) const {
    int i = static_cast<int>(std::floor(x / dx));
    int j = static_cast<int>(std::floor(y / dy));
    if (i == nx) --i;  // right/top domain edge belongs to the last cell
    if (j == ny) --j;
    return cell_index(i, j);
  }

  /// Euclidean distance between the centers of two cells [m].
  double distance(int c1, int c2) const {
    const double ddx = cell_x(c1) - cell_x(c2);
    const double ddy = cell_y(c1) - cell_y(c2);
    return std::sqrt(ddx * ddx + ddy * ddy);
  }

  double extent_x() const { return nx * dx; }
  double extent_y() const { return ny * dy; }

  bool operator==(const Grid&) const = default;
};

}  // namespace ppenkf
