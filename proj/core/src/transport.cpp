#include "ppenkf/transport.hpp"

#include <cmath>
#include <stdexcept>

namespace ppenkf {

Eigen::VectorXd step_tracer(const Eigen::VectorXd& conc, const Eigen::VectorXd& head,
                            const FlowSolver& flow, double dt_seconds) {
  const Scenario& sc = flow.scenario();
  const Grid& g = sc.grid;
  if (conc.size() != g.n_cells())
    throw std::invalid_argument("step_tracer: concentration field length mismatch");

  const FlowSolver::FaceFluxes f = flow.fluxes(head);
  if (!f.qx.allFinite() || !f.qy.allFinite())
    throw std::runtime_error("step_tracer: nonfinite Darcy velocity");

  const double pore_volume = sc.porosity * g.dx * g.dy;

  // Inflow rate per cell bounds the Courant number of the upwind update.
  double max_inflow = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double in_w = std::max(f.qx[i + j * (g.nx + 1)], 0.0);
      const double in_e = std::max(-f.qx[i + 1 + j * (g.nx + 1)], 0.0);
      const double in_s = std::max(f.qy[i + j * g.nx], 0.0);
      const double in_n = std::max(-f.qy[i + (j + 1) * g.nx], 0.0);
      max_inflow = std::max(max_inflow, in_w + in_e + in_s + in_n);
    }
  }
  const double lambda = max_inflow * dt_seconds / pore_volume;
  const int n_sub = std::max(1, static_cast<int>(std::ceil(lambda / kCflLimit)));
  const double dt_sub = dt_seconds / n_sub;

  Eigen::VectorXd c = conc;
  Eigen::VectorXd next(c.size());
  for (int s = 0; s < n_sub; ++s) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int cell = g.cell_index(i, j);
        const double qw = f.qx[i + j * (g.nx + 1)];
        const double qe = f.qx[i + 1 + j * (g.nx + 1)];
        const double qs = f.qy[i + j * g.nx];
        const double qn = f.qy[i + (j + 1) * g.nx];
        double gain = 0.0;
        if (qw > 0.0) {
          const double up = i > 0 ? c[g.cell_index(i - 1, j)]
                                  : sc.west.concentration.value_or(c[cell]);
          gain += qw * (up - c[cell]);
        }
        if (qe < 0.0) {
          const double up = i < g.nx - 1 ? c[g.cell_index(i + 1, j)]
                                         : sc.east.concentration.value_or(c[cell]);
          gain += -qe * (up - c[cell]);
        }
        if (qs > 0.0) {
          const double up = j > 0 ? c[g.cell_index(i, j - 1)]
                                  : sc.south.concentration.value_or(c[cell]);
          gain += qs * (up - c[cell]);
        }
        if (qn < 0.0) {
          const double up = j < g.ny - 1 ? c[g.cell_index(i, j + 1)]
                                         : sc.north.concentration.value_or(c[cell]);
          gain += -qn * (up - c[cell]);
        }
        next[cell] = c[cell] + dt_sub / pore_volume * gain;
      }
    }
    c.swap(next);
  }
  return c;
}

}  // namespace ppenkf
