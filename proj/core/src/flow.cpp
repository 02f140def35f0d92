#include "ppenkf/flow.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ppenkf {

double permeability_to_conductivity(double log10_k, const Fluid& fluid) {
  return std::pow(10.0, log10_k) * fluid.density * fluid.gravity / fluid.viscosity;
}

Eigen::VectorXd permeability_to_conductivity(const Eigen::VectorXd& log10_k, const Fluid& fluid) {
  const double factor = fluid.density * fluid.gravity / fluid.viscosity;
  return Eigen::pow(10.0, log10_k.array()) * factor;
}

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

}  // namespace

FlowSolver::FlowSolver(const Scenario& scenario, const Eigen::VectorXd& conductivity,
                       double dt_seconds)
    : scenario_(scenario), conductivity_(conductivity), dt_(dt_seconds) {
  const Grid& g = scenario_.grid;
  const int n = g.n_cells();
  if (conductivity_.size() != n)
    throw std::invalid_argument("FlowSolver: conductivity field length mismatch");
  if (!(dt_ > 0.0)) throw std::invalid_argument("FlowSolver: dt must be > 0");
  if (!conductivity_.allFinite() || (conductivity_.array() <= 0.0).any())
    throw std::invalid_argument("FlowSolver: conductivity must be finite and positive");

  pinned_.assign(n, false);
  pinned_value_ = Eigen::VectorXd::Zero(n);
  for (const auto& [cell, head] : scenario_.fixed_head_cells) {
    if (!g.contains(cell)) throw std::invalid_argument("FlowSolver: fixed-head cell outside grid");
    pinned_[cell] = true;
    pinned_value_[cell] = head;
  }

  const double cell_volume = g.dx * g.dy;  // unit thickness
  storage_ = Eigen::VectorXd::Constant(n, scenario_.specific_storage * cell_volume / dt_);
  rhs_fixed_ = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * n);
  Eigen::VectorXd diag = storage_;

  auto couple = [&](int c, int nbr, double t) {
    diag[c] += t;
    if (pinned_[nbr])
      rhs_fixed_[c] += t * pinned_value_[nbr];
    else
      trips.emplace_back(c, nbr, -t);
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell_index(i, j);
      if (pinned_[c]) {
        storage_[c] = 0.0;
        rhs_fixed_[c] = pinned_value_[c];
        trips.emplace_back(c, c, 1.0);
        continue;
      }
      const double tx = g.dy / g.dx;
      const double ty = g.dx / g.dy;
      if (i > 0) couple(c, g.cell_index(i - 1, j), harmonic(conductivity_[c], conductivity_[g.cell_index(i - 1, j)]) * tx);
      if (i < g.nx - 1) couple(c, g.cell_index(i + 1, j), harmonic(conductivity_[c], conductivity_[g.cell_index(i + 1, j)]) * tx);
      if (j > 0) couple(c, g.cell_index(i, j - 1), harmonic(conductivity_[c], conductivity_[g.cell_index(i, j - 1)]) * ty);
      if (j < g.ny - 1) couple(c, g.cell_index(i, j + 1), harmonic(conductivity_[c], conductivity_[g.cell_index(i, j + 1)]) * ty);
      // Fixed-head edges act over the half-cell distance to the boundary face.
      if (i == 0 && scenario_.west.type == EdgeBC::Type::FixedHead) {
        const double t = 2.0 * conductivity_[c] * tx;
        diag[c] += t;
        rhs_fixed_[c] += t * scenario_.west.head;
      }
      if (i == g.nx - 1 && scenario_.east.type == EdgeBC::Type::FixedHead) {
        const double t = 2.0 * conductivity_[c] * tx;
        diag[c] += t;
        rhs_fixed_[c] += t * scenario_.east.head;
      }
      if (j == 0 && scenario_.south.type == EdgeBC::Type::FixedHead) {
        const double t = 2.0 * conductivity_[c] * ty;
        diag[c] += t;
        rhs_fixed_[c] += t * scenario_.south.head;
      }
      if (j == g.ny - 1 && scenario_.north.type == EdgeBC::Type::FixedHead) {
        const double t = 2.0 * conductivity_[c] * ty;
        diag[c] += t;
        rhs_fixed_[c] += t * scenario_.north.head;
      }
    }
  }
  for (int c = 0; c < n; ++c)
    if (!pinned_[c]) trips.emplace_back(c, c, diag[c]);

  matrix_.resize(n, n);
  matrix_.setFromTriplets(trips.begin(), trips.end());
  solver_.compute(matrix_);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error("FlowSolver: sparse factorization failed");
}

Eigen::VectorXd FlowSolver::step(const Eigen::VectorXd& head) const {
  if (head.size() != scenario_.grid.n_cells())
    throw std::invalid_argument("FlowSolver::step: head length mismatch");
  const Eigen::VectorXd rhs = storage_.cwiseProduct(head) + rhs_fixed_;
  Eigen::VectorXd out = solver_.solve(rhs);
  if (solver_.info() != Eigen::Success || !out.allFinite())
    throw std::runtime_error("FlowSolver::step: linear solve failed (residual non-convergent)");
  return out;
}

FlowSolver::FaceFluxes FlowSolver::fluxes(const Eigen::VectorXd& head) const {
  const Grid& g = scenario_.grid;
  FaceFluxes f;
  f.qx = Eigen::VectorXd::Zero((g.nx + 1) * g.ny);
  f.qy = Eigen::VectorXd::Zero(g.nx * (g.ny + 1));
  const double tx = g.dy / g.dx;
  const double ty = g.dx / g.dy;
  for (int j = 0; j < g.ny; ++j) {
    if (scenario_.west.type == EdgeBC::Type::FixedHead) {
      const int c = g.cell_index(0, j);
      f.qx[0 + j * (g.nx + 1)] = 2.0 * conductivity_[c] * tx * (scenario_.west.head - head[c]);
    }
    for (int i = 1; i < g.nx; ++i) {
      const int cw = g.cell_index(i - 1, j);
      const int ce = g.cell_index(i, j);
      f.qx[i + j * (g.nx + 1)] =
          harmonic(conductivity_[cw], conductivity_[ce]) * tx * (head[cw] - head[ce]);
    }
    if (scenario_.east.type == EdgeBC::Type::FixedHead) {
      const int c = g.cell_index(g.nx - 1, j);
      f.qx[g.nx + j * (g.nx + 1)] = 2.0 * conductivity_[c] * tx * (head[c] - scenario_.east.head);
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    if (scenario_.south.type == EdgeBC::Type::FixedHead) {
      const int c = g.cell_index(i, 0);
      f.qy[i] = 2.0 * conductivity_[c] * ty * (scenario_.south.head - head[c]);
    }
    for (int j = 1; j < g.ny; ++j) {
      const int cs = g.cell_index(i, j - 1);
      const int cn = g.cell_index(i, j);
      f.qy[i + j * g.nx] =
          harmonic(conductivity_[cs], conductivity_[cn]) * ty * (head[cs] - head[cn]);
    }
    if (scenario_.north.type == EdgeBC::Type::FixedHead) {
      const int c = g.cell_index(i, g.ny - 1);
      f.qy[i + g.ny * g.nx] = 2.0 * conductivity_[c] * ty * (head[c] - scenario_.north.head);
    }
  }
  return f;
}

double FlowSolver::mass_balance_residual(const Eigen::VectorXd& head_old,
                                         const Eigen::VectorXd& head_new) const {
  const Grid& g = scenario_.grid;
  const FaceFluxes f = fluxes(head_new);
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell_index(i, j);
      if (pinned_[c]) continue;
      const double qw = f.qx[i + j * (g.nx + 1)];
      const double qe = f.qx[i + 1 + j * (g.nx + 1)];
      const double qs = f.qy[i + j * g.nx];
      const double qn = f.qy[i + (j + 1) * g.nx];
      const double inflow = qw - qe + qs - qn;
      const double stored = storage_[c] * (head_new[c] - head_old[c]);
      // Relative to the gross flux magnitude: the net is a difference of
      // nearly cancelling face terms.
      const double scale =
          std::max(std::abs(qw) + std::abs(qe) + std::abs(qs) + std::abs(qn) + std::abs(stored),
                   1e-300);
      worst = std::max(worst, std::abs(stored - inflow) / scale);
    }
  }
  return worst;
}

}  // namespace ppenkf
