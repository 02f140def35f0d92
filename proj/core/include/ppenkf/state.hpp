#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ppenkf/grid.hpp"

namespace ppenkf {

/// A state vector holds, in this fixed order: parameters at pilot cells,
/// parameters at non-pilot cells, then dynamic variables (head before
/// concentration, row-major over cells). Parameter entries are log10
/// permeability [log10 m^2], heads are [m], concentrations [mol/L].
using StateVector = Eigen::VectorXd;

enum class DynamicKind { Head = 0, Concentration = 1 };

std::string to_string(DynamicKind kind);

/// Partitioned layout of the state vector over a grid: n_p pilot parameters,
/// n_r non-pilot parameters (n_p + n_r = number of grid cells), and
/// n_d = n_cells * |dynamic kinds| dynamic variables.
class StateLayout {
 public:
  StateLayout() = default;
  StateLayout(const Grid& grid, std::vector<int> pilot_cells, std::vector<DynamicKind> kinds);

  const Grid& grid() const { return grid_; }
  int n_p() const { return static_cast<int>(pilot_cells_.size()); }
  int n_r() const { return grid_.n_cells() - n_p(); }
  int n_d() const { return grid_.n_cells() * static_cast<int>(kinds_.size()); }
  int n_s() const { return n_p() + n_r() + n_d(); }
  int n_param() const { return grid_.n_cells(); }

  const std::vector<int>& pilot_cells() const { return pilot_cells_; }
  const std::vector<int>& nonpilot_cells() const { return nonpilot_cells_; }
  const std::vector<DynamicKind>& dynamic_kinds() const { return kinds_; }

  bool is_pilot(int cell) const { return pilot_rank_[cell] >= 0; }

  /// Index of a cell's parameter within the state vector (pilot block first,
  /// then non-pilot block).
  int param_index(int cell) const {
    return pilot_rank_[cell] >= 0 ? pilot_rank_[cell] : n_p() + nonpilot_rank_[cell];
  }

  /// Grid cell owning parameter state index k, k in [0, n_p + n_r).
  int param_cell(int k) const { return param_cells_[k]; }

  bool has_kind(DynamicKind kind) const;

  /// Index of a dynamic variable within the state vector.
  int dynamic_index(DynamicKind kind, int cell) const;

  /// Grid cell owning any state index (parameter or dynamic).
  int cell_of_state_index(int k) const;

  bool is_param_index(int k) const { return k < n_p() + n_r(); }
  bool is_pilot_index(int k) const { return k < n_p(); }
  bool is_dynamic_index(int k) const { return k >= n_p() + n_r(); }

  /// Scatter a per-cell parameter field (length n_cells) into the parameter
  /// block ordering of the state vector.
  Eigen::VectorXd param_state_from_field(const Eigen::VectorXd& field) const;

  /// Gather the parameter block of a state vector back onto the grid
  /// (length n_cells, indexed by cell).
  Eigen::VectorXd param_field_from_state(const Eigen::VectorXd& state) const;

  bool operator==(const StateLayout& other) const {
    return grid_ == other.grid_ && pilot_cells_ == other.pilot_cells_ && kinds_ == other.kinds_;
  }

 private:
  Grid grid_;
  std::vector<int> pilot_cells_;
  std::vector<int> nonpilot_cells_;
  std::vector<int> param_cells_;    // state param index -> cell
  std::vector<int> pilot_rank_;     // cell -> rank within pilot block, -1 if non-pilot
  std::vector<int> nonpilot_rank_;  // cell -> rank within non-pilot block, -1 if pilot
  std::vector<DynamicKind> kinds_;
};

/// Builds a layout, rejecting duplicate or out-of-range pilot cells.
StateLayout build_state_layout(const Grid& grid, std::vector<int> pilot_cells,
                               std::vector<DynamicKind> kinds);

struct StateParts {
  Eigen::VectorXd pilot;
  Eigen::VectorXd nonpilot;
  Eigen::VectorXd dynamic;
};

/// Splits a state vector into (pilot, non-pilot, dynamic); concatenating the
/// parts in order reproduces the input exactly.
StateParts partition(const StateVector& state, const StateLayout& layout);

StateVector concatenate(const StateParts& parts);

}  // namespace ppenkf
