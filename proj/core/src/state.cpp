#include "ppenkf/state.hpp"

#include <algorithm>
#include <stdexcept>

namespace ppenkf {

std::string to_string(DynamicKind kind) {
  return kind == DynamicKind::Head ? "head" : "concentration";
}

StateLayout::StateLayout(const Grid& grid, std::vector<int> pilot_cells,
                         std::vector<DynamicKind> kinds)
    : grid_(grid), pilot_cells_(std::move(pilot_cells)), kinds_(std::move(kinds)) {
  const int n_g = grid_.n_cells();
  pilot_rank_.assign(n_g, -1);
  nonpilot_rank_.assign(n_g, -1);
  for (int r = 0; r < static_cast<int>(pilot_cells_.size()); ++r) {
    const int c = pilot_cells_[r];
    if (!grid_.contains(c))
      throw std::invalid_argument("StateLayout: pilot cell " + std::to_string(c) +
                                  " outside grid of " + std::to_string(n_g) + " cells");
    if (pilot_rank_[c] >= 0)
      throw std::invalid_argument("StateLayout: duplicate pilot cell " + std::to_string(c));
    pilot_rank_[c] = r;
  }
  nonpilot_cells_.reserve(n_g - pilot_cells_.size());
  for (int c = 0; c < n_g; ++c) {
    if (pilot_rank_[c] < 0) {
      nonpilot_rank_[c] = static_cast<int>(nonpilot_cells_.size());
      nonpilot_cells_.push_back(c);
    }
  }
  param_cells_.reserve(n_g);
  param_cells_.insert(param_cells_.end(), pilot_cells_.begin(), pilot_cells_.end());
  param_cells_.insert(param_cells_.end(), nonpilot_cells_.begin(), nonpilot_cells_.end());

  for (std::size_t a = 0; a < kinds_.size(); ++a)
    for (std::size_t b = a + 1; b < kinds_.size(); ++b)
      if (kinds_[a] == kinds_[b])
        throw std::invalid_argument("StateLayout: duplicate dynamic kind " + to_string(kinds_[a]));
}

bool StateLayout::has_kind(DynamicKind kind) const {
  return std::find(kinds_.begin(), kinds_.end(), kind) != kinds_.end();
}

int StateLayout::dynamic_index(DynamicKind kind, int cell) const {
  if (!grid_.contains(cell))
    throw std::out_of_range("StateLayout::dynamic_index: cell out of range");
  const auto it = std::find(kinds_.begin(), kinds_.end(), kind);
  if (it == kinds_.end())
    throw std::invalid_argument("StateLayout::dynamic_index: kind " + to_string(kind) +
                                " not part of this layout");
  const int kind_pos = static_cast<int>(it - kinds_.begin());
  return n_p() + n_r() + kind_pos * grid_.n_cells() + cell;
}

int StateLayout::cell_of_state_index(int k) const {
  if (k < 0 || k >= n_s()) throw std::out_of_range("StateLayout::cell_of_state_index");
  if (k < n_p() + n_r()) return param_cells_[k];
  return (k - n_p() - n_r()) % grid_.n_cells();
}

Eigen::VectorXd StateLayout::param_state_from_field(const Eigen::VectorXd& field) const {
  if (field.size() != grid_.n_cells())
    throw std::invalid_argument("param_state_from_field: field length mismatch");
  Eigen::VectorXd out(n_p() + n_r());
  for (int k = 0; k < out.size(); ++k) out[k] = field[param_cells_[k]];
  return out;
}

Eigen::VectorXd StateLayout::param_field_from_state(const Eigen::VectorXd& state) const {
  if (state.size() < n_p() + n_r())
    throw std::invalid_argument("param_field_from_state: state too short");
  Eigen::VectorXd field(grid_.n_cells());
  for (int k = 0; k < n_p() + n_r(); ++k) field[param_cells_[k]] = state[k];
  return field;
}

StateLayout build_state_layout(const Grid& grid, std::vector<int> pilot_cells,
                               std::vector<DynamicKind> kinds) {
  return StateLayout(grid, std::move(pilot_cells), std::move(kinds));
}

StateParts partition(const StateVector& state, const StateLayout& layout) {
  if (state.size() != layout.n_s())
    throw std::invalid_argument("partition: state length " + std::to_string(state.size()) +
                                " != layout n_s " + std::to_string(layout.n_s()));
  StateParts parts;
  parts.pilot = state.head(layout.n_p());
  parts.nonpilot = state.segment(layout.n_p(), layout.n_r());
  parts.dynamic = state.tail(layout.n_d());
  return parts;
}

StateVector concatenate(const StateParts& parts) {
  StateVector out(parts.pilot.size() + parts.nonpilot.size() + parts.dynamic.size());
  out << parts.pilot, parts.nonpilot, parts.dynamic;
  return out;
}

}  // namespace ppenkf
