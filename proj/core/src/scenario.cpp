#include "ppenkf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ppenkf {

std::string to_string(ScenarioKind kind) {
  return kind == ScenarioKind::Tracer ? "tracer" : "well";
}

Scenario tracer_scenario() {
  Scenario s;
  s.kind = ScenarioKind::Tracer;
  s.grid = Grid(31, 31, 2.0, 2.0);
  s.sim_period_days = 1200.0;
  s.n_steps = 1200;
  s.south = EdgeBC::fixed_head(11.0, 80e-3);
  s.north = EdgeBC::fixed_head(10.0, 60e-3);
  s.west = EdgeBC::no_flow();
  s.east = EdgeBC::no_flow();
  s.initial_head = 10.0;
  s.initial_concentration = 60e-3;
  s.has_tracer = true;
  return s;
}

Scenario well_scenario() {
  Scenario s;
  s.kind = ScenarioKind::Well;
  s.grid = Grid(31, 31, 20.0, 20.0);
  s.sim_period_days = 18.0;
  s.n_steps = 1200;
  s.south = EdgeBC::fixed_head(10.0);
  s.north = EdgeBC::fixed_head(10.0);
  s.west = EdgeBC::fixed_head(10.0);
  s.east = EdgeBC::fixed_head(10.0);
  s.fixed_head_cells = {{s.grid.cell_at(310.0, 310.0), 11.0}};
  s.initial_head = 10.0;
  s.has_tracer = false;
  return s;
}

Scenario make_scenario(ScenarioKind kind) {
  return kind == ScenarioKind::Tracer ? tracer_scenario() : well_scenario();
}

Eigen::VectorXd ObservationSchedule::noise_std_vector() const {
  Eigen::VectorXd out(n_m());
  for (int m = 0; m < n_m(); ++m) out[m] = noise_std(points[m].kind);
  return out;
}

namespace {

std::vector<double> even_times(double period_days, int count) {
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = (k + 1) * (period_days / count);
  return t;
}

std::vector<int> tracer_measurement_cells(const Grid& grid) {
  return {grid.cell_at(19.0, 31.0), grid.cell_at(43.0, 31.0)};
}

}  // namespace

ObservationSchedule make_schedule(const Scenario& scenario) {
  ObservationSchedule sched;
  if (scenario.kind == ScenarioKind::Tracer) {
    const auto cells = tracer_measurement_cells(scenario.grid);
    for (int c : cells) sched.points.push_back({c, DynamicKind::Head});
    for (int c : cells) sched.points.push_back({c, DynamicKind::Concentration});
    sched.times_days = even_times(scenario.sim_period_days, 100);
  } else {
    for (int c : pilot_cells_regular(scenario.grid, 7))
      sched.points.push_back({c, DynamicKind::Head});
    sched.times_days = even_times(scenario.sim_period_days, 60);
  }
  return sched;
}

std::vector<int> measurement_cells(const Scenario& scenario) {
  std::set<int> cells;
  for (const auto& p : make_schedule(scenario).points) cells.insert(p.cell);
  return {cells.begin(), cells.end()};
}

void validate_schedule(const ObservationSchedule& schedule, const StateLayout& layout) {
  for (const auto& p : schedule.points) {
    if (!layout.grid().contains(p.cell))
      throw std::invalid_argument("observation cell " + std::to_string(p.cell) + " outside grid");
    if (!layout.is_pilot(p.cell))
      throw std::invalid_argument("observation cell " + std::to_string(p.cell) +
                                  " is not a pilot point cell");
    if (!layout.has_kind(p.kind))
      throw std::invalid_argument("observed kind " + to_string(p.kind) +
                                  " is not a dynamic variable of the layout");
  }
}

std::vector<int> pilot_cells_regular(const Grid& grid, int k,
                                     const std::vector<int>& must_include) {
  if (k < 2) throw std::invalid_argument("pilot_cells_regular: k must be >= 2");
  const int margin = 3;
  if (grid.nx <= 2 * margin || grid.ny <= 2 * margin)
    throw std::invalid_argument("pilot_cells_regular: grid too small for margin");
  std::vector<int> xi(k), yi(k);
  for (int a = 0; a < k; ++a) {
    xi[a] = margin + static_cast<int>(std::lround(a * double(grid.nx - 1 - 2 * margin) / (k - 1)));
    yi[a] = margin + static_cast<int>(std::lround(a * double(grid.ny - 1 - 2 * margin) / (k - 1)));
  }
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(k) * k + must_include.size());
  for (int b = 0; b < k; ++b)
    for (int a = 0; a < k; ++a) cells.push_back(grid.cell_index(xi[a], yi[b]));
  for (int c : must_include)
    if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
  return cells;
}

std::vector<int> pilot_cells_standard(const Grid& grid) {
  // The two extra cells are the tracer measurement cell indices (9,15) and
  // (21,15); the same indices are used in the well setup.
  return pilot_cells_regular(grid, 7, {grid.cell_index(9, 15), grid.cell_index(21, 15)});
}

std::vector<int> pilot_cells_diagonal(const Grid& grid) {
  auto cells = pilot_cells_standard(grid);
  for (int b = 0; b < 6; ++b)
    for (int a = 0; a < 6; ++a) {
      const int c = grid.cell_index(5 + 4 * a, 5 + 4 * b);
      if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    }
  return cells;
}

}  // namespace ppenkf
