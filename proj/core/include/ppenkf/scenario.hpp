#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ppenkf/grid.hpp"
#include "ppenkf/state.hpp"

namespace ppenkf {

enum class ScenarioKind { Tracer, Well };

std::string to_string(ScenarioKind kind);

struct Fluid {
  double density = 1000.0;    // [kg/m^3]
  double viscosity = 1.0e-3;  // [Pa s]
  double gravity = 9.81;      // [m/s^2]
};

/// Boundary condition along one domain edge. Fixed-head edges may carry a
/// fixed tracer concentration for inflow.
struct EdgeBC {
  enum class Type { NoFlow, FixedHead };
  Type type = Type::NoFlow;
  double head = 0.0;  // [m]
  std::optional<double> concentration;

  static EdgeBC no_flow() { return EdgeBC{}; }
  static EdgeBC fixed_head(double h, std::optional<double> conc = std::nullopt) {
    return EdgeBC{Type::FixedHead, h, conc};
  }
};

/// Physical setup of one transient 2D flow (+ optional tracer) problem.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Tracer;
  Grid grid;
  double sim_period_days = 0.0;
  int n_steps = 0;
  EdgeBC west, east, south, north;
  std::vector<std::pair<int, double>> fixed_head_cells;  // interior wells: (cell, head [m])
  double initial_head = 0.0;                             // [m]
  double initial_concentration = 0.0;                    // [mol/L], tracer only
  bool has_tracer = false;
  double porosity = 0.10;
  Fluid fluid;
  double specific_storage = 1e-4;  // [1/m]

  double step_days() const { return sim_period_days / n_steps; }
  std::vector<DynamicKind> dynamic_kinds() const {
    return has_tracer ? std::vector<DynamicKind>{DynamicKind::Head, DynamicKind::Concentration}
                      : std::vector<DynamicKind>{DynamicKind::Head};
  }
};

/// 62 m x 62 m solute-transport setup: south-to-north head drop 11 m -> 10 m,
/// tracer inflow 80e-3 mol/L against an initial 60e-3 mol/L background,
/// east/west impermeable, 1,200 daily steps.
Scenario tracer_scenario();

/// 620 m x 620 m injection setup: central cell pinned at 11 m against 10 m on
/// all four boundaries, 1,200 steps over 18 days, head only.
Scenario well_scenario();

Scenario make_scenario(ScenarioKind kind);

struct ObservationPoint {
  int cell = 0;
  DynamicKind kind = DynamicKind::Head;
  bool operator==(const ObservationPoint&) const = default;
};

/// Measurement geometry and timing of one scenario. Rows of every
/// measurement vector follow `points` order.
struct ObservationSchedule {
  std::vector<ObservationPoint> points;
  std::vector<double> times_days;
  double sigma_head = 5e-2;    // [m]
  double sigma_conc = 7.1e-3;  // [mol/L]

  int n_m() const { return static_cast<int>(points.size()); }
  double noise_std(DynamicKind kind) const {
    return kind == DynamicKind::Head ? sigma_head : sigma_conc;
  }
  Eigen::VectorXd noise_std_vector() const;
};

/// Tracer: head + concentration at two central locations, 100 evenly spaced
/// times. Well: head at 49 locations on a 7x7 grid, 60 evenly spaced times.
ObservationSchedule make_schedule(const Scenario& scenario);

/// Cells carrying measurements in this scenario (deduplicated across kinds).
std::vector<int> measurement_cells(const Scenario& scenario);

/// Every observation location must be a pilot cell and every observed kind a
/// dynamic kind of the layout; throws otherwise.
void validate_schedule(const ObservationSchedule& schedule, const StateLayout& layout);

/// Standard 51-point pilot layout shared by both setups: a 7x7 grid plus the
/// two tracer measurement cells.
std::vector<int> pilot_cells_standard(const Grid& grid);

/// Regular k x k pilot grid (margin 3 cells), extended by any cells from
/// `must_include` it does not already contain.
std::vector<int> pilot_cells_regular(const Grid& grid, int k,
                                     const std::vector<int>& must_include = {});

/// Standard layout plus the 6x6 diagonal midpoints of the 7x7 grid.
std::vector<int> pilot_cells_diagonal(const Grid& grid);

}  // namespace ppenkf
