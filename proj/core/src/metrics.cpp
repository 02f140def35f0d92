#include "ppenkf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppenkf {

double compute_rmse(const Eigen::VectorXd& mean_field, const Eigen::VectorXd& truth_field) {
  if (mean_field.size() != truth_field.size())
    throw std::invalid_argument("compute_rmse: field length mismatch");
  if (mean_field.size() == 0) throw std::invalid_argument("compute_rmse: empty fields");
  return std::sqrt((mean_field - truth_field).squaredNorm() / double(mean_field.size()));
}

double compute_overall_std(const Eigen::MatrixXd& parameter_fields) {
  const Eigen::Index n_e = parameter_fields.cols();
  if (n_e < 2) throw std::invalid_argument("compute_overall_std: need at least 2 members");
  const Eigen::VectorXd mean = parameter_fields.rowwise().mean();
  const Eigen::MatrixXd dev = parameter_fields.colwise() - mean;
  const Eigen::VectorXd variances = dev.array().square().rowwise().sum() / double(n_e - 1);
  return std::sqrt(variances.mean());
}

Eigen::VectorXd compute_correlation_field(const Ensemble& ens, const ObservationPoint& point) {
  const StateLayout& layout = ens.layout;
  const int n_e = ens.size();
  const Eigen::VectorXd obs_values =
      ens.members.row(layout.dynamic_index(point.kind, point.cell)).transpose();
  const double obs_mean = obs_values.mean();
  const Eigen::VectorXd obs_dev = obs_values.array() - obs_mean;
  const double obs_var = obs_dev.squaredNorm() / double(n_e - 1);

  const Eigen::MatrixXd fields = ens.parameter_fields();
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(layout.grid().n_cells());
  if (obs_var <= 0.0) return rho;  // degenerate observed variable
  for (int c = 0; c < rho.size(); ++c) {
    const Eigen::VectorXd row = fields.row(c).transpose();
    const Eigen::VectorXd dev = row.array() - row.mean();
    const double var = dev.squaredNorm() / double(n_e - 1);
    if (var <= 0.0) continue;
    const double cov = obs_dev.dot(dev) / double(n_e - 1);
    rho[c] = cov / std::sqrt(obs_var * var);
  }
  return rho;
}

double correlation_rmse(const Eigen::VectorXd& field, const Eigen::VectorXd& reference) {
  return compute_rmse(field, reference);
}

double correlation_rmse(const std::vector<Eigen::VectorXd>& fields,
                        const std::vector<Eigen::VectorXd>& reference) {
  if (fields.size() != reference.size() || fields.empty())
    throw std::invalid_argument("correlation_rmse: field list mismatch");
  double sum_sq = 0.0;
  Eigen::Index count = 0;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (fields[f].size() != reference[f].size())
      throw std::invalid_argument("correlation_rmse: field length mismatch");
    sum_sq += (fields[f] - reference[f]).squaredNorm();
    count += fields[f].size();
  }
  return std::sqrt(sum_sq / double(count));
}

std::map<std::string, double> rank_methods(
    const std::map<std::string, std::vector<double>>& values_per_method) {
  if (values_per_method.empty()) throw std::invalid_argument("rank_methods: no methods");
  const std::size_t n_cells = values_per_method.begin()->second.size();
  std::string missing;
  for (const auto& [method, values] : values_per_method) {
    if (values.size() != n_cells) {
      missing += " " + method + "(cells=" + std::to_string(values.size()) + ")";
      continue;
    }
    for (std::size_t c = 0; c < values.size(); ++c)
      if (!std::isfinite(values[c])) missing += " " + method + "[cell " + std::to_string(c) + "]";
  }
  if (!missing.empty())
    throw std::invalid_argument("rank_methods: missing or non-finite cells:" + missing);
  if (n_cells == 0) throw std::invalid_argument("rank_methods: no cells");

  std::map<std::string, double> rank_sum;
  for (const auto& [method, values] : values_per_method) rank_sum[method] = 0.0;

  std::vector<std::pair<double, std::string>> cell(values_per_method.size());
  for (std::size_t c = 0; c < n_cells; ++c) {
    cell.clear();
    for (const auto& [method, values] : values_per_method) cell.emplace_back(values[c], method);
    std::sort(cell.begin(), cell.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t i = 0;
    while (i < cell.size()) {
      std::size_t j = i;
      while (j + 1 < cell.size() && cell[j + 1].first == cell[i].first) ++j;
      const double shared = 0.5 * double((i + 1) + (j + 1));  // mean of tied ranks
      for (std::size_t k = i; k <= j; ++k) rank_sum[cell[k].second] += shared;
      i = j + 1;
    }
  }
  for (auto& [method, sum] : rank_sum) sum /= double(n_cells);
  return rank_sum;
}

}  // namespace ppenkf
