#include "ppenkf/prior_covariance.hpp"

#include <stdexcept>

#include "ppenkf/random_field.hpp"

namespace ppenkf {

namespace {

Eigen::MatrixXd analytic_block(const Grid& grid, const std::vector<int>& rows,
                               const std::vector<int>& cols, const Variogram& vg) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(r, c) = spherical_covariance(grid.distance(rows[r], cols[c]), vg);
  return out;
}

}  // namespace

PriorCrossCovariance build_prior_cross_covariance(const StateLayout& layout, const Variogram& vg,
                                                  CovarianceSource source, int n_fields,
                                                  const RngSpec& field_stream) {
  PriorCrossCovariance out;
  out.source = source;
  const Grid& grid = layout.grid();
  if (source == CovarianceSource::Analytic) {
    out.rp = analytic_block(grid, layout.nonpilot_cells(), layout.pilot_cells(), vg);
    out.pp = analytic_block(grid, layout.pilot_cells(), layout.pilot_cells(), vg);
    return out;
  }

  if (n_fields < 2)
    throw std::invalid_argument("build_prior_cross_covariance: empirical source needs >= 2 fields");
  out.n_fields = n_fields;

  // Accumulate the full n_g x n_g scatter matrix in batches, then restrict to
  // the (non-pilot, pilot) and (pilot, pilot) blocks.
  const int n_g = grid.n_cells();
  GaussianFieldGenerator gen(grid, vg);
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(n_g, n_g);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_g);
  const int batch = 256;
  Eigen::MatrixXd fields(n_g, batch);
  int done = 0;
  while (done < n_fields) {
    const int m = std::min(batch, n_fields - done);
    for (int f = 0; f < m; ++f) {
      Rng rng(field_stream.with_member(static_cast<std::uint32_t>(done + f)));
      fields.col(f) = gen.generate(rng);
    }
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(fields.leftCols(m), 1.0);
    sum += fields.leftCols(m).rowwise().sum();
    done += m;
  }
  const double n = static_cast<double>(n_fields);
  const Eigen::VectorXd mean = sum / n;
  Eigen::MatrixXd cov = Eigen::MatrixXd(scatter.selfadjointView<Eigen::Lower>());
  cov.noalias() -= n * mean * mean.transpose();
  cov /= (n - 1.0);

  const auto& pilots = layout.pilot_cells();
  const auto& nonpilots = layout.nonpilot_cells();
  out.rp.resize(nonpilots.size(), pilots.size());
  for (std::size_t r = 0; r < nonpilots.size(); ++r)
    for (std::size_t p = 0; p < pilots.size(); ++p) out.rp(r, p) = cov(nonpilots[r], pilots[p]);
  out.pp.resize(pilots.size(), pilots.size());
  for (std::size_t a = 0; a < pilots.size(); ++a)
    for (std::size_t b = 0; b < pilots.size(); ++b) out.pp(a, b) = cov(pilots[a], pilots[b]);
  return out;
}

}  // namespace ppenkf
