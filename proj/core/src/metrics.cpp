#include "pinndd/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "pinndd/batch_eval.hpp"

namespace pinndd {

double relative_l2(const Eigen::Ref<const Eigen::VectorXd>& exact,
                   const Eigen::Ref<const Eigen::VectorXd>& predicted) {
  if (exact.size() != predicted.size() || exact.size() == 0)
    throw std::invalid_argument("relative_l2: length mismatch or empty input");
  const double denom = exact.squaredNorm();
  if (denom == 0.0) throw std::invalid_argument("relative_l2: reference is identically zero");
  return std::sqrt((exact - predicted).squaredNorm() / denom);
}

PointMatrix evaluation_grid(const Rect& domain, int per_axis) {
  PointMatrix grid(per_axis * per_axis, 2);
  const double dx = domain.width() / (per_axis - 1);
  const double dy = domain.height() / (per_axis - 1);
  int row = 0;
  for (int iy = 0; iy < per_axis; ++iy) {
    const double y = (iy == per_axis - 1) ? domain.y1 : domain.y0 + iy * dy;
    for (int ix = 0; ix < per_axis; ++ix, ++row) {
      grid(row, 0) = (ix == per_axis - 1) ? domain.x1 : domain.x0 + ix * dx;
      grid(row, 1) = y;
    }
  }
  return grid;
}

ErrorReport evaluate_on_grid(const Problem& problem, const PartitionModel& partition,
                             const std::vector<NetworkSpec>& specs,
                             const std::vector<Params>& params, int per_axis) {
  const int nsub = partition.subdomain_count();
  if (static_cast<int>(params.size()) != nsub || static_cast<int>(specs.size()) != nsub)
    throw std::invalid_argument("evaluate_on_grid: one network per subdomain required");

  const PointMatrix grid = evaluation_grid(problem.domain(), per_axis);
  const int n = static_cast<int>(grid.rows());
  const int fields = problem.field_count();

  std::vector<std::vector<int>> owner(nsub);
  for (int k = 0; k < n; ++k) owner[partition.locate(grid.row(k).transpose())].push_back(k);

  Eigen::MatrixXd predicted(n, fields);
  for (int i = 0; i < nsub; ++i) {
    PointMatrix pts(static_cast<int>(owner[i].size()), 2);
    for (std::size_t k = 0; k < owner[i].size(); ++k) pts.row(static_cast<int>(k)) = grid.row(owner[i][k]);
    const Eigen::MatrixXd values = infer_values(specs[i], params[i], pts);
    for (std::size_t k = 0; k < owner[i].size(); ++k)
      predicted.row(owner[i][k]) = values.row(static_cast<int>(k));
  }

  Eigen::MatrixXd exact(n, fields);
  for (int k = 0; k < n; ++k) exact.row(k) = problem.exact(grid.row(k).transpose());

  ErrorReport report;
  report.grid_nx = per_axis;
  report.grid_ny = per_axis;

  const int ufields = problem.is_stokes() ? 2 : 1;
  double num = 0, den = 0;
  std::vector<double> sub_num(nsub, 0.0), sub_den(nsub, 0.0);
  std::vector<int> sub_of(n);
  for (int i = 0; i < nsub; ++i)
    for (int k : owner[i]) sub_of[k] = i;
  for (int k = 0; k < n; ++k) {
    double e2 = 0, u2 = 0;
    for (int f = 0; f < ufields; ++f) {
      const double d = exact(k, f) - predicted(k, f);
      e2 += d * d;
      u2 += exact(k, f) * exact(k, f);
    }
    num += e2;
    den += u2;
    sub_num[sub_of[k]] += e2;
    sub_den[sub_of[k]] += u2;
  }
  report.epsilon_u = std::sqrt(num / den);
  for (int i = 0; i < nsub; ++i)
    report.per_subdomain.push_back(sub_den[i] > 0 ? std::sqrt(sub_num[i] / sub_den[i]) : 0.0);

  if (problem.is_stokes()) {
    double pnum = 0, pden = 0, shift = 0;
    for (int k = 0; k < n; ++k) {
      const double d = exact(k, 2) - predicted(k, 2);
      pnum += d * d;
      pden += exact(k, 2) * exact(k, 2);
      shift += d;
    }
    report.epsilon_p = std::sqrt(pnum / pden);
    // The pressure is determined by the loss only up to a constant; report
    // the error with the best constant shift removed as well.
    shift /= n;
    double gnum = 0;
    for (int k = 0; k < n; ++k) {
      const double d = exact(k, 2) - predicted(k, 2) - shift;
      gnum += d * d;
    }
    report.epsilon_p_gauge = std::sqrt(gnum / pden);
  }
  return report;
}

double mean_abs_divergence(const Problem& problem, const SampleSet& samples,
                           const std::vector<NetworkSpec>& specs,
                           const std::vector<Params>& params) {
  if (!problem.is_stokes()) return 0.0;
  double total = 0;
  long count = 0;
  for (std::size_t i = 0; i < samples.interior.size(); ++i) {
    const PointMatrix& pts = samples.interior[i];
    BatchEval eval(specs[i], DerivMode::first, pts);
    eval.forward(params[i]);
    total += (eval.dx().col(0) + eval.dy().col(1)).cwiseAbs().sum();
    count += pts.rows();
  }
  return total / static_cast<double>(count);
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("aggregate: no replicates");
  Aggregate out;
  double sum = 0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace pinndd
