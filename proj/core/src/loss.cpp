#include "pinndd/loss.hpp"

#include <memory>
#include <stdexcept>

namespace pinndd {

TildeValues synchronize(const std::vector<TraceMessage>& messages,
                        const std::vector<InterfaceJumps>& jumps, long epoch) {
  const std::size_t n_ifaces = jumps.size();
  std::vector<const TraceMessage*> first(n_ifaces, nullptr), second(n_ifaces, nullptr);
  for (const TraceMessage& msg : messages) {
    if (msg.interface_index < 0 || msg.interface_index >= static_cast<int>(n_ifaces))
      throw std::invalid_argument("synchronize: unknown interface index");
    if (msg.epoch != epoch)
      throw std::runtime_error("synchronize: stale trace message (epoch mismatch)");
    auto& slot = first[msg.interface_index] ? second[msg.interface_index]
                                            : first[msg.interface_index];
    if (slot) throw std::runtime_error("synchronize: more than two traces for one interface");
    slot = &msg;
  }
  TildeValues tilde;
  tilde.epoch = epoch;
  tilde.interfaces.resize(n_ifaces);
  for (std::size_t k = 0; k < n_ifaces; ++k) {
    if (!first[k] || !second[k])
      throw std::runtime_error("synchronize: missing trace message");
    const TraceMessage& a = *first[k];
    const TraceMessage& b = *second[k];
    if (a.sender == b.sender)
      throw std::runtime_error("synchronize: duplicate sender for one interface");
    if (a.value.rows() != b.value.rows() || a.value.rows() != jumps[k].p.rows())
      throw std::invalid_argument("synchronize: trace length mismatch");
    InterfaceTilde& t = tilde.interfaces[k];
    // a + b is commutative, so the average is independent of arrival order
    const Eigen::MatrixXd value_avg = 0.5 * (a.value + b.value);
    const Eigen::MatrixXd flux_avg = 0.5 * (a.flux + b.flux);
    t.value_hi = value_avg + 0.5 * jumps[k].p;
    t.value_lo = value_avg - 0.5 * jumps[k].p;
    t.flux_hi = flux_avg + 0.5 * jumps[k].q;
    t.flux_lo = flux_avg - 0.5 * jumps[k].q;
  }
  return tilde;
}

SubdomainEngine::SubdomainEngine(std::shared_ptr<const Problem> problem,
                                 const PartitionModel& partition, const SampleSet& samples,
                                 const NetworkSpec& spec, int subdomain)
    : problem_(std::move(problem)),
      subdomain_(subdomain),
      region_(problem_->region_for_subdomain(subdomain)),
      fields_(problem_->field_count()) {
  if (spec.output_dim != fields_)
    throw std::invalid_argument("engine: network output_dim must match the problem field count");

  const PointMatrix& interior_pts = samples.interior.at(subdomain);
  if (interior_pts.rows() == 0) throw std::invalid_argument("engine: empty interior batch");
  interior_ = std::make_unique<BatchEval>(spec, DerivMode::full, interior_pts);
  forcing_.resize(interior_pts.rows(), problem_->forcing_dim());
  for (int k = 0; k < interior_pts.rows(); ++k)
    forcing_.row(k) = problem_->forcing_in_region(region_, interior_pts.row(k).transpose());

  const PointMatrix& boundary_pts = samples.boundary.at(subdomain);
  if (boundary_pts.rows() > 0) {
    boundary_ = std::make_unique<BatchEval>(spec, DerivMode::value, boundary_pts);
    boundary_g_.resize(boundary_pts.rows(), problem_->boundary_field_count());
    for (int k = 0; k < boundary_pts.rows(); ++k)
      boundary_g_.row(k) = problem_->boundary_value(boundary_pts.row(k).transpose());
  }

  local_ifaces_ = partition.interfaces_of(subdomain);
  int total = 0;
  for (int g : local_ifaces_) total += static_cast<int>(samples.interface_pts.at(g).rows());
  if (total > 0) {
    PointMatrix concat(total, 2);
    normals_.resize(total, 2);
    int offset = 0;
    for (int g : local_ifaces_) {
      const Interface& f = partition.interfaces()[g];
      const PointMatrix& pts = samples.interface_pts[g];
      const int n = static_cast<int>(pts.rows());
      concat.middleRows(offset, n) = pts;
      for (int k = 0; k < n; ++k)
        normals_.row(offset + k) = f.normal_at(pts.row(k).transpose()).transpose();
      slices_.push_back({g, offset, n, f.hi == subdomain});
      offset += n;
    }
    iface_ = std::make_unique<BatchEval>(spec, DerivMode::first, concat);
  }

  flux_w_.resize(fields_);
  for (int f = 0; f < fields_; ++f) flux_w_(f) = problem_->flux_weight(region_, f);
}

void SubdomainEngine::forward(const Params& params) {
  interior_->forward(params);
  if (boundary_) boundary_->forward(params);
  if (iface_) iface_->forward(params);
}

void SubdomainEngine::prepare(const TildeValues& tilde) {
  const int n_int = interior_->points();
  if (problem_->is_stokes()) {
    r_interior_.resize(n_int, 2);
    const double mu = flux_w_(0);
    r_interior_.col(0) = -mu * interior_->lap().col(0) + interior_->dx().col(2) - forcing_.col(0);
    r_interior_.col(1) = -mu * interior_->lap().col(1) + interior_->dy().col(2) - forcing_.col(1);
    div_ = interior_->dx().col(0) + interior_->dy().col(1);
  } else {
    const double c = flux_w_(0);
    r_interior_ = c * interior_->lap() + forcing_;
  }

  if (boundary_)
    r_boundary_ = boundary_->value().leftCols(problem_->boundary_field_count()) - boundary_g_;

  if (iface_) {
    flux_.resize(iface_->points(), fields_);
    for (int f = 0; f < fields_; ++f)
      flux_.col(f) = flux_w_(f) * (iface_->dx().col(f).cwiseProduct(normals_.col(0)) +
                                   iface_->dy().col(f).cwiseProduct(normals_.col(1)));
    r_iface_val_.resize(iface_->points(), fields_);
    r_iface_flux_.resize(iface_->points(), fields_);
    for (const IfaceSlice& s : slices_) {
      const InterfaceTilde& t = tilde.interfaces.at(s.global);
      const Eigen::MatrixXd& tv = s.hi_side ? t.value_hi : t.value_lo;
      const Eigen::MatrixXd& tf = s.hi_side ? t.flux_hi : t.flux_lo;
      r_iface_val_.middleRows(s.offset, s.count) =
          iface_->value().middleRows(s.offset, s.count) - tv;
      r_iface_flux_.middleRows(s.offset, s.count) = flux_.middleRows(s.offset, s.count) - tf;
    }
  }
}

TraceMessage SubdomainEngine::trace(int local_index, long epoch) const {
  const IfaceSlice& s = slices_.at(local_index);
  TraceMessage msg;
  msg.interface_index = s.global;
  msg.sender = subdomain_;
  msg.epoch = epoch;
  msg.value = iface_->value().middleRows(s.offset, s.count);
  msg.flux.resize(s.count, fields_);
  for (int f = 0; f < fields_; ++f)
    msg.flux.col(f) =
        flux_w_(f) * (iface_->dx().col(f).middleRows(s.offset, s.count).cwiseProduct(
                          normals_.col(0).middleRows(s.offset, s.count)) +
                      iface_->dy().col(f).middleRows(s.offset, s.count).cwiseProduct(
                          normals_.col(1).middleRows(s.offset, s.count)));
  return msg;
}

void SubdomainEngine::apply_ascent(MultiplierState& multipliers, const AscentRates& rates,
                                   bool divergence_multiplier) const {
  if (boundary_ && multipliers.boundary.size() > 0)
    multipliers.boundary += rates.alpha0 * r_boundary_;
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const IfaceSlice& s = slices_[k];
    multipliers.interfaces[k] += rates.alpha_lambda * r_iface_val_.middleRows(s.offset, s.count);
  }
  if (divergence_multiplier && multipliers.divergence.size() > 0)
    multipliers.divergence += rates.alpha_d * div_;
}

LossBreakdown SubdomainEngine::losses(const MultiplierState* multipliers) const {
  LossBreakdown out;
  const int n_int = interior_->points();
  out.residual = r_interior_.squaredNorm() / n_int;
  if (problem_->is_stokes()) {
    out.divergence = div_.squaredNorm() / n_int;
    if (multipliers && multipliers->divergence.size() > 0)
      out.lag_divergence = multipliers->divergence.dot(div_);
  }
  if (boundary_) {
    out.boundary = r_boundary_.squaredNorm() / boundary_->points();
    if (multipliers && multipliers->boundary.size() > 0)
      out.lag_boundary = multipliers->boundary.cwiseProduct(r_boundary_).sum();
  }
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const IfaceSlice& s = slices_[k];
    out.iface_value += r_iface_val_.middleRows(s.offset, s.count).squaredNorm() / s.count;
    out.iface_flux += r_iface_flux_.middleRows(s.offset, s.count).squaredNorm() / s.count;
    if (multipliers)
      out.lag_iface += multipliers->interfaces[k]
                           .cwiseProduct(r_iface_val_.middleRows(s.offset, s.count))
                           .sum();
  }
  return out;
}

void SubdomainEngine::gradient(const Params& params, const MultiplierState* multipliers,
                               bool augmented, bool divergence_multiplier,
                               Eigen::VectorXd& grad) {
  const int n_int = interior_->points();
  seed_interior_.setZero(4 * n_int, fields_);
  if (problem_->is_stokes()) {
    const double mu = flux_w_(0);
    // momentum residual: seeds on lap(u), lap(v), dx(p), dy(p)
    seed_interior_.block(3 * n_int, 0, n_int, 1) = (-2.0 * mu / n_int) * r_interior_.col(0);
    seed_interior_.block(3 * n_int, 1, n_int, 1) = (-2.0 * mu / n_int) * r_interior_.col(1);
    seed_interior_.block(n_int, 2, n_int, 1) = (2.0 / n_int) * r_interior_.col(0);
    seed_interior_.block(2 * n_int, 2, n_int, 1) = (2.0 / n_int) * r_interior_.col(1);
    // divergence: seeds on dx(u), dy(v)
    Eigen::VectorXd dseed = (2.0 / n_int) * div_;
    if (augmented && multipliers && divergence_multiplier && multipliers->divergence.size() > 0)
      dseed += multipliers->divergence;
    seed_interior_.block(n_int, 0, n_int, 1) = dseed;
    seed_interior_.block(2 * n_int, 1, n_int, 1) = dseed;
  } else {
    const double c = flux_w_(0);
    seed_interior_.block(3 * n_int, 0, n_int, 1) = (2.0 * c / n_int) * r_interior_;
  }
  interior_->backward(params, seed_interior_, grad);

  if (boundary_) {
    const int n_bd = boundary_->points();
    seed_boundary_.setZero(n_bd, fields_);
    const int bf = problem_->boundary_field_count();
    seed_boundary_.leftCols(bf) = (2.0 / n_bd) * r_boundary_;
    if (augmented && multipliers && multipliers->boundary.size() > 0)
      seed_boundary_.leftCols(bf) += multipliers->boundary;
    boundary_->backward(params, seed_boundary_, grad);
  }

  if (iface_) {
    const int n_if = iface_->points();
    seed_iface_.setZero(3 * n_if, fields_);
    for (std::size_t k = 0; k < slices_.size(); ++k) {
      const IfaceSlice& s = slices_[k];
      Eigen::MatrixXd vseed = (2.0 / s.count) * r_iface_val_.middleRows(s.offset, s.count);
      if (augmented && multipliers) vseed += multipliers->interfaces[k];
      seed_iface_.block(s.offset, 0, s.count, fields_) = vseed;
      const Eigen::MatrixXd fseed =
          (2.0 / s.count) * r_iface_flux_.middleRows(s.offset, s.count);
      for (int f = 0; f < fields_; ++f) {
        seed_iface_.block(n_if + s.offset, f, s.count, 1) =
            flux_w_(f) *
            fseed.col(f).cwiseProduct(normals_.col(0).middleRows(s.offset, s.count));
        seed_iface_.block(2 * n_if + s.offset, f, s.count, 1) =
            flux_w_(f) *
            fseed.col(f).cwiseProduct(normals_.col(1).middleRows(s.offset, s.count));
      }
    }
    iface_->backward(params, seed_iface_, grad);
  }
}

MultiplierState SubdomainEngine::zero_multipliers() const {
  MultiplierState m;
  if (boundary_)
    m.boundary = Eigen::MatrixXd::Zero(boundary_->points(), problem_->boundary_field_count());
  for (const IfaceSlice& s : slices_)
    m.interfaces.push_back(Eigen::MatrixXd::Zero(s.count, fields_));
  if (problem_->is_stokes())
    m.divergence = Eigen::VectorXd::Zero(interior_->points());
  return m;
}

void SubdomainEngine::reinit_interface_multipliers(MultiplierState& multipliers) const {
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const IfaceSlice& s = slices_[k];
    multipliers.interfaces[k] = r_iface_val_.middleRows(s.offset, s.count);
  }
}

void SubdomainEngine::reinit_divergence_multipliers(MultiplierState& multipliers) const {
  if (multipliers.divergence.size() > 0) multipliers.divergence = div_;
}

double SubdomainEngine::mean_abs_divergence() const {
  if (!problem_->is_stokes()) return 0.0;
  return div_.cwiseAbs().mean();
}

}  // namespace pinndd
