#include "pinndd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinndd {

Eigen::Vector2d Interface::normal_at(const Eigen::Vector2d& x) const {
  if (!is_circle) return segment_normal;
  // Radial regions are numbered inside out, so the higher-index subdomain is
  // the outer one and its outward normal on this circle points inward.
  return -(x - center).normalized();
}

bool Interface::contains(const Eigen::Vector2d& x, double tol) const {
  if (is_circle) return std::abs((x - center).norm() - radius) <= tol;
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  const double t = (x - a).dot(d) / len2;
  if (t < -tol || t > 1.0 + tol) return false;
  const Eigen::Vector2d proj = a + t * d;
  return (x - proj).norm() <= tol;
}

PartitionModel PartitionModel::grid(const Rect& domain, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("partition: grid sizes must be positive");
  PartitionModel p;
  p.domain_ = domain;
  p.nx_ = nx;
  p.ny_ = ny;
  p.count_ = nx * ny;

  const double w = domain.width() / nx;
  const double h = domain.height() / ny;
  int component = 0;
  // vertical lines left to right, then horizontal lines bottom to top
  for (int m = 1; m < nx; ++m) {
    const double x = domain.x0 + m * w;
    p.components_.push_back({false, true, x});
    for (int row = 0; row < ny; ++row) {
      Interface f;
      f.lo = row * nx + (m - 1);
      f.hi = row * nx + m;
      f.a = {x, domain.y0 + row * h};
      f.b = {x, domain.y0 + (row + 1) * h};
      f.segment_normal = {-1.0, 0.0};  // outward from the right cell at its left edge
      f.component = component;
      p.interfaces_.push_back(f);
    }
    ++component;
  }
  for (int m = 1; m < ny; ++m) {
    const double y = domain.y0 + m * h;
    p.components_.push_back({false, false, y});
    for (int col = 0; col < nx; ++col) {
      Interface f;
      f.lo = (m - 1) * nx + col;
      f.hi = m * nx + col;
      f.a = {domain.x0 + col * w, y};
      f.b = {domain.x0 + (col + 1) * w, y};
      f.segment_normal = {0.0, -1.0};  // outward from the top cell at its bottom edge
      f.component = component;
      p.interfaces_.push_back(f);
    }
    ++component;
  }
  return p;
}

PartitionModel PartitionModel::radial(const Rect& domain, std::vector<double> radii) {
  if (radii.empty()) throw std::invalid_argument("partition: radial needs at least one radius");
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw std::invalid_argument("partition: radii must be ascending");
  PartitionModel p;
  p.domain_ = domain;
  p.radii_ = radii;
  p.count_ = static_cast<int>(radii.size()) + 1;
  const Eigen::Vector2d center{(domain.x0 + domain.x1) / 2, (domain.y0 + domain.y1) / 2};
  const double half = std::min(domain.width(), domain.height()) / 2;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] <= 0 || radii[k] > half)
      throw std::invalid_argument("partition: radius outside the domain");
    Interface f;
    f.lo = static_cast<int>(k);
    f.hi = static_cast<int>(k) + 1;
    f.is_circle = true;
    f.center = center;
    f.radius = radii[k];
    f.component = static_cast<int>(k);
    p.interfaces_.push_back(f);
    p.components_.push_back({true, false, radii[k]});
  }
  return p;
}

int PartitionModel::cell_index(double v, double lo, double hi, int n) {
  const double w = (hi - lo) / n;
  int c = std::clamp(static_cast<int>(std::floor((v - lo) / w)), 0, n - 1);
  // Snap to the half-open rule at cell boundaries: boundaries are generated as
  // lo + m*w, so compare against those exact values rather than trusting the
  // rounding of the division above.
  if (c + 1 < n && v >= lo + (c + 1) * w) ++c;
  if (c > 0 && v < lo + c * w) --c;
  return c;
}

int PartitionModel::locate(const Eigen::Vector2d& x) const {
  if (is_radial()) {
    const Eigen::Vector2d center{(domain_.x0 + domain_.x1) / 2, (domain_.y0 + domain_.y1) / 2};
    const double r = (x - center).norm();
    int region = 0;
    while (region < static_cast<int>(radii_.size()) && r >= radii_[region]) ++region;
    return region;
  }
  const int cx = cell_index(x(0), domain_.x0, domain_.x1, nx_);
  const int cy = cell_index(x(1), domain_.y0, domain_.y1, ny_);
  return cy * nx_ + cx;
}

std::vector<int> PartitionModel::neighbors(int i) const {
  std::vector<int> out;
  for (const Interface& f : interfaces_) {
    if (f.hi == i) out.push_back(f.lo);
    if (f.lo == i) out.push_back(f.hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> PartitionModel::interfaces_of(int i) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < interfaces_.size(); ++k)
    if (interfaces_[k].hi == i || interfaces_[k].lo == i) out.push_back(static_cast<int>(k));
  return out;
}

bool PartitionModel::touches_boundary(int i) const {
  if (is_radial()) return i == count_ - 1;
  const int cx = i % nx_;
  const int cy = i / nx_;
  return cx == 0 || cx == nx_ - 1 || cy == 0 || cy == ny_ - 1;
}

}  // namespace pinndd
