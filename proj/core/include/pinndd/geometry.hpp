#pragma once

#include <Eigen/Core>
#include <vector>

namespace pinndd {

struct Rect {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// Interface between two subdomains: either a straight segment (grid
/// partitions) or a full circle (radial partitions). `hi > lo` always holds
/// and the canonical normal is the outward normal of subdomain `hi`.
struct Interface {
  int hi = 0, lo = 0;  // 0-based subdomain indices, hi > lo
  bool is_circle = false;
  Eigen::Vector2d a{0, 0}, b{0, 0};  // segment endpoints
  Eigen::Vector2d center{0, 0};      // circle
  double radius = 0;
  Eigen::Vector2d segment_normal{0, 0};  // constant canonical normal (segments)
  int component = 0;                     // index of the full line / circle it belongs to

  Eigen::Vector2d normal_at(const Eigen::Vector2d& x) const;
  bool contains(const Eigen::Vector2d& x, double tol = 1e-9) const;
};

/// One full interface component as sampled: a complete grid line across the
/// domain or a complete circle. Sample points drawn on the component are
/// assigned to its member interfaces afterwards.
struct InterfaceComponent {
  bool is_circle = false;
  bool vertical = false;   // segments: line x = const
  double coord = 0;        // the constant coordinate (segments) or radius (circles)
};

/// Non-overlapping partition of a rectangle, either an nx x ny grid of cells
/// (numbered row-major from the bottom-left corner) or nested radial regions
/// around the rectangle center (region 0 innermost).
class PartitionModel {
 public:
  static PartitionModel grid(const Rect& domain, int nx, int ny);
  static PartitionModel radial(const Rect& domain, std::vector<double> radii);

  const Rect& domain() const { return domain_; }
  int subdomain_count() const { return count_; }
  bool is_radial() const { return !radii_.empty(); }

  /// Total assignment: grid cells are half-open [lo, hi) except the last cell
  /// per axis; radial regions use r < r_1, r_1 <= r < r_2, ..., r >= r_last.
  int locate(const Eigen::Vector2d& x) const;

  const std::vector<Interface>& interfaces() const { return interfaces_; }
  const std::vector<InterfaceComponent>& components() const { return components_; }

  /// Ascending neighbor indices of subdomain i.
  std::vector<int> neighbors(int i) const;
  /// Indices into interfaces() touching subdomain i, ascending.
  std::vector<int> interfaces_of(int i) const;

  /// True if subdomain i touches the outer boundary of the domain.
  bool touches_boundary(int i) const;

  int grid_nx() const { return nx_; }
  int grid_ny() const { return ny_; }
  const std::vector<double>& radii() const { return radii_; }

  /// Half-open cell index of v in [lo, hi) split into n cells (last closed).
  static int cell_index(double v, double lo, double hi, int n);

 private:
  Rect domain_;
  int count_ = 1;
  int nx_ = 1, ny_ = 1;
  std::vector<double> radii_;
  std::vector<Interface> interfaces_;
  std::vector<InterfaceComponent> components_;
};

}  // namespace pinndd
