#include "pinndd/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pinndd/rng.hpp"

namespace pinndd {

namespace {

// Stream id bases; each sampling purpose owns a disjoint id range so draws
// are independent of the order groups are generated in.
constexpr std::uint64_t kStreamInterior = 1000;
constexpr std::uint64_t kStreamInterface = 2000;
constexpr std::uint64_t kStreamBoundary = 3000;

std::vector<int> permutation(int n, Rng& rng) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::vector<double> lhs_axis(int n, double lo, double hi, Rng& rng) {
  const std::vector<int> perm = permutation(n, rng);
  std::vector<double> out(n);
  const double w = (hi - lo) / n;
  for (int k = 0; k < n; ++k) out[k] = lo + (perm[k] + rng.next_double()) * w;
  return out;
}

}  // namespace

std::vector<double> latin_hypercube_1d(int n, double lo, double hi,
                                       std::uint64_t seed, std::uint64_t stream) {
  if (n < 1) throw std::invalid_argument("latin_hypercube: n must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("latin_hypercube: empty interval");
  Rng rng(seed, stream);
  return lhs_axis(n, lo, hi, rng);
}

PointMatrix latin_hypercube_2d(int n, const Rect& bounds,
                               std::uint64_t seed, std::uint64_t stream) {
  if (n < 1) throw std::invalid_argument("latin_hypercube: n must be >= 1");
  if (!(bounds.x1 > bounds.x0) || !(bounds.y1 > bounds.y0))
    throw std::invalid_argument("latin_hypercube: empty interval");
  Rng rng(seed, stream);
  const std::vector<double> xs = lhs_axis(n, bounds.x0, bounds.x1, rng);
  const std::vector<double> ys = lhs_axis(n, bounds.y0, bounds.y1, rng);
  PointMatrix pts(n, 2);
  for (int k = 0; k < n; ++k) {
    pts(k, 0) = xs[k];
    pts(k, 1) = ys[k];
  }
  return pts;
}

namespace {

PointMatrix rows_to_matrix(const std::vector<Eigen::Vector2d>& rows) {
  PointMatrix m(static_cast<int>(rows.size()), 2);
  for (std::size_t k = 0; k < rows.size(); ++k) m.row(static_cast<int>(k)) = rows[k].transpose();
  return m;
}

}  // namespace

SampleSet build_samples(const PartitionModel& partition, const SamplePlan& plan,
                        std::uint64_t seed) {
  if (plan.interior < 1 || plan.boundary_per_edge < 1)
    throw std::invalid_argument("build_samples: plan counts must be positive");
  const Rect& dom = partition.domain();
  const int nsub = partition.subdomain_count();
  SampleSet out;
  out.seed = seed;

  // interior: one draw over the whole domain, assigned by membership
  const PointMatrix all = latin_hypercube_2d(plan.interior, dom, seed, kStreamInterior);
  std::vector<std::vector<Eigen::Vector2d>> per_sub(nsub);
  for (int k = 0; k < all.rows(); ++k) {
    const Eigen::Vector2d x = all.row(k).transpose();
    per_sub[partition.locate(x)].push_back(x);
  }
  for (int i = 0; i < nsub; ++i) {
    if (per_sub[i].empty())
      throw std::runtime_error("build_samples: subdomain " + std::to_string(i) +
                               " received no interior points");
    out.interior.push_back(rows_to_matrix(per_sub[i]));
  }

  // interfaces: sample each full component, then split among its interfaces
  out.interface_pts.resize(partition.interfaces().size());
  std::vector<std::vector<Eigen::Vector2d>> per_iface(partition.interfaces().size());
  const auto& components = partition.components();
  for (std::size_t c = 0; c < components.size(); ++c) {
    const InterfaceComponent& comp = components[c];
    const int count = plan.count_for_component(static_cast<int>(c));
    if (count < 1) throw std::invalid_argument("build_samples: interface counts must be positive");
    // member interfaces of this component, in geometric order
    std::vector<int> members;
    for (std::size_t f = 0; f < partition.interfaces().size(); ++f)
      if (partition.interfaces()[f].component == static_cast<int>(c))
        members.push_back(static_cast<int>(f));

    if (comp.is_circle) {
      const double radius = comp.coord;
      const Eigen::Vector2d center{(dom.x0 + dom.x1) / 2, (dom.y0 + dom.y1) / 2};
      const double circumference = 2.0 * std::numbers::pi * radius;
      const std::vector<double> arcs =
          latin_hypercube_1d(count, 0.0, circumference, seed, kStreamInterface + c);
      for (double arc : arcs) {
        const double angle = arc / radius;
        per_iface[members[0]].push_back(
            center + radius * Eigen::Vector2d{std::cos(angle), std::sin(angle)});
      }
    } else {
      const double lo = comp.vertical ? dom.y0 : dom.x0;
      const double hi = comp.vertical ? dom.y1 : dom.x1;
      const int cells = static_cast<int>(members.size());
      const std::vector<double> ts =
          latin_hypercube_1d(count, lo, hi, seed, kStreamInterface + c);
      for (double t : ts) {
        const int cell = PartitionModel::cell_index(t, lo, hi, cells);
        const Eigen::Vector2d x =
            comp.vertical ? Eigen::Vector2d{comp.coord, t} : Eigen::Vector2d{t, comp.coord};
        per_iface[members[cell]].push_back(x);
      }
    }
  }
  for (std::size_t f = 0; f < per_iface.size(); ++f)
    out.interface_pts[f] = rows_to_matrix(per_iface[f]);

  // boundary: sample each domain edge, assign to the touching subdomain
  std::vector<std::vector<Eigen::Vector2d>> per_bd(nsub);
  struct Edge {
    bool horizontal;
    double coord;
  };
  const Edge edges[4] = {{true, dom.y0}, {true, dom.y1}, {false, dom.x0}, {false, dom.x1}};
  for (int e = 0; e < 4; ++e) {
    const double lo = edges[e].horizontal ? dom.x0 : dom.y0;
    const double hi = edges[e].horizontal ? dom.x1 : dom.y1;
    const std::vector<double> ts =
        latin_hypercube_1d(plan.boundary_per_edge, lo, hi, seed, kStreamBoundary + e);
    for (double t : ts) {
      const Eigen::Vector2d x = edges[e].horizontal ? Eigen::Vector2d{t, edges[e].coord}
                                                    : Eigen::Vector2d{edges[e].coord, t};
      per_bd[partition.locate(x)].push_back(x);
    }
  }
  for (int i = 0; i < nsub; ++i) out.boundary.push_back(rows_to_matrix(per_bd[i]));
  return out;
}

namespace {

nlohmann::json points_to_json(const PointMatrix& pts) {
  nlohmann::json arr = nlohmann::json::array();
  for (int k = 0; k < pts.rows(); ++k) arr.push_back({pts(k, 0), pts(k, 1)});
  return arr;
}

PointMatrix points_from_json(const nlohmann::json& arr) {
  PointMatrix pts(static_cast<int>(arr.size()), 2);
  int k = 0;
  for (const auto& row : arr) {
    pts(k, 0) = row.at(0).get<double>();
    pts(k, 1) = row.at(1).get<double>();
    ++k;
  }
  return pts;
}

}  // namespace

std::string sample_set_to_json(const SampleSet& samples) {
  nlohmann::json j;
  j["seed"] = samples.seed;
  for (const auto& pts : samples.interior) j["interior"].push_back(points_to_json(pts));
  for (const auto& pts : samples.boundary) j["boundary"].push_back(points_to_json(pts));
  j["interface"] = nlohmann::json::array();
  for (const auto& pts : samples.interface_pts) j["interface"].push_back(points_to_json(pts));
  return j.dump(2);
}

SampleSet sample_set_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SampleSet out;
  out.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& arr : j.at("interior")) out.interior.push_back(points_from_json(arr));
  for (const auto& arr : j.at("boundary")) out.boundary.push_back(points_from_json(arr));
  for (const auto& arr : j.at("interface")) out.interface_pts.push_back(points_from_json(arr));
  return out;
}

}  // namespace pinndd
