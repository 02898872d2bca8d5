#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinndd/batch_eval.hpp"
#include "pinndd/geometry.hpp"

namespace pinndd {

/// Per-run collocation point counts. `interface_counts` is matched against
/// the partition's interface components (full grid lines, then circles, in
/// canonical order); missing entries fall back to `interface_default`.
struct SamplePlan {
  int interior = 2000;
  int boundary_per_edge = 200;
  int interface_default = 200;
  std::vector<int> interface_counts;

  int count_for_component(int component) const {
    if (component < static_cast<int>(interface_counts.size())) return interface_counts[component];
    return interface_default;
  }
};

/// Collocation points for one run. Interface point lists are shared by both
/// adjacent subdomains; boundary matrices may be empty for interior
/// subdomains.
struct SampleSet {
  std::vector<PointMatrix> interior;       // per subdomain
  std::vector<PointMatrix> boundary;       // per subdomain
  std::vector<PointMatrix> interface_pts;  // per interface
  std::uint64_t seed = 0;
};

/// n points stratified per axis: each axis is split into n equal strata and
/// receives exactly one point per stratum. Deterministic given the stream.
std::vector<double> latin_hypercube_1d(int n, double lo, double hi,
                                       std::uint64_t seed, std::uint64_t stream);
PointMatrix latin_hypercube_2d(int n, const Rect& bounds,
                               std::uint64_t seed, std::uint64_t stream);

/// Draws interior points over the whole domain and assigns them to subdomains
/// by locate(); samples each full interface line / circle and splits the
/// points among its member interfaces; samples each domain edge and assigns
/// points to the touching subdomain. Throws if a subdomain ends up with no
/// interior points.
SampleSet build_samples(const PartitionModel& partition, const SamplePlan& plan,
                        std::uint64_t seed);

std::string sample_set_to_json(const SampleSet& samples);
SampleSet sample_set_from_json(const std::string& text);

}  // namespace pinndd
