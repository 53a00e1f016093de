#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "eonsurv/topology.hpp"

namespace eonsurv {

enum class PathMetric { kKm, kHops };

struct SubstratePath {
  std::vector<int> nodes;
  std::vector<int> links;
  double length_km = 0.0;

  int hops() const { return static_cast<int>(links.size()); }
  int source() const { return nodes.front(); }
  int target() const { return nodes.back(); }
  friend bool operator==(const SubstratePath&, const SubstratePath&) = default;
};

using LinkFilter = std::function<bool(const SubstrateLink&)>;

// Minimum-metric simple path over links accepted by `filter`. Equal-metric
// paths are ordered by hop count, then by node sequence.
std::optional<SubstratePath> shortest_path(const SubstrateNetwork& net, int source, int target,
                                           PathMetric metric = PathMetric::kKm,
                                           const LinkFilter& filter = {});

// Up to k pairwise link-disjoint paths, each the shortest once the links of
// all earlier paths are removed.
std::vector<SubstratePath> k_disjoint_shortest_paths(const SubstrateNetwork& net, int source,
                                                     int target, int k,
                                                     PathMetric metric = PathMetric::kKm,
                                                     const LinkFilter& filter = {});

// Builds a path from a node sequence; throws std::invalid_argument if two
// consecutive nodes are not adjacent.
SubstratePath path_from_nodes(const SubstrateNetwork& net, const std::vector<int>& nodes);

}  // namespace eonsurv
