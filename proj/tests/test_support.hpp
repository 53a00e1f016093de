#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "eonsurv/routing.hpp"
#include "eonsurv/spectrum.hpp"
#include "eonsurv/topology.hpp"

namespace eonsurv::testing_support {

// Undirected graph from (u, v, km) triples; every link gets `capacity`.
inline SubstrateNetwork make_graph(int nodes, const std::vector<std::tuple<int, int, double>>& links,
                                   CapacityMode mode = CapacityMode::kSlotted, double capacity = 12,
                                   std::int64_t cpu = 100) {
  SubstrateNetwork net("test", mode);
  for (int i = 0; i < nodes; ++i) net.add_node(cpu);
  for (const auto& [u, v, km] : links) net.add_link(u, v, km, capacity);
  return net;
}

// Every simple path from s to t, as link id sequences.
inline std::vector<std::vector<int>> all_simple_paths(const SubstrateNetwork& net, int s, int t,
                                                      const LinkFilter& filter = {}) {
  std::vector<std::vector<int>> out;
  std::vector<int> links;
  std::vector<bool> seen(net.node_count(), false);
  std::function<void(int)> dfs = [&](int at) {
    if (at == t) {
      out.push_back(links);
      return;
    }
    seen[at] = true;
    for (const auto& adj : net.neighbors(at)) {
      if (seen[adj.neighbor]) continue;
      if (filter && !filter(net.link(adj.link))) continue;
      links.push_back(adj.link);
      dfs(adj.neighbor);
      links.pop_back();
    }
    seen[at] = false;
  };
  dfs(s);
  return out;
}

inline double path_metric(const SubstrateNetwork& net, const std::vector<int>& links, PathMetric metric) {
  if (metric == PathMetric::kHops) return static_cast<double>(links.size());
  double km = 0.0;
  for (int l : links) km += net.link(l).length_km;
  return km;
}

// Minimum metric over all simple paths, or infinity.
inline double brute_shortest(const SubstrateNetwork& net, int s, int t, PathMetric metric,
                             const LinkFilter& filter = {}) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : all_simple_paths(net, s, t, filter)) best = std::min(best, path_metric(net, p, metric));
  return best;
}

// Smallest slot count (guard included) whose payload carries `gbps`.
inline int brute_slots(double slot_gbps, int guard, double gbps) {
  int n = 0;
  while (slot_gbps * n < gbps) ++n;
  return n + guard;
}

// Free boundary slots of the window, summed over links, straight from the grids.
inline int brute_fsw_cost(const SubstrateNetwork& net, const SubstratePath& path, int start, int width) {
  int cost = 0;
  for (int l : path.links) {
    const auto& g = net.link(l).slots;
    if (start - 1 >= 0 && g.is_free(start - 1)) ++cost;
    if (start + width < g.size() && g.is_free(start + width)) ++cost;
  }
  return cost;
}

inline bool brute_window_free(const SubstrateNetwork& net, const SubstratePath& path, int start, int width) {
  for (int l : path.links) {
    for (int i = start; i < start + width; ++i) {
      if (i >= net.link(l).slots.size() || !net.link(l).slots.is_free(i)) return false;
    }
  }
  return true;
}

}  // namespace eonsurv::testing_support

#include "eonsurv/embedding.hpp"

namespace eonsurv::testing_support {

// Worst-case surviving bandwidth (working plus backup) over every single
// substrate-link failure, minus the demand. Negative means unprotected.
inline double protection_margin(const LinkEmbedding& le, int substrate_links) {
  double worst = std::numeric_limits<double>::infinity();
  auto uses = [](const SlotWindow& w, int link) {
    return std::find(w.path.links.begin(), w.path.links.end(), link) != w.path.links.end();
  };
  for (int f = 0; f < substrate_links; ++f) {
    double alive = 0.0;
    for (const auto& w : le.working)
      if (!uses(w, f)) alive += w.carried_gbps;
    if (!uses(le.backup, f)) alive += le.backup.carried_gbps;
    worst = std::min(worst, alive - le.demand_gbps);
  }
  return worst;
}

}  // namespace eonsurv::testing_support
