#include "eonsurv/routing.hpp"

#include <queue>
#include <set>
#include <stdexcept>

namespace eonsurv {

namespace {

struct Label {
  double metric;
  int hops;
  std::vector<int> nodes;
  std::vector<int> links;
  double km;
};

// Strict order on labels: metric, then hops, then node sequence.
bool better(const Label& a, const Label& b) {
  if (a.metric != b.metric) return a.metric < b.metric;
  if (a.hops != b.hops) return a.hops < b.hops;
  return a.nodes < b.nodes;
}

struct Worse {
  bool operator()(const Label& a, const Label& b) const { return better(b, a); }
};

}  // namespace

std::optional<SubstratePath> shortest_path(const SubstrateNetwork& net, int source, int target,
                                           PathMetric metric, const LinkFilter& filter) {
  if (source == target) throw std::invalid_argument("shortest_path needs distinct endpoints");
  const int n = net.node_count();
  if (source < 0 || target < 0 || source >= n || target >= n)
    throw std::out_of_range("shortest_path endpoint out of range");

  std::vector<std::optional<Label>> best(n);
  std::vector<bool> settled(n, false);
  std::priority_queue<Label, std::vector<Label>, Worse> open;
  Label start{0.0, 0, {source}, {}, 0.0};
  best[source] = start;
  open.push(std::move(start));

  while (!open.empty()) {
    Label cur = open.top();
    open.pop();
    int u = cur.nodes.back();
    if (settled[u]) continue;
    settled[u] = true;
    if (u == target) {
      return SubstratePath{std::move(cur.nodes), std::move(cur.links), cur.km};
    }
    for (const auto& adj : net.neighbors(u)) {
      if (settled[adj.neighbor]) continue;
      const auto& link = net.link(adj.link);
      if (filter && !filter(link)) continue;
      Label next = cur;
      next.metric += metric == PathMetric::kKm ? link.length_km : 1.0;
      next.hops += 1;
      next.km += link.length_km;
      next.nodes.push_back(adj.neighbor);
      next.links.push_back(adj.link);
      auto& slot = best[adj.neighbor];
      if (!slot || better(next, *slot)) {
        slot = next;
        open.push(std::move(next));
      }
    }
  }
  return std::nullopt;
}

std::vector<SubstratePath> k_disjoint_shortest_paths(const SubstrateNetwork& net, int source,
                                                     int target, int k, PathMetric metric,
                                                     const LinkFilter& filter) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::vector<SubstratePath> paths;
  std::set<int> used;
  LinkFilter residual = [&](const SubstrateLink& l) {
    return !used.contains(l.id) && (!filter || filter(l));
  };
  while (static_cast<int>(paths.size()) < k) {
    auto p = shortest_path(net, source, target, metric, residual);
    if (!p) break;
    used.insert(p->links.begin(), p->links.end());
    paths.push_back(std::move(*p));
  }
  return paths;
}

SubstratePath path_from_nodes(const SubstrateNetwork& net, const std::vector<int>& nodes) {
  SubstratePath p;
  p.nodes = nodes;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    auto l = net.link_between(nodes[i - 1], nodes[i]);
    if (!l) throw std::invalid_argument("nodes are not adjacent");
    p.links.push_back(*l);
    p.length_km += net.link(*l).length_km;
  }
  return p;
}

}  // namespace eonsurv
