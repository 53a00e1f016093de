#include "eonsurv/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eonsurv/errors.hpp"
#include "eonsurv/format.hpp"

namespace eonsurv {

std::string_view to_string(CapacityMode mode) {
  return mode == CapacityMode::kSlotted ? "slotted" : "scalar";
}

CapacityMode parse_capacity_mode(std::string_view text) {
  if (text == "slotted") return CapacityMode::kSlotted;
  if (text == "scalar") return CapacityMode::kScalar;
  throw ConfigError("unknown capacity mode '" + std::string(text) + "'");
}

int SubstrateNetwork::add_node(std::int64_t cpu_capacity) {
  if (cpu_capacity < 0) throw TopologyError("negative CPU capacity");
  int id = node_count();
  nodes_.push_back(SubstrateNode{id, cpu_capacity, cpu_capacity});
  adjacency_.emplace_back();
  return id;
}

int SubstrateNetwork::add_link(int u, int v, double length_km, double capacity) {
  if (u < 0 || v < 0 || u >= node_count() || v >= node_count())
    throw TopologyError("link endpoint out of range");
  if (u == v) throw TopologyError("self-loop at node " + std::to_string(u));
  if (!(length_km > 0.0)) throw TopologyError("link length must be positive");
  if (!(capacity >= 0.0)) throw TopologyError("link capacity must be non-negative");
  if (link_between(u, v)) {
    throw TopologyError("parallel link between " + std::to_string(u) + " and " + std::to_string(v));
  }
  SubstrateLink link;
  link.id = link_count();
  link.u = u;
  link.v = v;
  link.length_km = length_km;
  if (mode_ == CapacityMode::kSlotted) {
    if (capacity != static_cast<int>(capacity))
      throw TopologyError("slot count must be an integer");
    link.slots = SlotGrid(static_cast<int>(capacity));
  } else {
    link.capacity_gbps = capacity;
    link.residual_gbps = capacity;
  }
  links_.push_back(std::move(link));
  link_reservations_.emplace_back();
  adjacency_[u].push_back({links_.back().id, v});
  adjacency_[v].push_back({links_.back().id, u});
  return links_.back().id;
}

void SubstrateNetwork::validate() const {
  if (nodes_.empty()) throw TopologyError("network has no nodes");
  auto dist = hop_distances_from(*this, 0);
  for (int n = 0; n < node_count(); ++n) {
    if (dist[n] < 0) throw TopologyError("graph is disconnected: node " + std::to_string(n) + " unreachable");
  }
}

std::optional<int> SubstrateNetwork::link_between(int u, int v) const {
  if (u < 0 || u >= node_count()) return std::nullopt;
  for (const auto& adj : adjacency_[u]) {
    if (adj.neighbor == v) return adj.link;
  }
  return std::nullopt;
}

AllocationHandle SubstrateNetwork::reserve_cpu(int node, std::int64_t amount) {
  auto& n = nodes_.at(node);
  if (amount < 0 || amount > n.cpu_available)
    throw Overlap("CPU reservation exceeds availability on node " + std::to_string(node));
  n.cpu_available -= amount;
  auto h = next_handle();
  cpu_ledger_.emplace(h.id, CpuEntry{node, amount});
  return h;
}

void SubstrateNetwork::release_cpu(AllocationHandle handle) {
  auto it = cpu_ledger_.find(handle.id);
  if (it == cpu_ledger_.end()) throw DoubleRelease("CPU handle not outstanding");
  nodes_[it->second.node].cpu_available += it->second.amount;
  cpu_ledger_.erase(it);
}

AllocationHandle SubstrateNetwork::allocate_slots(std::span<const int> links, int start, int width) {
  if (width <= 0) throw std::invalid_argument("window width must be positive");
  for (int l : links) {
    if (!links_.at(l).slots.range_free(start, width))
      throw Overlap("slots [" + std::to_string(start) + "," + std::to_string(start + width) +
                    ") busy on link " + std::to_string(l));
  }
  for (int l : links) links_[l].slots.mark_busy(start, width);
  auto h = next_handle();
  slot_ledger_.emplace(h.id, SlotEntry{{links.begin(), links.end()}, start, width});
  return h;
}

void SubstrateNetwork::release_slots(AllocationHandle handle) {
  auto it = slot_ledger_.find(handle.id);
  if (it == slot_ledger_.end()) throw DoubleRelease("slot handle not outstanding");
  for (int l : it->second.links) links_[l].slots.mark_free(it->second.start, it->second.width);
  slot_ledger_.erase(it);
}

void SubstrateNetwork::recompute_residual(int link) {
  double used = 0.0;
  for (const auto& [id, gbps] : link_reservations_[link]) used += gbps;
  links_[link].residual_gbps = links_[link].capacity_gbps - used;
}

AllocationHandle SubstrateNetwork::reserve_bandwidth(std::span<const int> links, double gbps) {
  if (!(gbps >= 0.0)) throw std::invalid_argument("bandwidth must be non-negative");
  constexpr double kSlack = 1e-9;
  for (int l : links) {
    if (links_.at(l).residual_gbps + kSlack < gbps)
      throw Overlap("bandwidth exceeds residual on link " + std::to_string(l));
  }
  auto h = next_handle();
  for (int l : links) {
    link_reservations_[l].emplace(h.id, gbps);
    recompute_residual(l);
  }
  bandwidth_ledger_.emplace(h.id, BandwidthEntry{{links.begin(), links.end()}, gbps});
  return h;
}

void SubstrateNetwork::resize_bandwidth(AllocationHandle handle, double gbps) {
  auto it = bandwidth_ledger_.find(handle.id);
  if (it == bandwidth_ledger_.end()) throw DoubleRelease("bandwidth handle not outstanding");
  constexpr double kSlack = 1e-9;
  double delta = gbps - it->second.gbps;
  for (int l : it->second.links) {
    if (delta > 0 && links_[l].residual_gbps + kSlack < delta)
      throw Overlap("bandwidth increase exceeds residual on link " + std::to_string(l));
  }
  it->second.gbps = gbps;
  for (int l : it->second.links) {
    link_reservations_[l][handle.id] = gbps;
    recompute_residual(l);
  }
}

void SubstrateNetwork::release_bandwidth(AllocationHandle handle) {
  auto it = bandwidth_ledger_.find(handle.id);
  if (it == bandwidth_ledger_.end()) throw DoubleRelease("bandwidth handle not outstanding");
  for (int l : it->second.links) {
    link_reservations_[l].erase(handle.id);
    recompute_residual(l);
  }
  bandwidth_ledger_.erase(it);
}

double SubstrateNetwork::reserved_gbps(AllocationHandle handle) const {
  auto it = bandwidth_ledger_.find(handle.id);
  if (it == bandwidth_ledger_.end()) throw DoubleRelease("bandwidth handle not outstanding");
  return it->second.gbps;
}

bool SubstrateNetwork::is_outstanding(AllocationHandle handle) const {
  return cpu_ledger_.contains(handle.id) || slot_ledger_.contains(handle.id) ||
         bandwidth_ledger_.contains(handle.id);
}

void SubstrateNetwork::add_scalar_capacity(double delta_gbps) {
  for (auto& l : links_) {
    l.capacity_gbps += delta_gbps;
    recompute_residual(l.id);
  }
}

bool SubstrateNetwork::same_resources(const SubstrateNetwork& other) const {
  if (nodes_.size() != other.nodes_.size() || links_.size() != other.links_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].cpu_available != other.nodes_[i].cpu_available) return false;
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (!(links_[i].slots == other.links_[i].slots)) return false;
    if (links_[i].residual_gbps != other.links_[i].residual_gbps) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Built-in topologies. Lengths are representative continental distances; see
// README. Both tables are 0-indexed.

namespace {

struct LinkSpec {
  int u, v;
  double km;
};

constexpr LinkSpec kUsnetLinks[] = {
    {0, 1, 500},   {0, 2, 600},   {0, 3, 700},   {0, 11, 475},  {0, 21, 500},
    {1, 2, 500},   {1, 6, 500},   {1, 12, 600},  {1, 14, 575},  {2, 3, 700},
    {2, 7, 500},   {2, 8, 500},   {3, 8, 450},   {3, 16, 650},  {3, 22, 650},
    {4, 5, 500},   {4, 8, 500},   {4, 10, 400},  {4, 16, 300},  {4, 19, 500},
    {5, 9, 550},   {5, 10, 500},  {5, 17, 425},  {5, 20, 450},  {6, 11, 550},
    {6, 12, 125},  {6, 13, 500},  {7, 9, 525},   {7, 14, 450},  {7, 15, 400},
    {8, 9, 500},   {9, 15, 325},  {10, 19, 300}, {10, 20, 450}, {11, 21, 400},
    {12, 13, 425}, {13, 14, 600}, {15, 17, 600}, {16, 18, 500}, {17, 23, 450},
    {18, 19, 500}, {18, 22, 650}, {20, 23, 500},
};

constexpr LinkSpec kNsfnetLinks[] = {
    {0, 1, 2100},  {0, 2, 3000},   {0, 7, 4800},  {1, 2, 1200},  {1, 3, 1500},  {2, 5, 3600},
    {3, 4, 1200},  {3, 10, 3900},  {4, 5, 2400},  {4, 6, 1200},  {5, 9, 2100},  {5, 13, 3600},
    {6, 7, 1500},  {7, 8, 1500},   {8, 9, 1500},  {8, 11, 600},  {8, 12, 600},  {10, 11, 1200},
    {10, 12, 1500}, {11, 13, 600}, {12, 13, 300}, {9, 11, 1800},
};

SubstrateNetwork build(std::string name, int nodes, std::span<const LinkSpec> links,
                       CapacityMode mode, const TopologyParams& params) {
  SubstrateNetwork net(std::move(name), mode);
  for (int i = 0; i < nodes; ++i) net.add_node(params.cpu_capacity);
  double capacity = mode == CapacityMode::kSlotted ? params.slots_per_link : params.link_gbps;
  for (const auto& l : links) net.add_link(l.u, l.v, l.km, capacity);
  net.validate();
  return net;
}

}  // namespace

BuiltinTopology parse_builtin_topology(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "usnet") return BuiltinTopology::kUsnet;
  if (lower == "nsfnet") return BuiltinTopology::kNsfnet;
  throw ConfigError("unknown built-in topology '" + std::string(name) + "'");
}

SubstrateNetwork builtin_topology(BuiltinTopology which, CapacityMode mode, const TopologyParams& params) {
  switch (which) {
    case BuiltinTopology::kUsnet:
      return build("usnet", 24, kUsnetLinks, mode, params);
    case BuiltinTopology::kNsfnet:
      return build("nsfnet", 14, kNsfnetLinks, mode, params);
  }
  throw ConfigError("unknown built-in topology");
}

SubstrateNetwork builtin_topology(std::string_view name, CapacityMode mode, const TopologyParams& params) {
  return builtin_topology(parse_builtin_topology(name), mode, params);
}

// ---------------------------------------------------------------------------
// Topology file I/O.

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

template <typename T>
T parse_number(const std::string& tok, int line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw TopologyError(std::string("invalid ") + what + " '" + tok + "'", line);
  return value;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

}  // namespace

SubstrateNetwork load_topology(std::string_view text) {
  enum class Section { kHeader, kNodes, kLinks } section = Section::kHeader;
  std::optional<SubstrateNetwork> net;
  struct PendingNode {
    int id;
    std::int64_t cpu;
    int line;
  };
  struct PendingLink {
    int id, u, v;
    double km, capacity;
    int line;
  };
  std::vector<PendingNode> nodes;
  std::vector<PendingLink> links;
  std::set<int> node_ids, link_ids;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto toks = tokenize(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    if (toks.empty()) continue;

    if (!net) {
      if (toks.size() != 3 || toks[0] != "topology")
        throw TopologyError("expected 'topology <name> <capacity_mode>'", line_no);
      CapacityMode mode;
      try {
        mode = parse_capacity_mode(toks[2]);
      } catch (const ConfigError& e) {
        throw TopologyError(e.what(), line_no);
      }
      net.emplace(toks[1], mode);
      continue;
    }
    if (toks[0] == "[nodes]" && toks.size() == 1) {
      section = Section::kNodes;
      continue;
    }
    if (toks[0] == "[links]" && toks.size() == 1) {
      section = Section::kLinks;
      continue;
    }
    switch (section) {
      case Section::kHeader:
        throw TopologyError("entry outside a [nodes] or [links] section", line_no);
      case Section::kNodes: {
        if (toks.size() != 2) throw TopologyError("node line needs '<id> <cpu_capacity>'", line_no);
        int id = parse_number<int>(toks[0], line_no, "node id");
        auto cpu = parse_number<std::int64_t>(toks[1], line_no, "CPU capacity");
        if (!node_ids.insert(id).second) throw TopologyError("duplicate node id " + toks[0], line_no);
        nodes.push_back({id, cpu, line_no});
        break;
      }
      case Section::kLinks: {
        if (toks.size() != 5)
          throw TopologyError("link line needs '<id> <u> <v> <length_km> <capacity>'", line_no);
        PendingLink l{parse_number<int>(toks[0], line_no, "link id"),
                      parse_number<int>(toks[1], line_no, "endpoint"),
                      parse_number<int>(toks[2], line_no, "endpoint"),
                      parse_number<double>(toks[3], line_no, "length"),
                      parse_number<double>(toks[4], line_no, "capacity"), line_no};
        if (!link_ids.insert(l.id).second) throw TopologyError("duplicate link id " + toks[0], line_no);
        links.push_back(l);
        break;
      }
    }
  }
  if (!net) throw TopologyError("missing 'topology' header");

  std::sort(nodes.begin(), nodes.end(), [](auto& a, auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<int>(i))
      throw TopologyError("node ids must be dense from 0; missing " + std::to_string(i), nodes[i].line);
    net->add_node(nodes[i].cpu);
  }
  std::sort(links.begin(), links.end(), [](auto& a, auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    if (l.id != static_cast<int>(i))
      throw TopologyError("link ids must be dense from 0; missing " + std::to_string(i), l.line);
    try {
      net->add_link(l.u, l.v, l.km, l.capacity);
    } catch (const TopologyError& e) {
      throw TopologyError(e.what(), l.line);
    }
  }
  net->validate();
  return std::move(*net);
}

std::string serialize_topology(const SubstrateNetwork& net) {
  std::string out = "topology " + net.name() + " " + std::string(to_string(net.mode())) + "\n";
  out += "[nodes]\n";
  for (const auto& n : net.nodes()) out += std::to_string(n.id) + " " + std::to_string(n.cpu_capacity) + "\n";
  out += "[links]\n";
  for (const auto& l : net.links()) {
    double cap = net.mode() == CapacityMode::kSlotted ? l.slots.size() : l.capacity_gbps;
    out += std::to_string(l.id) + " " + std::to_string(l.u) + " " + std::to_string(l.v) + " " +
           format_shortest(l.length_km) + " " + format_shortest(cap) + "\n";
  }
  return out;
}

std::string normalize_topology_text(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto toks = tokenize(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    if (toks.empty()) continue;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) out += ' ';
      out += toks[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<int> hop_distances_from(const SubstrateNetwork& net, int source) {
  std::vector<int> dist(net.node_count(), -1);
  std::deque<int> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto& adj : net.neighbors(u)) {
      if (dist[adj.neighbor] < 0) {
        dist[adj.neighbor] = dist[u] + 1;
        queue.push_back(adj.neighbor);
      }
    }
  }
  return dist;
}

int hop_distance(const SubstrateNetwork& net, int u, int v) {
  return hop_distances_from(net, u).at(v);
}

}  // namespace eonsurv
