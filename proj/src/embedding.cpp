#include "eonsurv/embedding.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "eonsurv/errors.hpp"

namespace eonsurv {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kApss: return "APSS";
    case Scheme::kApc: return "APC";
    case Scheme::kApf: return "APF";
    case Scheme::kMpf: return "MPF";
    case Scheme::kMdf: return "MDF";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "apss") return Scheme::kApss;
  if (s == "apc") return Scheme::kApc;
  if (s == "apf") return Scheme::kApf;
  if (s == "mpf") return Scheme::kMpf;
  if (s == "mdf") return Scheme::kMdf;
  throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

SchemeConfig SchemeConfig::make(Scheme scheme, std::optional<int> max_paths, int anchor_hops) {
  SchemeConfig c;
  c.scheme = scheme;
  c.anchor_hops = anchor_hops;
  if (scheme == Scheme::kMdf) {
    if (max_paths && *max_paths != 2) throw ConfigError("MDF uses exactly two paths");
    c.max_paths = 2;
  } else {
    c.max_paths = max_paths.value_or(scheme == Scheme::kApss ? 4 : 3);
  }
  c.validate();
  return c;
}

NodePolicy SchemeConfig::node_policy() const {
  return scheme == Scheme::kMpf || scheme == Scheme::kMdf ? NodePolicy::kMaxMapping : NodePolicy::kAnchor;
}

SplitPolicy SchemeConfig::split_policy() const {
  return scheme == Scheme::kApss ? SplitPolicy::kAdaptive : SplitPolicy::kFixed;
}

FsPolicy SchemeConfig::fs_policy() const {
  return scheme == Scheme::kApss || scheme == Scheme::kApc ? FsPolicy::kLeastCost : FsPolicy::kFirstFit;
}

void SchemeConfig::validate() const {
  if (max_paths < 2) throw ConfigError("K must be at least 2");
  if (anchor_hops < 0) throw ConfigError("H must be non-negative");
  if (scheme == Scheme::kMdf && max_paths != 2) throw ConfigError("MDF uses exactly two paths");
  modulation.validate();
}

double LinkEmbedding::working_gbps() const {
  double sum = 0.0;
  for (const auto& w : working) sum += w.carried_gbps;
  return sum;
}

double LinkEmbedding::max_working_gbps() const {
  double m = 0.0;
  for (const auto& w : working) m = std::max(m, w.carried_gbps);
  return m;
}

long long EmbeddingRecord::total_slots() const {
  long long n = 0;
  for (const auto& l : links) {
    for (const auto& w : l.working) n += w.width;
    n += l.backup.width;
  }
  return n;
}

long long EmbeddingRecord::backup_slots() const {
  long long n = 0;
  for (const auto& l : links) n += l.backup.width;
  return n;
}

long long EmbeddingRecord::link_slots() const {
  long long n = 0;
  for (const auto& l : links) {
    for (const auto& w : l.working) n += static_cast<long long>(w.width) * w.path.hops();
    n += static_cast<long long>(l.backup.width) * l.backup.path.hops();
  }
  return n;
}

long long EmbeddingRecord::guard_link_slots(int guard) const {
  long long n = 0;
  for (const auto& l : links) {
    for (const auto& w : l.working) n += static_cast<long long>(guard) * w.path.hops();
    n += static_cast<long long>(guard) * l.backup.path.hops();
  }
  return n;
}

int EmbeddingRecord::working_paths() const {
  int n = 0;
  for (const auto& l : links) n += static_cast<int>(l.working.size());
  return n;
}

// ---------------------------------------------------------------------------
// Node mapping.

namespace {

// Virtual node ids by demand, largest first, ties by id.
std::vector<int> vnodes_by_demand(const VirtualNetworkRequest& vnr) {
  std::vector<int> order(vnr.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return vnr.nodes[a].cpu > vnr.nodes[b].cpu; });
  return order;
}

void sort_by_available_cpu(const SubstrateNetwork& net, std::vector<int>& nodes) {
  std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) {
    if (net.node(a).cpu_available != net.node(b).cpu_available)
      return net.node(a).cpu_available > net.node(b).cpu_available;
    return a < b;
  });
}

void rollback(SubstrateNetwork& net, const std::vector<AllocationHandle>& cpu,
              const std::vector<AllocationHandle>& slots) {
  for (auto it = slots.rbegin(); it != slots.rend(); ++it) net.release_slots(*it);
  for (auto it = cpu.rbegin(); it != cpu.rend(); ++it) net.release_cpu(*it);
}

bool injected(const EmbedOptions& options) { return options.inject_failure && options.inject_failure(); }

std::optional<NodeMapping> greedy_pairing(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                          std::vector<int> candidates, const EmbedOptions& options) {
  if (candidates.size() < vnr.nodes.size()) return std::nullopt;
  sort_by_available_cpu(net, candidates);
  NodeMapping mapping;
  mapping.host.assign(vnr.nodes.size(), -1);
  std::vector<AllocationHandle> taken;
  auto order = vnodes_by_demand(vnr);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& vnode = vnr.nodes[order[i]];
    int host = candidates[i];
    if (vnode.cpu > net.node(host).cpu_available) {
      rollback(net, taken, {});
      return std::nullopt;
    }
    taken.push_back(net.reserve_cpu(host, vnode.cpu));
    mapping.host[vnode.id] = host;
    if (injected(options)) {
      rollback(net, taken, {});
      return std::nullopt;
    }
  }
  // Handles are stored in virtual-node id order.
  mapping.cpu.resize(vnr.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) mapping.cpu[order[i]] = taken[i];
  return mapping;
}

}  // namespace

std::optional<NodeMapping> node_map_ans(SubstrateNetwork& net, const VirtualNetworkRequest& vnr, int anchor,
                                        int anchor_hops, const EmbedOptions& options) {
  auto dist = hop_distances_from(net, anchor);
  std::vector<int> candidates;
  for (int n = 0; n < net.node_count(); ++n) {
    if (dist[n] >= 0 && dist[n] <= anchor_hops) candidates.push_back(n);
  }
  return greedy_pairing(net, vnr, std::move(candidates), options);
}

std::optional<NodeMapping> node_map_maxmapping(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                               const EmbedOptions& options) {
  std::vector<int> all(net.node_count());
  std::iota(all.begin(), all.end(), 0);
  return greedy_pairing(net, vnr, std::move(all), options);
}

// ---------------------------------------------------------------------------
// Link mapping.

LinkFilter usable_link_filter(const SubstrateNetwork& net, int guard) {
  std::vector<bool> usable(net.link_count());
  for (const auto& l : net.links()) usable[l.id] = l.slots.longest_free_run() >= guard + 1;
  return [usable = std::move(usable)](const SubstrateLink& l) { return static_cast<bool>(usable[l.id]); };
}

namespace {

class LinkMapper {
 public:
  LinkMapper(SubstrateNetwork& net, const VirtualLink& vlink, int source, int target, FsPolicy policy,
             const ModulationTable& table, const EmbedOptions& options)
      : net_(net), source_(source), target_(target), policy_(policy), table_(table), options_(options),
        usable_(usable_link_filter(net, table.guard_slots)) {
    result_.vlink = vlink.id;
    result_.demand_gbps = vlink.gbps;
  }

  // Next path disjoint from every path handed out so far.
  std::optional<SubstratePath> next_path() {
    auto p = shortest_path(net_, source_, target_, PathMetric::kKm, [this](const SubstrateLink& l) {
      return !used_.contains(l.id) && usable_(l);
    });
    if (p) used_.insert(p->links.begin(), p->links.end());
    return p;
  }

  std::optional<SlotRequirement> requirement(double gbps, const SubstratePath& path) const {
    try {
      return slots_required(table_, gbps, path.length_km);
    } catch (const NoFeasibleModulation&) {
      return std::nullopt;
    }
  }

  // Places a window of `width` slots on `path`; false means the stage failed.
  bool place(const SubstratePath& path, const SlotRequirement& req, int width, bool backup) {
    auto start = choose_fsw(net_, path, width, policy_);
    if (!start) return false;
    SlotWindow w{path, *start, width, req.modulation, req.slot_gbps * (width - table_.guard_slots)};
    result_.handles.push_back(allocate_window(net_, w));
    if (backup) {
      result_.backup = std::move(w);
    } else {
      result_.working.push_back(std::move(w));
    }
    return !injected(options_);
  }

  std::optional<LinkEmbedding> fail() {
    rollback(net_, {}, result_.handles);
    return std::nullopt;
  }

  std::optional<LinkEmbedding> succeed() { return std::move(result_); }

  int guard() const { return table_.guard_slots; }

 private:
  SubstrateNetwork& net_;
  int source_;
  int target_;
  FsPolicy policy_;
  const ModulationTable& table_;
  const EmbedOptions& options_;
  LinkFilter usable_;
  std::set<int> used_;
  LinkEmbedding result_;
};

}  // namespace

std::optional<LinkEmbedding> link_map_aps(SubstrateNetwork& net, const VirtualLink& vlink, int source,
                                          int target, int max_paths, FsPolicy policy,
                                          const ModulationTable& table, const EmbedOptions& options) {
  LinkMapper mapper(net, vlink, source, target, policy, table, options);
  double residual = vlink.gbps;
  double largest = 0.0;
  for (int attempt = 1;; ++attempt) {
    auto path = mapper.next_path();
    if (!path) return mapper.fail();
    auto req = mapper.requirement(residual, *path);
    // Out-of-reach paths and paths without room for a useful window are
    // skipped but still count as one of the K - 1 working attempts.
    if (req) {
      int width = std::min(req->slots, max_window(net, *path));
      if (width > mapper.guard()) {
        if (!mapper.place(*path, *req, width, false)) return mapper.fail();
        double carried = req->slot_gbps * (width - mapper.guard());
        residual -= carried;
        largest = std::max(largest, carried);
      }
    }
    if (residual <= 0.0) break;
    if (attempt >= max_paths - 1) return mapper.fail();
  }

  auto backup = mapper.next_path();
  if (!backup) return mapper.fail();
  auto req = mapper.requirement(largest, *backup);
  if (!req || req->slots > max_window(net, *backup)) return mapper.fail();
  if (!mapper.place(*backup, *req, req->slots, true)) return mapper.fail();
  return mapper.succeed();
}

std::optional<LinkEmbedding> link_map_fixed(SubstrateNetwork& net, const VirtualLink& vlink, int source,
                                            int target, int max_paths, FsPolicy policy,
                                            const ModulationTable& table, const EmbedOptions& options) {
  if (max_paths < 2) throw ConfigError("K must be at least 2");
  LinkMapper mapper(net, vlink, source, target, policy, table, options);
  std::vector<SubstratePath> paths;
  for (int i = 0; i < max_paths; ++i) {
    auto p = mapper.next_path();
    if (!p) return mapper.fail();
    paths.push_back(std::move(*p));
  }
  double share = vlink.gbps / (max_paths - 1);
  for (int i = 0; i < max_paths; ++i) {
    auto req = mapper.requirement(share, paths[i]);
    if (!req || req->slots > max_window(net, paths[i])) return mapper.fail();
    if (!mapper.place(paths[i], *req, req->slots, i == max_paths - 1)) return mapper.fail();
  }
  return mapper.succeed();
}

// ---------------------------------------------------------------------------

namespace {

std::optional<EmbeddingRecord> map_links(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                         const SchemeConfig& config, NodeMapping nodes,
                                         const EmbedOptions& options) {
  std::vector<int> order(vnr.links.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return vnr.links[a].gbps > vnr.links[b].gbps; });

  EmbeddingRecord record;
  record.vnr_id = vnr.id;
  record.nodes = std::move(nodes);
  for (int idx : order) {
    const auto& vl = vnr.links[idx];
    int s = record.nodes.host[vl.a];
    int t = record.nodes.host[vl.b];
    auto mapped = config.split_policy() == SplitPolicy::kAdaptive
                      ? link_map_aps(net, vl, s, t, config.max_paths, config.fs_policy(), config.modulation, options)
                      : link_map_fixed(net, vl, s, t, config.max_paths, config.fs_policy(), config.modulation,
                                       options);
    if (!mapped) {
      for (auto it = record.links.rbegin(); it != record.links.rend(); ++it) rollback(net, {}, it->handles);
      rollback(net, record.nodes.cpu, {});
      return std::nullopt;
    }
    record.links.push_back(std::move(*mapped));
  }
  return record;
}

}  // namespace

std::optional<EmbeddingRecord> embed(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                     const SchemeConfig& config, const EmbedOptions& options) {
  if (config.node_policy() == NodePolicy::kMaxMapping) {
    auto nodes = node_map_maxmapping(net, vnr, options);
    if (!nodes) return std::nullopt;
    return map_links(net, vnr, config, std::move(*nodes), options);
  }

  std::vector<int> anchors(net.node_count());
  std::iota(anchors.begin(), anchors.end(), 0);
  sort_by_available_cpu(net, anchors);
  for (int anchor : anchors) {
    auto nodes = node_map_ans(net, vnr, anchor, config.anchor_hops, options);
    if (!nodes) continue;
    auto record = map_links(net, vnr, config, std::move(*nodes), options);
    if (record) {
      record->anchor = anchor;
      return record;
    }
  }
  return std::nullopt;
}

void release_embedding(SubstrateNetwork& net, const EmbeddingRecord& record) {
  for (const auto& l : record.links) {
    for (auto h : l.handles) {
      if (!net.is_outstanding(h)) throw DoubleRelease("embedding of VN " + std::to_string(record.vnr_id) + " already released");
    }
  }
  for (auto h : record.nodes.cpu) {
    if (!net.is_outstanding(h)) throw DoubleRelease("embedding of VN " + std::to_string(record.vnr_id) + " already released");
  }
  for (const auto& l : record.links) {
    for (auto h : l.handles) net.release_slots(h);
  }
  for (auto h : record.nodes.cpu) net.release_cpu(h);
}

}  // namespace eonsurv
