#include "eonsurv/evacuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "eonsurv/errors.hpp"
#include "eonsurv/format.hpp"
#include "eonsurv/parallel.hpp"

namespace eonsurv {

namespace {

constexpr double kBandwidthSlack = 1e-9;
// Smallest bandwidth a best-effort migration will accept.
constexpr double kMinUsefulGbps = 1e-6;

}  // namespace

DisasterRiskZone default_drz(std::string_view topology_name) {
  switch (parse_builtin_topology(topology_name)) {
    case BuiltinTopology::kNsfnet: return {8, 11};
    case BuiltinTopology::kUsnet: return {3, 8};
  }
  return {0, 1};
}

DeploymentConfig DeploymentConfig::defaults(int vn_count) {
  DeploymentConfig c;
  c.vn_count = vn_count;
  c.shape.min_nodes = 3;
  c.shape.max_nodes = 5;
  c.shape.link_probability = 0.3;
  c.shape.min_cpu = 1;
  c.shape.max_cpu = 1;
  c.shape.min_gbps = 0.5;
  c.shape.max_gbps = 3.0;
  c.shape.gbps_step = 0.5;
  c.shape.connect_components = false;
  return c;
}

namespace {

LinkFilter residual_at_least(double gbps) {
  return [gbps](const SubstrateLink& l) { return l.residual_gbps + kBandwidthSlack >= gbps; };
}

}  // namespace

std::vector<DeployedVN> deploy_random_vns(SubstrateNetwork& net, const DeploymentConfig& config,
                                          std::uint64_t seed) {
  if (net.mode() != CapacityMode::kScalar) throw ConfigError("VN deployment needs a scalar-mode network");
  auto structure = make_stream(seed, 11);
  auto demands = make_stream(seed, 12);
  auto placement = make_stream(seed, 13);

  std::vector<DeployedVN> deployed;
  std::vector<int> order(net.node_count());
  std::vector<std::vector<int>> hops;
  for (int n = 0; n < net.node_count(); ++n) hops.push_back(hop_distances_from(net, n));
  for (int i = 0; i < config.vn_count; ++i) {
    auto vn = generate_vnr(structure, demands, config.shape, i);
    if (static_cast<int>(vn.nodes.size()) > net.node_count()) continue;
    for (int attempt = 0; attempt < config.placement_attempts; ++attempt) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), placement);
      if (config.locality_hops >= 0) {
        // Hosts come from the smallest hop ball around a random centre that
        // holds enough nodes; the shuffle keeps the choice inside it random.
        const auto& dist = hops[order[0]];
        int radius = config.locality_hops;
        auto inside = [&](int r) {
          return std::count_if(dist.begin(), dist.end(), [r](int d) { return d >= 0 && d <= r; });
        };
        while (inside(radius) < static_cast<long>(vn.nodes.size())) ++radius;
        std::stable_partition(order.begin(), order.end(), [&](int n) { return dist[n] <= radius; });
      }
      DeployedVN d{vn, {order.begin(), order.begin() + static_cast<long>(vn.nodes.size())}, {}};
      bool ok = true;
      for (const auto& vl : vn.links) {
        auto p = shortest_path(net, d.host[vl.a], d.host[vl.b], PathMetric::kKm, residual_at_least(vl.gbps));
        if (!p) {
          ok = false;
          break;
        }
        auto h = net.reserve_bandwidth(p->links, vl.gbps);
        d.links.push_back({vl.id, std::move(*p), vl.gbps, h});
      }
      if (ok) {
        deployed.push_back(std::move(d));
        break;
      }
      for (const auto& l : d.links) net.release_bandwidth(l.handle);
    }
  }
  return deployed;
}

std::vector<std::size_t> find_threatened(const std::vector<DeployedVN>& deployed, const DisasterRiskZone& drz) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < deployed.size(); ++i) {
    int inside = 0;
    for (int h : deployed[i].host) inside += drz.covers_node(h) ? 1 : 0;
    if (inside == 2) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Sequential km-shortest migration paths on a residual snapshot, the first
// path's bandwidth deducted before the second is routed.
std::optional<std::array<SubstratePath, 2>> migration_paths(const SubstrateNetwork& net, std::vector<double> residual,
                                                            std::array<int, 2> sources,
                                                            std::array<int, 2> destinations, double gbps) {
  std::array<SubstratePath, 2> paths;
  for (int k = 0; k < 2; ++k) {
    auto p = shortest_path(net, sources[k], destinations[k], PathMetric::kKm,
                           [&](const SubstrateLink& l) { return residual[l.id] + kBandwidthSlack >= gbps; });
    if (!p) return std::nullopt;
    for (int l : p->links) residual[l] -= gbps;
    paths[k] = std::move(*p);
  }
  return paths;
}

std::vector<double> residuals(const SubstrateNetwork& net) {
  std::vector<double> r(net.link_count());
  for (const auto& l : net.links()) r[l.id] = l.residual_gbps;
  return r;
}

}  // namespace

std::optional<Reconfiguration> plan_reconfiguration(const SubstrateNetwork& net, const DeployedVN& vn,
                                                    const DisasterRiskZone& drz, int distance_limit,
                                                    double migration_gbps) {
  std::vector<int> moved;
  for (std::size_t v = 0; v < vn.host.size(); ++v) {
    if (drz.covers_node(vn.host[v])) moved.push_back(static_cast<int>(v));
  }
  if (moved.size() != 2) throw std::invalid_argument("VN is not dual-VM threatened");
  auto is_moved = [&](int v) { return v == moved[0] || v == moved[1]; };

  // Virtual links incident to a moved node are remapped; their current
  // bandwidth counts as available while candidates are evaluated.
  std::vector<double> base_residual(net.link_count());
  for (const auto& l : net.links()) base_residual[l.id] = l.residual_gbps;
  std::vector<std::size_t> affected;
  for (std::size_t i = 0; i < vn.links.size(); ++i) {
    const auto& vl = vn.vn.links[vn.links[i].vlink];
    if (!is_moved(vl.a) && !is_moved(vl.b)) continue;
    affected.push_back(i);
    for (int l : vn.links[i].path.links) base_residual[l] += vn.links[i].gbps;
  }

  std::set<int> others;
  for (std::size_t v = 0; v < vn.host.size(); ++v) {
    if (!is_moved(static_cast<int>(v))) others.insert(vn.host[v]);
  }
  std::vector<int> free_nodes;
  for (int n = 0; n < net.node_count(); ++n) {
    if (drz.covers_node(n) || others.contains(n)) continue;
    if (net.node(n).cpu_available < vn.vn.nodes[moved[0]].cpu &&
        net.node(n).cpu_available < vn.vn.nodes[moved[1]].cpu)
      continue;
    free_nodes.push_back(n);
  }
  std::vector<std::vector<int>> dist;
  for (int h : others) dist.push_back(hop_distances_from(net, h));
  std::vector<int> candidates;
  for (int n : free_nodes) {
    bool near = std::any_of(dist.begin(), dist.end(),
                            [&](const auto& d) { return d[n] >= 0 && d[n] <= distance_limit; });
    if (near) candidates.push_back(n);
  }
  if (candidates.size() < 2) candidates = free_nodes;

  const std::array<int, 2> sources{vn.host[moved[0]], vn.host[moved[1]]};
  std::optional<Reconfiguration> best;
  std::vector<double> residual;
  for (int d0 : candidates) {
    if (net.node(d0).cpu_available < vn.vn.nodes[moved[0]].cpu) continue;
    for (int d1 : candidates) {
      if (d1 == d0 || net.node(d1).cpu_available < vn.vn.nodes[moved[1]].cpu) continue;
      auto host = vn.host;
      host[moved[0]] = d0;
      host[moved[1]] = d1;
      residual = base_residual;
      Reconfiguration trial{{moved[0], moved[1]}, sources, {d0, d1}, 0.0, affected, {}};
      bool ok = true;
      for (auto i : affected) {
        const auto& vl = vn.vn.links[vn.links[i].vlink];
        double need = vl.gbps;
        auto p = shortest_path(net, host[vl.a], host[vl.b], PathMetric::kKm, [&](const SubstrateLink& l) {
          return !drz.covers_link(l) && residual[l.id] + kBandwidthSlack >= need;
        });
        if (!p) {
          ok = false;
          break;
        }
        for (int l : p->links) residual[l] -= need;
        trial.total_km += p->length_km;
        trial.paths.push_back(std::move(*p));
        if (best && trial.total_km >= best->total_km) {
          ok = false;
          break;
        }
      }
      if (!ok || (best && trial.total_km >= best->total_km)) continue;
      if (migration_gbps > 0.0 && !migration_paths(net, residual, sources, {d0, d1}, migration_gbps)) continue;
      best = std::move(trial);
    }
  }
  return best;
}

void apply_reconfiguration(SubstrateNetwork& net, DeployedVN& vn, const Reconfiguration& plan) {
  for (auto i : plan.remapped) net.release_bandwidth(vn.links[i].handle);
  for (int k = 0; k < 2; ++k) vn.host[plan.vnodes[k]] = plan.destinations[k];
  for (std::size_t k = 0; k < plan.remapped.size(); ++k) {
    auto& dl = vn.links[plan.remapped[k]];
    dl.path = plan.paths[k];
    dl.handle = net.reserve_bandwidth(dl.path.links, dl.gbps);
  }
}

std::optional<Reconfiguration> reconfigure_vn(SubstrateNetwork& net, DeployedVN& vn, const DisasterRiskZone& drz,
                                              int distance_limit, double migration_gbps) {
  auto plan = plan_reconfiguration(net, vn, drz, distance_limit, migration_gbps);
  if (plan) apply_reconfiguration(net, vn, *plan);
  return plan;
}

// ---------------------------------------------------------------------------

std::string_view to_string(EvacuationScheme scheme) {
  return scheme == EvacuationScheme::kSedv ? "SEDV" : "BEDV";
}

EvacuationScheme parse_evacuation_scheme(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "sedv") return EvacuationScheme::kSedv;
  if (s == "bedv") return EvacuationScheme::kBedv;
  throw ConfigError("unknown evacuation scheme '" + std::string(text) + "'");
}

double predicted_end_time(const MigrationSession& session, double now) {
  return (session.data_total_gb - session.data_moved_gb) / session.bandwidth_gbps + now;
}

std::pair<double, double> synchronize_pair(MigrationSession& first, MigrationSession& second, double now) {
  double end_first = predicted_end_time(first, now);
  double end_second = predicted_end_time(second, now);
  double rem_first = first.data_total_gb - first.data_moved_gb;
  double rem_second = second.data_total_gb - second.data_moved_gb;
  if (end_first < end_second) {
    first.bandwidth_gbps = rem_first / rem_second * second.bandwidth_gbps;
    end_first = end_second;
  } else if (end_second < end_first) {
    second.bandwidth_gbps = rem_second / rem_first * first.bandwidth_gbps;
    end_second = end_first;
  }
  first.predicted_end_s = end_first;
  second.predicted_end_s = end_second;
  return {first.bandwidth_gbps, second.bandwidth_gbps};
}

namespace {

struct ActiveVn {
  std::size_t task = 0;
  std::array<MigrationSession, 2> vm;
  std::array<AllocationHandle, 2> handle{};
  double admit_s = 0.0;
  double sync_at_s = 0.0;
  bool sync_pending = false;
  VnTimeline timeline;
};

class MigrationEngine {
 public:
  MigrationEngine(SubstrateNetwork& net, std::span<const EvacuationTask> tasks, EvacuationScheme scheme,
                  double basic_gbps)
      : net_(net), tasks_(tasks), scheme_(scheme), basic_(basic_gbps) {
    for (std::size_t i = 0; i < tasks.size(); ++i) waiting_.push_back(i);
    std::stable_sort(waiting_.begin(), waiting_.end(),
                     [&](auto a, auto b) { return tasks_[a].vn_id < tasks_[b].vn_id; });
  }

  EvacuationResult run() {
    EvacuationResult result;
    double now = 0.0;
    while (true) {
      admit_waiting(now);
      if (active_.empty()) {
        if (!waiting_.empty())
          throw EvacuationDeadlock(std::to_string(waiting_.size()) + " VNs cannot obtain migration paths");
        break;
      }
      double next = next_event_time();
      advance(next);
      now = next;
      complete_sessions(now, result);
      run_synchronizations(now);
    }
    for (const auto& t : result.timeline) {
      result.tet_s = std::max(result.tet_s, t.done_s);
      result.aet_s += t.done_s;
    }
    result.evacuated = static_cast<int>(result.timeline.size());
    result.threatened = static_cast<int>(tasks_.size());
    if (result.evacuated > 0) result.aet_s /= result.evacuated;
    return result;
  }

 private:
  static bool same_instant(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  }

  // Reserves a path for one VM; false leaves nothing reserved.
  bool route(const EvacuationTask& task, int k, ActiveVn& vn) {
    double floor = scheme_ == EvacuationScheme::kSedv ? basic_ : kMinUsefulGbps;
    auto p = shortest_path(net_, task.sources[k], task.destinations[k], PathMetric::kKm, residual_at_least(floor));
    if (!p) return false;
    double gbps = floor;
    vn.handle[k] = net_.reserve_bandwidth(p->links, gbps);
    vn.vm[k].path = std::move(*p);
    vn.vm[k].bandwidth_gbps = gbps;
    return true;
  }

  bool try_admit(std::size_t idx, double now) {
    const auto& task = tasks_[idx];
    ActiveVn vn;
    vn.task = idx;
    for (int k = 0; k < 2; ++k) {
      vn.vm[k].vm = k;
      vn.vm[k].data_total_gb = task.data_gb[k];
      vn.vm[k].downtime_s = task.downtime_s[k];
    }
    if (!route(task, 0, vn)) return false;
    if (!route(task, 1, vn)) {
      net_.release_bandwidth(vn.handle[0]);
      return false;
    }
    vn.admit_s = now;
    vn.timeline.vn_id = task.vn_id;
    vn.timeline.admit_s = now;
    if (scheme_ == EvacuationScheme::kSedv) {
      vn.sync_at_s = now + std::max(task.downtime_s[0], task.downtime_s[1]);
      vn.sync_pending = true;
    }
    active_.push_back(std::move(vn));
    return true;
  }

  // SEDV first admits every VN that fits at the basic rate, then upgrades
  // the newly admitted VMs in admission order to what is left on their paths.
  // BEDV upgrades each VN as soon as it is admitted.
  void admit_waiting(double now) {
    std::size_t first_new = active_.size();
    std::vector<std::size_t> still;
    for (auto idx : waiting_) {
      if (!try_admit(idx, now)) {
        still.push_back(idx);
      } else if (scheme_ == EvacuationScheme::kBedv) {
        start(active_.back(), now);
      }
    }
    waiting_ = std::move(still);
    if (scheme_ == EvacuationScheme::kSedv) {
      for (std::size_t i = first_new; i < active_.size(); ++i) start(active_[i], now);
    }
  }

  void start(ActiveVn& vn, double now) {
    for (int k = 0; k < 2; ++k) {
      double extra = std::numeric_limits<double>::infinity();
      for (int l : vn.vm[k].path.links) {
        double avail = std::max(net_.link(l).residual_gbps, 0.0);
        // BEDV leaves half of a link both VMs use to the second VM.
        if (scheme_ == EvacuationScheme::kBedv && k == 0 && std::ranges::count(vn.vm[1].path.links, l) > 0)
          avail /= 2.0;
        extra = std::min(extra, avail);
      }
      double upgraded = vn.vm[k].bandwidth_gbps + extra;
      net_.resize_bandwidth(vn.handle[k], upgraded);
      vn.vm[k].bandwidth_gbps = upgraded;
      vn.vm[k].state = MigrationSession::State::kMigrating;
      vn.vm[k].predicted_end_s = predicted_end_time(vn.vm[k], now);
      vn.timeline.initial_gbps[k] = vn.vm[k].bandwidth_gbps;
    }
  }

  double next_event_time() const {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& vn : active_) {
      for (const auto& s : vn.vm) {
        if (s.state == MigrationSession::State::kMigrating) t = std::min(t, s.predicted_end_s);
      }
      if (vn.sync_pending) t = std::min(t, vn.sync_at_s);
    }
    return t;
  }

  void advance(double to) {
    for (auto& vn : active_) {
      for (auto& s : vn.vm) {
        if (s.state != MigrationSession::State::kMigrating) continue;
        s.data_moved_gb = std::min(s.data_total_gb, s.data_moved_gb + s.bandwidth_gbps * (to - last_advance_));
      }
    }
    last_advance_ = to;
  }

  void complete_sessions(double now, EvacuationResult& result) {
    std::vector<ActiveVn> remaining;
    for (auto& vn : active_) {
      for (int k = 0; k < 2; ++k) {
        auto& s = vn.vm[k];
        if (s.state == MigrationSession::State::kMigrating && same_instant(s.predicted_end_s, now)) {
          s.data_moved_gb = s.data_total_gb;
          s.state = MigrationSession::State::kDone;
          net_.release_bandwidth(vn.handle[k]);
          vn.timeline.vm_done_s[k] = now;
        }
      }
      if (vn.vm[0].state == MigrationSession::State::kDone && vn.vm[1].state == MigrationSession::State::kDone) {
        vn.timeline.done_s = now;
        result.timeline.push_back(vn.timeline);
      } else {
        remaining.push_back(std::move(vn));
      }
    }
    active_ = std::move(remaining);
  }

  void run_synchronizations(double now) {
    for (auto& vn : active_) {
      if (!vn.sync_pending || !same_instant(vn.sync_at_s, now)) continue;
      vn.sync_pending = false;
      if (vn.vm[0].state != MigrationSession::State::kMigrating ||
          vn.vm[1].state != MigrationSession::State::kMigrating)
        continue;
      synchronize_pair(vn.vm[0], vn.vm[1], now);
      for (int k = 0; k < 2; ++k) {
        if (vn.vm[k].bandwidth_gbps != net_.reserved_gbps(vn.handle[k]))
          net_.resize_bandwidth(vn.handle[k], vn.vm[k].bandwidth_gbps);
      }
      vn.timeline.sync_s = now;
    }
  }

  SubstrateNetwork& net_;
  std::span<const EvacuationTask> tasks_;
  EvacuationScheme scheme_;
  double basic_;
  std::vector<std::size_t> waiting_;
  std::vector<ActiveVn> active_;
  double last_advance_ = 0.0;
};

}  // namespace

EvacuationResult simulate_migrations(SubstrateNetwork& net, std::span<const EvacuationTask> tasks,
                                     EvacuationScheme scheme, double basic_gbps) {
  if (net.mode() != CapacityMode::kScalar) throw ConfigError("evacuation needs a scalar-mode network");
  if (scheme == EvacuationScheme::kSedv && !(basic_gbps > 0.0))
    throw ConfigError("basic migration bandwidth must be positive");
  return MigrationEngine(net, tasks, scheme, basic_gbps).run();
}

EvacuationResult run_evacuation(SubstrateNetwork& net, std::vector<DeployedVN>& deployed,
                                const DisasterRiskZone& drz, EvacuationScheme scheme, double basic_gbps,
                                std::uint64_t seed, const EvacuationOptions& options) {
  auto threatened = find_threatened(deployed, drz);
  auto rng = make_stream(seed, 21);
  std::uniform_real_distribution<double> data(options.min_data_gbyte, options.max_data_gbyte);
  std::uniform_real_distribution<double> downtime(options.min_downtime_s, options.max_downtime_s);

  const double reach = std::max({options.reachability_gbps, basic_gbps, kMinUsefulGbps});
  std::vector<EvacuationTask> planned;
  for (auto idx : threatened) {
    EvacuationTask task;
    task.vn_id = deployed[idx].vn.id;
    for (int k = 0; k < 2; ++k) {
      task.data_gb[k] = 8.0 * data(rng);
      task.downtime_s[k] = downtime(rng);
    }
    if (auto it = options.profiles.find(task.vn_id); it != options.profiles.end()) {
      task.data_gb = it->second.data_gb;
      task.downtime_s = it->second.downtime_s;
    }
    auto plan = reconfigure_vn(net, deployed[idx], drz, options.distance_limit, reach);
    if (!plan) continue;
    task.sources = plan->sources;
    task.destinations = plan->destinations;
    planned.push_back(task);
  }
  // Later reconfigurations can cut off earlier ones; VNs that could not
  // migrate even on an otherwise idle network are left in place.
  std::vector<EvacuationTask> tasks;
  for (const auto& task : planned) {
    if (migration_paths(net, residuals(net), task.sources, task.destinations, reach)) tasks.push_back(task);
  }
  auto result = simulate_migrations(net, tasks, scheme, basic_gbps);
  result.threatened = static_cast<int>(threatened.size());
  return result;
}

int default_vn_count(std::string_view topology_name) {
  return parse_builtin_topology(topology_name) == BuiltinTopology::kUsnet ? 600 : 160;
}

EvacuationRun run_evacuation_cell(const EvacuationCell& cell) {
  TopologyParams params;
  params.cpu_capacity = 1'000'000;
  params.link_gbps = cell.capacity_gbps;
  auto net = builtin_topology(cell.topology, CapacityMode::kScalar, params);
  int count = cell.vn_count > 0 ? cell.vn_count : default_vn_count(cell.topology);
  auto deployed = deploy_random_vns(net, DeploymentConfig::defaults(count), cell.seed);
  auto drz = cell.drz.value_or(default_drz(cell.topology));
  EvacuationRun run;
  run.scheme = cell.scheme;
  run.topology = net.name();
  run.capacity_gbps = cell.capacity_gbps;
  run.basic_gbps = cell.basic_gbps;
  run.seed = cell.seed;
  run.result = run_evacuation(net, deployed, drz, cell.scheme, run.basic_gbps, cell.seed, cell.options);
  return run;
}

std::vector<EvacuationRun> run_evacuation_cells(const std::vector<EvacuationCell>& cells, int threads) {
  std::vector<EvacuationRun> runs(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) { runs[i] = run_evacuation_cell(cells[i]); });
  return runs;
}

std::string evacuation_csv_header() {
  return "scheme,topology,link_capacity_gbps,basic_bw_gbps,seed,n_dual_vns,tet_s,aet_s";
}

std::string evacuation_csv_row(const EvacuationRun& run) {
  return std::string(to_string(run.scheme)) + "," + run.topology + "," + format_sig(run.capacity_gbps) + "," +
         format_sig(run.basic_gbps) + "," + std::to_string(run.seed) + "," +
         std::to_string(run.result.threatened) + "," + format_sig(run.result.tet_s) + "," +
         format_sig(run.result.aet_s);
}

std::string timeline_csv_header() { return "vn_id,admit_t,sync_t,done_t"; }

std::string timeline_csv_rows(const EvacuationResult& result) {
  std::string out;
  for (const auto& t : result.timeline) {
    out += std::to_string(t.vn_id) + "," + format_sig(t.admit_s) + "," + (t.sync_s ? format_sig(*t.sync_s) : "") +
           "," + format_sig(t.done_s) + "\n";
  }
  return out;
}

}  // namespace eonsurv
