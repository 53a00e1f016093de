#include "eonsurv/svne_sim.hpp"

#include <map>
#include <stdexcept>

#include "eonsurv/errors.hpp"
#include "eonsurv/format.hpp"
#include "eonsurv/parallel.hpp"

namespace eonsurv {

WorkloadConfig CampaignCell::effective_workload() const {
  if (!(load_erlang > 0.0)) throw ConfigError("load must be positive");
  WorkloadConfig w = workload;
  w.arrival_rate = 1.0;
  w.mean_holding_s = load_erlang;
  w.seed = seed;
  return w;
}

void MetricsAccumulator::record_accept(const EmbeddingRecord& record, int guard) {
  ++accepted;
  total_slots += record.total_slots();
  backup_slots += record.backup_slots();
  link_slots += record.link_slots();
  guard_link_slots += record.guard_link_slots(guard);
  working_paths += record.working_paths();
  accepted_vlinks += static_cast<long long>(record.links.size());
}

CampaignMetrics compute_metrics(const MetricsAccumulator& acc) {
  if (acc.counted() <= 0) throw std::invalid_argument("no counted requests");
  CampaignMetrics m;
  m.vbr = static_cast<double>(acc.blocked) / static_cast<double>(acc.counted());
  if (acc.accepted > 0) {
    auto accepted = static_cast<double>(acc.accepted);
    if (acc.total_slots > 0) m.abr = static_cast<double>(acc.backup_slots) / static_cast<double>(acc.total_slots);
    m.agc = static_cast<double>(acc.guard_link_slots) / accepted;
    m.asc = static_cast<double>(acc.link_slots) / accepted;
    if (acc.accepted_vlinks > 0)
      m.avg_working_paths = static_cast<double>(acc.working_paths) / static_cast<double>(acc.accepted_vlinks);
  }
  return m;
}

CampaignResult run_svne_campaign(const SubstrateNetwork& substrate, const CampaignCell& cell,
                                 const CampaignHooks& hooks) {
  if (substrate.mode() != CapacityMode::kSlotted) throw ConfigError("SVNE campaign needs a slotted network");
  cell.scheme.validate();
  auto workload_config = cell.effective_workload();
  auto workload = generate_workload(workload_config);

  SubstrateNetwork net = substrate;
  std::map<int, EmbeddingRecord> residents;
  CampaignResult result;
  result.scheme = cell.scheme.scheme;
  result.max_paths = cell.scheme.max_paths;
  result.anchor_hops = cell.scheme.anchor_hops;
  result.load_erlang = cell.load_erlang;
  result.seed = cell.seed;
  const int guard = cell.scheme.modulation.guard_slots;

  for (const auto& ev : workload.events) {
    const auto& vnr = workload.requests[ev.request];
    if (ev.kind == WorkloadEvent::Kind::kDeparture) {
      auto it = residents.find(ev.request);
      if (it != residents.end()) {
        release_embedding(net, it->second);
        residents.erase(it);
      }
    } else {
      bool counted = ev.request >= workload_config.warmup_count;
      auto record = embed(net, vnr, cell.scheme);
      if (record) {
        if (counted) result.counters.record_accept(*record, guard);
        if (hooks.on_accept) hooks.on_accept(net, vnr, *record);
        residents.emplace(ev.request, std::move(*record));
      } else if (counted) {
        result.counters.record_block();
      }
    }
    if (hooks.on_event) hooks.on_event(net);
  }
  result.metrics = compute_metrics(result.counters);
  result.restored = residents.empty() && net.same_resources(substrate);
  return result;
}

std::vector<CampaignResult> run_svne_grid(const SubstrateNetwork& substrate,
                                          const std::vector<SchemeConfig>& schemes,
                                          const std::vector<double>& loads,
                                          const std::vector<std::uint64_t>& seeds,
                                          const WorkloadConfig& workload, int threads) {
  std::vector<CampaignCell> cells;
  for (const auto& s : schemes) {
    for (double load : loads) {
      for (auto seed : seeds) cells.push_back({s, load, seed, workload});
    }
  }
  for (const auto& c : cells) {
    c.scheme.validate();
    c.effective_workload().validate();
  }
  std::vector<CampaignResult> results(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) { results[i] = run_svne_campaign(substrate, cells[i]); });
  return results;
}

std::string svne_csv_header() {
  return "scheme,K,H,load_erlang,seed,counted,accepted,blocked,vbr,abr,agc,asc,avg_working_paths";
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_sig(*v) : std::string(); }

}  // namespace

std::string svne_csv_row(const CampaignResult& r) {
  return std::string(to_string(r.scheme)) + "," + std::to_string(r.max_paths) + "," +
         std::to_string(r.anchor_hops) + "," + format_sig(r.load_erlang) + "," + std::to_string(r.seed) + "," +
         std::to_string(r.counters.counted()) + "," + std::to_string(r.counters.accepted) + "," +
         std::to_string(r.counters.blocked) + "," + format_sig(r.metrics.vbr) + "," + opt(r.metrics.abr) + "," +
         opt(r.metrics.agc) + "," + opt(r.metrics.asc) + "," + opt(r.metrics.avg_working_paths);
}

}  // namespace eonsurv
