#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eonsurv/embedding.hpp"
#include "eonsurv/topology.hpp"
#include "eonsurv/vn.hpp"

namespace eonsurv {

struct CampaignCell {
  SchemeConfig scheme;
  double load_erlang = 1.0;
  std::uint64_t seed = 1;
  // Shape of the VN requests; arrival rate and holding time are derived from
  // load_erlang (arrival rate 1/s, mean holding = load seconds).
  WorkloadConfig workload;

  WorkloadConfig effective_workload() const;
};

struct MetricsAccumulator {
  long long accepted = 0;
  long long blocked = 0;
  // Window totals drive the backup ratio; per-link totals drive the guard
  // and spectrum-consumption averages.
  long long total_slots = 0;
  long long backup_slots = 0;
  long long link_slots = 0;
  long long guard_link_slots = 0;
  long long working_paths = 0;
  long long accepted_vlinks = 0;

  void record_accept(const EmbeddingRecord& record, int guard);
  void record_block() { ++blocked; }
  long long counted() const { return accepted + blocked; }
};

struct CampaignMetrics {
  double vbr = 0.0;
  std::optional<double> abr;
  std::optional<double> agc;
  std::optional<double> asc;
  std::optional<double> avg_working_paths;
};

// Throws std::invalid_argument when nothing was counted.
CampaignMetrics compute_metrics(const MetricsAccumulator& acc);

struct CampaignResult {
  Scheme scheme = Scheme::kApss;
  int max_paths = 0;
  int anchor_hops = 0;
  double load_erlang = 0.0;
  std::uint64_t seed = 0;
  MetricsAccumulator counters;
  CampaignMetrics metrics;
  bool restored = false;  // substrate equals its initial state after the last departure
};

struct CampaignHooks {
  std::function<void(const SubstrateNetwork&, const VirtualNetworkRequest&, const EmbeddingRecord&)> on_accept;
  std::function<void(const SubstrateNetwork&)> on_event;
};

CampaignResult run_svne_campaign(const SubstrateNetwork& substrate, const CampaignCell& cell,
                                 const CampaignHooks& hooks = {});

// Runs every (scheme, load, seed) cell on up to `threads` workers; results come
// back in scheme-major, then load, then seed order.
std::vector<CampaignResult> run_svne_grid(const SubstrateNetwork& substrate,
                                          const std::vector<SchemeConfig>& schemes,
                                          const std::vector<double>& loads,
                                          const std::vector<std::uint64_t>& seeds,
                                          const WorkloadConfig& workload, int threads = 1);

std::string svne_csv_header();
std::string svne_csv_row(const CampaignResult& result);

}  // namespace eonsurv
