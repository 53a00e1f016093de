#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace eonsurv {

struct VirtualNode {
  int id = 0;
  std::int64_t cpu = 0;
  friend bool operator==(const VirtualNode&, const VirtualNode&) = default;
};

struct VirtualLink {
  int id = 0;
  int a = 0;
  int b = 0;
  double gbps = 0.0;
  friend bool operator==(const VirtualLink&, const VirtualLink&) = default;
};

struct VirtualNetworkRequest {
  int id = 0;
  std::vector<VirtualNode> nodes;
  std::vector<VirtualLink> links;
  double arrival_time = 0.0;
  double holding_time = 0.0;

  // Throws std::invalid_argument on non-positive demands, self-loops,
  // parallel links or an empty node set.
  void validate() const;
  friend bool operator==(const VirtualNetworkRequest&, const VirtualNetworkRequest&) = default;
};

struct WorkloadConfig {
  int min_nodes = 2;
  int max_nodes = 5;
  double link_probability = 0.5;
  std::int64_t min_cpu = 7;
  std::int64_t max_cpu = 10;
  double min_gbps = 25.0;
  double max_gbps = 250.0;
  double gbps_step = 1.0;  // demand granularity; 0 draws continuously
  // Join disconnected samples with minimum-demand links.
  bool connect_components = true;
  double arrival_rate = 1.0;     // requests per second
  double mean_holding_s = 50.0;  // 1/mu
  int request_count = 11000;
  int warmup_count = 1000;
  std::uint64_t seed = 1;

  void validate() const;
  double offered_load() const { return arrival_rate * mean_holding_s; }
};

// One engine per purpose so that structure, demands and timing draw from
// independent sequences.
struct WorkloadStreams {
  std::mt19937_64 structure;
  std::mt19937_64 demands;
  std::mt19937_64 arrivals;
  std::mt19937_64 holding;

  explicit WorkloadStreams(std::uint64_t seed);
};

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

// Random VN graph: uniform node count, each pair linked with the configured
// probability, components joined by extra minimum-demand links.
VirtualNetworkRequest generate_vnr(std::mt19937_64& structure, std::mt19937_64& demands,
                                   const WorkloadConfig& config, int id = 0);

struct WorkloadEvent {
  enum class Kind { kDeparture, kArrival };
  double time = 0.0;
  Kind kind = Kind::kArrival;
  int request = 0;
  friend bool operator==(const WorkloadEvent&, const WorkloadEvent&) = default;
};

struct Workload {
  std::vector<VirtualNetworkRequest> requests;
  std::vector<WorkloadEvent> events;  // sorted by time; departures first on ties
  double offered_load = 0.0;
  friend bool operator==(const Workload&, const Workload&) = default;
};

Workload generate_workload(WorkloadStreams& streams, const WorkloadConfig& config);
Workload generate_workload(const WorkloadConfig& config);

std::string dump_workload(const Workload& workload);
Workload load_workload(std::string_view text);

}  // namespace eonsurv
