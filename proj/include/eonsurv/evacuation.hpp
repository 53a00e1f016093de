#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eonsurv/routing.hpp"
#include "eonsurv/topology.hpp"
#include "eonsurv/vn.hpp"

namespace eonsurv {

// Two substrate nodes plus every link touching either of them.
struct DisasterRiskZone {
  int a = 0;
  int b = 0;

  bool covers_node(int node) const { return node == a || node == b; }
  bool covers_link(const SubstrateLink& link) const { return covers_node(link.u) || covers_node(link.v); }
};

DisasterRiskZone default_drz(std::string_view topology_name);

struct DeployedLink {
  int vlink = 0;
  SubstratePath path;
  double gbps = 0.0;
  AllocationHandle handle;
};

struct DeployedVN {
  VirtualNetworkRequest vn;
  std::vector<int> host;  // substrate node per virtual node
  std::vector<DeployedLink> links;
};

struct DeploymentConfig {
  int vn_count = 160;
  WorkloadConfig shape;  // node count, link probability, bandwidth range
  int placement_attempts = 10;
  // Hosts are drawn within this many hops of a random centre node, widened
  // until enough nodes fit; negative places hosts anywhere.
  int locality_hops = 1;

  // 3-5 nodes, link probability 0.3, 0.5-3 Gbps per virtual link.
  static DeploymentConfig defaults(int vn_count);
};

// Random distinct hosts per VN, each virtual link on its km-shortest path
// among links with enough residual bandwidth. VNs that find no feasible
// placement within the attempt budget are dropped.
std::vector<DeployedVN> deploy_random_vns(SubstrateNetwork& net, const DeploymentConfig& config,
                                          std::uint64_t seed);

// Indices (into `deployed`) of VNs with exactly two virtual nodes on the zone.
std::vector<std::size_t> find_threatened(const std::vector<DeployedVN>& deployed, const DisasterRiskZone& drz);

struct Reconfiguration {
  std::array<int, 2> vnodes{};  // moved virtual nodes, ascending id
  std::array<int, 2> sources{};
  std::array<int, 2> destinations{};
  double total_km = 0.0;
  std::vector<std::size_t> remapped;  // indices into DeployedVN::links
  std::vector<SubstratePath> paths;   // new path per remapped link
};

// Chooses new hosts for both threatened virtual nodes: the ordered
// destination pair outside the zone that minimises the total length of the
// remapped virtual links. With a positive `migration_gbps`, a pair only
// qualifies if both VMs can then reach their destinations at that bandwidth.
// The network is not modified.
std::optional<Reconfiguration> plan_reconfiguration(const SubstrateNetwork& net, const DeployedVN& vn,
                                                    const DisasterRiskZone& drz, int distance_limit,
                                                    double migration_gbps = 0.0);
void apply_reconfiguration(SubstrateNetwork& net, DeployedVN& vn, const Reconfiguration& plan);

// Plan and apply; on failure nothing changes.
std::optional<Reconfiguration> reconfigure_vn(SubstrateNetwork& net, DeployedVN& vn, const DisasterRiskZone& drz,
                                              int distance_limit, double migration_gbps = 0.0);

enum class EvacuationScheme { kSedv, kBedv };
std::string_view to_string(EvacuationScheme scheme);
EvacuationScheme parse_evacuation_scheme(std::string_view text);

struct MigrationSession {
  enum class State { kWaiting, kMigrating, kDone };
  int vm = 0;
  double data_total_gb = 0.0;  // gigabits
  double data_moved_gb = 0.0;
  double bandwidth_gbps = 0.0;
  double downtime_s = 0.0;
  SubstratePath path;
  double predicted_end_s = 0.0;
  State state = State::kWaiting;
};

// (D - D^c) / b + t_c. Undefined for b = 0.
double predicted_end_time(const MigrationSession& session, double now);

// Lowers the bandwidth of whichever session would finish first so both end
// together; returns the new (first, second) bandwidths and updates the
// predicted ends.
std::pair<double, double> synchronize_pair(MigrationSession& first, MigrationSession& second, double now);

// One dual-VM VN to evacuate.
struct EvacuationTask {
  int vn_id = 0;
  std::array<int, 2> sources{};
  std::array<int, 2> destinations{};
  std::array<double, 2> data_gb{};  // gigabits
  std::array<double, 2> downtime_s{};
};

struct VnTimeline {
  int vn_id = 0;
  double admit_s = 0.0;
  std::optional<double> sync_s;
  double done_s = 0.0;
  std::array<double, 2> vm_done_s{};
  std::array<double, 2> initial_gbps{};
};

struct EvacuationResult {
  double tet_s = 0.0;
  double aet_s = 0.0;
  int threatened = 0;
  int evacuated = 0;
  std::vector<VnTimeline> timeline;  // in completion order
};

// Event-driven migration of every task from t = 0. Throws EvacuationDeadlock
// when waiting VNs can no longer be admitted.
EvacuationResult simulate_migrations(SubstrateNetwork& net, std::span<const EvacuationTask> tasks,
                                     EvacuationScheme scheme, double basic_gbps);

struct VmProfile {
  std::array<double, 2> data_gb{};  // gigabits
  std::array<double, 2> downtime_s{};
};

struct EvacuationOptions {
  int distance_limit = 2;
  double min_data_gbyte = 5.0;
  double max_data_gbyte = 10.0;
  double min_downtime_s = 0.5;
  double max_downtime_s = 1.5;
  // Destinations must be reachable at this rate, or at the basic rate if
  // higher, for a VN to be evacuated.
  double reachability_gbps = 10.0;
  // Replaces the sampled data and downtimes of the listed VN ids.
  std::map<int, VmProfile> profiles;
};

// Threat detection, reconfiguration, per-VM data and downtime sampling from
// `seed`, then migration. `basic_gbps` is the SEDV admission floor. VNs that
// cannot be reconfigured with reachable destinations count as threatened but
// not evacuated.
EvacuationResult run_evacuation(SubstrateNetwork& net, std::vector<DeployedVN>& deployed,
                                const DisasterRiskZone& drz, EvacuationScheme scheme, double basic_gbps,
                                std::uint64_t seed, const EvacuationOptions& options = {});

struct EvacuationRun {
  EvacuationScheme scheme = EvacuationScheme::kSedv;
  std::string topology;
  double capacity_gbps = 0.0;
  double basic_gbps = 0.0;
  std::uint64_t seed = 0;
  EvacuationResult result;
};

std::string evacuation_csv_header();
std::string evacuation_csv_row(const EvacuationRun& run);
std::string timeline_csv_header();
std::string timeline_csv_rows(const EvacuationResult& result);

// Builds the scalar-mode built-in topology at `capacity_gbps`, deploys VNs
// from `seed` and evacuates the zone with one scheme.
struct EvacuationCell {
  std::string topology = "nsfnet";
  double capacity_gbps = 65.0;
  EvacuationScheme scheme = EvacuationScheme::kSedv;
  double basic_gbps = 5.0;
  std::uint64_t seed = 1;
  int vn_count = 0;  // 0 selects 160 for NSFNET and 600 for USNET
  std::optional<DisasterRiskZone> drz;
  EvacuationOptions options;
};

EvacuationRun run_evacuation_cell(const EvacuationCell& cell);

// Cells in the given order, spread over up to `threads` workers.
std::vector<EvacuationRun> run_evacuation_cells(const std::vector<EvacuationCell>& cells, int threads = 1);

int default_vn_count(std::string_view topology_name);

}  // namespace eonsurv
