#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eonsurv/slot_grid.hpp"

namespace eonsurv {

enum class CapacityMode { kSlotted, kScalar };

std::string_view to_string(CapacityMode mode);
CapacityMode parse_capacity_mode(std::string_view text);

struct SubstrateNode {
  int id = 0;
  std::int64_t cpu_capacity = 0;
  std::int64_t cpu_available = 0;
};

// A bidirectional link with one shared capacity pool. Only the member that
// matches the owning network's CapacityMode is meaningful.
struct SubstrateLink {
  int id = 0;
  int u = 0;
  int v = 0;
  double length_km = 0.0;
  SlotGrid slots;               // slotted mode
  double capacity_gbps = 0.0;   // scalar mode
  double residual_gbps = 0.0;   // scalar mode, derived from reservations

  int other_end(int node) const { return node == u ? v : u; }
};

struct Adjacency {
  int link = 0;
  int neighbor = 0;
};

struct AllocationHandle {
  std::uint64_t id = 0;
  friend auto operator<=>(const AllocationHandle&, const AllocationHandle&) = default;
};

// Substrate graph plus the resource ledger (CPU, slots, scalar bandwidth).
// Every reservation is keyed by a handle so that release is exact and a
// second release is detected.
class SubstrateNetwork {
 public:
  SubstrateNetwork() = default;
  SubstrateNetwork(std::string name, CapacityMode mode) : name_(std::move(name)), mode_(mode) {}

  const std::string& name() const { return name_; }
  CapacityMode mode() const { return mode_; }

  int add_node(std::int64_t cpu_capacity);
  // `capacity` is a slot count in slotted mode and Gbps in scalar mode.
  int add_link(int u, int v, double length_km, double capacity);
  // Throws TopologyError unless the graph is non-empty and connected.
  void validate() const;

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  std::span<const SubstrateNode> nodes() const { return nodes_; }
  std::span<const SubstrateLink> links() const { return links_; }
  const SubstrateNode& node(int id) const { return nodes_.at(id); }
  const SubstrateLink& link(int id) const { return links_.at(id); }
  std::span<const Adjacency> neighbors(int node) const { return adjacency_.at(node); }
  std::optional<int> link_between(int u, int v) const;

  // CPU.
  AllocationHandle reserve_cpu(int node, std::int64_t amount);
  void release_cpu(AllocationHandle handle);

  // Frequency slots on every listed link.
  AllocationHandle allocate_slots(std::span<const int> links, int start, int width);
  void release_slots(AllocationHandle handle);

  // Scalar bandwidth on every listed link.
  AllocationHandle reserve_bandwidth(std::span<const int> links, double gbps);
  void resize_bandwidth(AllocationHandle handle, double gbps);
  void release_bandwidth(AllocationHandle handle);
  double reserved_gbps(AllocationHandle handle) const;

  bool is_outstanding(AllocationHandle handle) const;
  std::size_t outstanding_count() const {
    return cpu_ledger_.size() + slot_ledger_.size() + bandwidth_ledger_.size();
  }

  // Raises the capacity of every scalar link by `delta_gbps`.
  void add_scalar_capacity(double delta_gbps);

  // Compares CPU availability, slot grids and residual bandwidth only.
  bool same_resources(const SubstrateNetwork& other) const;

 private:
  struct CpuEntry {
    int node;
    std::int64_t amount;
  };
  struct SlotEntry {
    std::vector<int> links;
    int start;
    int width;
  };
  struct BandwidthEntry {
    std::vector<int> links;
    double gbps;
  };

  AllocationHandle next_handle() { return AllocationHandle{++last_handle_}; }
  void recompute_residual(int link);

  std::string name_;
  CapacityMode mode_ = CapacityMode::kSlotted;
  std::vector<SubstrateNode> nodes_;
  std::vector<SubstrateLink> links_;
  std::vector<std::vector<Adjacency>> adjacency_;

  std::uint64_t last_handle_ = 0;
  std::map<std::uint64_t, CpuEntry> cpu_ledger_;
  std::map<std::uint64_t, SlotEntry> slot_ledger_;
  std::map<std::uint64_t, BandwidthEntry> bandwidth_ledger_;
  // Per-link reservations in handle order; residual is recomputed from these
  // so a reserve/release pair restores the residual bit for bit.
  std::vector<std::map<std::uint64_t, double>> link_reservations_;
};

struct TopologyParams {
  std::int64_t cpu_capacity = 300;
  int slots_per_link = 320;
  double link_gbps = 100.0;
};

enum class BuiltinTopology { kUsnet, kNsfnet };

BuiltinTopology parse_builtin_topology(std::string_view name);

SubstrateNetwork builtin_topology(BuiltinTopology which, CapacityMode mode,
                                  const TopologyParams& params = {});
SubstrateNetwork builtin_topology(std::string_view name, CapacityMode mode,
                                  const TopologyParams& params = {});

// Line-oriented topology file; see README for the format.
SubstrateNetwork load_topology(std::string_view text);
std::string serialize_topology(const SubstrateNetwork& net);
// Strips comments and blank lines and collapses whitespace.
std::string normalize_topology_text(std::string_view text);

// Minimum number of links between u and v (BFS).
int hop_distance(const SubstrateNetwork& net, int u, int v);
std::vector<int> hop_distances_from(const SubstrateNetwork& net, int source);

}  // namespace eonsurv
