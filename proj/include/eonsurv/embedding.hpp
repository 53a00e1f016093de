#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eonsurv/spectrum.hpp"
#include "eonsurv/topology.hpp"
#include "eonsurv/vn.hpp"

namespace eonsurv {

enum class Scheme { kApss, kApc, kApf, kMpf, kMdf };
enum class NodePolicy { kAnchor, kMaxMapping };
enum class SplitPolicy { kAdaptive, kFixed };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

//   APSS  anchor     + adaptive split + least-cost windows
//   APC   anchor     + fixed split    + least-cost windows
//   APF   anchor     + fixed split    + first fit
//   MPF   maxmapping + fixed split    + first fit
//   MDF   maxmapping + fixed split with K = 2 + first fit
struct SchemeConfig {
  Scheme scheme = Scheme::kApss;
  int max_paths = 4;    // K: working paths plus one backup
  int anchor_hops = 1;  // H
  ModulationTable modulation = ModulationTable::defaults();

  // APSS defaults to K = 4, MDF is pinned to K = 2, the rest default to 3.
  static SchemeConfig make(Scheme scheme, std::optional<int> max_paths = std::nullopt, int anchor_hops = 1);

  NodePolicy node_policy() const;
  SplitPolicy split_policy() const;
  FsPolicy fs_policy() const;
  void validate() const;
};

struct NodeMapping {
  std::vector<int> host;  // substrate node per virtual node id
  std::vector<AllocationHandle> cpu;
};

struct LinkEmbedding {
  int vlink = 0;
  double demand_gbps = 0.0;
  std::vector<SlotWindow> working;
  SlotWindow backup;
  std::vector<AllocationHandle> handles;  // working windows in order, then the backup

  double working_gbps() const;
  double max_working_gbps() const;
};

struct EmbeddingRecord {
  int vnr_id = 0;
  std::optional<int> anchor;
  NodeMapping nodes;
  std::vector<LinkEmbedding> links;

  // Per window: a window of w slots counts w however many links it crosses.
  long long total_slots() const;
  long long backup_slots() const;
  // Per link traversed: a window of w slots on an h-link path counts w * h.
  long long link_slots() const;
  long long guard_link_slots(int guard) const;
  int working_paths() const;
};

// Test and diagnostics hook: consulted after every successful allocation;
// returning true makes the current mapping stage fail at that point.
struct EmbedOptions {
  std::function<bool()> inject_failure;
};

std::optional<NodeMapping> node_map_ans(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                        int anchor, int anchor_hops,
                                        const EmbedOptions& options = {});
std::optional<NodeMapping> node_map_maxmapping(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                               const EmbedOptions& options = {});

// Links that still hold a free run of at least guard + 1 slots.
LinkFilter usable_link_filter(const SubstrateNetwork& net, int guard);

std::optional<LinkEmbedding> link_map_aps(SubstrateNetwork& net, const VirtualLink& vlink, int source,
                                          int target, int max_paths, FsPolicy policy,
                                          const ModulationTable& table, const EmbedOptions& options = {});
std::optional<LinkEmbedding> link_map_fixed(SubstrateNetwork& net, const VirtualLink& vlink, int source,
                                            int target, int max_paths, FsPolicy policy,
                                            const ModulationTable& table, const EmbedOptions& options = {});

// Returns nullopt (blocked) with the substrate unchanged, or the record.
std::optional<EmbeddingRecord> embed(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                     const SchemeConfig& config, const EmbedOptions& options = {});

// Throws DoubleRelease, leaving the substrate untouched, if any handle of the
// record is no longer outstanding.
void release_embedding(SubstrateNetwork& net, const EmbeddingRecord& record);

}  // namespace eonsurv
