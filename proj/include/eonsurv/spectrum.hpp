#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eonsurv/routing.hpp"
#include "eonsurv/topology.hpp"

namespace eonsurv {

struct ModulationFormat {
  std::string name;
  double efficiency = 0.0;  // bit/s/Hz
  double reach_km = 0.0;
  friend bool operator==(const ModulationFormat&, const ModulationFormat&) = default;
};

// Formats ordered by strictly increasing efficiency and strictly decreasing reach.
struct ModulationTable {
  std::vector<ModulationFormat> formats;
  double slot_width_ghz = 12.5;
  int guard_slots = 1;

  // BPSK/QPSK/8QAM/16QAM, 12.5 GHz slots, one guard slot.
  static ModulationTable defaults();
  void validate() const;
  double max_reach_km() const { return formats.front().reach_km; }
};

// Highest-efficiency format whose reach covers `km` (boundary inclusive).
const ModulationFormat& select_modulation(const ModulationTable& table, double km);

struct SlotRequirement {
  ModulationFormat modulation;
  int slots = 0;           // includes the guard slots
  double slot_gbps = 0.0;  // capacity of one slot under `modulation`
};

// Slots for `gbps` over a path of `km`: ceil(gbps / slot_gbps) + guard.
SlotRequirement slots_required(const ModulationTable& table, double gbps, double km);

// Bitwise conjunction of the slot grids along the path.
SlotGrid path_availability(const SubstrateNetwork& net, const SubstratePath& path);

// Longest run of slots free on every link of the path.
int max_window(const SubstrateNetwork& net, const SubstratePath& path);

// Start indices of windows of `width` free on every link of the path.
std::vector<int> candidate_starts(const SubstrateNetwork& net, const SubstratePath& path, int width);

// Number of free slots adjacent to the window, summed over the path's links.
// A window touching either edge of the grid counts only its inner neighbour.
int fsw_cost(const SubstrateNetwork& net, const SubstratePath& path, int start, int width);

enum class FsPolicy { kLeastCost, kFirstFit };
std::string_view to_string(FsPolicy policy);

std::optional<int> choose_fsw(const SubstrateNetwork& net, const SubstratePath& path, int width,
                              FsPolicy policy);

struct SlotWindow {
  SubstratePath path;
  int start = 0;
  int width = 0;
  ModulationFormat modulation;
  double carried_gbps = 0.0;  // slot_gbps * (width - guard)
};

AllocationHandle allocate_window(SubstrateNetwork& net, const SlotWindow& window);
void release_window(SubstrateNetwork& net, AllocationHandle handle);

}  // namespace eonsurv
