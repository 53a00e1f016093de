#include "eonsurv/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "eonsurv/errors.hpp"

namespace eonsurv {

ModulationTable ModulationTable::defaults() {
  ModulationTable t;
  t.formats = {{"BPSK", 1.0, 4000.0}, {"QPSK", 2.0, 2000.0}, {"8QAM", 3.0, 1000.0}, {"16QAM", 4.0, 500.0}};
  return t;
}

void ModulationTable::validate() const {
  if (formats.empty()) throw ConfigError("modulation table is empty");
  if (!(slot_width_ghz > 0.0)) throw ConfigError("slot width must be positive");
  if (guard_slots < 0) throw ConfigError("guard slots must be non-negative");
  for (std::size_t i = 0; i < formats.size(); ++i) {
    if (!(formats[i].efficiency > 0.0) || !(formats[i].reach_km > 0.0))
      throw ConfigError("modulation efficiency and reach must be positive");
    if (i > 0 && (formats[i].efficiency <= formats[i - 1].efficiency ||
                  formats[i].reach_km >= formats[i - 1].reach_km))
      throw ConfigError("modulation formats must increase in efficiency and decrease in reach");
  }
}

const ModulationFormat& select_modulation(const ModulationTable& table, double km) {
  for (auto it = table.formats.rbegin(); it != table.formats.rend(); ++it) {
    if (km <= it->reach_km) return *it;
  }
  throw NoFeasibleModulation(km);
}

SlotRequirement slots_required(const ModulationTable& table, double gbps, double km) {
  if (!(gbps > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const auto& mod = select_modulation(table, km);
  double slot_gbps = table.slot_width_ghz * mod.efficiency;
  // Smallest n with slot_gbps * n >= gbps, evaluated the same way callers
  // compute carried bandwidth so the two never disagree by rounding.
  auto n = static_cast<long long>(std::ceil(gbps / slot_gbps));
  while (n > 1 && slot_gbps * static_cast<double>(n - 1) >= gbps) --n;
  while (slot_gbps * static_cast<double>(n) < gbps) ++n;
  return {mod, static_cast<int>(n) + table.guard_slots, slot_gbps};
}

SlotGrid path_availability(const SubstrateNetwork& net, const SubstratePath& path) {
  if (path.links.empty()) throw std::invalid_argument("path has no links");
  SlotGrid avail = net.link(path.links.front()).slots;
  for (std::size_t i = 1; i < path.links.size(); ++i) avail = avail.intersect(net.link(path.links[i]).slots);
  return avail;
}

int max_window(const SubstrateNetwork& net, const SubstratePath& path) {
  return path_availability(net, path).longest_free_run();
}

std::vector<int> candidate_starts(const SubstrateNetwork& net, const SubstratePath& path, int width) {
  std::vector<int> starts;
  if (width <= 0) return starts;
  auto avail = path_availability(net, path);
  int run = 0;
  for (int i = 0; i < avail.size(); ++i) {
    run = avail.is_free(i) ? run + 1 : 0;
    if (run >= width) starts.push_back(i - width + 1);
  }
  return starts;
}

namespace {

int boundary_cost(const SubstrateNetwork& net, const SubstratePath& path, int start, int width) {
  int cost = 0;
  for (int l : path.links) {
    const auto& grid = net.link(l).slots;
    // is_free() reports out-of-range slots as unavailable, which yields the
    // one-sided sums at either edge of the grid.
    cost += grid.is_free(start - 1) ? 1 : 0;
    cost += grid.is_free(start + width) ? 1 : 0;
  }
  return cost;
}

}  // namespace

int fsw_cost(const SubstrateNetwork& net, const SubstratePath& path, int start, int width) {
  if (width <= 0) throw NotACandidate("window width must be positive");
  for (int l : path.links) {
    if (!net.link(l).slots.range_free(start, width))
      throw NotACandidate("window at " + std::to_string(start) + " is not free on link " + std::to_string(l));
  }
  return boundary_cost(net, path, start, width);
}

std::string_view to_string(FsPolicy policy) {
  return policy == FsPolicy::kLeastCost ? "least_cost" : "first_fit";
}

std::optional<int> choose_fsw(const SubstrateNetwork& net, const SubstratePath& path, int width,
                              FsPolicy policy) {
  if (width < 1) throw std::invalid_argument("window width must be at least 1");
  auto starts = candidate_starts(net, path, width);
  if (starts.empty()) return std::nullopt;
  if (policy == FsPolicy::kFirstFit) return starts.front();
  int best = starts.front();
  int best_cost = boundary_cost(net, path, best, width);
  for (std::size_t i = 1; i < starts.size() && best_cost > 0; ++i) {
    int c = boundary_cost(net, path, starts[i], width);
    if (c < best_cost) {
      best = starts[i];
      best_cost = c;
    }
  }
  return best;
}

AllocationHandle allocate_window(SubstrateNetwork& net, const SlotWindow& window) {
  return net.allocate_slots(window.path.links, window.start, window.width);
}

void release_window(SubstrateNetwork& net, AllocationHandle handle) { net.release_slots(handle); }

}  // namespace eonsurv
