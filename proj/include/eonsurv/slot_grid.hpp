#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eonsurv {

// Per-link frequency-slot availability. Bit i set means slot i is free.
class SlotGrid {
 public:
  SlotGrid() = default;
  explicit SlotGrid(int slot_count);

  int size() const { return size_; }
  bool is_free(int slot) const;
  bool range_free(int start, int width) const;
  int free_count() const;
  int busy_count() const { return size_ - free_count(); }

  // Longest run of free slots.
  int longest_free_run() const;

  void mark_busy(int start, int width);
  void mark_free(int start, int width);

  // Slots free here and in `other`. Sizes must match.
  SlotGrid intersect(const SlotGrid& other) const;

  // '.' for free, '#' for busy, slot 0 first.
  std::string to_string() const;
  static SlotGrid from_string(const std::string& pattern);

  friend bool operator==(const SlotGrid&, const SlotGrid&) = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace eonsurv
