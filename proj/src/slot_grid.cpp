#include "eonsurv/slot_grid.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace eonsurv {

SlotGrid::SlotGrid(int slot_count) : size_(slot_count) {
  if (slot_count < 0) throw std::invalid_argument("negative slot count");
  words_.assign((slot_count + 63) / 64, ~std::uint64_t{0});
  if (slot_count % 64 != 0) words_.back() = (std::uint64_t{1} << (slot_count % 64)) - 1;
}

bool SlotGrid::is_free(int slot) const {
  if (slot < 0 || slot >= size_) return false;
  return (words_[slot / 64] >> (slot % 64)) & 1u;
}

bool SlotGrid::range_free(int start, int width) const {
  if (start < 0 || width < 0 || start + width > size_) return false;
  for (int i = start; i < start + width; ++i) {
    if (!is_free(i)) return false;
  }
  return true;
}

int SlotGrid::free_count() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

int SlotGrid::longest_free_run() const {
  int best = 0, run = 0;
  for (int i = 0; i < size_; ++i) {
    run = is_free(i) ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

void SlotGrid::mark_busy(int start, int width) {
  for (int i = start; i < start + width; ++i) words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

void SlotGrid::mark_free(int start, int width) {
  for (int i = start; i < start + width; ++i) words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

SlotGrid SlotGrid::intersect(const SlotGrid& other) const {
  if (other.size_ != size_) throw std::invalid_argument("slot grids differ in size");
  SlotGrid out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= other.words_[w];
  return out;
}

std::string SlotGrid::to_string() const {
  std::string s(size_, '#');
  for (int i = 0; i < size_; ++i) {
    if (is_free(i)) s[i] = '.';
  }
  return s;
}

SlotGrid SlotGrid::from_string(const std::string& pattern) {
  SlotGrid g(static_cast<int>(pattern.size()));
  for (int i = 0; i < g.size_; ++i) {
    if (pattern[i] == '#') {
      g.mark_busy(i, 1);
    } else if (pattern[i] != '.') {
      throw std::invalid_argument("slot pattern accepts only '.' and '#'");
    }
  }
  return g;
}

}  // namespace eonsurv
