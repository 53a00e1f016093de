#include <gtest/gtest.h>

#include "eonsurv/errors.hpp"
#include "eonsurv/fixtures.hpp"
#include "eonsurv/spectrum.hpp"
#include "test_support.hpp"

using namespace eonsurv;
using testing_support::brute_fsw_cost;
using testing_support::brute_slots;
using testing_support::brute_window_free;

TEST(Spectrum, SelectModulation) {
  auto t = ModulationTable::defaults();
  EXPECT_EQ(select_modulation(t, 500).name, "16QAM");
  EXPECT_EQ(select_modulation(t, 1500).name, "QPSK");
  EXPECT_EQ(select_modulation(t, 1000).name, "8QAM");
  EXPECT_EQ(select_modulation(t, 4000).name, "BPSK");
  EXPECT_THROW(select_modulation(t, 4001), NoFeasibleModulation);
}

TEST(Spectrum, SlotsRequiredHandValues) {
  auto t = ModulationTable::defaults();
  auto a = slots_required(t, 100, 800);
  EXPECT_EQ(a.modulation.name, "8QAM");
  EXPECT_EQ(a.slots, 4);
  EXPECT_DOUBLE_EQ(a.slot_gbps, 37.5);
  auto b = slots_required(t, 250, 4000);
  EXPECT_EQ(b.modulation.name, "BPSK");
  EXPECT_EQ(b.slots, 21);
  EXPECT_DOUBLE_EQ(b.slot_gbps, 12.5);
  auto c = slots_required(t, 25, 400);
  EXPECT_EQ(c.modulation.name, "16QAM");
  EXPECT_EQ(c.slots, 2);
  EXPECT_DOUBLE_EQ(c.slot_gbps, 50);
  EXPECT_EQ(slots_required(t, 112.5, 900).slots, 4);
  EXPECT_EQ(slots_required(t, 87.5, 1800).slots, 5);
  EXPECT_EQ(slots_required(t, 112.5, 2100).slots, 10);
  EXPECT_EQ(slots_required(t, 50, 800).slots, 3);
  EXPECT_EQ(slots_required(t, 50, 1800).slots, 3);
}

TEST(Spectrum, SlotsRequiredMatchesOracle) {
  auto t = ModulationTable::defaults();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> gbps(0.1, 400), km(1, 4000);
  for (int i = 0; i < 10000; ++i) {
    double b = gbps(rng), d = km(rng);
    if (i % 3 == 0) b = std::max(1.0, std::round(b));
    auto r = slots_required(t, b, d);
    EXPECT_EQ(r.slots, brute_slots(r.slot_gbps, t.guard_slots, b));
    EXPECT_DOUBLE_EQ(r.slot_gbps, t.slot_width_ghz * select_modulation(t, d).efficiency);
  }
}

TEST(Spectrum, CanonicalFixture) {
  auto f = canonical_fsw_fixture();
  EXPECT_EQ(max_window(f.net, f.path), 4);
  EXPECT_EQ(candidate_starts(f.net, f.path, 2), (std::vector<int>{0, 4, 8, 9, 10}));
  std::vector<int> expect{0, 1, 3, 4, 2};
  std::vector<int> starts{0, 4, 8, 9, 10};
  for (std::size_t i = 0; i < starts.size(); ++i) {
    EXPECT_EQ(fsw_cost(f.net, f.path, starts[i], 2), expect[i]);
    EXPECT_EQ(brute_fsw_cost(f.net, f.path, starts[i], 2), expect[i]);
  }
  EXPECT_EQ(choose_fsw(f.net, f.path, 2, FsPolicy::kLeastCost), 0);
  EXPECT_EQ(choose_fsw(f.net, f.path, 2, FsPolicy::kFirstFit), 0);
  EXPECT_FALSE(choose_fsw(f.net, f.path, 5, FsPolicy::kLeastCost));
  EXPECT_FALSE(describe_fixture(f, 2).empty());
}

TEST(Spectrum, SingleLinkFixture) {
  auto f = single_link_fixture();
  EXPECT_EQ(candidate_starts(f.net, f.path, 2), (std::vector<int>{0, 1, 5, 9, 10}));
  EXPECT_EQ(choose_fsw(f.net, f.path, 2, FsPolicy::kLeastCost), 5);
  EXPECT_EQ(fsw_cost(f.net, f.path, 5, 2), 0);
  EXPECT_EQ(choose_fsw(f.net, f.path, 2, FsPolicy::kFirstFit), 0);
  EXPECT_EQ(fsw_cost(f.net, f.path, 0, 2), 1);
}

TEST(Spectrum, FreeAndBusyGrids) {
  auto net = testing_support::make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, CapacityMode::kSlotted, 320);
  auto path = path_from_nodes(net, {0, 1, 2, 3});
  EXPECT_EQ(max_window(net, path), 320);
  EXPECT_EQ(fsw_cost(net, path, 100, 7), 6);
  EXPECT_EQ(fsw_cost(net, path, 0, 7), 3);
  net.allocate_slots(std::vector<int>{1}, 0, 320);
  EXPECT_EQ(max_window(net, path), 0);
  EXPECT_TRUE(candidate_starts(net, path, 1).empty());

  auto one = testing_support::make_graph(2, {{0, 1, 1}});
  one.allocate_slots(std::vector<int>{0}, 2, 1);
  EXPECT_EQ(fsw_cost(one, path_from_nodes(one, {0, 1}), 0, 2), 0);
}

TEST(Spectrum, AllocateRelease) {
  auto f = canonical_fsw_fixture();
  auto before = f.net;
  SlotWindow w{f.path, 8, 2, ModulationTable::defaults().formats[0], 12.5};
  auto h = allocate_window(f.net, w);
  EXPECT_EQ(max_window(f.net, f.path), 2);
  EXPECT_THROW(allocate_window(f.net, w), Overlap);
  SlotWindow busy{f.path, 2, 2, ModulationTable::defaults().formats[0], 12.5};
  EXPECT_THROW(allocate_window(f.net, busy), Overlap);
  release_window(f.net, h);
  EXPECT_TRUE(f.net.same_resources(before));
  EXPECT_THROW(release_window(f.net, h), DoubleRelease);
  EXPECT_THROW(release_window(f.net, AllocationHandle{999}), DoubleRelease);
}

TEST(Spectrum, CostOracleOnRandomGrids) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    int slots = 4 + static_cast<int>(rng() % 61);
    int hops = 1 + static_cast<int>(rng() % 4);
    std::vector<std::tuple<int, int, double>> links;
    for (int h = 0; h < hops; ++h) links.emplace_back(h, h + 1, 1.0);
    auto net = testing_support::make_graph(hops + 1, links, CapacityMode::kSlotted, slots);
    std::bernoulli_distribution busy(0.25);
    for (int l = 0; l < hops; ++l)
      for (int i = 0; i < slots; ++i)
        if (busy(rng)) net.allocate_slots(std::vector<int>{l}, i, 1);
    std::vector<int> nodes;
    for (int i = 0; i <= hops; ++i) nodes.push_back(i);
    auto path = path_from_nodes(net, nodes);
    int longest = 0;
    for (int width = 1; width <= 5; ++width) {
      auto starts = candidate_starts(net, path, width);
      std::vector<int> expect;
      for (int s = 0; s + width <= slots; ++s)
        if (brute_window_free(net, path, s, width)) expect.push_back(s);
      EXPECT_EQ(starts, expect);
      if (!expect.empty()) longest = width;
      std::optional<int> best;
      int best_cost = 1 << 30;
      for (int s : starts) {
        int c = brute_fsw_cost(net, path, s, width);
        EXPECT_EQ(fsw_cost(net, path, s, width), c);
        if (c < best_cost) best_cost = c, best = s;
      }
      EXPECT_EQ(choose_fsw(net, path, width, FsPolicy::kLeastCost), best);
      EXPECT_EQ(choose_fsw(net, path, width, FsPolicy::kFirstFit),
                expect.empty() ? std::nullopt : std::optional<int>(expect.front()));
    }
    if (longest < 5) EXPECT_EQ(max_window(net, path), longest);
  }
}
