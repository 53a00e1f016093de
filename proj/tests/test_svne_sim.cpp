#include <gtest/gtest.h>

#include "eonsurv/svne_sim.hpp"
#include "test_support.hpp"

using namespace eonsurv;

namespace {

CampaignCell small_cell(Scheme scheme, double load, std::uint64_t seed, int requests = 600) {
  CampaignCell cell;
  cell.scheme = SchemeConfig::make(scheme);
  cell.load_erlang = load;
  cell.seed = seed;
  cell.workload.request_count = requests;
  cell.workload.warmup_count = requests / 10;
  return cell;
}

}  // namespace

TEST(Metrics, ComputeExamples) {
  MetricsAccumulator acc;
  acc.accepted = 8;
  acc.blocked = 2;
  acc.total_slots = 80;
  acc.backup_slots = 40;
  acc.link_slots = 80;
  acc.guard_link_slots = 16;
  acc.working_paths = 8;
  acc.accepted_vlinks = 8;
  auto m = compute_metrics(acc);
  EXPECT_DOUBLE_EQ(m.vbr, 0.2);
  EXPECT_DOUBLE_EQ(*m.abr, 0.5);
  EXPECT_DOUBLE_EQ(*m.agc, 2.0);
  EXPECT_DOUBLE_EQ(*m.asc, 10.0);
  EXPECT_DOUBLE_EQ(*m.avg_working_paths, 1.0);

  MetricsAccumulator none;
  none.blocked = 5;
  auto b = compute_metrics(none);
  EXPECT_DOUBLE_EQ(b.vbr, 1.0);
  EXPECT_FALSE(b.abr);
  EXPECT_FALSE(b.agc);
  EXPECT_FALSE(b.asc);
  EXPECT_FALSE(b.avg_working_paths);
  EXPECT_THROW(compute_metrics(MetricsAccumulator{}), std::invalid_argument);
}

// One VN, one virtual link: 4-slot working window and 4-slot backup, each on
// a single-hop path with one guard slot.
TEST(Metrics, SingleVnFromRecord) {
  SubstrateNetwork two("two", CapacityMode::kSlotted);
  two.add_node(10);
  two.add_node(10);
  two.add_node(10);
  two.add_link(0, 1, 800, 12);
  two.add_link(1, 2, 900, 12);
  two.add_link(0, 2, 900, 12);
  EmbeddingRecord rec;
  LinkEmbedding le;
  le.demand_gbps = 100;
  auto fmt = ModulationTable::defaults().formats[2];
  le.working.push_back({path_from_nodes(two, {0, 1}), 0, 4, fmt, 112.5});
  le.backup = {path_from_nodes(two, {1, 2}), 0, 4, fmt, 112.5};
  rec.links.push_back(le);
  MetricsAccumulator acc;
  acc.record_accept(rec, 1);
  auto m = compute_metrics(acc);
  EXPECT_DOUBLE_EQ(m.vbr, 0.0);
  EXPECT_DOUBLE_EQ(*m.abr, 0.5);
  EXPECT_DOUBLE_EQ(*m.agc, 2.0);
  EXPECT_DOUBLE_EQ(*m.asc, 8.0);
}

TEST(Campaign, ZeroCpuBlocksEverything) {
  auto net = builtin_topology("usnet", CapacityMode::kSlotted, TopologyParams{0, 320, 0});
  auto r = run_svne_campaign(net, small_cell(Scheme::kApss, 40, 1, 300));
  EXPECT_DOUBLE_EQ(r.metrics.vbr, 1.0);
  EXPECT_EQ(r.counters.accepted, 0);
  EXPECT_TRUE(r.restored);
}

TEST(Campaign, DeterministicAndRestored) {
  auto net = builtin_topology("usnet", CapacityMode::kSlotted);
  for (auto s : {Scheme::kApss, Scheme::kApc, Scheme::kApf, Scheme::kMpf, Scheme::kMdf}) {
    auto a = run_svne_campaign(net, small_cell(s, 120, 3));
    auto b = run_svne_campaign(net, small_cell(s, 120, 3));
    EXPECT_EQ(svne_csv_row(a), svne_csv_row(b));
    EXPECT_EQ(a.counters.accepted, b.counters.accepted);
    EXPECT_EQ(a.counters.total_slots, b.counters.total_slots);
    EXPECT_TRUE(a.restored);
    EXPECT_EQ(a.counters.counted(), 540);
  }
}

TEST(Campaign, MdfUsesOneWorkingPath) {
  auto net = builtin_topology("usnet", CapacityMode::kSlotted);
  auto r = run_svne_campaign(net, small_cell(Scheme::kMdf, 60, 2));
  ASSERT_TRUE(r.metrics.avg_working_paths);
  EXPECT_DOUBLE_EQ(*r.metrics.avg_working_paths, 1.0);
  ASSERT_TRUE(r.metrics.abr);
  EXPECT_NEAR(*r.metrics.abr, 0.5, 0.1);
}

TEST(Campaign, TinyLoadRarelyBlocks) {
  auto net = builtin_topology("usnet", CapacityMode::kSlotted);
  CampaignCell cell;
  cell.scheme = SchemeConfig::make(Scheme::kApss);
  cell.load_erlang = 1.0;
  auto r = run_svne_campaign(net, cell);
  EXPECT_EQ(r.counters.counted(), 10000);
  EXPECT_LT(r.metrics.vbr, 0.01);
}

TEST(Campaign, HooksSeeProtectedEmbeddings) {
  auto net = builtin_topology("usnet", CapacityMode::kSlotted);
  int accepts = 0, violations = 0;
  CampaignHooks hooks;
  hooks.on_accept = [&](const SubstrateNetwork& n, const VirtualNetworkRequest& vnr, const EmbeddingRecord& rec) {
    ++accepts;
    EXPECT_EQ(rec.links.size(), vnr.links.size());
    for (const auto& le : rec.links)
      if (testing_support::protection_margin(le, n.link_count()) < -1e-9) ++violations;
  };
  run_svne_campaign(net, small_cell(Scheme::kApss, 80, 4, 400), hooks);
  EXPECT_GT(accepts, 0);
  EXPECT_EQ(violations, 0);
}

TEST(Campaign, GridOrder) {
  auto net = builtin_topology("nsfnet", CapacityMode::kSlotted);
  WorkloadConfig wc;
  wc.request_count = 100;
  wc.warmup_count = 10;
  std::vector<SchemeConfig> schemes{SchemeConfig::make(Scheme::kApss), SchemeConfig::make(Scheme::kMdf)};
  auto rows = run_svne_grid(net, schemes, {20, 40}, {1, 2}, wc, 2);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].scheme, Scheme::kApss);
  EXPECT_EQ(rows[7].scheme, Scheme::kMdf);
  EXPECT_DOUBLE_EQ(rows[2].load_erlang, 40);
  EXPECT_EQ(rows[3].seed, 2u);
  auto again = run_svne_grid(net, schemes, {20, 40}, {1, 2}, wc, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(svne_csv_row(rows[i]), svne_csv_row(again[i]));
}
