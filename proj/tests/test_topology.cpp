#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "eonsurv/errors.hpp"
#include "eonsurv/topology.hpp"
#include "test_support.hpp"

using namespace eonsurv;
using testing_support::make_graph;

namespace {

const char* kTriangle = R"(# triangle
topology tri slotted
[nodes]
0 10
1 20
2 30
[links]
0 0 1 1.5 8
1 1 2 1 8
2 0 2 3 8
)";

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(EONSURV_DATA_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Topology, BuiltinCounts) {
  auto us = builtin_topology("usnet", CapacityMode::kSlotted, TopologyParams{300, 320, 0});
  EXPECT_EQ(us.node_count(), 24);
  EXPECT_EQ(us.link_count(), 43);
  for (const auto& l : us.links()) EXPECT_EQ(l.slots.free_count(), 320);
  for (const auto& n : us.nodes()) EXPECT_EQ(n.cpu_available, 300);

  auto ns = builtin_topology("nsfnet", CapacityMode::kScalar, TopologyParams{300, 320, 65});
  EXPECT_EQ(ns.node_count(), 14);
  EXPECT_EQ(ns.link_count(), 22);
  for (const auto& l : ns.links()) EXPECT_DOUBLE_EQ(l.residual_gbps, 65.0);

  auto us_scalar = builtin_topology(BuiltinTopology::kUsnet, CapacityMode::kScalar, TopologyParams{300, 320, 130});
  EXPECT_EQ(us_scalar.node_count(), 24);
  EXPECT_EQ(us_scalar.link_count(), 43);
  us.validate();
  ns.validate();
}

TEST(Topology, LoadTriangle) {
  auto net = load_topology(kTriangle);
  EXPECT_EQ(net.node_count(), 3);
  EXPECT_EQ(net.link_count(), 3);
  EXPECT_EQ(net.node(2).cpu_capacity, 30);
  EXPECT_DOUBLE_EQ(net.link(0).length_km, 1.5);
  EXPECT_EQ(net.link(0).slots.size(), 8);
  EXPECT_EQ(serialize_topology(net), normalize_topology_text(kTriangle));
}

TEST(Topology, DuplicateNodeNamesLine) {
  std::string text = "topology t slotted\n[nodes]\n0 1\n1 1\n1 2\n[links]\n0 0 1 1 4\n";
  try {
    load_topology(text);
    FAIL() << "expected TopologyError";
  } catch (const TopologyError& e) {
    EXPECT_EQ(e.line(), 5);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

TEST(Topology, RejectsMalformed) {
  EXPECT_THROW(load_topology("[nodes]\n0 1\n"), TopologyError);
  EXPECT_THROW(load_topology("topology t slotted\n[nodes]\n0 1\n1 1\n2 1\n[links]\n0 0 1 1 4\n"), TopologyError);
  EXPECT_THROW(load_topology("topology t slotted\n[nodes]\n0 1\n1 1\n[links]\n0 0 0 1 4\n"), TopologyError);
  EXPECT_THROW(load_topology("topology t slotted\n[nodes]\n0 1\n1 x\n"), TopologyError);
}

TEST(Topology, DataFilesRoundTrip) {
  for (const char* name : {"usnet.topo", "nsfnet.topo"}) {
    auto text = read_data(name);
    ASSERT_FALSE(text.empty()) << name;
    auto net = load_topology(text);
    net.validate();
    EXPECT_EQ(serialize_topology(net), normalize_topology_text(text)) << name;
  }
  auto us = load_topology(read_data("usnet.topo"));
  auto ns = load_topology(read_data("nsfnet.topo"));
  EXPECT_EQ(us.node_count(), 24);
  EXPECT_EQ(us.link_count(), 43);
  EXPECT_EQ(ns.node_count(), 14);
  EXPECT_EQ(ns.link_count(), 22);
  EXPECT_EQ(ns.mode(), CapacityMode::kScalar);
}

TEST(Topology, HopDistanceExamples) {
  auto tri = load_topology(kTriangle);
  EXPECT_EQ(hop_distance(tri, 0, 0), 0);
  EXPECT_EQ(hop_distance(tri, 0, 2), 1);
  auto cycle = make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  EXPECT_EQ(hop_distance(cycle, 0, 2), 2);
}

TEST(Topology, HopDistanceMatchesBruteForce) {
  for (const char* name : {"usnet", "nsfnet"}) {
    auto net = builtin_topology(name, CapacityMode::kSlotted);
    std::vector<std::vector<int>> d;
    for (int s = 0; s < net.node_count(); ++s) d.push_back(hop_distances_from(net, s));
    for (int u = 0; u < net.node_count(); ++u) {
      for (int v = 0; v < net.node_count(); ++v) {
        EXPECT_EQ(d[u][v], d[v][u]);
        EXPECT_EQ(d[u][v], hop_distance(net, u, v));
        for (int w = 0; w < net.node_count(); ++w) EXPECT_LE(d[u][w], d[u][v] + d[v][w]);
      }
    }
    if (std::string(name) == "nsfnet") {
      for (int u = 0; u < net.node_count(); ++u)
        for (int v = 0; v < net.node_count(); ++v)
          EXPECT_EQ(d[u][v], static_cast<int>(testing_support::brute_shortest(net, u, v, PathMetric::kHops)));
    }
  }
}

TEST(Topology, ValidateRejectsDisconnected) {
  auto net = make_graph(4, {{0, 1, 1}, {2, 3, 1}});
  EXPECT_THROW(net.validate(), TopologyError);
  EXPECT_THROW(SubstrateNetwork().validate(), TopologyError);
}

TEST(Topology, CpuLedger) {
  auto net = make_graph(2, {{0, 1, 1}});
  auto h = net.reserve_cpu(0, 60);
  EXPECT_EQ(net.node(0).cpu_available, 40);
  EXPECT_THROW(net.reserve_cpu(0, 41), Overlap);
  net.release_cpu(h);
  EXPECT_EQ(net.node(0).cpu_available, 100);
  EXPECT_THROW(net.release_cpu(h), DoubleRelease);
  EXPECT_EQ(net.outstanding_count(), 0u);
}

TEST(Topology, ScalarReserveReleaseBitExact) {
  auto net = make_graph(3, {{0, 1, 1}, {1, 2, 1}}, CapacityMode::kScalar, 65.0);
  auto before = net;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> gbps(0.01, 3.0);
  std::vector<AllocationHandle> handles;
  std::vector<int> both{0, 1};
  for (int i = 0; i < 20; ++i) handles.push_back(net.reserve_bandwidth(both, gbps(rng)));
  net.resize_bandwidth(handles[3], 0.1);
  EXPECT_THROW(net.reserve_bandwidth(both, 1000.0), Overlap);
  std::shuffle(handles.begin(), handles.end(), rng);
  for (auto h : handles) net.release_bandwidth(h);
  EXPECT_TRUE(net.same_resources(before));
  for (int l = 0; l < 2; ++l) EXPECT_EQ(net.link(l).residual_gbps, 65.0);
  EXPECT_THROW(net.release_bandwidth(handles[0]), DoubleRelease);
}

TEST(Topology, SlotLedger) {
  auto net = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
  std::vector<int> both{0, 1};
  auto h = net.allocate_slots(both, 2, 3);
  EXPECT_EQ(net.link(0).slots.to_string(), "..###.......");
  EXPECT_THROW(net.allocate_slots(std::vector<int>{1}, 4, 2), Overlap);
  net.release_slots(h);
  EXPECT_EQ(net.link(1).slots.free_count(), 12);
  EXPECT_THROW(net.release_slots(h), DoubleRelease);
}

TEST(SlotGrid, StringRoundTripAndRuns) {
  auto g = SlotGrid::from_string("..#...#.....");
  EXPECT_EQ(g.to_string(), "..#...#.....");
  EXPECT_EQ(g.longest_free_run(), 5);
  EXPECT_EQ(g.free_count(), 10);
  auto h = SlotGrid::from_string("##..........");
  EXPECT_EQ(g.intersect(h).to_string(), "###...#.....");
  SlotGrid big(320);
  big.mark_busy(63, 2);
  EXPECT_FALSE(big.is_free(64));
  EXPECT_TRUE(big.range_free(65, 255));
  EXPECT_EQ(big.longest_free_run(), 255);
}
