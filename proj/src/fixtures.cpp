#include "eonsurv/fixtures.hpp"

#include <initializer_list>

#include "eonsurv/spectrum.hpp"

namespace eonsurv {

namespace {

void mark(SubstrateNetwork& net, int link, std::initializer_list<int> busy) {
  std::vector<int> one{link};
  for (int s : busy) net.allocate_slots(one, s, 1);
}

}  // namespace

FswFixture canonical_fsw_fixture() {
  SubstrateNetwork net("fsw-fixture", CapacityMode::kSlotted);
  for (int i = 0; i < 3; ++i) net.add_node(100);
  int first = net.add_link(0, 1, 100.0, 12);
  int second = net.add_link(1, 2, 100.0, 12);
  mark(net, first, {2, 6});
  mark(net, second, {2, 3, 6, 7});
  auto path = path_from_nodes(net, {0, 1, 2});
  return {std::move(net), std::move(path)};
}

FswFixture single_link_fixture() {
  SubstrateNetwork net("single-link-fixture", CapacityMode::kSlotted);
  net.add_node(100);
  net.add_node(100);
  int link = net.add_link(0, 1, 100.0, 12);
  mark(net, link, {3, 4, 7, 8});
  auto path = path_from_nodes(net, {0, 1});
  return {std::move(net), std::move(path)};
}

std::string describe_fixture(const FswFixture& fixture, int width) {
  std::string out = "fixture " + fixture.net.name() + "\n";
  for (int l : fixture.path.links) {
    const auto& link = fixture.net.link(l);
    out += "link " + std::to_string(link.u) + "-" + std::to_string(link.v) + " " + link.slots.to_string() + "\n";
  }
  out += "width " + std::to_string(width) + "\nstart,cost\n";
  for (int s : candidate_starts(fixture.net, fixture.path, width))
    out += std::to_string(s) + "," + std::to_string(fsw_cost(fixture.net, fixture.path, s, width)) + "\n";
  for (auto policy : {FsPolicy::kLeastCost, FsPolicy::kFirstFit}) {
    auto chosen = choose_fsw(fixture.net, fixture.path, width, policy);
    out += std::string(to_string(policy)) + " " + (chosen ? std::to_string(*chosen) : "none") + "\n";
  }
  return out;
}

}  // namespace eonsurv
