#pragma once

#include "eonsurv/evacuation.hpp"

namespace eonsurv::testing_support {

// Adds a VN hosted on `hosts` whose links follow the given node sequences.
inline DeployedVN deploy_fixed(SubstrateNetwork& net, int id, const std::vector<int>& hosts,
                               const std::vector<std::pair<int, int>>& vlinks,
                               const std::vector<std::vector<int>>& paths, double gbps) {
  DeployedVN d;
  d.vn.id = id;
  for (std::size_t i = 0; i < hosts.size(); ++i) d.vn.nodes.push_back({static_cast<int>(i), 1});
  d.host = hosts;
  for (std::size_t i = 0; i < vlinks.size(); ++i) {
    d.vn.links.push_back({static_cast<int>(i), vlinks[i].first, vlinks[i].second, gbps});
    DeployedLink l;
    l.vlink = static_cast<int>(i);
    l.path = path_from_nodes(net, paths[i]);
    l.gbps = gbps;
    l.handle = net.reserve_bandwidth(l.path.links, gbps);
    d.links.push_back(l);
  }
  return d;
}

// Zone {0, 1}; VN a@0, b@1, c@2 with links a-c and b-c. Reconfiguration
// moves a to 3 and b to 4; the migration paths 0-3 and 1-4 carry 8 Gbps each.
struct HandExample {
  SubstrateNetwork net{"hand", CapacityMode::kScalar};
  std::vector<DeployedVN> deployed;
  DisasterRiskZone drz{0, 1};
  EvacuationOptions options;
};

inline HandExample hand_example() {
  HandExample h;
  for (int i = 0; i < 5; ++i) h.net.add_node(10);
  h.net.add_link(0, 3, 1, 8);
  h.net.add_link(1, 4, 1, 8);
  h.net.add_link(3, 2, 1, 8);
  h.net.add_link(4, 2, 1, 8);
  h.net.add_link(0, 2, 5, 8);
  h.net.add_link(1, 2, 5, 8);
  h.deployed.push_back(deploy_fixed(h.net, 0, {0, 1, 2}, {{0, 2}, {1, 2}}, {{0, 2}, {1, 2}}, 1.0));
  h.options.reachability_gbps = 0.0;
  h.options.profiles[0] = VmProfile{{64.0, 48.0}, {1.0, 0.6}};
  return h;
}

}  // namespace eonsurv::testing_support
