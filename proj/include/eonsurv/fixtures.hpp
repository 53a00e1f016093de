#pragma once

#include <string>

#include "eonsurv/routing.hpp"
#include "eonsurv/topology.hpp"

namespace eonsurv {

// Three nodes in a line, 12 slots per link. The first link is busy at
// {2, 6} and the second at {2, 3, 6, 7}; with a two-slot window the
// candidate starts 0, 4, 8, 9, 10 cost 0, 1, 3, 4, 2.
struct FswFixture {
  SubstrateNetwork net;
  SubstratePath path;
};
FswFixture canonical_fsw_fixture();

// One 12-slot link free at {0, 1, 2, 5, 6, 9, 10, 11}.
FswFixture single_link_fixture();

// Human-readable dump of a fixture: per-link bitmaps and, for `width`, every
// candidate start with its cost.
std::string describe_fixture(const FswFixture& fixture, int width);

}  // namespace eonsurv
