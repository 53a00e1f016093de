#include "eonsurv/vn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eonsurv/errors.hpp"
#include "eonsurv/format.hpp"

namespace eonsurv {

void VirtualNetworkRequest::validate() const {
  if (nodes.empty()) throw std::invalid_argument("VN has no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<int>(i)) throw std::invalid_argument("virtual node ids must be dense");
    if (nodes[i].cpu <= 0) throw std::invalid_argument("virtual node demand must be positive");
  }
  std::set<std::pair<int, int>> pairs;
  for (const auto& l : links) {
    if (l.a == l.b) throw std::invalid_argument("virtual self-loop");
    if (l.a < 0 || l.b < 0 || l.a >= static_cast<int>(nodes.size()) || l.b >= static_cast<int>(nodes.size()))
      throw std::invalid_argument("virtual link endpoint out of range");
    if (!(l.gbps > 0.0)) throw std::invalid_argument("virtual link demand must be positive");
    if (!pairs.insert(std::minmax(l.a, l.b)).second) throw std::invalid_argument("parallel virtual links");
  }
}

void WorkloadConfig::validate() const {
  if (min_nodes < 1 || max_nodes < min_nodes) throw ConfigError("invalid VN node-count range");
  if (link_probability < 0.0 || link_probability > 1.0) throw ConfigError("link probability outside [0,1]");
  if (min_cpu < 1 || max_cpu < min_cpu) throw ConfigError("invalid CPU demand range");
  if (!(min_gbps > 0.0) || max_gbps < min_gbps) throw ConfigError("invalid bandwidth demand range");
  if (gbps_step < 0.0) throw ConfigError("bandwidth step must be non-negative");
  if (gbps_step > 0.0 && std::ceil(min_gbps / gbps_step - 1e-9) > std::floor(max_gbps / gbps_step + 1e-9))
    throw ConfigError("bandwidth range holds no multiple of the step");
  if (!(arrival_rate > 0.0)) throw ConfigError("arrival rate must be positive");
  if (!(mean_holding_s > 0.0)) throw ConfigError("mean holding time must be positive");
  if (request_count < 1) throw ConfigError("request count must be positive");
  if (warmup_count < 0 || warmup_count >= request_count)
    throw ConfigError("warm-up count must be in [0, request count)");
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x65u};
  return std::mt19937_64(seq);
}

WorkloadStreams::WorkloadStreams(std::uint64_t seed)
    : structure(make_stream(seed, 1)),
      demands(make_stream(seed, 2)),
      arrivals(make_stream(seed, 3)),
      holding(make_stream(seed, 4)) {}

namespace {

double draw_gbps(std::mt19937_64& rng, const WorkloadConfig& c) {
  if (c.gbps_step > 0.0) {
    std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(c.min_gbps / c.gbps_step - 1e-9)),
                                               static_cast<long long>(std::floor(c.max_gbps / c.gbps_step + 1e-9)));
    return static_cast<double>(d(rng)) * c.gbps_step;
  }
  return std::uniform_real_distribution<double>(c.min_gbps, c.max_gbps)(rng);
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

double positive_exponential(std::mt19937_64& rng, double rate) {
  std::exponential_distribution<double> d(rate);
  double x = 0.0;
  while (!(x > 0.0)) x = d(rng);
  return x;
}

}  // namespace

VirtualNetworkRequest generate_vnr(std::mt19937_64& structure, std::mt19937_64& demands,
                                   const WorkloadConfig& config, int id) {
  VirtualNetworkRequest vnr;
  vnr.id = id;
  int n = std::uniform_int_distribution<int>(config.min_nodes, config.max_nodes)(structure);
  std::uniform_int_distribution<std::int64_t> cpu(config.min_cpu, config.max_cpu);
  for (int i = 0; i < n; ++i) vnr.nodes.push_back({i, cpu(demands)});

  std::bernoulli_distribution coin(config.link_probability);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!coin(structure)) continue;
      vnr.links.push_back({static_cast<int>(vnr.links.size()), a, b, draw_gbps(demands, config)});
      parent[find_root(parent, a)] = find_root(parent, b);
    }
  }
  // Join every component to the one holding node 0.
  for (int v = 1; v < n && config.connect_components; ++v) {
    if (find_root(parent, v) == find_root(parent, 0)) continue;
    vnr.links.push_back({static_cast<int>(vnr.links.size()), 0, v, config.min_gbps});
    parent[find_root(parent, v)] = find_root(parent, 0);
  }
  return vnr;
}

Workload generate_workload(WorkloadStreams& streams, const WorkloadConfig& config) {
  config.validate();
  Workload w;
  w.offered_load = config.offered_load();
  w.requests.reserve(config.request_count);
  w.events.reserve(2 * static_cast<std::size_t>(config.request_count));
  double t = 0.0;
  for (int i = 0; i < config.request_count; ++i) {
    t += positive_exponential(streams.arrivals, config.arrival_rate);
    auto vnr = generate_vnr(streams.structure, streams.demands, config, i);
    vnr.arrival_time = t;
    vnr.holding_time = positive_exponential(streams.holding, 1.0 / config.mean_holding_s);
    w.events.push_back({vnr.arrival_time, WorkloadEvent::Kind::kArrival, i});
    w.events.push_back({vnr.arrival_time + vnr.holding_time, WorkloadEvent::Kind::kDeparture, i});
    w.requests.push_back(std::move(vnr));
  }
  std::sort(w.events.begin(), w.events.end(), [](const WorkloadEvent& a, const WorkloadEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.request < b.request;
  });
  return w;
}

Workload generate_workload(const WorkloadConfig& config) {
  WorkloadStreams streams(config.seed);
  return generate_workload(streams, config);
}

std::string dump_workload(const Workload& workload) {
  std::ostringstream out;
  out << "workload " << format_shortest(workload.offered_load) << " " << workload.requests.size() << "\n";
  for (const auto& r : workload.requests) {
    out << "vnr " << r.id << " " << format_shortest(r.arrival_time) << " " << format_shortest(r.holding_time)
        << " " << r.nodes.size();
    for (const auto& n : r.nodes) out << " " << n.cpu;
    out << " " << r.links.size();
    for (const auto& l : r.links) out << " " << l.a << " " << l.b << " " << format_shortest(l.gbps);
    out << "\n";
  }
  return out.str();
}

Workload load_workload(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto fail = [](const std::string& what) { return ConfigError("workload dump: " + what); };
  std::string tag;
  std::size_t count = 0;
  Workload w;
  if (!(in >> tag >> w.offered_load >> count) || tag != "workload") throw fail("bad header");
  for (std::size_t i = 0; i < count; ++i) {
    VirtualNetworkRequest r;
    std::size_t nn = 0, nl = 0;
    if (!(in >> tag >> r.id >> r.arrival_time >> r.holding_time >> nn) || tag != "vnr")
      throw fail("bad request line " + std::to_string(i + 2));
    for (std::size_t k = 0; k < nn; ++k) {
      VirtualNode node{static_cast<int>(k), 0};
      if (!(in >> node.cpu)) throw fail("truncated node list");
      r.nodes.push_back(node);
    }
    if (!(in >> nl)) throw fail("missing link count");
    for (std::size_t k = 0; k < nl; ++k) {
      VirtualLink l{static_cast<int>(k), 0, 0, 0.0};
      if (!(in >> l.a >> l.b >> l.gbps)) throw fail("truncated link list");
      r.links.push_back(l);
    }
    r.validate();
    w.events.push_back({r.arrival_time, WorkloadEvent::Kind::kArrival, r.id});
    w.events.push_back({r.arrival_time + r.holding_time, WorkloadEvent::Kind::kDeparture, r.id});
    w.requests.push_back(std::move(r));
  }
  std::sort(w.events.begin(), w.events.end(), [](const WorkloadEvent& a, const WorkloadEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.request < b.request;
  });
  return w;
}

}  // namespace eonsurv
