#include "eonsurv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "eonsurv/errors.hpp"
#include "eonsurv/evacuation.hpp"
#include "eonsurv/fixtures.hpp"
#include "eonsurv/format.hpp"
#include "eonsurv/parallel.hpp"
#include "eonsurv/svne_sim.hpp"
#include "eonsurv/topology.hpp"

namespace eonsurv {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

template <class T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(std::string("invalid ") + what + " '" + text + "'");
  return value;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_number<double>(p, what));
  return out;
}

// "1,2,7" or "1..5".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(text, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<std::uint64_t>(part, "seed"));
      continue;
    }
    auto lo = parse_number<std::uint64_t>(part.substr(0, dots), "seed");
    auto hi = parse_number<std::uint64_t>(part.substr(dots + 2), "seed");
    if (hi < lo) throw ConfigError("empty seed range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

// "NAME:efficiency:reach_km,..."
std::vector<ModulationFormat> parse_modulation(const std::string& text) {
  std::vector<ModulationFormat> out;
  for (const auto& entry : split(text, ',')) {
    auto f = split(entry, ':');
    if (f.size() != 3) throw ConfigError("modulation entry must be NAME:efficiency:reach, got '" + entry + "'");
    out.push_back({f[0], parse_number<double>(f[1], "efficiency"), parse_number<double>(f[2], "reach")});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

int threads_or_default(int requested) { return requested > 0 ? requested : default_thread_count(); }

// ---------------------------------------------------------------------------

struct SvneArgs {
  std::string topology = "usnet";
  std::string topology_file;
  std::string schemes = "apss,apc,apf,mpf,mdf";
  std::string loads = "40";
  std::string seeds = "1";
  int anchor_hops = 1;
  std::int64_t cpu = 300;
  int slots = 320;
  std::string modulation;
  double slot_width = 12.5;
  int guard_slots = 1;
  WorkloadConfig workload;
  std::string out;
  int threads = 0;
};

void add_svne_options(CLI::App& app, SvneArgs& a) {
  app.add_option("--topology", a.topology, "Built-in substrate (usnet, nsfnet)")->capture_default_str();
  app.add_option("--topology-file", a.topology_file, "Slotted-mode topology file; overrides --topology");
  app.add_option("--schemes", a.schemes, "Comma list of apss, apc, apf, mpf, mdf; append :K to set K")
      ->capture_default_str();
  app.add_option("--loads", a.loads, "Comma list of offered loads in Erlang")->capture_default_str();
  app.add_option("--seeds", a.seeds, "Comma list or range a..b")->capture_default_str();
  app.add_option("--anchor-hops", a.anchor_hops, "Anchor radius H in hops")->capture_default_str();
  app.add_option("--cpu", a.cpu, "CPU capacity per built-in node")->capture_default_str();
  app.add_option("--slots", a.slots, "Frequency slots per built-in link")->capture_default_str();
  app.add_option("--modulation", a.modulation, "Modulation table NAME:efficiency:reach_km,...");
  app.add_option("--slot-width", a.slot_width, "Slot width in GHz")->capture_default_str();
  app.add_option("--guard-slots", a.guard_slots, "Guard slots per window")->capture_default_str();
  app.add_option("--requests", a.workload.request_count, "Requests per cell, warm-up included")
      ->capture_default_str();
  app.add_option("--warmup", a.workload.warmup_count, "Leading requests excluded from metrics")
      ->capture_default_str();
  app.add_option("--min-nodes", a.workload.min_nodes, "Smallest VN node count")->capture_default_str();
  app.add_option("--max-nodes", a.workload.max_nodes, "Largest VN node count")->capture_default_str();
  app.add_option("--link-probability", a.workload.link_probability, "Virtual link probability per node pair")
      ->capture_default_str();
  app.add_option("--min-cpu", a.workload.min_cpu, "Smallest virtual node CPU demand")->capture_default_str();
  app.add_option("--max-cpu", a.workload.max_cpu, "Largest virtual node CPU demand")->capture_default_str();
  app.add_option("--min-gbps", a.workload.min_gbps, "Smallest virtual link demand")->capture_default_str();
  app.add_option("--max-gbps", a.workload.max_gbps, "Largest virtual link demand")->capture_default_str();
  app.add_option("--out", a.out, "CSV output path (stdout if absent)");
  app.add_option("--threads", a.threads, "Worker threads (0: EONSURV_THREADS or all cores)")
      ->capture_default_str();
}

int run_svne(const SvneArgs& a, std::ostream& out) {
  SubstrateNetwork net = a.topology_file.empty()
                             ? builtin_topology(a.topology, CapacityMode::kSlotted,
                                                TopologyParams{a.cpu, a.slots, 0.0})
                             : load_topology(read_file(a.topology_file));
  if (net.mode() != CapacityMode::kSlotted) throw ConfigError("svne needs a slotted topology");

  ModulationTable table = ModulationTable::defaults();
  if (!a.modulation.empty()) table.formats = parse_modulation(a.modulation);
  table.slot_width_ghz = a.slot_width;
  table.guard_slots = a.guard_slots;
  table.validate();

  std::vector<SchemeConfig> schemes;
  for (const auto& item : split(a.schemes, ',')) {
    auto colon = item.find(':');
    std::optional<int> k;
    if (colon != std::string::npos) k = parse_number<int>(item.substr(colon + 1), "K");
    auto config = SchemeConfig::make(parse_scheme(item.substr(0, colon)), k, a.anchor_hops);
    config.modulation = table;
    config.validate();
    schemes.push_back(config);
  }
  auto loads = parse_doubles(a.loads, "load");
  auto seeds = parse_seeds(a.seeds);
  for (double l : loads) {
    if (!(l > 0.0)) throw ConfigError("loads must be positive");
  }

  auto results = run_svne_grid(net, schemes, loads, seeds, a.workload, threads_or_default(a.threads));
  std::string csv = svne_csv_header() + "\n";
  for (const auto& r : results) csv += svne_csv_row(r) + "\n";
  emit(a.out, csv, out);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvacuateArgs {
  std::string topology = "nsfnet";
  std::string capacity = "65";
  std::string basic_bw = "5";
  std::string scheme = "sedv";
  std::string seeds = "1";
  int vns = 0;
  std::string drz;
  EvacuationOptions options;
  std::string out;
  std::string timeline;
  int threads = 0;
};

void add_evacuate_options(CLI::App& app, EvacuateArgs& a) {
  app.add_option("--topology", a.topology, "Built-in substrate (nsfnet, usnet)")->capture_default_str();
  app.add_option("--capacity", a.capacity, "Comma list of link capacities in Gbps")->capture_default_str();
  app.add_option("--basic-bw", a.basic_bw, "Comma list of basic migration bandwidths in Gbps")
      ->capture_default_str();
  app.add_option("--scheme", a.scheme, "sedv, bedv or sedv,bedv")->capture_default_str();
  app.add_option("--seeds", a.seeds, "Comma list or range a..b")->capture_default_str();
  app.add_option("--vns", a.vns, "VNs deployed before the threat (0: 160 on NSFNET, 600 on USNET)")
      ->capture_default_str();
  app.add_option("--drz", a.drz, "Two node ids a,b covered by the risk zone");
  app.add_option("--distance-limit", a.options.distance_limit, "Hop limit for destination candidates")
      ->capture_default_str();
  app.add_option("--reachability", a.options.reachability_gbps,
                 "Rate in Gbps destinations must be reachable at for a VN to be evacuated")
      ->capture_default_str();
  app.add_option("--min-data-gb", a.options.min_data_gbyte, "Smallest VM image in GB")->capture_default_str();
  app.add_option("--max-data-gb", a.options.max_data_gbyte, "Largest VM image in GB")->capture_default_str();
  app.add_option("--min-downtime", a.options.min_downtime_s, "Smallest VM downtime in s")->capture_default_str();
  app.add_option("--max-downtime", a.options.max_downtime_s, "Largest VM downtime in s")->capture_default_str();
  app.add_option("--out", a.out, "CSV output path (stdout if absent)");
  app.add_option("--timeline", a.timeline, "Per-VN timeline CSV path; needs exactly one run");
  app.add_option("--threads", a.threads, "Worker threads (0: EONSURV_THREADS or all cores)")
      ->capture_default_str();
}

int run_evacuate(const EvacuateArgs& a, std::ostream& out) {
  parse_builtin_topology(a.topology);
  auto capacities = parse_doubles(a.capacity, "capacity");
  auto basics = parse_doubles(a.basic_bw, "basic bandwidth");
  auto seeds = parse_seeds(a.seeds);
  std::vector<EvacuationScheme> schemes;
  for (const auto& s : split(a.scheme, ',')) schemes.push_back(parse_evacuation_scheme(s));
  for (double c : capacities) {
    if (!(c > 0.0)) throw ConfigError("capacities must be positive");
  }
  for (double b : basics) {
    if (!(b > 0.0)) throw ConfigError("basic bandwidths must be positive");
  }
  if (a.vns < 0) throw ConfigError("--vns must be non-negative");
  if (a.options.distance_limit < 0) throw ConfigError("--distance-limit must be non-negative");
  if (a.options.reachability_gbps < 0.0) throw ConfigError("--reachability must be non-negative");
  if (!(a.options.min_data_gbyte > 0.0) || a.options.max_data_gbyte < a.options.min_data_gbyte)
    throw ConfigError("invalid VM data range");
  if (!(a.options.min_downtime_s > 0.0) || a.options.max_downtime_s < a.options.min_downtime_s)
    throw ConfigError("invalid downtime range");

  std::optional<DisasterRiskZone> drz;
  if (!a.drz.empty()) {
    auto ids = split(a.drz, ',');
    if (ids.size() != 2) throw ConfigError("--drz needs two node ids");
    drz = DisasterRiskZone{parse_number<int>(ids[0], "node id"), parse_number<int>(ids[1], "node id")};
    int n = builtin_topology(a.topology, CapacityMode::kScalar).node_count();
    if (drz->a == drz->b || drz->a < 0 || drz->b < 0 || drz->a >= n || drz->b >= n)
      throw ConfigError("--drz needs two distinct node ids in range");
  }

  std::vector<EvacuationCell> cells;
  for (auto scheme : schemes) {
    for (double c : capacities) {
      for (double b : basics) {
        for (auto seed : seeds) {
          EvacuationCell cell;
          cell.topology = a.topology;
          cell.capacity_gbps = c;
          cell.scheme = scheme;
          cell.basic_gbps = b;
          cell.seed = seed;
          cell.vn_count = a.vns;
          cell.drz = drz;
          cell.options = a.options;
          cells.push_back(cell);
        }
      }
    }
  }
  if (!a.timeline.empty() && cells.size() != 1) throw ConfigError("--timeline needs exactly one run");

  auto runs = run_evacuation_cells(cells, threads_or_default(a.threads));
  std::string csv = evacuation_csv_header() + "\n";
  for (const auto& r : runs) csv += evacuation_csv_row(r) + "\n";
  emit(a.out, csv, out);
  if (!a.timeline.empty()) emit(a.timeline, timeline_csv_header() + "\n" + timeline_csv_rows(runs[0].result), out);
  return 0;
}

// ---------------------------------------------------------------------------

struct TopoArgs {
  std::string builtin;
  std::string file;
  std::string mode = "slotted";
  double capacity = 0.0;
  std::string format = "summary";
  std::string out;
};

void add_topo_options(CLI::App& app, TopoArgs& a) {
  app.add_option("--builtin", a.builtin, "Built-in topology (usnet, nsfnet)");
  app.add_option("--file", a.file, "Topology file to load and validate");
  app.add_option("--mode", a.mode, "Capacity mode for --builtin (slotted, scalar)")->capture_default_str();
  app.add_option("--capacity", a.capacity, "Per-link slots or Gbps for --builtin (0: mode default)")
      ->capture_default_str();
  app.add_option("--format", a.format, "summary or file")->capture_default_str();
  app.add_option("--out", a.out, "Output path (stdout if absent)");
}

int run_topo(const TopoArgs& a, std::ostream& out) {
  if (a.builtin.empty() == a.file.empty()) throw ConfigError("give exactly one of --builtin and --file");
  if (a.format != "summary" && a.format != "file") throw ConfigError("--format must be summary or file");
  SubstrateNetwork net = [&] {
    if (!a.file.empty()) return load_topology(read_file(a.file));
    auto mode = parse_capacity_mode(a.mode);
    TopologyParams params;
    if (a.capacity < 0.0) throw ConfigError("--capacity must be non-negative");
    if (a.capacity > 0.0) {
      if (mode == CapacityMode::kSlotted) {
        if (a.capacity != static_cast<int>(a.capacity)) throw ConfigError("slot count must be an integer");
        params.slots_per_link = static_cast<int>(a.capacity);
      } else {
        params.link_gbps = a.capacity;
      }
    }
    return builtin_topology(a.builtin, mode, params);
  }();
  net.validate();
  if (a.format == "file") {
    emit(a.out, serialize_topology(net), out);
    return 0;
  }
  double km = 0.0;
  for (const auto& l : net.links()) km += l.length_km;
  std::string text = "topology " + net.name() + " " + std::string(to_string(net.mode())) + "\n" +
                     "nodes " + std::to_string(net.node_count()) + "\n" + "links " +
                     std::to_string(net.link_count()) + "\n" + "total_km " + format_sig(km) + "\n" +
                     "connected yes\n";
  emit(a.out, text, out);
  return 0;
}

// ---------------------------------------------------------------------------

struct FixtureArgs {
  std::string name = "fsw";
  int width = 2;
  std::string out;
};

void add_fixture_options(CLI::App& app, FixtureArgs& a) {
  app.add_option("--name", a.name, "fsw (three-node bitmap) or single-link")->capture_default_str();
  app.add_option("--width", a.width, "Window width in slots")->capture_default_str();
  app.add_option("--out", a.out, "Output path (stdout if absent)");
}

int run_fixtures(const FixtureArgs& a, std::ostream& out) {
  if (a.width < 1) throw ConfigError("--width must be at least 1");
  FswFixture fixture = [&] {
    if (a.name == "fsw") return canonical_fsw_fixture();
    if (a.name == "single-link") return single_link_fixture();
    throw ConfigError("unknown fixture '" + a.name + "'");
  }();
  emit(a.out, describe_fixture(fixture, a.width), out);
  return 0;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& s) { return s == flag || s.starts_with(flag + "="); });
}

// Appends `--key=value` for each config entry whose flag is absent from the
// command line, so flags override the file and the file overrides defaults.
void apply_config(CLI::App& app, std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return;
  CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && !sub; ++i) {
    if (args[i].starts_with("-")) continue;
    sub = app.get_subcommand_no_throw(args[i]);
  }
  if (!sub) return;
  for (const auto& [key, value] : read_config(path)) {
    std::string flag = "--" + key;
    if (key == "config") throw ConfigError("config files cannot nest");
    bool known = false;
    for (auto* s : app.get_subcommands({})) known = known || s->get_option_no_throw(flag) != nullptr;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
    if (sub->get_option_no_throw(flag) == nullptr || has_flag(args, flag)) continue;
    args.push_back(flag + "=" + value);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  CLI::App app{"Survivable embedding and evacuation simulator", input.empty() ? "eonsurv" : input[0]};
  app.require_subcommand(1);
  std::string config_path;

  SvneArgs svne;
  auto* svne_cmd = app.add_subcommand("svne", "Embedding campaign grid over schemes, loads and seeds");
  add_svne_options(*svne_cmd, svne);
  EvacuateArgs evac;
  auto* evac_cmd = app.add_subcommand("evacuate", "Evacuation scenarios over capacities, bandwidths and seeds");
  add_evacuate_options(*evac_cmd, evac);
  TopoArgs topo;
  auto* topo_cmd = app.add_subcommand("topo", "Print or validate a topology");
  add_topo_options(*topo_cmd, topo);
  FixtureArgs fixtures;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Print canonical slot fixtures");
  add_fixture_options(*fixtures_cmd, fixtures);
  for (auto* sub : {svne_cmd, evac_cmd, topo_cmd, fixtures_cmd})
    sub->add_option("--config", config_path, "key=value file; keys are flag names without dashes");

  try {
    std::vector<std::string> args = input.empty() ? std::vector<std::string>{"eonsurv"} : input;
    apply_config(app, args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? 0 : 1;
    }
    if (svne_cmd->parsed()) return run_svne(svne, out);
    if (evac_cmd->parsed()) return run_evacuate(evac, out);
    if (topo_cmd->parsed()) return run_topo(topo, out);
    return run_fixtures(fixtures, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const TopologyError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace eonsurv
