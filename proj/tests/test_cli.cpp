#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eonsurv/cli.hpp"

using namespace eonsurv;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "eonsurv");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "eonsurv_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, SvneGrid) {
  auto path = scratch("r.csv");
  auto r = cli({"svne", "--topology", "usnet", "--schemes", "apss,mdf", "--loads", "40,60", "--seeds", "1,2",
                "--requests", "200", "--warmup", "20", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto csv = slurp(path);
  EXPECT_EQ(lines(csv), 9);  // header + 8 rows
  auto again = cli({"svne", "--topology", "usnet", "--schemes", "apss,mdf", "--loads", "40,60", "--seeds",
                    "1,2", "--requests", "200", "--warmup", "20"});
  EXPECT_EQ(again.out, csv);
}

TEST(Cli, EvacuateRange) {
  auto r = cli({"evacuate", "--topology", "nsfnet", "--capacity", "65", "--basic-bw", "5", "--scheme", "sedv",
                "--seeds", "1..5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), 6);
}

TEST(Cli, TopoSummary) {
  auto r = cli({"topo", "--builtin", "usnet"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("nodes 24"), std::string::npos);
  EXPECT_NE(r.out.find("links 43"), std::string::npos);
  auto f = cli({"topo", "--builtin", "nsfnet", "--mode", "scalar", "--capacity", "65", "--format", "file"});
  ASSERT_EQ(f.code, 0);
  auto file = scratch("n.topo");
  std::ofstream(file) << f.out;
  auto v = cli({"topo", "--file", file.string()});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("nodes 14"), std::string::npos);
}

TEST(Cli, Fixtures) {
  auto r = cli({"fixtures", "--name", "fsw", "--width", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(r.out.empty());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"bogus"}).code, 1);
  auto unknown = cli({"svne", "--nope"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(cli({"svne", "--loads", "abc"}).code, 1);
  EXPECT_EQ(cli({"svne", "--schemes", "xyz"}).code, 1);
  EXPECT_EQ(cli({"topo", "--file", "/nonexistent/file.topo"}).code, 1);
  EXPECT_EQ(cli({"evacuate", "--seeds", "5..1"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
  auto dir = std::filesystem::temp_directory_path();
  EXPECT_EQ(cli({"topo", "--builtin", "usnet", "--out", (dir / "no/such/dir/x").string()}).code, 2);
}

TEST(Cli, ConfigFile) {
  auto conf = scratch("evac.conf");
  std::ofstream(conf) << "# evacuation cell\ntopology = nsfnet\ncapacity = 65\nseeds = 1..3\n";
  auto r = cli({"evacuate", "--config", conf.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), 4);
  auto overridden = cli({"evacuate", "--config", conf.string(), "--seeds", "2"});
  ASSERT_EQ(overridden.code, 0);
  EXPECT_EQ(lines(overridden.out), 2);
  auto bad = scratch("bad.conf");
  std::ofstream(bad) << "wat = 1\n";
  EXPECT_EQ(cli({"evacuate", "--config", bad.string()}).code, 1);
}
