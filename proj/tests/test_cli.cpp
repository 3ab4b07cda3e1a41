#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "quench/io.hpp"
#include "quench/version.hpp"

// Integration tests against the built binary (path in $QUENCH_CLI).

namespace fs = std::filesystem;
using quench::io::json;

namespace {

std::string cli() {
  const char* p = std::getenv("QUENCH_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(bool(is));
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("quench_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("validation failures exit with code 2") {
  TempDir td;
  CHECK(run("spectrum --k -1 --cutoff 64 --out " +
            (td.path / "s.json").string()) == 2);
  CHECK(run("echo --state nonsense:N=2 --k 1 --cutoff 64 --out " +
            (td.path / "e.csv").string()) == 2);
  CHECK(run("echo --state equal:N=100 --k 1 --cutoff 64 --out " +
            (td.path / "e.csv").string()) == 2);
  CHECK(run("fit --what scaling --out-dir " + td.path.string()) == 2);
  CHECK(run("sweep --states equal --N 2:4 --k 1 --cutoff 64 --emit nothing "
            "--out-dir " + td.path.string()) == 2);
}

TEST_CASE("convergence gate exits with code 3") {
  TempDir td;
  CHECK(run("--cache-dir " + (td.path / "c").string() +
            " spectrum --k 1000 --cutoff 64 --tol 1e-12 --out " +
            (td.path / "s.json").string()) == 3);
}

TEST_CASE("spectrum summary content") {
  TempDir td;
  const auto out = td.path / "s.json";
  CHECK(run("--cache-dir " + (td.path / "c").string() +
            " spectrum --k inf --cutoff 100 --out " + out.string()) == 0);
  const auto j = json::parse(slurp(out));
  CHECK(j.at("lowest_levels")[0].get<double>() == doctest::Approx(1.5));
  CHECK(j.at("probe").at("max_energy_dev").get<double>() == 0.0);
  CHECK(j.at("meta").at("convention") == quench::convention_hash());
}

TEST_CASE("echo output and metadata round-trip") {
  TempDir td;
  const auto out = td.path / "e.csv";
  CHECK(run("--cache-dir " + (td.path / "c").string() +
            " echo --state equal:N=10 --k inf --cutoff 20000 "
            "--tmax 6.2832 --points 50 --out " + out.string()) == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("# {", 0) == 0);
  const auto nl = text.find('\n');
  const auto meta = quench::io::parse_meta_line(text.substr(0, nl));
  CHECK(meta.at("params").at("state") == "equal:N=10");
  CHECK(meta.at("params").at("k") == "inf");
  CHECK(meta.contains("eps_trunc"));
  // first data row is t = 0 with nu ~ 1
  const auto csv = quench::io::read_echo_csv(out);
  CHECK(csv.t.size() == 50);
  CHECK(csv.abs[0] == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("cold and warm cache runs are byte-identical") {
  TempDir td;
  const auto cache = (td.path / "c").string();
  const auto o1 = td.path / "e1.csv";
  const auto o2 = td.path / "e2.csv";
  const std::string args = " echo --state coherent:xi=1.1-0.4i,N=12 --k 2.5 "
                           "--cutoff 300 --grid log:0.01:3.0:40 --out ";
  CHECK(run("--cache-dir " + cache + args + o1.string()) == 0);
  CHECK(fs::exists(td.path / "c"));
  CHECK(run("--cache-dir " + cache + args + o2.string()) == 0);
  CHECK(slurp(o1) == slurp(o2));
}

TEST_CASE("sweep output is byte-identical across worker counts") {
  TempDir td;
  const std::string common =
      " sweep --states equal,diag-fermi2 --N 2:4 --k 3 --cutoff 128 "
      "--grid uniform:0:3:20 --emit both --out-dir ";
  const auto d1 = td.path / "w1";
  const auto d2 = td.path / "w2";
  CHECK(run("--cache-dir " + (td.path / "c").string() + " --workers 1" +
            common + d1.string()) == 0);
  CHECK(run("--cache-dir " + (td.path / "c").string() + " --workers 2" +
            common + d2.string()) == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(d1)) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(slurp(entry.path()) == slurp(d2 / name));
    ++files;
  }
  CHECK(files == 13);  // 2 families x 3 N x (echo + work) + index
}

TEST_CASE("fit consumes sweep output") {
  TempDir td;
  CHECK(run("--cache-dir " + (td.path / "c").string() +
            " sweep --states equal --N 2:10 --k 5 --cutoff 300 "
            "--grid log:0.018:0.124:12 --emit echo --out-dir " +
            (td.path / "sw").string()) == 0);
  CHECK(run("fit --index " + (td.path / "sw" / "sweep_index.json").string() +
            " --what scaling --out-dir " + (td.path / "fits").string()) == 0);
  const auto j = json::parse(slurp(td.path / "fits" / "fit_equal_k5.json"));
  CHECK(j.at("gamma_law").at("form") == "power");
  CHECK(j.at("gamma_law").at("g0").get<double>() > 0.0);
  CHECK(j.at("beta_law").at("b0").get<double>() > 0.0);
  CHECK(j.at("t_grid").size() == j.at("beta").size());
}

TEST_CASE("config file supplies defaults, flags win") {
  TempDir td;
  const auto cfg = td.path / "cfg.json";
  {
    std::ofstream os(cfg);
    os << R"({"state": "equal:N=3", "k": "inf", "cutoff": 5000, "grid": "uniform:0:1:5"})";
  }
  const auto out = td.path / "e.csv";
  CHECK(run("--cache-dir " + (td.path / "c").string() + " --config " +
            cfg.string() + " echo --cutoff 10000 --out " + out.string()) == 0);
  const auto meta = quench::io::parse_meta_line(
      slurp(out).substr(0, slurp(out).find('\n')));
  CHECK(meta.at("params").at("state") == "equal:N=3");
  CHECK(meta.at("params").at("cutoff").get<std::size_t>() == 10000);
  CHECK(meta.at("params").at("grid") == "uniform:0:1:5");
}

TEST_CASE("cusps command finds the echo recurrences") {
  TempDir td;
  const auto out = td.path / "cusps.json";
  CHECK(run("--cache-dir " + (td.path / "c").string() +
            " cusps --state twolevel:theta=1.0,phi=0.5 --k inf "
            "--cutoff 50000 --grid uniform:0:6.2832:2000 --out " +
            out.string()) == 0);
  const auto j = json::parse(slurp(out));
  bool near_pi = false;
  for (const auto& c : j.at("cusp_times"))
    if (std::abs(c.get<double>() - 3.14159) < 0.01) near_pi = true;
  CHECK(near_pi);
}
