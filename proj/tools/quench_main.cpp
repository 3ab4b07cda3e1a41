// Command-line front end: spectrum / echo / work / fit / sweep / cusps.
//
// Exit codes: 0 success, 2 parameter validation, 3 convergence, 4 I/O.
// Outputs are deterministic: identical configuration produces byte-identical
// files regardless of worker count or cache temperature.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "quench/cache.hpp"
#include "quench/echo.hpp"
#include "quench/errors.hpp"
#include "quench/io.hpp"
#include "quench/parallel.hpp"
#include "quench/scaling.hpp"
#include "quench/spectrum.hpp"
#include "quench/states.hpp"
#include "quench/version.hpp"
#include "quench/workstats.hpp"

namespace fs = std::filesystem;
using quench::io::json;
using namespace quench;

namespace {

struct GlobalOpts {
  std::string cache_dir = "qcache";
  unsigned workers = 0;
  std::string config_path;
};

double parse_k(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    return std::stod(text);
  } catch (const std::logic_error&) {
    throw ValidationError("cannot parse defect strength '" + text + "'");
  }
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    out.push_back(text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_k_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_commas(text)) out.push_back(parse_k(item));
  if (out.empty()) throw ValidationError("empty k list");
  return out;
}

// "2:20", "2:20:3" or "2,5,9"
std::vector<std::int64_t> parse_n_list(const std::string& text) {
  std::vector<std::int64_t> out;
  try {
    if (text.find(':') != std::string::npos) {
      const auto c1 = text.find(':');
      const auto c2 = text.find(':', c1 + 1);
      const std::int64_t lo = std::stoll(text.substr(0, c1));
      const std::int64_t hi = std::stoll(
          text.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                      : c2 - c1 - 1));
      const std::int64_t step =
          c2 == std::string::npos ? 1 : std::stoll(text.substr(c2 + 1));
      if (step < 1 || hi < lo)
        throw ValidationError("bad N range '" + text + "'");
      for (std::int64_t n = lo; n <= hi; n += step) out.push_back(n);
    } else {
      for (const auto& item : split_commas(text))
        out.push_back(std::stoll(item));
    }
  } catch (const std::logic_error&) {
    throw ValidationError("cannot parse N list '" + text + "'");
  }
  for (const auto n : out)
    if (n < 1) throw ValidationError("N must be >= 1");
  if (out.empty()) throw ValidationError("empty N list");
  return out;
}

// "uniform:t0:t1:n" | "log:t0:t1:n" | "tmax:points"
std::vector<double> parse_time_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto colon = text.find(':', pos);
    parts.push_back(text.substr(
        pos, colon == std::string::npos ? std::string::npos : colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  try {
    if (parts.size() == 4 && parts[0] == "uniform")
      return echo::uniform_times(std::stod(parts[1]), std::stod(parts[2]),
                                 std::stoul(parts[3]));
    if (parts.size() == 4 && parts[0] == "log")
      return echo::log_times(std::stod(parts[1]), std::stod(parts[2]),
                             std::stoul(parts[3]));
    if (parts.size() == 2)
      return echo::uniform_times(0.0, std::stod(parts[0]),
                                 std::stoul(parts[1]));
  } catch (const std::logic_error&) {
  }
  throw ValidationError("cannot parse time grid '" + text +
                        "' (uniform:t0:t1:n | log:t0:t1:n | tmax:points)");
}

spectrum::PerturbedSpectrum obtain_spectrum(const GlobalOpts& g, double k,
                                            std::size_t cutoff) {
  return cache::get_or_build(g.cache_dir, k, cutoff, g.workers);
}

std::string k_tag(double k) {
  if (std::isinf(k)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

int cmd_spectrum(const GlobalOpts& g, const std::string& k_text,
                 std::size_t cutoff, std::size_t probe_cutoff, double tol,
                 const std::string& out) {
  const double k = parse_k(k_text);
  if (!std::isinf(k) && !(k > 0.0))
    throw ValidationError("k must be positive or 'inf'");
  const auto spec = obtain_spectrum(g, k, cutoff);

  if (probe_cutoff == 0) probe_cutoff = cutoff + cutoff / 4;
  const auto probe =
      spectrum::convergence_probe(k, cutoff, probe_cutoff, g.workers);

  json params = {{"k", k_text},
                 {"cutoff", cutoff},
                 {"probe_cutoff", probe_cutoff},
                 {"tol", tol}};
  json j;
  j["meta"] = io::make_meta("spectrum", params);
  json levels = json::array();
  for (std::size_t m = 0; m < std::min<std::size_t>(20, spec.cutoff()); ++m)
    levels.push_back(spec.energy(m));
  j["lowest_levels"] = levels;
  j["probe"] = {{"cutoff_small", probe.cutoff_small},
                {"cutoff_large", probe.cutoff_large},
                {"max_energy_dev", probe.max_energy_dev},
                {"max_overlap_dev", probe.max_overlap_dev}};
  io::write_text(out, j.dump(2) + "\n");
  std::cout << "spectrum: E'_0 = " << io::fmt(spec.energy(0))
            << ", probe energy dev " << io::fmt(probe.max_energy_dev) << "\n";
  if (tol > 0.0 && probe.max_energy_dev > tol)
    throw ConvergenceError("cutoff " + std::to_string(cutoff) +
                           " misses tolerance " + std::to_string(tol));
  return 0;
}

int cmd_echo(const GlobalOpts& g, const std::string& state_spec,
             const std::string& k_text, std::size_t cutoff,
             const std::string& grid_spec, std::size_t series_rows,
             const std::string& out) {
  const double k = parse_k(k_text);
  const auto state = states::parse_state_spec(state_spec);
  const auto times = parse_time_grid(grid_spec);
  const auto spec = obtain_spectrum(g, k, cutoff);
  const auto series =
      echo::loschmidt_echo(state, spec, times, series_rows, g.workers);
  json params = {{"state", state_spec},
                 {"k", k_text},
                 {"cutoff", cutoff},
                 {"grid", grid_spec},
                 {"series_rows", series_rows}};
  auto meta = io::make_meta("echo", params);
  meta["eps_trunc"] = series.eps_trunc();
  io::write_text(out, io::echo_csv(meta, series));
  std::cout << "echo: " << times.size() << " points, nu(t0) = ("
            << io::fmt(series.nu[0].real()) << ", "
            << io::fmt(series.nu[0].imag()) << ")\n";
  return 0;
}

int cmd_work(const GlobalOpts& g, const std::string& state_spec,
             const std::string& k_text, std::size_t cutoff, double bin_width,
             double tau, std::size_t var_cutoff, const std::string& out,
             const std::string& mhq_out) {
  const double k = parse_k(k_text);
  const auto state = states::parse_state_spec(state_spec);
  const auto spec = obtain_spectrum(g, k, cutoff);

  workstats::WorkReportOptions opt;
  opt.tau = tau;
  opt.variance_cutoff = var_cutoff;
  opt.workers = g.workers;
  if (state.is_fermion() && cutoff > 1200)
    opt.rows = 1200;  // pair basis grows quadratically with the cutoff
  const auto rep = workstats::compute_work_report(state, spec, opt);

  json params = {{"state", state_spec},
                 {"k", k_text},
                 {"cutoff", cutoff},
                 {"bin_width", bin_width},
                 {"tau", tau},
                 {"var_cutoff", var_cutoff}};
  const auto meta = io::make_meta("work", params);
  io::write_text(out, io::work_report_json(meta, rep).dump(2) + "\n");
  if (!mhq_out.empty()) {
    const auto hist =
        echo::mhq_histogram(state, spec, bin_width, opt.rows, g.workers);
    io::write_text(mhq_out, io::mhq_csv(meta, hist));
  }
  std::cout << "work: <w> direct = " << io::fmt(rep.avg_work_direct)
            << ", N_Re = " << io::fmt(rep.n_re) << "\n";
  return 0;
}

int cmd_cusps(const GlobalOpts& g, const std::string& state_spec,
              const std::string& k_text, std::size_t cutoff,
              const std::string& grid_spec, double threshold,
              const std::string& out) {
  const double k = parse_k(k_text);
  const auto state = states::parse_state_spec(state_spec);
  const auto times = parse_time_grid(grid_spec);
  const auto spec = obtain_spectrum(g, k, cutoff);
  const auto series = echo::loschmidt_echo(state, spec, times, 0, g.workers);
  const auto cusps = echo::detect_cusps(series, threshold);
  json params = {{"state", state_spec},   {"k", k_text},
                 {"cutoff", cutoff},      {"grid", grid_spec},
                 {"threshold", threshold}};
  io::write_text(out, io::cusps_json(io::make_meta("cusps", params), cusps));
  std::cout << "cusps: found " << cusps.size() << "\n";
  return 0;
}

struct SweepEntry {
  std::string family;
  double k;
  std::int64_t n;
  std::string echo_file;
  std::string work_file;
};

int cmd_sweep(const GlobalOpts& g, const std::string& families_text,
              const std::string& n_text, const std::string& k_text,
              std::size_t cutoff, const std::string& grid_spec,
              const std::string& emit, const std::string& out_dir) {
  const auto families = split_commas(families_text);
  const auto ks = parse_k_list(k_text);
  const auto ns = parse_n_list(n_text);
  const auto times = parse_time_grid(grid_spec);
  const bool emit_echo = emit == "echo" || emit == "both";
  const bool emit_work = emit == "work" || emit == "both";
  if (!emit_echo && !emit_work)
    throw ValidationError("--emit must be echo, work or both");

  json params = {{"states", families_text},
                 {"N", n_text},
                 {"k", k_text},
                 {"cutoff", cutoff},
                 {"grid", grid_spec},
                 {"emit", emit}};

  std::vector<SweepEntry> entries;
  for (const auto& fam : families)
    for (const double k : ks)
      for (const auto n : ns) entries.push_back({fam, k, n, "", ""});

  // warm the per-k spectra serially, then run grid points in the pool
  for (const double k : ks) obtain_spectrum(g, k, cutoff);

  std::vector<std::string> errors(entries.size());
  parallel_for(entries.size(), g.workers, [&](std::size_t i) {
    auto& e = entries[i];
    try {
      const GlobalOpts local{g.cache_dir, 1, ""};
      const auto spec = obtain_spectrum(local, e.k, cutoff);
      const std::string state_spec = e.family + ":N=" + std::to_string(e.n);
      const auto state = states::parse_state_spec(state_spec);
      const std::size_t rows =
          state.is_fermion() ? std::min<std::size_t>(cutoff, 1200) : 0;
      json sub = params;
      sub["state"] = state_spec;
      sub["k_value"] = e.k;
      char name[160];
      if (emit_echo) {
        const auto series = echo::loschmidt_echo(state, spec, times, rows, 1);
        auto meta = io::make_meta("sweep", sub);
        meta["eps_trunc"] = series.eps_trunc();
        std::snprintf(name, sizeof name, "echo_%s_k%s_N%lld.csv",
                      e.family.c_str(), k_tag(e.k).c_str(),
                      static_cast<long long>(e.n));
        e.echo_file = name;
        io::write_text(fs::path(out_dir) / name, io::echo_csv(meta, series));
      }
      if (emit_work) {
        workstats::WorkReportOptions opt;
        opt.rows = rows;
        opt.workers = 1;
        opt.echo_points = 800;
        const auto rep = workstats::compute_work_report(state, spec, opt);
        std::snprintf(name, sizeof name, "work_%s_k%s_N%lld.json",
                      e.family.c_str(), k_tag(e.k).c_str(),
                      static_cast<long long>(e.n));
        e.work_file = name;
        io::write_text(
            fs::path(out_dir) / name,
            io::work_report_json(io::make_meta("sweep", sub), rep).dump(2) +
                "\n");
      }
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  for (const auto& err : errors)
    if (!err.empty()) throw ValidationError("sweep: " + err);

  json index;
  index["meta"] = io::make_meta("sweep", params);
  json runs = json::array();
  for (const auto& e : entries) {
    json r = {{"family", e.family}, {"k", e.k}, {"N", e.n}};
    if (!e.echo_file.empty()) r["echo_file"] = e.echo_file;
    if (!e.work_file.empty()) r["work_file"] = e.work_file;
    runs.push_back(r);
  }
  index["runs"] = runs;
  io::write_text(fs::path(out_dir) / "sweep_index.json", index.dump(2) + "\n");
  std::cout << "sweep: " << entries.size() << " grid points -> " << out_dir
            << "\n";
  return 0;
}

int cmd_fit(const std::string& index_path, const std::string& what,
            const std::string& out_dir) {
  const auto index = json::parse(io::read_text(index_path));
  const fs::path dir = fs::path(index_path).parent_path();

  struct Key {
    std::string family;
    double k;
    bool operator<(const Key& o) const {
      return family < o.family || (family == o.family && k < o.k);
    }
  };

  if (what == "scaling") {
    std::map<Key, std::map<std::int64_t, io::EchoCsv>> groups;
    for (const auto& r : index.at("runs")) {
      if (!r.contains("echo_file")) continue;
      groups[{r.at("family"), r.at("k")}][r.at("N").get<std::int64_t>()] =
          io::read_echo_csv(dir / r.at("echo_file").get<std::string>());
    }
    if (groups.empty()) throw ValidationError("fit: no echo curves in index");
    for (const auto& [key, curves] : groups) {
      const bool diagonal = key.family.rfind("diag-", 0) == 0;
      const std::size_t npts = curves.begin()->second.t.size();
      scaling::ScalingFit fit;
      for (std::size_t ti = 0; ti < npts; ++ti) {
        std::vector<std::pair<double, double>> data;
        for (const auto& [n, csv] : curves)
          data.emplace_back(static_cast<double>(n), csv.abs[ti]);
        try {
          auto p = scaling::fit_scaling_at_time(data);
          p.t = curves.begin()->second.t[ti];
          fit.points.push_back(p);
        } catch (const ValidationError&) {
          fit.warnings.push_back("skipped t index " + std::to_string(ti) +
                                 ": too few admissible points");
        }
      }
      scaling::fit_time_laws(fit, diagonal);
      json params = {{"index", index_path},
                     {"what", what},
                     {"family", key.family},
                     {"k", key.k}};
      const auto jf = io::scaling_fit_json(
          io::make_meta("fit", params), key.k, key.family,
          {static_cast<double>(curves.begin()->first),
           static_cast<double>(curves.rbegin()->first)},
          fit);
      char name[128];
      std::snprintf(name, sizeof name, "fit_%s_k%s.json", key.family.c_str(),
                    k_tag(key.k).c_str());
      io::write_text(fs::path(out_dir) / name, jf.dump(2) + "\n");
      std::cout << "fit " << key.family << " k=" << k_tag(key.k)
                << ": beta = " << io::fmt(fit.beta_law.amp) << " t^"
                << io::fmt(fit.beta_law.expo) << ", gamma "
                << (fit.gamma_law.affine ? "affine" : "power") << " ("
                << io::fmt(fit.gamma_law.g0) << ", "
                << io::fmt(fit.gamma_law.g1) << ")\n";
    }
    return 0;
  }
  if (what == "growth") {
    std::map<Key, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : index.at("runs")) {
      if (!r.contains("work_file")) continue;
      const auto w = json::parse(
          io::read_text(dir / r.at("work_file").get<std::string>()));
      groups[{r.at("family"), r.at("k")}].emplace_back(
          r.at("N").get<double>(), w.at("n_re_corrected").get<double>());
    }
    if (groups.empty()) throw ValidationError("fit: no work reports in index");
    for (const auto& [key, data] : groups) {
      const auto law = scaling::fit_growth_curve(data);
      json params = {{"index", index_path},
                     {"what", what},
                     {"family", key.family},
                     {"k", key.k}};
      json j;
      j["meta"] = io::make_meta("fit", params);
      j["k"] = key.k;
      j["state_family"] = key.family;
      j["model"] = "a*(N^b - 1)";
      j["a"] = law.amp;
      j["b"] = law.expo;
      char name[128];
      std::snprintf(name, sizeof name, "growth_%s_k%s.json",
                    key.family.c_str(), k_tag(key.k).c_str());
      io::write_text(fs::path(out_dir) / name, j.dump(2) + "\n");
      std::cout << "growth " << key.family << " k=" << k_tag(key.k)
                << ": a = " << io::fmt(law.amp) << ", b = "
                << io::fmt(law.expo) << "\n";
    }
    return 0;
  }
  throw ValidationError("fit: --what must be scaling or growth");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"post-quench Loschmidt echo and work statistics in a "
               "delta-perturbed harmonic trap"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--cache-dir", g.cache_dir, "spectrum cache directory");
  app.add_option("--workers", g.workers, "worker threads (0 = hardware)");
  app.add_option("--config", g.config_path,
                 "JSON file with defaults for the subcommand options");

  std::string k_text = "inf", state_spec = "equal:N=10";
  std::size_t cutoff = 4000, probe_cutoff = 0, series_rows = 0;
  std::size_t var_cutoff = 1000000;
  double tol = 0.0, bin_width = 1.0, tau = -1.0, threshold = 0.25;
  std::string grid_spec = "uniform:0:6.283185307179586:2000";
  std::string out = "out.json", mhq_out, out_dir = "out";
  std::string families = "equal", n_text = "2:20", emit = "echo";
  std::string index_path, what = "scaling";
  double tmax = 0.0;
  std::size_t points = 0;

  auto* sp = app.add_subcommand("spectrum", "build and summarize a spectrum");
  sp->add_option("--k", k_text, "defect strength (positive or 'inf')");
  sp->add_option("--cutoff", cutoff, "even levels retained");
  sp->add_option("--probe-cutoff", probe_cutoff, "probe comparison cutoff");
  sp->add_option("--tol", tol, "exit 3 if probe energy drift exceeds this");
  sp->add_option("--out", out, "summary JSON path");

  auto* ec = app.add_subcommand("echo", "Loschmidt echo series CSV");
  ec->add_option("--state", state_spec, "state spec string");
  ec->add_option("--k", k_text, "defect strength");
  ec->add_option("--cutoff", cutoff, "spectrum cutoff");
  ec->add_option("--grid", grid_spec, "time grid spec");
  ec->add_option("--tmax", tmax, "shorthand: uniform grid on [0, tmax]");
  ec->add_option("--points", points, "shorthand: grid point count");
  ec->add_option("--series-rows", series_rows,
                 "series terms (0 = spectrum cutoff)");
  ec->add_option("--out", out, "CSV path");

  auto* wk = app.add_subcommand("work", "work statistics report");
  wk->add_option("--state", state_spec, "state spec string");
  wk->add_option("--k", k_text, "defect strength");
  wk->add_option("--cutoff", cutoff, "spectrum cutoff");
  wk->add_option("--bin-width", bin_width, "MHQ histogram bin width");
  wk->add_option("--tau", tau, "QSL horizon (default: first |nu| minimum)");
  wk->add_option("--var-cutoff", var_cutoff, "variance truncation cutoff");
  wk->add_option("--out", out, "report JSON path");
  wk->add_option("--mhq-out", mhq_out, "optional MHQ histogram CSV path");

  auto* cu = app.add_subcommand("cusps", "detect echo cusps");
  cu->add_option("--state", state_spec, "state spec string");
  cu->add_option("--k", k_text, "defect strength");
  cu->add_option("--cutoff", cutoff, "spectrum cutoff");
  cu->add_option("--grid", grid_spec, "time grid spec");
  cu->add_option("--threshold", threshold, "slope-jump threshold");
  cu->add_option("--out", out, "JSON path");

  auto* sw = app.add_subcommand("sweep", "cross product of states, k and N");
  sw->add_option("--states", families, "comma-separated family names");
  sw->add_option("--N", n_text, "N list (a:b, a:b:step or comma list)");
  sw->add_option("--k", k_text, "comma-separated k list");
  sw->add_option("--cutoff", cutoff, "spectrum cutoff");
  sw->add_option("--grid", grid_spec, "time grid spec");
  sw->add_option("--emit", emit, "echo | work | both");
  sw->add_option("--out-dir", out_dir, "output directory");

  auto* ft = app.add_subcommand("fit", "fit sweep output");
  ft->add_option("--index", index_path, "sweep_index.json path");
  ft->add_option("--what", what, "scaling | growth");
  ft->add_option("--out-dir", out_dir, "output directory");

  for (auto* cmd : {sp, ec, wk, cu, sw, ft}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!g.config_path.empty()) {
      // config supplies values where the command line kept defaults
      const auto cfg = json::parse(io::read_text(g.config_path));
      auto take = [&cfg](CLI::App* cmd, const std::string& flag, auto& dst) {
        const std::string key = flag.substr(2);
        if (cfg.contains(key) && cmd->count(flag) == 0)
          dst = cfg.at(key).get<std::decay_t<decltype(dst)>>();
      };
      for (auto* cmd : {sp, ec, wk, cu, sw, ft}) {
        if (!cmd->parsed()) continue;
        take(cmd, "--k", k_text);
        if (cmd->get_option_no_throw("--state")) take(cmd, "--state", state_spec);
        take(cmd, "--cutoff", cutoff);
        if (cmd->get_option_no_throw("--grid")) take(cmd, "--grid", grid_spec);
        if (cmd == sw) {
          take(cmd, "--states", families);
          take(cmd, "--N", n_text);
          take(cmd, "--emit", emit);
        }
        if (cmd->get_option_no_throw("--out-dir")) take(cmd, "--out-dir", out_dir);
        if (cmd->get_option_no_throw("--out")) take(cmd, "--out", out);
        if (cmd == wk) {
          take(cmd, "--mhq-out", mhq_out);
          take(cmd, "--bin-width", bin_width);
          take(cmd, "--tau", tau);
          take(cmd, "--var-cutoff", var_cutoff);
        }
        if (cmd == cu) take(cmd, "--threshold", threshold);
        if (cmd == ft) {
          take(cmd, "--what", what);
          take(cmd, "--index", index_path);
        }
      }
    }
    if (ec->parsed() && (ec->count("--tmax") || ec->count("--points"))) {
      const double t1 = ec->count("--tmax") ? tmax : 6.283185307179586;
      const std::size_t np = ec->count("--points") ? points : 2000;
      grid_spec = "uniform:0:" + io::fmt(t1) + ":" + std::to_string(np);
    }
    // the analytic backend is cheap per term: echo series default to 1e6
    // terms at k = inf unless a cutoff was given explicitly
    if ((ec->parsed() || cu->parsed()) && std::isinf(parse_k(k_text))) {
      CLI::App* cmd = ec->parsed() ? ec : cu;
      if (cmd->count("--cutoff") == 0 &&
          !(g.config_path.size() && cutoff != 4000))
        cutoff = 1000000;
    }

    if (sp->parsed())
      return cmd_spectrum(g, k_text, cutoff, probe_cutoff, tol, out);
    if (ec->parsed())
      return cmd_echo(g, state_spec, k_text, cutoff, grid_spec, series_rows,
                      out);
    if (wk->parsed())
      return cmd_work(g, state_spec, k_text, cutoff, bin_width, tau,
                      var_cutoff, out, mhq_out);
    if (cu->parsed())
      return cmd_cusps(g, state_spec, k_text, cutoff, grid_spec, threshold,
                       out);
    if (sw->parsed())
      return cmd_sweep(g, families, n_text, k_text, cutoff, grid_spec, emit,
                       out_dir);
    if (ft->parsed()) {
      if (index_path.empty())
        throw ValidationError("fit: --index is required");
      return cmd_fit(index_path, what, out_dir);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
