#include "quench/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "quench/errors.hpp"
#include "quench/version.hpp"

namespace quench::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json make_meta(const std::string& command, const json& params) {
  json m;
  m["tool"] = "quench";
  m["version"] = kVersion;
  m["convention"] = convention_hash();
  m["command"] = command;
  m["params"] = params;
  return m;
}

json parse_meta_line(const std::string& line) {
  std::string body = line;
  if (!body.empty() && body[0] == '#') {
    body.erase(0, 1);
    while (!body.empty() && body.front() == ' ') body.erase(0, 1);
  }
  try {
    return json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("metadata header is not valid JSON: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp);
    os << content;
    if (!os) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

namespace {
std::string header_line(const json& meta) { return "# " + meta.dump() + "\n"; }
}  // namespace

std::string echo_csv(const json& meta, const echo::EchoSeries& series) {
  std::string out = header_line(meta);
  out += "t,re_nu,im_nu,abs_nu,abs_nu_sq\n";
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const double a = series.abs_nu(i);
    out += fmt(series.t[i]) + ',' + fmt(series.nu[i].real()) + ',' +
           fmt(series.nu[i].imag()) + ',' + fmt(a) + ',' + fmt(a * a) + '\n';
  }
  return out;
}

std::string kdq_csv(const json& meta, const echo::QuasiprobTable& table) {
  std::string out = header_line(meta);
  out += "n,m,w,re_q,im_q\n";
  const bool fermion = table.flavor == states::Flavor::pure_two_fermion ||
                       table.flavor == states::Flavor::diagonal_two_fermion;
  for (const auto& e : table.entries) {
    if (fermion) {
      // pair indices as even levels "a-b"
      out += std::to_string(2 * e.n_a) + '-' + std::to_string(2 * e.n_b) + ',' +
             std::to_string(2 * e.m_a) + '-' + std::to_string(2 * e.m_b);
    } else {
      out += std::to_string(2 * e.n_a) + ',' + std::to_string(2 * e.m_a);
    }
    out += ',' + fmt(e.w) + ',' + fmt(e.q.real()) + ',' + fmt(e.q.imag()) + '\n';
  }
  return out;
}

std::string mhq_csv(const json& meta,
                    const std::vector<std::pair<double, double>>& hist) {
  std::string out = header_line(meta);
  out += "w_bin,re_q_sum\n";
  for (const auto& [w, s] : hist) out += fmt(w) + ',' + fmt(s) + '\n';
  return out;
}

std::string cusps_json(const json& meta, const std::vector<double>& cusps) {
  json j;
  j["meta"] = meta;
  j["cusp_times"] = cusps;
  return j.dump(2) + "\n";
}

json work_report_json(const json& meta, const workstats::WorkReport& rep) {
  json j;
  j["meta"] = meta;
  j["state"] = rep.state_label;
  j["k"] = rep.k;
  j["cutoff"] = rep.cutoff;
  j["n_re"] = rep.n_re;
  j["n_re_corrected"] = rep.n_re_corrected;
  j["avg_work"] = {{"direct", rep.avg_work_direct},
                   {"moment", rep.avg_work_moment},
                   {"slope_fit", rep.avg_work_slope}};
  j["variance"] = {{"value", rep.variance.value},
                   {"cutoff", rep.variance.cutoff},
                   {"growth_exponent", rep.variance_growth_exponent}};
  j["tau_qsl"] = {{"tau", rep.tau}, {"value", rep.tau_qsl}};
  j["eps_trunc"] = rep.eps_trunc;
  return j;
}

json scaling_fit_json(const json& meta, double k, const std::string& family,
                      const std::pair<double, double>& n_range,
                      const scaling::ScalingFit& fit) {
  json j;
  j["meta"] = meta;
  j["k"] = k;
  j["state_family"] = family;
  j["N_range"] = {n_range.first, n_range.second};
  json tg = json::array(), beta = json::array(), gamma = json::array(),
       r2 = json::array();
  for (const auto& p : fit.points) {
    tg.push_back(p.t);
    beta.push_back(p.beta);
    gamma.push_back(p.gamma);
    r2.push_back(p.r2);
  }
  j["t_grid"] = tg;
  j["beta"] = beta;
  j["gamma"] = gamma;
  j["r2"] = r2;
  j["beta_law"] = {{"b0", fit.beta_law.amp}, {"b1", fit.beta_law.expo}};
  j["gamma_law"] = {{"form", fit.gamma_law.affine ? "affine" : "power"},
                    {"g0", fit.gamma_law.g0},
                    {"g1", fit.gamma_law.g1}};
  if (!fit.warnings.empty()) j["warnings"] = fit.warnings;
  return j;
}

EchoCsv read_echo_csv(const std::filesystem::path& path) {
  EchoCsv out;
  std::istringstream is(read_text(path));
  std::string line;
  bool have_meta = false, have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!have_meta) {
        out.meta = parse_meta_line(line);
        have_meta = true;
      }
      continue;
    }
    if (!have_header) {
      have_header = true;  // column names
      continue;
    }
    double v[5];
    int col = 0;
    std::size_t pos = 0;
    while (col < 5 && pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const auto tok = line.substr(pos, comma == std::string::npos
                                            ? std::string::npos
                                            : comma - pos);
      v[col++] = std::stod(tok);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (col < 5) throw IoError("echo csv: short row in " + path.string());
    out.t.push_back(v[0]);
    out.re.push_back(v[1]);
    out.im.push_back(v[2]);
    out.abs.push_back(v[3]);
  }
  return out;
}

}  // namespace quench::io
