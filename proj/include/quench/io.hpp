#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "quench/echo.hpp"
#include "quench/scaling.hpp"
#include "quench/workstats.hpp"

// Deterministic file emission: '.' decimal separator, '\n' line endings,
// 17 significant digits.  Every file starts with a metadata header (CSV: a
// single '# {...}' line) whose JSON round-trips through parse_meta.

namespace quench::io {

using json = nlohmann::ordered_json;

std::string fmt(double x);

// metadata skeleton: version, convention hash, command, parameters
json make_meta(const std::string& command, const json& params);

// parse the '# {...}' header line of a CSV (or a whole JSON document) back
// into the metadata object
json parse_meta_line(const std::string& line);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string echo_csv(const json& meta, const echo::EchoSeries& series);
std::string kdq_csv(const json& meta, const echo::QuasiprobTable& table);
std::string mhq_csv(const json& meta,
                    const std::vector<std::pair<double, double>>& hist);
std::string cusps_json(const json& meta, const std::vector<double>& cusps);

json work_report_json(const json& meta, const workstats::WorkReport& rep);
json scaling_fit_json(const json& meta, double k, const std::string& family,
                      const std::pair<double, double>& n_range,
                      const scaling::ScalingFit& fit);

// columns of an emitted echo CSV (skips '#' header lines)
struct EchoCsv {
  json meta;
  std::vector<double> t, re, im, abs;
};
EchoCsv read_echo_csv(const std::filesystem::path& path);

}  // namespace quench::io
