#include "quench/states.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "quench/errors.hpp"

namespace quench::states {

std::size_t InitialState::max_rank() const {
  if (is_fermion()) {
    std::size_t top = 0;
    for (const auto& [a, b] : pairs) top = std::max<std::size_t>(top, b);
    return top;
  }
  return support_size() == 0 ? 0 : support_size() - 1;
}

InitialState equal_superposition(std::int64_t n_terms) {
  if (n_terms < 1) throw ValidationError("equal_superposition: N must be >= 1");
  InitialState s;
  s.flavor = Flavor::pure_single;
  s.label = "equal:N=" + std::to_string(n_terms);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n_terms));
  s.amps.resize(n_terms);
  for (std::int64_t j = 0; j < n_terms; ++j)
    s.amps[j] = (j % 2 == 0) ? inv : -inv;
  return s;
}

InitialState two_level(double theta, double phi) {
  InitialState s;
  s.flavor = Flavor::pure_single;
  s.label = "twolevel:theta=" + std::to_string(theta) +
            ",phi=" + std::to_string(phi);
  s.amps = {std::cos(0.5 * theta),
            std::polar(std::sin(0.5 * theta), phi)};
  return s;
}

InitialState coherent(std::complex<double> xi, std::int64_t n_terms) {
  if (n_terms < 1) throw ValidationError("coherent: N must be >= 1");
  InitialState s;
  s.flavor = Flavor::pure_single;
  s.label = "coherent";
  s.amps.resize(n_terms);
  // (-1)^{n/2} xi^n / sqrt(n!) on n = 2j, evaluated by term recurrence:
  // a_{j+1}/a_j = -xi^2 / sqrt((2j+1)(2j+2))
  std::complex<double> term = 1.0;
  double norm2 = 0.0;
  for (std::int64_t j = 0; j < n_terms; ++j) {
    s.amps[j] = term;
    norm2 += std::norm(term);
    term *= -xi * xi /
            std::sqrt(static_cast<double>(2 * j + 1) *
                      static_cast<double>(2 * j + 2));
  }
  // tail of the untruncated even-sector norm: cosh(|xi|^2) = sum |xi|^{4j}/(2j)!
  double full = norm2;
  double tail = std::norm(term);
  for (std::int64_t j = n_terms; tail > 1e-18 * full && j < n_terms + 400; ++j) {
    full += tail;
    tail *= std::norm(xi) * std::norm(xi) /
            (static_cast<double>(2 * j + 1) * static_cast<double>(2 * j + 2));
  }
  s.truncation_norm = norm2 / full;
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : s.amps) a *= inv;
  return s;
}

InitialState two_fermion_superposition(std::int64_t n_terms,
                                       bool include_phase) {
  if (n_terms < 1)
    throw ValidationError("two_fermion_superposition: N must be >= 1");
  InitialState s;
  s.flavor = Flavor::pure_two_fermion;
  s.label = "fermi2:N=" + std::to_string(n_terms);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n_terms));
  for (std::int64_t j = 1; j <= n_terms; ++j) {
    s.pairs.emplace_back(0, static_cast<int>(j));
    // alternating phase, global sign chosen so the (0,2) pair is positive
    const double sign = (!include_phase || j % 2 == 1) ? 1.0 : -1.0;
    s.amps.emplace_back(sign * inv);
  }
  return s;
}

InitialState dephase(const InitialState& s) {
  if (s.is_diagonal()) throw ValidationError("dephase: input already diagonal");
  InitialState d;
  d.flavor = s.flavor == Flavor::pure_single ? Flavor::diagonal_single
                                             : Flavor::diagonal_two_fermion;
  d.label = "diag-" + s.label;
  d.pairs = s.pairs;
  d.truncation_norm = s.truncation_norm;
  d.weights.reserve(s.amps.size());
  for (const auto& a : s.amps) d.weights.push_back(std::norm(a));
  return d;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto comma = body.find(',', pos);
    const auto item = body.substr(pos, comma == std::string::npos
                                           ? std::string::npos
                                           : comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ValidationError("state spec: expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return kv;
}

std::complex<double> parse_complex(const std::string& text) {
  // forms: "1.5", "1.5+0i", "-0.3-2.25i", "2i"
  if (text.empty()) throw ValidationError("state spec: empty complex literal");
  std::string t = text;
  if (t.back() == 'i' || t.back() == 'I') {
    t.pop_back();
    // split at the last +/- that is not an exponent sign or leading
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
      if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos)
      return {0.0, t.empty() || t == "+" ? 1.0 : (t == "-" ? -1.0 : std::stod(t))};
    const std::string re = t.substr(0, split);
    std::string im = t.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {std::stod(re), std::stod(im)};
  }
  return {std::stod(t), 0.0};
}

std::int64_t require_n(const std::map<std::string, std::string>& kv) {
  const auto it = kv.find("N");
  if (it == kv.end()) throw ValidationError("state spec: missing N");
  return std::stoll(it->second);
}

}  // namespace

InitialState parse_state_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  const auto kv = parse_kv(body);
  try {
    if (head == "equal") return equal_superposition(require_n(kv));
    if (head == "diag-equal") return dephase(equal_superposition(require_n(kv)));
    if (head == "twolevel" || head == "diag-twolevel") {
      const auto th = kv.find("theta"), ph = kv.find("phi");
      if (th == kv.end() || ph == kv.end())
        throw ValidationError("state spec: twolevel needs theta and phi");
      auto s = two_level(std::stod(th->second), std::stod(ph->second));
      return head == "twolevel" ? s : dephase(s);
    }
    if (head == "coherent" || head == "diag-coherent") {
      const auto xi = kv.find("xi");
      if (xi == kv.end()) throw ValidationError("state spec: coherent needs xi");
      auto s = coherent(parse_complex(xi->second), require_n(kv));
      return head == "coherent" ? s : dephase(s);
    }
    if (head == "fermi2" || head == "diag-fermi2") {
      bool phase = true;
      if (const auto it = kv.find("phase"); it != kv.end())
        phase = it->second != "0" && it->second != "false";
      auto s = two_fermion_superposition(require_n(kv), phase);
      return head == "fermi2" ? s : dephase(s);
    }
  } catch (const std::logic_error& e) {
    throw ValidationError("state spec '" + spec + "': " + e.what());
  }
  throw ValidationError("state spec: unknown family '" + head + "'");
}

}  // namespace quench::states
