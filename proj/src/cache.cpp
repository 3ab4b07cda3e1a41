#include "quench/cache.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "quench/errors.hpp"
#include "quench/version.hpp"

namespace quench::spectrum {
PerturbedSpectrum make_cached_spectrum(Backend, double, std::size_t,
                                       std::vector<double>,
                                       std::vector<double>,
                                       std::vector<double>);
}

namespace quench::cache {

namespace {

constexpr char kMagic[8] = {'Q', 'S', 'P', 'C', '0', '0', '0', '1'};

std::uint64_t double_bits(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool get(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return bool(is);
}

}  // namespace

std::string spectrum_cache_name(double k, std::size_t cutoff) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "spec_k%016llx_M%zu_",
                static_cast<unsigned long long>(double_bits(k)), cutoff);
  return std::string(buf) + convention_hash() + ".bin";
}

void save_spectrum(const spectrum::PerturbedSpectrum& s,
                   const std::filesystem::path& dir) {
  if (s.is_strong()) return;  // analytic, nothing worth storing
  std::filesystem::create_directories(dir);
  const auto final_path = dir / spectrum_cache_name(s.defect_strength(), s.cutoff());
  const auto tmp_path = final_path.string() + ".tmp";
  {
    std::ofstream os(tmp_path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cache: cannot open " + tmp_path);
    os.write(kMagic, sizeof kMagic);
    const std::string hash = convention_hash();
    const std::uint32_t hlen = static_cast<std::uint32_t>(hash.size());
    put(os, hlen);
    os.write(hash.data(), hlen);
    put(os, double_bits(s.defect_strength()));
    const std::uint64_t cut = s.cutoff();
    put(os, cut);
    auto dump = [&os](std::span<const double> v) {
      const std::uint64_t n = v.size();
      put(os, n);
      os.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(n * sizeof(double)));
    };
    dump(s.root_offsets());
    dump(s.row_norms());
    dump(s.origin_values());
    if (!os) throw IoError("cache: write failed for " + tmp_path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) throw IoError("cache: rename failed: " + ec.message());
}

std::optional<spectrum::PerturbedSpectrum> load_spectrum(
    const std::filesystem::path& dir, double k, std::size_t cutoff) {
  const auto path = dir / spectrum_cache_name(k, cutoff);
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  std::uint32_t hlen = 0;
  if (!get(is, hlen) || hlen > 64) return std::nullopt;
  std::string hash(hlen, '\0');
  is.read(hash.data(), hlen);
  if (!is || hash != convention_hash()) return std::nullopt;
  std::uint64_t kbits = 0, cut = 0;
  if (!get(is, kbits) || kbits != double_bits(k)) return std::nullopt;
  if (!get(is, cut) || cut != cutoff) return std::nullopt;
  auto slurp = [&is](std::vector<double>& v) {
    std::uint64_t n = 0;
    if (!get(is, n) || n > (1ull << 32)) return false;
    v.resize(n);
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    return bool(is);
  };
  std::vector<double> deltas, norms, u;
  if (!slurp(deltas) || !slurp(norms) || !slurp(u)) return std::nullopt;
  if (deltas.size() != cutoff || norms.size() != cutoff ||
      u.size() != cutoff + 1)
    return std::nullopt;
  return spectrum::make_cached_spectrum(spectrum::Backend::finite_k, k, cutoff,
                                        std::move(deltas), std::move(norms),
                                        std::move(u));
}

spectrum::PerturbedSpectrum get_or_build(const std::filesystem::path& dir,
                                         double k, std::size_t cutoff,
                                         unsigned workers) {
  if (std::isinf(k)) return spectrum::build_strong_spectrum(cutoff);
  if (!dir.empty()) {
    if (auto hit = load_spectrum(dir, k, cutoff)) return std::move(*hit);
  }
  auto s = spectrum::build_finite_spectrum(k, cutoff, workers);
  if (!dir.empty()) save_spectrum(s, dir);
  return s;
}

}  // namespace quench::cache
