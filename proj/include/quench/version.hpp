#pragma once

#include <cstdint>
#include <string>

namespace quench {

inline constexpr const char* kVersion = "0.1.0";

// Every numerical convention that affects emitted values.  Bumping any of
// these invalidates cached spectra and changes output metadata.
inline constexpr const char* kConventionString =
    "hbar=omega=1;psi0=(2pi)^-1/4;Estrong=m+3/2;"
    "nu=sum q exp(-i(E'm-En)t);lambda0-sign=(-1)^(m/2);anchor-positive;"
    "finite-basis=cutoff+1";

inline std::string convention_hash() {
  // FNV-1a, 64-bit
  std::uint64_t h = 14695981039346656037ull;
  for (const char* p = kConventionString; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ull;
  }
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace quench
