#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "quench/spectrum.hpp"

// Binary cache for finite-k spectra, keyed by (backend, k, cutoff,
// convention hash).  The strong-coupling backend is analytic and is never
// cached.  Writes are atomic (temp file + rename), so a warm cache returns
// bit-identical spectra.

namespace quench::cache {

std::string spectrum_cache_name(double k, std::size_t cutoff);

void save_spectrum(const spectrum::PerturbedSpectrum& s,
                   const std::filesystem::path& dir);

std::optional<spectrum::PerturbedSpectrum> load_spectrum(
    const std::filesystem::path& dir, double k, std::size_t cutoff);

// Load when present, otherwise build and (best effort) store.
spectrum::PerturbedSpectrum get_or_build(const std::filesystem::path& dir,
                                         double k, std::size_t cutoff,
                                         unsigned workers = 0);

}  // namespace quench::cache
