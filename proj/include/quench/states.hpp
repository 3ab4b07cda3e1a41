#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Initial states used in the quench protocol.  Only even trap levels appear
// (odd levels decouple from the origin defect); level 2j is referred to by its
// even-sector rank j throughout.  Single-particle states are dense over ranks
// 0..support-1; two-fermion states are Slater-determinant superpositions over
// ordered rank pairs (a, b), a < b.

namespace quench::states {

enum class Flavor {
  pure_single,
  diagonal_single,
  pure_two_fermion,
  diagonal_two_fermion,
};

struct InitialState {
  Flavor flavor = Flavor::pure_single;
  std::string label;

  // pure flavors: amplitudes; diagonal flavors: weights
  std::vector<std::complex<double>> amps;
  std::vector<double> weights;
  // two-fermion flavors only: rank pairs aligned with amps/weights
  std::vector<std::pair<int, int>> pairs;

  // coherent-state truncation: norm captured by the cut, 1 elsewhere
  double truncation_norm = 1.0;

  bool is_diagonal() const {
    return flavor == Flavor::diagonal_single ||
           flavor == Flavor::diagonal_two_fermion;
  }
  bool is_fermion() const {
    return flavor == Flavor::pure_two_fermion ||
           flavor == Flavor::diagonal_two_fermion;
  }
  std::size_t support_size() const {
    return is_diagonal() ? weights.size() : amps.size();
  }
  // largest even-sector rank appearing in the state
  std::size_t max_rank() const;
};

// (-1)^j / sqrt(N) on ranks j = 0..N-1
InitialState equal_superposition(std::int64_t n_terms);

// cos(theta/2)|0> + e^{i phi} sin(theta/2)|2>
InitialState two_level(double theta, double phi);

// truncated, renormalized even coherent state with the (-1)^{n/2} phase
InitialState coherent(std::complex<double> xi, std::int64_t n_terms);

// Slater pairs (0, 2j), j = 1..N, amplitude (-1)^j/sqrt(N); include_phase
// drops the alternating sign when false
InitialState two_fermion_superposition(std::int64_t n_terms,
                                       bool include_phase = true);

// weights = squared moduli, phases discarded; rejects diagonal input
InitialState dephase(const InitialState& s);

// CLI grammar: equal:N=10 | diag-equal:N=10 | twolevel:theta=1.0,phi=0.5 |
// coherent:xi=1.5+0i,N=40 | diag-coherent:... | fermi2:N=10 |
// diag-fermi2:N=10
InitialState parse_state_spec(const std::string& spec);

}  // namespace quench::states
