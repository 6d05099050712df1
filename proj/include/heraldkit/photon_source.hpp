#pragma once

#include "heraldkit/quantum_core.hpp"
#include "heraldkit/rng.hpp"

namespace heraldkit {

// Units: times in nanoseconds, angular frequencies in rad/ns throughout the
// library. External files use ns and MHz (see experiments_io).

// One quantum memory. zeeman_shift is the angular shift of |up> above line
// center (|down> sits at -zeeman_shift); only differences and sums of the
// two memories' shifts ever enter downstream formulas, absolute photon
// carrier frequencies are never stored.
struct MemoryParams {
  double zeeman_shift = 0.0;  // rad/ns, >= 0
  double lifetime_tau = 8.1;  // ns, > 0
  double efficiency = 1.0;    // collection x detection, folded scalar

  void validate() const;
};

// Polarization-frequency mapping at the analyzer input. Conventional: same
// polarization from both memories is tied to the same atomic state.
// Waveplate: a half-wave plate in one arm ties equal polarizations to
// opposite Zeeman shifts. The waveplate angle is binarized to these two
// physically used settings.
enum class Mapping { Conventional, Waveplate };

struct LinkConfig {
  MemoryParams memory_a;
  MemoryParams memory_b;
  Mapping mapping = Mapping::Conventional;
  double phi_0 = 0.0;  // stable intermemory phase, rad

  void validate() const;
};

// Same-polarization photon frequency difference, signed, rad/ns.
// Conventional: mu_B - mu_A. Waveplate: mu_A + mu_B.
double delta_omega(const LinkConfig& config);

// Conventional heralds the odd-parity family Psi; Waveplate heralds Phi.
StateFamily heralded_family(const LinkConfig& config);

// Emission time from the excitation trigger, exponential with mean
// lifetime_tau.
double sample_emission_time(const MemoryParams& params, RngStream& rng);

}  // namespace heraldkit
