#include "heraldkit/photon_source.hpp"

#include <stdexcept>

namespace heraldkit {

void MemoryParams::validate() const {
  if (!(lifetime_tau > 0.0)) {
    throw std::invalid_argument("MemoryParams: lifetime_tau must be > 0");
  }
  if (zeeman_shift < 0.0) {
    throw std::invalid_argument("MemoryParams: zeeman_shift must be >= 0");
  }
  if (efficiency < 0.0 || efficiency > 1.0) {
    throw std::invalid_argument("MemoryParams: efficiency outside [0, 1]");
  }
}

void LinkConfig::validate() const {
  memory_a.validate();
  memory_b.validate();
}

double delta_omega(const LinkConfig& config) {
  if (config.mapping == Mapping::Conventional) {
    return config.memory_b.zeeman_shift - config.memory_a.zeeman_shift;
  }
  return config.memory_a.zeeman_shift + config.memory_b.zeeman_shift;
}

StateFamily heralded_family(const LinkConfig& config) {
  return config.mapping == Mapping::Conventional ? StateFamily::Psi
                                                 : StateFamily::Phi;
}

double sample_emission_time(const MemoryParams& params, RngStream& rng) {
  return rng.exponential(params.lifetime_tau);
}

}  // namespace heraldkit
