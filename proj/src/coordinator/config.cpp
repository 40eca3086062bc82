#include "mgres/coordinator/config.hpp"

#include <stdexcept>

namespace mgres::coordinator {

void ScenarioConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
  if (alpha < 0) throw std::invalid_argument("config: alpha must be >= 0");
  if (!(delta_f_max > 0)) throw std::invalid_argument("config: delta_f_max must be > 0");
  if (!(f0_hz > 0)) throw std::invalid_argument("config: f0 must be > 0");
  if (max_stages < 1) throw std::invalid_argument("config: max_stages must be >= 1");
  if (!(sim.dt > 0)) throw std::invalid_argument("config: sim dt must be > 0");
  if (!(sim.duration > 0)) throw std::invalid_argument("config: sim duration must be > 0");
  inverter.validate();
  for (const auto& [mg, p] : inverter_by_mg) p.validate();
}

}  // namespace mgres::coordinator
