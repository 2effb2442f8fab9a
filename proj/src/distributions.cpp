#include "scenario_sizer/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scenario_sizer {

double normal_survival(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double sample_beta(Rng& rng, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("sample_beta: shapes must be positive");
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

UniformDistribution::UniformDistribution(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower < upper)) throw std::invalid_argument("uniform distribution needs lower < upper");
}

double UniformDistribution::sample(Rng& rng) const {
  return std::uniform_real_distribution<double>(lower_, upper_)(rng);
}

double UniformDistribution::survival(double m) const {
  return std::clamp((upper_ - m) / (upper_ - lower_), 0.0, 1.0);
}

AtomMixtureDistribution::AtomMixtureDistribution(double atom, double atom_mass)
    : atom_(atom), atom_mass_(atom_mass) {
  if (!(atom_mass >= 0.0 && atom_mass <= 1.0)) {
    throw std::invalid_argument("atom mass must lie in [0, 1]");
  }
}

double AtomMixtureDistribution::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < atom_mass_) return atom_;
  return unit(rng);
}

double AtomMixtureDistribution::survival(double m) const {
  const double continuous = std::clamp(1.0 - m, 0.0, 1.0);
  const double atom_part = atom_ > m ? 1.0 : 0.0;
  return atom_mass_ * atom_part + (1.0 - atom_mass_) * continuous;
}

}  // namespace scenario_sizer
