#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

namespace scenario_sizer {

/// Every random draw in the library goes through an explicitly seeded engine of this type.
using Rng = std::mt19937_64;

/// P[Z > z] for a standard normal Z.
double normal_survival(double z);

/// P[Z <= z] for a standard normal Z.
double normal_cdf(double z);

/// Beta(a, b) variate built from two Gamma variates.
double sample_beta(Rng& rng, double a, double b);

/// Scalar law with an exact upper tail, used by the max-coordinate benchmark.
class ScalarDistribution {
 public:
  virtual ~ScalarDistribution() = default;
  virtual std::string name() const = 0;
  virtual double sample(Rng& rng) const = 0;
  /// P[u > m], strict inequality.
  virtual double survival(double m) const = 0;
};

class UniformDistribution final : public ScalarDistribution {
 public:
  UniformDistribution(double lower = 0.0, double upper = 1.0);
  std::string name() const override { return "uniform"; }
  double sample(Rng& rng) const override;
  double survival(double m) const override;

 private:
  double lower_;
  double upper_;
};

/// Mixture of a point mass at `atom` (probability `atom_mass`) and Uniform(0, 1).
///
/// The point mass makes many scenario solutions coincide, so the number of
/// scenarios supporting the solution is no longer fixed.
class AtomMixtureDistribution final : public ScalarDistribution {
 public:
  AtomMixtureDistribution(double atom, double atom_mass);
  std::string name() const override { return "atom"; }
  double sample(Rng& rng) const override;
  double survival(double m) const override;

  double atom() const noexcept { return atom_; }
  double atom_mass() const noexcept { return atom_mass_; }

 private:
  double atom_;
  double atom_mass_;
};

}  // namespace scenario_sizer
