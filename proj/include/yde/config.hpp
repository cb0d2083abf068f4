#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "yde/fbm.hpp"
#include "yde/solver.hpp"

namespace yde {

// Carries every violated field at once so one pass fixes them all.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }
 private:
  std::vector<std::string> violations_;
};

struct CoefficientSpec {
  std::string kind{"zero"};  // zero | constant | periodic | csv
  Matrix value;              // constant
  Matrix mean, amplitude, frequency, phase;  // periodic: m + a sin(2 pi f t + phi)
  std::string file;          // csv
};

struct DriverSpec {
  std::string kind{"fbm"};  // fbm | csv | linear | zero
  FbmSpec fbm;              // fbm.seed mirrors the experiment seed
  std::string file;
};

struct NumericsSpec {
  double p{1.5};
  double q{1.5};
  double mu{0.0};            // 0 = solver default
  double tol{1e-10};
  int max_iterations{200};
  int cells_per_unit{128};   // grid for synthetic drivers and coefficients
  double h{1.0};             // spectrum step
  double horizon{1.0};
  double t_max{0.0};         // 0 = oracle default (2 * horizon)
  bool window_set{false};
  double window_a{0.0};
  double window_b{0.0};
  std::vector<double> x0;    // empty = first basis vector
  std::string method{"qr"};  // qr | svd
  int reorth_every{10};
  double tail_fraction{0.2};
  double mean_tol{0.02};
  double threshold{0.0};     // 0 = regularity default (0.05 d)
};

struct EnsembleSpec {
  int members{100};
  int sub_steps{16};
};

struct OutputSpec {
  std::string dir{"."};
  std::string prefix{"run"};
};

struct ExperimentConfig {
  int version{1};
  std::uint64_t seed{1};
  int dimension{1};
  bool triangular{false};
  CoefficientSpec a;
  CoefficientSpec c;
  CoefficientSpec integrand;  // cmd integrate only
  DriverSpec driver;
  NumericsSpec numerics;
  EnsembleSpec ensemble;
  OutputSpec output;
};

/* Versioned JSON schema (version: 1).  Unknown keys anywhere are rejected,
 * every violated field is reported, and a loaded config serializes back to
 * the same document (defaults included) so fixtures diff cleanly. */
ExperimentConfig load_config(const std::string& file);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

// Driver path over exactly the given span.  fbm and csv drivers must cover
// it; linear and zero drivers are sampled at cells_per_unit.
SampledPath build_driver(const ExperimentConfig& cfg, const Interval& span);

// Coefficient sampled on the given grid (csv coefficients keep their own
// grid and must cover it).
SampledPath build_coefficient(const CoefficientSpec& spec, int dim,
                              const std::vector<double>& grid);

LinearYDE build_system(const ExperimentConfig& cfg, const SampledPath& driver);

}  // namespace yde
