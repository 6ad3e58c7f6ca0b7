#pragma once

// JSON run configuration.
//
// Frequencies are given in linear MHz and converted to rad/us on load; the
// document must carry "units": "MHz_linear". Times are in us, input
// amplitudes in sqrt(photons/us). Errors are ConfigError with the line of the
// offending key.

#include <optional>
#include <string>
#include <vector>

#include "eitcav/dynamics.hpp"
#include "eitcav/fullsim.hpp"
#include "eitcav/params.hpp"

namespace eitcav {

enum class Scenario { kSpectrum, kReflection, kDynamics, kSwitchSweep, kValidate };

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

enum class ChiSource { kClosedForm, kQuadrature, kTwoLevel };

struct SpectrumBlock {
  double min = from_mhz(-30.0);
  double max = from_mhz(30.0);
  std::size_t points = 2001;
  bool dense_insert = false;
  ChiSource chi = ChiSource::kClosedForm;
  int quadrature_nodes = 64;
};

enum class DynamicsMethod { kTimeDomain, kNumericInversion, kBoth };

struct DynamicsBlock {
  double t_end = 100.0;  ///< us
  std::size_t points = 1001;
  DynamicsMethod method = DynamicsMethod::kTimeDomain;
  int radial_nodes = 64;
  double cross_check_tol = 1e-6;
};

struct SweepBlock {
  double delta_s = 0.0;  ///< rad/us
  std::vector<double> n_s;
  bool find_n_star = false;
  FullsimOptions fullsim;
};

struct RunConfig {
  Scenario scenario = Scenario::kSpectrum;
  SystemParams params;
  SpectrumBlock spectrum;
  DynamicsBlock dynamics;
  SweepBlock sweep;
  std::vector<std::string> warnings;
};

/// Parses and validates a configuration document. `scenario_override`
/// replaces the document's scenario (the document may then omit it).
RunConfig parse_config(const std::string& text, const std::optional<std::string>& scenario_override = std::nullopt);
RunConfig load_config(const std::string& path, const std::optional<std::string>& scenario_override = std::nullopt);

}  // namespace eitcav
