#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lme/domain.hpp"
#include "lme/lme.hpp"

namespace lme {

/// Run configuration shared by the command-line tools. Flat `key = value`
/// config files feed it; command-line flags override file values.
struct RunConfig {
  Scalar gamma = 1.8;
  Scalar epsilon = 2.0;
  Scalar s = 3.0;
  Scalar theta = 1e-8;
  std::vector<Scalar> h_list = {0.2, 0.1, 0.05, 0.025};
  int dim = 2;
  std::vector<Scalar> box_lo, box_hi;  // empty means the unit box
  std::uint64_t seed = 0;
  Scalar jitter = 0.0;
  std::string out;
  bool quiet = false;
  std::string field = "sinusoid";
  int probes = 200;
  int boundary_face = 0;
  std::vector<Scalar> rho_list;  // empty: geometric 0.5h .. 1e-3h
  Scalar rate_value_min = 1.7, rate_value_max = 2.3;
  Scalar rate_grad_min = 0.7, rate_grad_max = 1.3;
  bool inject_fault = false;

  Domain domain() const;
  LmeParams params_at(Scalar h) const;
  /// Configuration echo embedded in every report.
  nlohmann::json echo() const;

  /// Applies one key = value setting; throws IoError on unknown keys or
  /// unparsable values.
  void set(const std::string& key, const std::string& value);
  static RunConfig from_file(const std::filesystem::path& path);
};

std::vector<Scalar> parse_scalar_list(const std::string& text);

}  // namespace lme
