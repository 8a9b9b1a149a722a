#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "reachquant/observer.hpp"
#include "reachquant/quantizer.hpp"
#include "reachquant/sim.hpp"

namespace reachquant {

/// A full experiment description, read from a flat key = value text file.
/// Matrices are bracketed row-major ([a b; c d]); see the README for the
/// format reference. parse and emit round-trip exactly.
struct ExperimentConfig {
  PlantModel plant;
  BoundsConfig bounds;
  ObserverCertificate cert;
  QuantizerConfig quantizer;
  std::vector<SchemeKind> schemes;  // from key `scheme`: set | norm | both
  SignalSpec signals;
  double T = 0.0;
  double horizon = 0.0;
  double dt = 1e-3;
  Vec x0;                           // empty means x_c
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
  GrowthBound growth = GrowthBound::Integral;
  DecoderRange decoder = DecoderRange::Full;
  std::vector<double> sweep_T;
  std::vector<int> sweep_N;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  /// Cross-field checks: plant dimensions, certificate shapes, x0 inside the
  /// initial box, T a multiple of dt, and so on. Throws ConfigError naming
  /// the offending field.
  void validate() const;

  std::string emit() const;
  static ExperimentConfig parse_string(std::string_view text,
                                       const std::string& name = "<string>");
  static ExperimentConfig parse_file(const std::string& path);
};

}  // namespace reachquant
