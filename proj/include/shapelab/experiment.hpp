#pragma once

// Config-driven experiment runner: JSON configs in, CSV artifacts and a run
// manifest out. Exit codes: 0 success, 2 config error, 3 numerical failure
// (including failed in-config assertions).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapelab/spectral.hpp"

namespace shapelab {

struct ExperimentConfig {
  std::string id;  // disk-oracle | solve | fd-check | schiffer-check |
                   // monotonicity | flow | hessian-check | symmetry-check
  nlohmann::json params = nlohmann::json::object();
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

// Runs the experiment, writes CSVs plus run_manifest.json, returns the exit
// code. Nothing is written when the config is rejected.
int run_experiment(const ExperimentConfig& config);

// RFC-4180 CSV with a header row, CRLF line endings, 17 significant digits.
// Throws LengthMismatch when columns differ in length.
void emit_plot_data(const std::string& path, const std::vector<std::string>& names,
                    const std::vector<Eigen::ArrayXd>& columns);

std::string format_float(double value);  // %.17g

// splitmix64; deterministic across platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

// Band-limited normal field: sum over m in [band_min, band_max] of
// a_m cos(m theta) + b_m sin(m theta) with uniform [-1,1] amplitudes.
BoundaryScalar random_band_limited(SeededRng& rng, int node_count, int band_min = 1,
                                   int band_max = 4);

std::uint64_t fnv1a_digest(const std::string& bytes);

}  // namespace shapelab
