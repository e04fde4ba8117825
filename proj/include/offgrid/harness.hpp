// Copyright 2026 The offgrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "offgrid/baseline_tv.hpp"
#include "offgrid/solver.hpp"

namespace offgrid {

/// Parameters shared by the experiment drivers. Sizes are half-widths:
/// Gamma = [-gamma_k, gamma_k]^2, Lambda0 = [-k0, k0]^2, Lambda1 = [-k, k]^2.
struct ExperimentConfig {
  int gamma_k = 16;
  int k0 = 1;
  int k = 7;
  /// Filter sweep values of k and edge sweep values of k0.
  std::vector<int> k_values{1, 2, 3, 4, 5, 6, 7};
  std::vector<int> k0_values{1, 2, 3, 4};
  /// Filter half-width used throughout the edge sweep.
  int edge_sweep_k = 6;
  std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int trials = 10;
  std::uint64_t master_seed = 2026;
  double success_threshold = 1e-3;
  double smoothness = 0.1;
  /// Require Gamma to contain 2 Lambda1 + Lambda0 for every swept cell.
  bool theorem_regime = true;
  std::vector<double> deltas{1e-4, 1e-3, 1e-2};
  /// Sampling fraction for the noise sweep and the TV comparison.
  double fixed_fraction = 0.6;
  SolverConfig solver;
  TvConfig tv;
  std::string output_dir = "offgrid-out";

  /// Solver defaults favour throughput: over-relaxation 1.6, tolerances 1e-5,
  /// at most 500 iterations.
  ExperimentConfig();

  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
  /// Desk-scale run: 33x33 grid with a solver tuned for throughput.
  static ExperimentConfig desk();
  /// Full scale: 65x65 grid, filter sweep up to the theorem limit.
  static ExperimentConfig paper();
};

/// True when 2 k + k0 <= gamma_k, i.e. Gamma contains 2 Lambda1 + Lambda0.
bool in_theorem_regime(int gamma_k, int k, int k0);

std::size_t sample_count(double fraction, std::size_t grid_size);

enum class SweepAxis { Filter, Edge };

struct TrialRecord {
  int k = 0;
  int k0 = 0;
  double fraction = 0.0;
  std::size_t samples = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double rel_err = 0.0;
  bool success = false;
  bool converged = false;
  int iterations = 0;
  int redraws = 0;
  /// Error kind name when the solve threw; empty otherwise.
  std::string failure;
  double wall_time = 0.0;
};

struct PhaseCell {
  int k = 0;
  int k0 = 0;
  double fraction = 0.0;
  std::size_t samples = 0;
  int success_count = 0;
  int trials = 0;
  double mean_rel_err = 0.0;
  int soft_failures = 0;

  double success_rate() const { return trials ? double(success_count) / trials : 0.0; }
};

struct PhaseResult {
  SweepAxis axis = SweepAxis::Filter;
  std::size_t grid_size = 0;
  std::vector<PhaseCell> cells;
  std::vector<TrialRecord> trials;
  double wall_time = 0.0;

  /// Distinct swept values (k for the filter axis, k0 for the edge axis).
  std::vector<int> parameters() const;
  std::vector<const PhaseCell*> row(int parameter) const;
  bool any_soft_failure() const;
};

/// Seed of one trial, derived from the master seed by counter hashing.
std::uint64_t trial_seed(std::uint64_t master, SweepAxis axis, int k, int k0, std::size_t fraction_index, int trial);

struct TrialProblem {
  FourierGrid truth;
  FourierGrid samples;
  /// Phantom draws rejected because their edge curve could not be integrated.
  int redraws = 0;
};

/// Phantom coefficients on Gamma and their uniformly masked copy, both drawn from `seed`.
/// Degenerate edge curves are redrawn from derived seeds; DegenerateDraw after 100 attempts.
TrialProblem draw_problem(const ExperimentConfig& cfg, int k0, double fraction, std::uint64_t seed);

/// One recovery: random phantom, uniform mask with forced DC, equality solve.
/// Phantom and mask are redrawn from `seed` on every trial.
TrialRecord run_trial(const ExperimentConfig& cfg, int k, int k0, double fraction, std::uint64_t seed);

/// Success-rate grid over (swept parameter x sampling fraction). Trials run
/// in parallel; results depend only on the configuration.
PhaseResult run_phase_transition(const ExperimentConfig& cfg, SweepAxis axis, std::ostream* log = nullptr);

/// Sample count where the success rate of a row first reaches `level`,
/// linearly interpolated between fractions; NaN when it never does.
double minimal_sufficient_samples(const PhaseResult& r, int parameter, double level = 0.5);

/// Sum of success rates over the fractions of one row.
double success_area(const PhaseResult& r, int parameter);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct NoiseRecord {
  double delta = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  /// ||T(f) - T(g)||_F.
  double observed = 0.0;
  /// 5 |Gamma|^2 delta.
  double bound = 0.0;
  double data_residual = 0.0;
  bool converged = false;
};

struct NoiseResult {
  std::size_t grid_size = 0;
  std::vector<NoiseRecord> rows;
  double wall_time = 0.0;
  double mean_observed(double delta) const;
};

/// Complex Gaussian noise with ||P_Omega noise||_2 = delta (DC excluded), then solve_noisy.
NoiseResult run_noise_sweep(const ExperimentConfig& cfg, const std::vector<double>& deltas, std::ostream* log = nullptr);

struct ComparisonRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double fraction = 0.0;
  double snr_proposed = 0.0;
  double snr_tv = 0.0;
  bool converged = false;
  bool tv_converged = false;
};

struct ComparisonResult {
  std::vector<ComparisonRecord> rows;
  double wall_time = 0.0;
};

/// Same samples fed to the lifted solver and to TV minimization; SNR over
/// Gamma. With `pgm_dir` set, each trial writes truth | proposed | TV rasters.
ComparisonResult run_comparison(const ExperimentConfig& cfg, const std::string& pgm_dir = "", std::ostream* log = nullptr);

/// RFC 4180 CSV (CRLF line ends). Rows carry the per-trial seed.
void write_trials_csv(std::ostream& out, const PhaseResult& r);
void write_cells_csv(std::ostream& out, const PhaseResult& r);
void write_noise_csv(std::ostream& out, const NoiseResult& r);
void write_comparison_csv(std::ostream& out, const ComparisonResult& r);

/// Success-rate heatmap: rows are the swept parameter, columns the fractions.
void write_phase_svg(std::ostream& out, const PhaseResult& r);

/// Caps OpenMP threads by OFFGRID_THREADS when set; returns the thread count in use.
int configure_threads();

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
void to_json(nlohmann::json& j, const PhaseResult& r);

std::string to_string(SweepAxis axis);

}  // namespace offgrid
