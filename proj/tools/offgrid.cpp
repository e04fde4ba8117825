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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "offgrid/analysis.hpp"
#include "offgrid/baseline_tv.hpp"
#include "offgrid/error.hpp"
#include "offgrid/harness.hpp"
#include "offgrid/rng.hpp"

using namespace offgrid;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSoft = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

template <class F>
std::string render(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

FourierGrid read_grid(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") return fourier_grid_from_json(read_json_file(path));
  return read_fgrd_file(path);
}

struct ExperimentOptions {
  std::string config;
  std::string out;
  int trials = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string profile;
};

void add_experiment_options(CLI::App* app, ExperimentOptions& o) {
  app->add_option("-c,--config", o.config, "Experiment configuration (JSON)");
  app->add_option("-o,--out", o.out, "Output directory (overrides the configuration)");
  app->add_option("--trials", o.trials, "Trials per cell (overrides the configuration)");
  app->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& s) { o.seed = s, o.seed_set = true; }, "Master seed");
  app->add_option("--profile", o.profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
}

ExperimentConfig load_experiment(const ExperimentOptions& o) {
  json j = o.config.empty() ? json::object() : read_json_file(o.config);
  if (!o.profile.empty()) j["profile"] = o.profile;
  if (!o.out.empty()) j["output_dir"] = o.out;
  if (o.trials > 0) j["trials"] = o.trials;
  if (o.seed_set) j["master_seed"] = o.seed;
  try {
    return j.get<ExperimentConfig>();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-the-grid recovery of piecewise constant images from Fourier samples"};
  app.require_subcommand(1);
  configure_threads();

  // phantom make
  auto* phantom = app.add_subcommand("phantom", "Phantom generation");
  phantom->require_subcommand(1);
  auto* make = phantom->add_subcommand("make", "Random piecewise constant phantom and its Fourier coefficients");
  int pm_k0 = 1, pm_grid = 16, pm_raster = 0;
  std::uint64_t pm_seed = 1;
  double pm_smooth = 0.1, pm_fraction = 1.0;
  std::string pm_out = "phantom.fgrd", pm_pgm, pm_curve;
  bool pm_stripe = false;
  make->add_option("--k0", pm_k0, "Edge half-bandwidth")->check(CLI::PositiveNumber);
  make->add_option("--grid-k", pm_grid, "Fourier grid half-width")->check(CLI::PositiveNumber);
  make->add_option("--seed", pm_seed, "Random seed");
  make->add_option("--smoothness", pm_smooth, "Coefficient decay");
  make->add_option("--fraction", pm_fraction, "Sampled fraction of the grid (JSON output carries the mask)")
      ->check(CLI::Range(0.0, 1.0));
  make->add_flag("--stripe", pm_stripe, "Use the stripe phantom instead of a random one");
  make->add_option("-o,--out", pm_out, "Output file (.fgrd or .json)");
  make->add_option("--pgm", pm_pgm, "Also write a raster");
  make->add_option("--raster", pm_raster, "Raster size for --pgm (default 256)");
  make->add_option("--curve-csv", pm_curve, "Also write the traced edge curve");

  // lift rank
  auto* lift = app.add_subcommand("lift", "Lifted matrix utilities");
  lift->require_subcommand(1);
  auto* rank = lift->add_subcommand("rank", "Singular values and numerical rank of the lifted matrix");
  std::string lr_in;
  int lr_k = 3, lr_k0 = 1;
  rank->add_option("-i,--in", lr_in, "Fourier grid (.fgrd or .json)")->required();
  rank->add_option("--k", lr_k, "Filter half-width")->check(CLI::PositiveNumber);
  rank->add_option("--k0", lr_k0, "Edge half-bandwidth used for the predicted rank")->check(CLI::PositiveNumber);

  // solve
  auto* solve = app.add_subcommand("solve", "Recover the full Fourier grid from masked samples");
  std::string sv_in, sv_out = "recovered.fgrd", sv_config, sv_report;
  int sv_k = 3;
  double sv_delta = -1.0;
  solve->add_option("-i,--in", sv_in, "Masked samples (.json with mask)")->required();
  solve->add_option("--k", sv_k, "Filter half-width")->check(CLI::PositiveNumber);
  solve->add_option("-c,--config", sv_config, "Solver configuration (JSON)");
  solve->add_option("--delta", sv_delta, "Noise-ball radius (selects the noisy solver)");
  solve->add_option("-o,--out", sv_out, "Recovered grid (.fgrd or .json)");
  solve->add_option("--report", sv_report, "Solve report (JSON)");

  // analyze rho
  auto* analyze = app.add_subcommand("analyze", "Incoherence analysis");
  analyze->require_subcommand(1);
  auto* rho = analyze->add_subcommand("rho", "Upper bound on the incoherence measure of an edge curve");
  int ar_k0 = 1, ar_k = 3, ar_restarts = 8;
  std::uint64_t ar_seed = 1;
  double ar_smooth = 0.1, ar_level = 0.0;
  rho->add_option("--k0", ar_k0, "Edge half-bandwidth")->check(CLI::PositiveNumber);
  rho->add_option("--k", ar_k, "Filter half-width")->check(CLI::PositiveNumber);
  rho->add_option("--seed", ar_seed, "Edge polynomial seed");
  rho->add_option("--smoothness", ar_smooth, "Coefficient decay");
  rho->add_option("--level", ar_level, "Trace {mu = level} instead of {mu = 0}");
  rho->add_option("--restarts", ar_restarts, "Search restarts")->check(CLI::PositiveNumber);

  // phase filter|edge
  auto* phase = app.add_subcommand("phase", "Phase-transition sweeps");
  phase->require_subcommand(1);
  ExperimentOptions ph_opts;
  auto* ph_filter = phase->add_subcommand("filter", "Vary the filter size at fixed edge bandwidth");
  auto* ph_edge = phase->add_subcommand("edge", "Vary the edge bandwidth at fixed filter size");
  add_experiment_options(ph_filter, ph_opts);
  add_experiment_options(ph_edge, ph_opts);

  auto* noise = app.add_subcommand("noise", "Noise sweep against the stability bound");
  ExperimentOptions nz_opts;
  add_experiment_options(noise, nz_opts);

  auto* compare = app.add_subcommand("compare", "Lifted recovery versus TV minimization");
  ExperimentOptions cp_opts;
  add_experiment_options(compare, cp_opts);

  auto* tvnorm = app.add_subcommand("tvnorm", "TV and circulant-lifting nuclear norm of a phantom raster");
  int tn_n = 16, tn_k0 = 1;
  std::uint64_t tn_seed = 1;
  bool tn_explicit = false;
  tvnorm->add_option("--n", tn_n, "Raster size")->check(CLI::PositiveNumber);
  tvnorm->add_option("--k0", tn_k0, "Edge half-bandwidth")->check(CLI::PositiveNumber);
  tvnorm->add_option("--seed", tn_seed, "Edge polynomial seed");
  tvnorm->add_flag("--explicit", tn_explicit, "Also form the lifted matrix and take its SVD (n*n <= 256)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (make->parsed()) {
      const IndexSet2D grid = IndexSet2D::centered(pm_grid);
      const Phantom ph =
          pm_stripe ? stripe_phantom() : make_phantom(random_edge_poly(IndexSet2D::centered(pm_k0), pm_seed, pm_smooth));
      FourierGrid f = fourier_coeffs(ph, grid);
      if (pm_fraction < 1.0) f = with_uniform_mask(f, sample_count(pm_fraction, grid.size()), derive_seed(pm_seed, 1));
      if (pm_out.size() > 5 && pm_out.substr(pm_out.size() - 5) == ".json") {
        write_text(pm_out, json(f).dump());
      } else {
        write_fgrd_file(pm_out, f);
      }
      if (!pm_pgm.empty()) {
        const int n = pm_raster > 0 ? pm_raster : 256;
        std::ofstream out(pm_pgm, std::ios::binary);
        write_pgm16(out, rasterize(ph, n), n, n);
      }
      if (!pm_curve.empty()) {
        std::ofstream out(pm_curve);
        write_curve_csv(out, ph.curve);
      }
      std::cout << json{{"edge_poly", ph.edge_poly}, {"samples", f.has_mask() ? f.sample_count() : grid.size()},
                        {"out", pm_out}}
                       .dump(2)
                << '\n';
    } else if (rank->parsed()) {
      const FourierGrid f = read_grid(lr_in);
      const LiftOperator op(f.grid, IndexSet2D::centered(lr_k));
      const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXcd>(op.build_matrix(f)).singularValues();
      Eigen::Index r = 0;
      while (r < s.size() && s(r) > 1e-9 * s(0)) ++r;
      std::vector<double> sv(s.data(), s.data() + s.size());
      std::cout << json{{"rows", op.rows()},
                        {"cols", op.cols()},
                        {"numerical_rank", r},
                        {"predicted_rank", rank_bound(IndexSet2D::centered(lr_k), IndexSet2D::centered(lr_k0))},
                        {"singular_values", sv}}
                       .dump(2)
                << '\n';
    } else if (solve->parsed()) {
      const FourierGrid samples = read_grid(sv_in);
      SolverConfig cfg;
      if (!sv_config.empty()) {
        try {
          cfg = read_json_file(sv_config).get<SolverConfig>();
        } catch (const Error& e) {
          throw ConfigError(e.what());
        }
      }
      if (sv_delta >= 0.0) cfg.delta = sv_delta;
      const LiftOperator op(samples.grid, IndexSet2D::centered(sv_k));
      const SolveReport rep = cfg.delta > 0.0 ? solve_noisy(op, samples, cfg) : solve_equality(op, samples, cfg);
      if (sv_out.size() > 5 && sv_out.substr(sv_out.size() - 5) == ".json") {
        write_text(sv_out, json(rep.recovered).dump());
      } else {
        write_fgrd_file(sv_out, rep.recovered);
      }
      if (!sv_report.empty()) write_text(sv_report, json(rep).dump(2));
      std::cout << json{{"iterations", rep.iterations}, {"converged", rep.converged},
                        {"data_residual", rep.data_residual}, {"wall_time_s", rep.wall_time}}
                       .dump(2)
                << '\n';
      return rep.converged ? kExitOk : kExitSoft;
    } else if (rho->parsed()) {
      const TrigPoly mu = random_edge_poly(IndexSet2D::centered(ar_k0), ar_seed, ar_smooth);
      const Phantom ph = make_phantom(ar_level == 0.0 ? mu : mu.minus_constant(ar_level));
      const IndexSet2D l0 = IndexSet2D::centered(ar_k0), l1 = IndexSet2D::centered(ar_k);
      const IncoherenceResult res = incoherence_upper_bound(ph.curve, l1, l0, ar_restarts);
      json j = res;
      j["rank"] = rank_bound(l1, l0);
      j["curve_length"] = ph.curve.length();
      try {
        j["separation"] = coordinate_separation(res.nodes);
        j["separation_bound"] = separation_bound(res.nodes, l1);
      } catch (const Error&) {
        j["separation_bound"] = nullptr;
      }
      std::cout << j.dump(2) << '\n';
    } else if (ph_filter->parsed() || ph_edge->parsed()) {
      const ExperimentConfig cfg = load_experiment(ph_opts);
      const SweepAxis axis = ph_filter->parsed() ? SweepAxis::Filter : SweepAxis::Edge;
      const PhaseResult r = run_phase_transition(cfg, axis, &std::cerr);
      const auto dir = prepare_dir(cfg.output_dir);
      const std::string stem = "phase_" + to_string(axis);
      write_text(dir / (stem + "_trials.csv"), render([&](std::ostream& o) { write_trials_csv(o, r); }));
      write_text(dir / (stem + "_cells.csv"), render([&](std::ostream& o) { write_cells_csv(o, r); }));
      write_text(dir / (stem + ".svg"), render([&](std::ostream& o) { write_phase_svg(o, r); }));
      json meta = r;
      meta["config"] = cfg;
      json summary = json::array();
      for (int p : r.parameters()) {
        summary.push_back({{"parameter", p},
                           {"success_area", success_area(r, p)},
                           {"minimal_samples", minimal_sufficient_samples(r, p)}});
      }
      meta["summary"] = summary;
      write_text(dir / (stem + ".json"), meta.dump(2));
      std::cout << summary.dump(2) << '\n';
      return r.any_soft_failure() ? kExitSoft : kExitOk;
    } else if (noise->parsed()) {
      const ExperimentConfig cfg = load_experiment(nz_opts);
      const NoiseResult r = run_noise_sweep(cfg, cfg.deltas, &std::cerr);
      const auto dir = prepare_dir(cfg.output_dir);
      write_text(dir / "noise.csv", render([&](std::ostream& o) { write_noise_csv(o, r); }));
      bool soft = false;
      for (const auto& row : r.rows) soft |= !row.converged;
      return soft ? kExitSoft : kExitOk;
    } else if (compare->parsed()) {
      const ExperimentConfig cfg = load_experiment(cp_opts);
      const auto dir = prepare_dir(cfg.output_dir);
      const ComparisonResult r = run_comparison(cfg, dir.string(), &std::cerr);
      write_text(dir / "compare.csv", render([&](std::ostream& o) { write_comparison_csv(o, r); }));
      bool soft = false;
      for (const auto& row : r.rows) soft |= !row.converged || !row.tv_converged;
      return soft ? kExitSoft : kExitOk;
    } else if (tvnorm->parsed()) {
      const Phantom ph = make_phantom(random_edge_poly(IndexSet2D::centered(tn_k0), tn_seed, 0.1));
      const auto raster = rasterize(ph, tn_n);
      DiscreteImage u(tn_n, tn_n);
      for (std::size_t p = 0; p < raster.size(); ++p) u.pixels[p] = raster[p];
      const double tv = tv_seminorm(u);
      const double fast = circulant_lifting_nuclear_norm(u, CirculantMethod::Fast);
      json j{{"tv", tv}, {"nuclear_norm", fast}, {"ratio", tv > 0.0 ? fast / tv : 0.0},
             {"sqrt_n", std::sqrt(double(u.size()))}};
      if (tn_explicit) j["nuclear_norm_explicit"] = circulant_lifting_nuclear_norm(u, CirculantMethod::Explicit);
      std::cout << j.dump(2) << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
