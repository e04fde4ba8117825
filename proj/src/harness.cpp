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

#include "offgrid/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>

#include "offgrid/error.hpp"
#include "offgrid/kernels.hpp"
#include "offgrid/rng.hpp"

namespace offgrid {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Shortest round-trip representation keeps CSV output byte-stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kEol = "\r\n";

std::uint64_t phantom_seed(std::uint64_t trial, int attempt) {
  return attempt == 0 ? derive_seed(trial, 0) : derive_seed(trial, {0, std::uint64_t(attempt)});
}
std::uint64_t mask_seed(std::uint64_t trial) { return derive_seed(trial, 1); }
std::uint64_t noise_seed(std::uint64_t trial) { return derive_seed(trial, 2); }

void log_line(std::ostream* log, std::mutex& m, const std::string& line) {
  if (!log) return;
  std::lock_guard lock(m);
  *log << line << '\n' << std::flush;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  solver.relaxation = 1.6;
  solver.tol_primal = 1e-5;
  solver.tol_change = 1e-5;
  solver.max_iters = 500;
}

TrialProblem draw_problem(const ExperimentConfig& cfg, int k0, double fraction, std::uint64_t seed) {
  const IndexSet2D gamma = IndexSet2D::centered(cfg.gamma_k);
  PhantomOptions opt;
  opt.quadrature_order = 16;
  TrialProblem s;
  // Edge curves whose traces cannot be integrated reliably on gamma are redrawn.
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0;; ++attempt) {
    try {
      const TrigPoly mu0 = random_edge_poly(IndexSet2D::centered(k0), phantom_seed(seed, attempt), cfg.smoothness);
      s.truth = fourier_coeffs(make_phantom(mu0, 1.0, 0.0, opt), gamma);
      s.redraws = attempt;
      break;
    } catch (const Error& e) {
      const bool degenerate = e.kind() == ErrorKind::NoZeroSet || e.kind() == ErrorKind::SingularPoint ||
                              e.kind() == ErrorKind::InconsistentGradient;
      if (!degenerate) throw;
      if (attempt + 1 == kMaxAttempts) throw Error(ErrorKind::DegenerateDraw, "no usable phantom after 100 draws");
    }
  }
  s.samples = with_uniform_mask(s.truth, sample_count(fraction, gamma.size()), mask_seed(seed));
  return s;
}

bool in_theorem_regime(int gamma_k, int k, int k0) { return 2 * k + k0 <= gamma_k; }

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (gamma_k < 1) fail("gamma_k must be >= 1");
  if (k < 1 || k0 < 1 || edge_sweep_k < 1) fail("k, k0 and edge_sweep_k must be >= 1");
  if (k_values.empty() || k0_values.empty() || fractions.empty()) fail("sweep lists must be non-empty");
  for (int v : k_values) {
    if (v < 1) fail("k values must be >= 1");
    if (v < k0) fail("filter must be at least as wide as the edge support");
  }
  for (int v : k0_values) {
    if (v < 1) fail("k0 values must be >= 1");
    if (v > edge_sweep_k) fail("edge_sweep_k must be >= every k0");
  }
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) fail("fractions must lie in (0, 1]");
  }
  if (!(fixed_fraction > 0.0 && fixed_fraction <= 1.0)) fail("fixed_fraction must lie in (0, 1]");
  if (trials < 1) fail("trials must be >= 1");
  if (!(success_threshold > 0.0)) fail("success_threshold must be positive");
  if (!(smoothness >= 0.0)) fail("smoothness must be >= 0");
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) fail("deltas must be finite and >= 0");
  }
  if (theorem_regime) {
    for (int v : k_values) {
      if (!in_theorem_regime(gamma_k, v, k0)) fail("filter sweep leaves the theorem regime (2k + k0 > gamma_k)");
    }
    for (int v : k0_values) {
      if (!in_theorem_regime(gamma_k, edge_sweep_k, v)) fail("edge sweep leaves the theorem regime (2k + k0 > gamma_k)");
    }
    if (!in_theorem_regime(gamma_k, k, k0)) fail("k and k0 leave the theorem regime (2k + k0 > gamma_k)");
  }
  solver.validate();
  tv.validate();
}

ExperimentConfig ExperimentConfig::desk() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::paper() {
  ExperimentConfig c;
  c.gamma_k = 32;
  c.k = 15;
  c.k_values = {1, 3, 5, 7, 9, 11, 13, 15};
  c.edge_sweep_k = 14;
  return c;
}

std::size_t sample_count(double fraction, std::size_t grid_size) {
  const auto n = std::llround(fraction * double(grid_size));
  return std::size_t(std::clamp<long long>(n, 1, static_cast<long long>(grid_size)));
}

std::string to_string(SweepAxis axis) { return axis == SweepAxis::Filter ? "filter" : "edge"; }

std::vector<int> PhaseResult::parameters() const {
  std::vector<int> out;
  for (const auto& c : cells) {
    const int p = axis == SweepAxis::Filter ? c.k : c.k0;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::vector<const PhaseCell*> PhaseResult::row(int parameter) const {
  std::vector<const PhaseCell*> out;
  for (const auto& c : cells) {
    if ((axis == SweepAxis::Filter ? c.k : c.k0) == parameter) out.push_back(&c);
  }
  std::sort(out.begin(), out.end(), [](const PhaseCell* a, const PhaseCell* b) { return a->fraction < b->fraction; });
  return out;
}

bool PhaseResult::any_soft_failure() const {
  return std::any_of(cells.begin(), cells.end(), [](const PhaseCell& c) { return c.soft_failures > 0; });
}

std::uint64_t trial_seed(std::uint64_t master, SweepAxis axis, int k, int k0, std::size_t fraction_index, int trial) {
  return derive_seed(master, {std::uint64_t(axis), std::uint64_t(k), std::uint64_t(k0), fraction_index,
                              std::uint64_t(trial)});
}

TrialRecord run_trial(const ExperimentConfig& cfg, int k, int k0, double fraction, std::uint64_t seed) {
  const auto t0 = Clock::now();
  TrialRecord rec;
  rec.k = k;
  rec.k0 = k0;
  rec.fraction = fraction;
  rec.seed = seed;
  rec.samples = sample_count(fraction, IndexSet2D::centered(cfg.gamma_k).size());
  try {
    const TrialProblem s = draw_problem(cfg, k0, fraction, seed);
    rec.redraws = s.redraws;
    const LiftOperator op(s.truth.grid, IndexSet2D::centered(k));
    const SolveReport rep = solve_equality(op, s.samples, cfg.solver);
    rec.rel_err = relative_error(rep.recovered, s.truth);
    rec.converged = rep.converged;
    rec.iterations = rep.iterations;
    rec.success = rec.rel_err < cfg.success_threshold;
  } catch (const Error& e) {
    rec.failure = std::string(to_string(e.kind()));
    rec.rel_err = std::numeric_limits<double>::infinity();
  }
  rec.wall_time = seconds_since(t0);
  return rec;
}

PhaseResult run_phase_transition(const ExperimentConfig& cfg, SweepAxis axis, std::ostream* log) {
  cfg.validate();
  const auto t0 = Clock::now();
  PhaseResult res;
  res.axis = axis;
  res.grid_size = IndexSet2D::centered(cfg.gamma_k).size();
  const std::vector<int>& params = axis == SweepAxis::Filter ? cfg.k_values : cfg.k0_values;
  for (int p : params) {
    for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
      for (int t = 0; t < cfg.trials; ++t) {
        TrialRecord r;
        r.k = axis == SweepAxis::Filter ? p : cfg.edge_sweep_k;
        r.k0 = axis == SweepAxis::Filter ? cfg.k0 : p;
        r.fraction = cfg.fractions[fi];
        r.trial = t;
        r.seed = trial_seed(cfg.master_seed, axis, r.k, r.k0, fi, t);
        res.trials.push_back(r);
      }
    }
  }
  std::mutex log_mutex;
  const auto n = static_cast<long>(res.trials.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    TrialRecord& r = res.trials[std::size_t(i)];
    const int trial = r.trial;
    r = run_trial(cfg, r.k, r.k0, r.fraction, r.seed);
    r.trial = trial;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s k=%d k0=%d frac=%.3f trial=%d err=%.3e iters=%d %s%.2fs",
                  to_string(axis).c_str(), r.k, r.k0, r.fraction, r.trial, r.rel_err, r.iterations,
                  r.failure.empty() ? "" : (r.failure + " ").c_str(), r.wall_time);
    log_line(log, log_mutex, buf);
  }
  for (std::size_t start = 0; start < res.trials.size(); start += std::size_t(cfg.trials)) {
    PhaseCell c;
    const TrialRecord& first = res.trials[start];
    c.k = first.k;
    c.k0 = first.k0;
    c.fraction = first.fraction;
    c.samples = first.samples;
    c.trials = cfg.trials;
    double err_sum = 0.0;
    for (std::size_t i = start; i < start + std::size_t(cfg.trials); ++i) {
      const TrialRecord& r = res.trials[i];
      c.success_count += r.success;
      c.soft_failures += !r.converged || !r.failure.empty();
      err_sum += std::isfinite(r.rel_err) ? r.rel_err : 1.0;
    }
    c.mean_rel_err = err_sum / cfg.trials;
    res.cells.push_back(c);
  }
  res.wall_time = seconds_since(t0);
  return res;
}

double minimal_sufficient_samples(const PhaseResult& r, int parameter, double level) {
  const auto row = r.row(parameter);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double rate = row[i]->success_rate();
    if (rate < level) continue;
    if (i == 0) return double(row[i]->samples);
    const double r0 = row[i - 1]->success_rate();
    const double t = (level - r0) / (rate - r0);
    return double(row[i - 1]->samples) + t * (double(row[i]->samples) - double(row[i - 1]->samples));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double success_area(const PhaseResult& r, int parameter) {
  double s = 0.0;
  for (const PhaseCell* c : r.row(parameter)) s += c->success_rate();
  return s;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "line fit needs two or more points");
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidArgument, "line fit needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double NoiseResult::mean_observed(double delta) const {
  double s = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.delta == delta) {
      s += r.observed;
      ++n;
    }
  }
  return n ? s / n : std::numeric_limits<double>::quiet_NaN();
}

NoiseResult run_noise_sweep(const ExperimentConfig& cfg, const std::vector<double>& deltas, std::ostream* log) {
  cfg.validate();
  const auto t0 = Clock::now();
  const IndexSet2D gamma = IndexSet2D::centered(cfg.gamma_k);
  NoiseResult res;
  res.grid_size = gamma.size();
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    for (int t = 0; t < cfg.trials; ++t) {
      NoiseRecord r;
      r.delta = deltas[di];
      r.trial = t;
      // Trials share phantoms and masks across deltas so the trend is paired.
      r.seed = derive_seed(cfg.master_seed, {0x6e6f697365ULL, std::uint64_t(t)});
      res.rows.push_back(r);
    }
  }
  std::mutex log_mutex;
  const auto n = static_cast<long>(res.rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    NoiseRecord& r = res.rows[std::size_t(i)];
    const TrialProblem s = draw_problem(cfg, cfg.k0, cfg.fixed_fraction, r.seed);
    FourierGrid noisy = s.samples;
    std::mt19937_64 gen(noise_seed(r.seed));
    std::normal_distribution<double> nd;
    std::vector<cplx> eta(noisy.grid.size());
    double norm = 0.0;
    for (std::size_t q = 0; q < eta.size(); ++q) {
      if (noisy.mask[q] && noisy.grid.at(q) != Index2{0, 0}) {
        eta[q] = {nd(gen), nd(gen)};
        norm += std::norm(eta[q]);
      }
    }
    const double scale = norm > 0.0 ? r.delta / std::sqrt(norm) : 0.0;
    for (std::size_t q = 0; q < eta.size(); ++q) noisy.values[q] += scale * eta[q];
    noisy.real = false;
    SolverConfig sc = cfg.solver;
    sc.delta = r.delta;
    const LiftOperator op(gamma, IndexSet2D::centered(cfg.k));
    const SolveReport rep = solve_noisy(op, noisy, sc);
    r.observed = (op.apply(rep.recovered.values) - op.apply(s.truth.values)).norm();
    r.bound = 5.0 * double(gamma.size()) * double(gamma.size()) * r.delta;
    r.data_residual = rep.data_residual;
    r.converged = rep.converged;
    char buf[128];
    std::snprintf(buf, sizeof buf, "noise delta=%.1e trial=%d observed=%.3e bound=%.3e", r.delta, r.trial, r.observed,
                  r.bound);
    log_line(log, log_mutex, buf);
  }
  res.wall_time = seconds_since(t0);
  return res;
}

namespace {

std::vector<double> raster_from_grid(const FourierGrid& f, int n) {
  const MaskedDft d = dft_from_fourier_grid(f, n, n);
  DiscreteImage u(n, n);
  Dft2(n, n).inverse(d.values, u.pixels);
  std::vector<double> out(u.size());
  for (std::size_t p = 0; p < u.size(); ++p) out[p] = u.pixels[p].real();
  return out;
}

}  // namespace

ComparisonResult run_comparison(const ExperimentConfig& cfg, const std::string& pgm_dir, std::ostream* log) {
  cfg.validate();
  const auto t0 = Clock::now();
  const IndexSet2D gamma = IndexSet2D::centered(cfg.gamma_k);
  const int n = gamma.width();
  ComparisonResult res;
  res.rows.resize(std::size_t(cfg.trials));
  std::mutex log_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < cfg.trials; ++t) {
    ComparisonRecord& r = res.rows[std::size_t(t)];
    r.trial = t;
    r.fraction = cfg.fixed_fraction;
    r.seed = derive_seed(cfg.master_seed, {0x636f6d70ULL, std::uint64_t(t)});
    const TrialProblem s = draw_problem(cfg, cfg.k0, cfg.fixed_fraction, r.seed);
    const LiftOperator op(gamma, IndexSet2D::centered(cfg.k));
    const SolveReport rep = solve_equality(op, s.samples, cfg.solver);
    const TvReport tv = solve_tv(dft_from_fourier_grid(s.samples, n, n), cfg.tv);
    const FourierGrid tv_grid = fourier_grid_from_image(tv.image, gamma);
    r.snr_proposed = snr_db(rep.recovered.values, s.truth.values);
    r.snr_tv = snr_db(tv_grid.values, s.truth.values);
    r.converged = rep.converged;
    r.tv_converged = tv.converged;
    if (!pgm_dir.empty()) {
      const auto truth = raster_from_grid(s.truth, n);
      const auto prop = raster_from_grid(rep.recovered, n);
      std::vector<double> tv_img(truth.size());
      for (std::size_t p = 0; p < tv_img.size(); ++p) tv_img[p] = tv.image.pixels[p].real();
      std::vector<double> side(truth.size() * 3);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const std::size_t src = std::size_t(j) * n + i;
          side[std::size_t(j) * 3 * n + i] = truth[src];
          side[std::size_t(j) * 3 * n + n + i] = prop[src];
          side[std::size_t(j) * 3 * n + 2 * n + i] = tv_img[src];
        }
      }
      std::ofstream out(pgm_dir + "/compare_trial" + std::to_string(t) + ".pgm", std::ios::binary);
      if (!out) throw Error(ErrorKind::Io, "cannot write comparison image");
      write_pgm16(out, side, 3 * n, n);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "compare trial=%d proposed=%.2fdB tv=%.2fdB", t, r.snr_proposed, r.snr_tv);
    log_line(log, log_mutex, buf);
  }
  res.wall_time = seconds_since(t0);
  return res;
}

void write_trials_csv(std::ostream& out, const PhaseResult& r) {
  out << "axis,k,k0,fraction,samples,trial,seed,rel_err,success,converged,iterations,redraws,failure" << kEol;
  for (const auto& t : r.trials) {
    out << to_string(r.axis) << ',' << t.k << ',' << t.k0 << ',' << num(t.fraction) << ',' << t.samples << ','
        << t.trial << ',' << t.seed << ',' << num(t.rel_err) << ',' << int(t.success) << ',' << int(t.converged)
        << ',' << t.iterations << ',' << t.redraws << ',' << t.failure << kEol;
  }
}

void write_cells_csv(std::ostream& out, const PhaseResult& r) {
  out << "axis,k,k0,fraction,samples,success_count,trials,success_rate,mean_rel_err,soft_failures" << kEol;
  for (const auto& c : r.cells) {
    out << to_string(r.axis) << ',' << c.k << ',' << c.k0 << ',' << num(c.fraction) << ',' << c.samples << ','
        << c.success_count << ',' << c.trials << ',' << num(c.success_rate()) << ',' << num(c.mean_rel_err) << ','
        << c.soft_failures << kEol;
  }
}

void write_noise_csv(std::ostream& out, const NoiseResult& r) {
  out << "delta,trial,seed,observed,bound,data_residual,converged" << kEol;
  for (const auto& n : r.rows) {
    out << num(n.delta) << ',' << n.trial << ',' << n.seed << ',' << num(n.observed) << ',' << num(n.bound) << ','
        << num(n.data_residual) << ',' << int(n.converged) << kEol;
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonResult& r) {
  out << "trial,seed,fraction,snr_proposed_db,snr_tv_db,converged,tv_converged" << kEol;
  for (const auto& c : r.rows) {
    out << c.trial << ',' << c.seed << ',' << num(c.fraction) << ',' << num(c.snr_proposed) << ',' << num(c.snr_tv)
        << ',' << int(c.converged) << ',' << int(c.tv_converged) << kEol;
  }
}

void write_phase_svg(std::ostream& out, const PhaseResult& r) {
  const auto params = r.parameters();
  const std::size_t cols = params.empty() ? 0 : r.row(params.front()).size();
  constexpr int kCell = 40, kLeft = 70, kTop = 30, kBottom = 50;
  const int width = kLeft + int(cols) * kCell + 20;
  const int height = kTop + int(params.size()) * kCell + kBottom;
  const std::string label = r.axis == SweepAxis::Filter ? "K" : "K0";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << kLeft << "\" y=\"18\">success rate, " << to_string(r.axis) << " sweep</text>\n";
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    // Largest parameter at the top.
    const int y = kTop + int(params.size() - 1 - pi) * kCell;
    out << "<text x=\"" << 10 << "\" y=\"" << y + kCell / 2 + 4 << "\">" << label << "=" << params[pi] << "</text>\n";
    const auto row = r.row(params[pi]);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double s = row[c]->success_rate();
      const int shade = int(std::lround(255.0 * (1.0 - s)));
      out << "<rect x=\"" << kLeft + int(c) * kCell << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"rgb(" << shade << "," << shade << ",255)\" stroke=\"#888\"/>\n";
    }
  }
  if (!params.empty()) {
    const auto row = r.row(params.front());
    for (std::size_t c = 0; c < row.size(); ++c) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.2f", row[c]->fraction);
      out << "<text x=\"" << kLeft + int(c) * kCell + 6 << "\" y=\"" << kTop + int(params.size()) * kCell + 16 << "\">"
          << buf << "</text>\n";
    }
  }
  out << "<text x=\"" << kLeft << "\" y=\"" << height - 10 << "\">sampling fraction |Omega|/|Gamma|</text>\n";
  out << "</svg>\n";
}

int configure_threads() { return kernels::configure_threads_from_env(); }

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"gamma_k", c.gamma_k},
       {"k0", c.k0},
       {"k", c.k},
       {"k_values", c.k_values},
       {"k0_values", c.k0_values},
       {"edge_sweep_k", c.edge_sweep_k},
       {"fractions", c.fractions},
       {"trials", c.trials},
       {"master_seed", c.master_seed},
       {"success_threshold", c.success_threshold},
       {"smoothness", c.smoothness},
       {"theorem_regime", c.theorem_regime},
       {"deltas", c.deltas},
       {"fixed_fraction", c.fixed_fraction},
       {"solver", c.solver},
       {"tv", c.tv},
       {"output_dir", c.output_dir}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  ExperimentConfig d;
  if (j.contains("profile")) {
    const auto p = j.at("profile").get<std::string>();
    if (p == "paper") {
      d = ExperimentConfig::paper();
    } else if (p != "desk") {
      throw Error(ErrorKind::InvalidArgument, "unknown profile " + p);
    }
  }
  try {
    c.gamma_k = j.value("gamma_k", d.gamma_k);
    c.k0 = j.value("k0", d.k0);
    c.k = j.value("k", d.k);
    c.k_values = j.value("k_values", d.k_values);
    c.k0_values = j.value("k0_values", d.k0_values);
    c.edge_sweep_k = j.value("edge_sweep_k", d.edge_sweep_k);
    c.fractions = j.value("fractions", d.fractions);
    c.trials = j.value("trials", d.trials);
    c.master_seed = j.value("master_seed", d.master_seed);
    c.success_threshold = j.value("success_threshold", d.success_threshold);
    c.smoothness = j.value("smoothness", d.smoothness);
    c.theorem_regime = j.value("theorem_regime", d.theorem_regime);
    c.deltas = j.value("deltas", d.deltas);
    c.fixed_fraction = j.value("fixed_fraction", d.fixed_fraction);
    c.solver = j.contains("solver") ? j.at("solver").get<SolverConfig>() : d.solver;
    c.tv = j.contains("tv") ? j.at("tv").get<TvConfig>() : d.tv;
    c.output_dir = j.value("output_dir", d.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("experiment config: ") + e.what());
  }
  c.validate();
}

void to_json(nlohmann::json& j, const PhaseResult& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"k", c.k},
                     {"k0", c.k0},
                     {"fraction", c.fraction},
                     {"samples", c.samples},
                     {"success_count", c.success_count},
                     {"trials", c.trials},
                     {"mean_rel_err", c.mean_rel_err},
                     {"soft_failures", c.soft_failures}});
  }
  j = {{"axis", to_string(r.axis)},
       {"grid_size", r.grid_size},
       {"trials_redraw", "phantom and mask"},
       {"wall_time_s", r.wall_time},
       {"cells", cells}};
}

}  // namespace offgrid
