// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISPILOT_HARNESS_EXPERIMENT_HPP
#define RISPILOT_HARNESS_EXPERIMENT_HPP

// Monte Carlo orchestration. A preset expands into sweep points; each point
// runs `trials` independent trials on a worker pool. Every trial draws from
// its own substreams keyed on (seed, point key, trial, purpose), and the
// per-trial outputs are reduced in trial order, so results are bitwise
// identical for any worker count.
//
// Within a trial the three RIS modes (nr, rps, mo) share every random draw:
// UE positions, BS-RIS channels, small-scale fading and pilot noise. Only the
// phases differ (nr drops the reflected path altogether).

#include "rispilot/beamforming.hpp"
#include "rispilot/channels.hpp"
#include "rispilot/estimation.hpp"
#include "rispilot/harness/config.hpp"
#include "rispilot/harness/topology.hpp"
#include "rispilot/phase_optimizer.hpp"
#include "rispilot/placement.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace rispilot::harness {

enum class RisMode { nr, rps, mo };
inline constexpr std::array<RisMode, 3> kAllModes{RisMode::nr, RisMode::rps, RisMode::mo};

inline std::string_view mode_name(RisMode m) {
  switch (m) {
  case RisMode::nr:
    return "nr";
  case RisMode::rps:
    return "rps";
  case RisMode::mo:
    return "mo";
  }
  return "?";
}

/// One aggregated, plot-ready number.
struct ResultRow {
  std::string metric;  // ul_se, dl_se, ds, ipr, iop, ee, varpi
  std::string scheme;  // mr, zf, mmse, or "-"
  std::string mode;    // nr, rps, mo
  std::string group;   // all, closest, farthest, pair
  std::string variant; // extra sweep coordinates, "-" when unused
  std::string sweep;   // name of the swept quantity (M, reuse)
  double point = 0;
  double value = 0;
  long samples = 0;

  bool operator==(const ResultRow &) const = default;
};

/// Raw per-UE samples of one sweep point.
struct PointSamples {
  std::string sweep;
  double point = 0;
  int ues = 0;
  int trials = 0;
  std::vector<int> group; // per UE: 0 = closest (K_0), 1 = RIS-aided
  std::vector<double> ul_se; // [((mode * 3 + scheme) * K + ue) * S + trial]
  std::vector<double> dl_se; // [(mode * 3 + scheme) * K + ue]

  std::size_t slot(RisMode m, Scheme s, int ue) const {
    return (static_cast<std::size_t>(m) * 3 + static_cast<std::size_t>(s)) *
               static_cast<std::size_t>(ues) +
           static_cast<std::size_t>(ue);
  }
  double ul(RisMode m, Scheme s, int ue, int trial) const {
    return ul_se[slot(m, s, ue) * static_cast<std::size_t>(trials) +
                 static_cast<std::size_t>(trial)];
  }
  double dl(RisMode m, Scheme s, int ue) const { return dl_se[slot(m, s, ue)]; }
};

struct ExperimentResult {
  std::string preset;
  std::vector<ResultRow> rows;
  std::vector<PointSamples> points;
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t seed = 0;
  int trials = 0;
  std::uint64_t config_hash = 0;
  double runtime_s = 0;

  std::optional<double> find(std::string_view metric, std::string_view scheme,
                             std::string_view mode, std::string_view group,
                             double point, std::string_view variant = "-") const {
    for (const auto &r : rows)
      if (r.metric == metric && r.scheme == scheme && r.mode == mode &&
          r.group == group && r.variant == variant && r.point == point)
        return r.value;
    return std::nullopt;
  }
};

inline const std::vector<std::string> &preset_names() {
  static const std::vector<std::string> names{"fig3", "fig4", "fig6", "fig7", "fig8",
                                              "fig9", "fig10", "k16"};
  return names;
}

namespace detail {

inline constexpr std::uint64_t kFrozenTrial = 0xF0F0F0F0ull;

enum Purpose : std::uint64_t {
  positions = 1,
  bs_ris = 2,
  small_scale = 3,
  pilot_noise = 4,
  random_phase = 5,
  restarts = 6,
  ris_fading = 7
};

/// Runs fn(trial) for trial in [0, n) on `workers` threads; exceptions are
/// rethrown on the caller's thread.
template <typename Fn> void parallel_trials(int n, int workers, Fn &&fn) {
  if (workers <= 1 || n <= 1) {
    for (int t = 0; t < n; ++t)
      fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const int count = std::min(workers, n);
  for (int w = 0; w < count; ++w)
    pool.emplace_back([&] {
      for (int t = next++; t < n; t = next++) {
        try {
          fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto &th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

inline int resolve_workers(const SystemConfig &cfg) {
  if (cfg.workers > 0)
    return cfg.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Per-point invariants shared by all trials.
struct PointContext {
  SystemConfig cfg;
  ArrayGeometry geom;
  FadingParams fading;
  RMat kernel;
  CMat kernel_sqrt;
  RMat toeplitz_sqrt;
  double rho = 0;
  std::uint64_t key = 0;
  Layout layout = Layout::sectors;

  Rng stream(int trial, Purpose p) const {
    const bool frozen = (p == positions && cfg.freeze_positions) ||
                        (p == bs_ris && cfg.freeze_bs_ris);
    return make_stream(cfg.seed, key, frozen ? kFrozenTrial : static_cast<std::uint64_t>(trial),
                       p);
  }
};

inline PointContext make_context(const SystemConfig &cfg, std::uint64_t key, Layout layout) {
  PointContext ctx;
  ctx.cfg = cfg;
  ctx.geom = cfg.geometry();
  ctx.fading = cfg.fading();
  ctx.kernel = ris_correlation_kernel(ctx.geom);
  ctx.kernel_sqrt = sqrt_factor(ctx.kernel).cast<cplx>();
  ctx.toeplitz_sqrt = sqrt_factor(exponential_toeplitz(cfg.correlation, cfg.bs_antennas));
  ctx.rho = cfg.rho();
  ctx.key = key;
  ctx.layout = layout;
  return ctx;
}

/// Channels and correlations of one trial, before any RIS configuration.
struct TrialDraw {
  Scenario scenario;
  std::vector<CMat> bs_ris;
  std::vector<CVec> direct;
  std::vector<CVec> ris_ue;
  CorrelationSet corr;
};

inline TrialDraw draw_trial(const PointContext &ctx, int trial,
                            std::optional<bool> snap_override = std::nullopt,
                            std::optional<double> rician_db = std::nullopt) {
  TrialDraw d;
  SystemConfig cfg = ctx.cfg;
  if (snap_override)
    cfg.snap_ris = *snap_override;
  Rng pos = ctx.stream(trial, positions);
  d.scenario = build_topology(cfg, pos, ctx.layout);
  const Scenario &sc = d.scenario;
  const int K = sc.num_ues();
  const Index M = ctx.geom.bs_antennas;
  const Index N = ctx.geom.ris_elements();

  FadingParams fading = ctx.fading;
  if (rician_db)
    fading.rician_factor = db_to_linear(*rician_db);
  Rng chr = ctx.stream(trial, bs_ris);
  for (const auto &link : sc.ris_links)
    d.bs_ris.push_back(sample_bs_ris_channel(link, fading, ctx.geom, chr));

  // Direct and RIS-UE fading come from separate streams so the direct links
  // do not depend on the RIS size.
  Rng ss = ctx.stream(trial, small_scale);
  Rng rf = ctx.stream(trial, ris_fading);
  d.corr.ris_kernel = ctx.kernel;
  for (int k = 0; k < K; ++k) {
    const UeLink &ul = sc.ue_links[static_cast<std::size_t>(k)];
    const double beta_bu = path_loss(ul.bs_distance, fading.kappa_bu, fading.ref_loss);
    d.corr.beta_bu.push_back(beta_bu);
    d.corr.bs_ue.push_back(bs_ue_correlation(beta_bu, fading.correlation, ul.bs_aoa, M));
    d.direct.push_back(bs_ue_correlation_factor(beta_bu, ul.bs_aoa, ctx.toeplitz_sqrt) *
                       complex_gaussian(M, ss));
    if (sc.association.is_direct(k)) {
      d.corr.beta_ru.push_back(0.0);
      d.ris_ue.emplace_back();
    } else {
      const double beta_ru = path_loss(ul.ris_distance, fading.kappa_ru, fading.ref_loss);
      d.corr.beta_ru.push_back(beta_ru);
      d.ris_ue.push_back(std::sqrt(beta_ru) * (ctx.kernel_sqrt * complex_gaussian(N, rf)));
    }
  }
  return d;
}

/// Phases of every RIS for a mode (empty for nr).
inline std::vector<CVec> mode_phases(const PointContext &ctx, const TrialDraw &d,
                                     RisMode mode, int trial) {
  std::vector<CVec> phases;
  const Index N = ctx.geom.ris_elements();
  if (mode == RisMode::rps) {
    Rng ph = ctx.stream(trial, random_phase);
    for (std::size_t r = 0; r < d.bs_ris.size(); ++r)
      phases.push_back(random_phases(N, ph));
  } else if (mode == RisMode::mo) {
    Rng rs = ctx.stream(trial, restarts);
    for (std::size_t r = 0; r < d.bs_ris.size(); ++r) {
      const QuadraticForm form =
          ctx.cfg.weighted_kernel
              ? weighted_quadratic(static_cast<int>(r + 1), d.scenario.association, d.corr,
                                   d.bs_ris[r])
              : build_quadratic(d.bs_ris[r], ctx.kernel);
      phases.push_back(
          optimize_phases(form, ctx.cfg.ascent(), ctx.cfg.ascent_restarts, &rs).phases);
    }
  }
  return phases;
}

/// Effective correlations and overall channels of all UEs under a mode.
inline void compose_mode(const TrialDraw &d, const std::vector<CVec> &phases,
                         std::vector<CMat> &R, std::vector<CVec> &h) {
  const Association &assoc = d.scenario.association;
  const int K = d.scenario.num_ues();
  std::vector<CMat> reflected(phases.size());
  for (std::size_t r = 0; r < phases.size(); ++r)
    reflected[r] = reflected_correlation(d.bs_ris[r], phases[r], d.corr.ris_kernel);
  R.assign(static_cast<std::size_t>(K), CMat());
  h.assign(static_cast<std::size_t>(K), CVec());
  for (int k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const int r = assoc.ris_of(k);
    if (phases.empty() || r == 0) {
      R[ku] = d.corr.bs_ue[ku];
      h[ku] = d.direct[ku];
    } else {
      const auto ri = static_cast<std::size_t>(r - 1);
      R[ku] = d.corr.beta_ru[ku] * reflected[ri] + d.corr.bs_ue[ku];
      h[ku] = d.bs_ris[ri] * phases[ri].cwiseProduct(d.ris_ue[ku]) + d.direct[ku];
    }
  }
}

struct UlTrialOutput {
  std::vector<double> ul_se;                // 9 K
  std::vector<PowerDecomposition> terms;    // 9 K
  std::vector<CVec> dl_gain;                // 9 entries of length K (h_k^H w_k)
  std::vector<RVec> dl_power;               // 9 entries of length K
  std::vector<bool> dl_valid;               // 9
};

inline UlTrialOutput run_ul_trial(const PointContext &ctx, int trial) {
  const TrialDraw d = draw_trial(ctx, trial);
  const Scenario &sc = d.scenario;
  const int K = sc.num_ues();
  const Index M = ctx.geom.bs_antennas;
  const double rho = ctx.rho;
  const double prelog = ctx.cfg.prelog();
  const bool use_estimates = ctx.cfg.sinr_channels == "estimate";
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  Rng nz = ctx.stream(trial, pilot_noise);
  std::vector<CVec> noise;
  for (int t = 0; t < sc.pilots.pilot_count; ++t)
    noise.push_back(std::sqrt(1.0 / sc.pilots.pilot_count) * complex_gaussian(M, nz));

  UlTrialOutput out;
  const std::size_t slots = 9 * static_cast<std::size_t>(K);
  out.ul_se.assign(slots, nan);
  out.terms.assign(slots, PowerDecomposition{nan, nan, nan, nan, 1});
  out.dl_gain.assign(9, CVec::Zero(K));
  out.dl_power.assign(9, RVec::Zero(K));
  out.dl_valid.assign(9, false);

  std::vector<CMat> R;
  std::vector<CVec> h;
  for (RisMode mode : kAllModes) {
    compose_mode(d, mode_phases(ctx, d, mode, trial), R, h);
    std::vector<CVec> y = simulate_pilot_phase(h, sc.pilots, rho, nz, false);
    for (std::size_t t = 0; t < y.size(); ++t)
      y[t] += noise[t];
    const EstimationOutput est = estimate_all(std::move(y), R, sc.pilots, rho);
    const CMat Hhat = stack_columns(est.estimates);
    const CMat Htrue = stack_columns(h);
    CMat Csum = CMat::Zero(M, M);
    for (const auto &C : est.error_cov)
      Csum += C;

    for (Scheme scheme : kAllSchemes) {
      const std::size_t ms = static_cast<std::size_t>(mode) * 3 + static_cast<std::size_t>(scheme);
      std::optional<CombinerSet> V;
      try {
        V = make_combiner(scheme, Hhat, est.error_cov, rho);
      } catch (const SingularMatrix &) {
        continue;
      }
      for (int k = 0; k < K; ++k) {
        try {
          const SinrResult s = ul_sinr(k, *V, use_estimates ? Hhat : Htrue, Csum, sc.pilots, rho);
          out.ul_se[ms * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] =
              spectral_efficiency(s.sinr, prelog);
          out.terms[ms * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] = s.terms;
        } catch (const UndefinedSinr &) {
        }
      }
      try {
        const CMat W = precoders(*V);
        const CMat G = Htrue.adjoint() * W;
        out.dl_gain[ms] = G.diagonal();
        out.dl_power[ms] = G.cwiseAbs2().rowwise().sum();
        out.dl_valid[ms] = true;
      } catch (const UndefinedSinr &) {
      }
    }
  }
  return out;
}

inline void append_ul_rows(ExperimentResult &res, PointSamples &ps, const PointContext &ctx,
                           const std::vector<UlTrialOutput> &trials, const Association &assoc) {
  const int K = ps.ues;
  const int S = ps.trials;
  const double rho = ctx.rho;
  const double prelog = ctx.cfg.prelog();
  ps.ul_se.assign(9 * static_cast<std::size_t>(K) * static_cast<std::size_t>(S), 0.0);
  ps.dl_se.assign(9 * static_cast<std::size_t>(K), std::numeric_limits<double>::quiet_NaN());
  ps.group.assign(static_cast<std::size_t>(K), 1);
  for (int k : assoc.sets[0])
    ps.group[static_cast<std::size_t>(k)] = 0;

  // Ordered reduction over trials.
  std::vector<DlHardeningAccumulator> dl(9, DlHardeningAccumulator(K));
  std::vector<std::array<double, 4>> term_sum(9 * static_cast<std::size_t>(K), {0, 0, 0, 0});
  std::vector<long> term_n(9 * static_cast<std::size_t>(K), 0);
  for (int t = 0; t < S; ++t) {
    const UlTrialOutput &o = trials[static_cast<std::size_t>(t)];
    for (std::size_t slot = 0; slot < 9 * static_cast<std::size_t>(K); ++slot) {
      ps.ul_se[slot * static_cast<std::size_t>(S) + static_cast<std::size_t>(t)] = o.ul_se[slot];
      const PowerDecomposition &p = o.terms[slot];
      if (!std::isnan(p.ds)) {
        term_sum[slot][0] += p.ds;
        term_sum[slot][1] += p.ipr;
        term_sum[slot][2] += p.iop;
        term_sum[slot][3] += p.ee;
        ++term_n[slot];
      }
    }
    for (std::size_t ms = 0; ms < 9; ++ms)
      if (o.dl_valid[ms])
        dl[ms].add_terms(o.dl_gain[ms], o.dl_power[ms]);
  }
  for (std::size_t ms = 0; ms < 9; ++ms)
    if (dl[ms].count() > 0)
      for (int k = 0; k < K; ++k)
        ps.dl_se[ms * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] =
            spectral_efficiency(dl[ms].sinr(k, rho), prelog);

  const std::array<std::pair<const char *, int>, 3> groups{
      {{"all", -1}, {"closest", 0}, {"farthest", 1}}};
  for (RisMode mode : kAllModes)
    for (Scheme scheme : kAllSchemes)
      for (const auto &[gname, gid] : groups) {
        double ul_sum = 0, dl_sum = 0;
        long ul_n = 0, dl_n = 0;
        std::array<double, 4> tsum{0, 0, 0, 0};
        long tn = 0;
        for (int k = 0; k < K; ++k) {
          if (gid >= 0 && ps.group[static_cast<std::size_t>(k)] != gid)
            continue;
          const std::size_t slot = ps.slot(mode, scheme, k);
          for (int t = 0; t < S; ++t) {
            const double v = ps.ul_se[slot * static_cast<std::size_t>(S) + static_cast<std::size_t>(t)];
            if (!std::isnan(v)) {
              ul_sum += v;
              ++ul_n;
            }
          }
          if (!std::isnan(ps.dl_se[slot])) {
            dl_sum += ps.dl_se[slot];
            ++dl_n;
          }
          for (int i = 0; i < 4; ++i)
            tsum[static_cast<std::size_t>(i)] += term_sum[slot][static_cast<std::size_t>(i)];
          tn += term_n[slot];
        }
        if (ul_n == 0 && dl_n == 0)
          continue;
        auto row = [&](const char *metric, double value, long n) {
          res.rows.push_back({metric, std::string(scheme_name(scheme)),
                              std::string(mode_name(mode)), gname, "-", ps.sweep, ps.point,
                              value, n});
        };
        if (ul_n > 0)
          row("ul_se", ul_sum / static_cast<double>(ul_n), ul_n);
        if (dl_n > 0)
          row("dl_se", dl_sum / static_cast<double>(dl_n), dl_n);
        if (tn > 0) {
          const double n = static_cast<double>(tn);
          row("ds", tsum[0] / n, tn);
          row("ipr", tsum[1] / n, tn);
          row("iop", tsum[2] / n, tn);
          row("ee", tsum[3] / n, tn);
        }
      }
}

inline void run_ul_point(ExperimentResult &res, const SystemConfig &cfg, const std::string &sweep,
                         double point, std::uint64_t key) {
  const PointContext ctx = make_context(cfg, key, Layout::sectors);
  // Association and pilot map depend only on set sizes, so any trial's
  // scenario describes them.
  Rng probe = ctx.stream(0, positions);
  const Scenario layout = build_topology(cfg, probe, Layout::sectors);

  std::vector<UlTrialOutput> trials(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, resolve_workers(cfg),
                  [&](int t) { trials[static_cast<std::size_t>(t)] = run_ul_trial(ctx, t); });

  PointSamples ps;
  ps.sweep = sweep;
  ps.point = point;
  ps.ues = layout.num_ues();
  ps.trials = cfg.trials;
  append_ul_rows(res, ps, ctx, trials, layout.association);
  res.points.push_back(std::move(ps));
}

/// varpi per (rician, grid variant, mode) for one trial; UEs 0..R-1 each aided
/// by their own RIS. Averaged over all UE pairs when R > 2.
inline std::vector<double> run_interference_trial(const PointContext &ctx, int trial,
                                                  const std::vector<double> &rician_db) {
  std::vector<double> out;
  for (double a_db : rician_db)
    for (bool snap : {false, true}) {
      const TrialDraw d = draw_trial(ctx, trial, snap, a_db);
      const int K = d.scenario.num_ues();
      for (RisMode mode : kAllModes) {
        std::vector<CMat> R;
        std::vector<CVec> h;
        compose_mode(d, mode_phases(ctx, d, mode, trial), R, h);
        double acc = 0;
        int pairs = 0;
        for (int i = 0; i < K; ++i)
          for (int j = i + 1; j < K; ++j, ++pairs)
            acc += normalized_interference(R[static_cast<std::size_t>(i)],
                                           R[static_cast<std::size_t>(j)]);
        out.push_back(pairs > 0 ? acc / pairs : 0.0);
      }
    }
  return out;
}

inline std::string interference_variant(double a_db, bool snap) {
  std::ostringstream os;
  os << "alpha_db=" << a_db << ";grid=" << (snap ? "opt" : "raw");
  return os.str();
}

inline void run_interference_point(ExperimentResult &res, const SystemConfig &cfg, double point,
                                   std::uint64_t key) {
  const PointContext ctx = make_context(cfg, key, Layout::random_ris);
  std::vector<std::vector<double>> trials(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, resolve_workers(cfg), [&](int t) {
    trials[static_cast<std::size_t>(t)] = run_interference_trial(ctx, t, cfg.rician_values_db);
  });
  std::size_t idx = 0;
  for (double a_db : cfg.rician_values_db)
    for (bool snap : {false, true})
      for (RisMode mode : kAllModes) {
        double sum = 0;
        for (const auto &t : trials)
          sum += t[idx];
        res.rows.push_back({"varpi", "-", std::string(mode_name(mode)), "pair",
                            interference_variant(a_db, snap), "M", point,
                            sum / static_cast<double>(trials.size()), cfg.trials});
        ++idx;
      }
}

inline std::uint64_t point_key(std::uint64_t family, std::uint64_t value) {
  return (family << 32) | value;
}

} // namespace detail

/// Applies the scenario parameters a preset fixes on top of cfg.
inline SystemConfig preset_config(const SystemConfig &cfg, const std::string &preset) {
  SystemConfig c = cfg;
  if (preset == "fig4" || preset == "fig6" || preset == "fig9" || preset == "fig10") {
    c.ues = 4;
    c.pilots = 1;
    c.ris_count = 3;
    c.reuse_factor = 4;
  } else if (preset == "k16") {
    c.ues = 16;
    c.pilots = 4;
    c.ris_count = 3;
    c.reuse_factor = 4;
  } else if (preset == "fig7" || preset == "fig8") {
    c.pilots = 4;
  } else if (preset == "fig3") {
    c.ues = 2;
    c.ris_count = 2;
    c.pilots = 1;
    c.reuse_factor = 2;
  } else {
    throw InvalidArgument("unknown preset '" + preset + "'");
  }
  return c;
}

/// Runs a preset. UL/DL presets emit ul_se, dl_se and the ds/ipr/iop/ee terms
/// per (mode, scheme, group); fig3 emits varpi per (M, rician, grid, mode).
inline ExperimentResult run_experiment(const SystemConfig &cfg_in, const std::string &preset) {
  const auto start = std::chrono::steady_clock::now();
  const SystemConfig cfg = preset_config(cfg_in, preset);
  cfg.validate();

  ExperimentResult res;
  res.preset = preset;
  res.seed = cfg.seed;
  res.trials = cfg.trials;
  res.config = config_pairs(cfg);
  res.config_hash = config_hash(cfg);

  if (preset == "fig3") {
    for (int M : cfg.m_values) {
      SystemConfig c = cfg;
      c.bs_antennas = M;
      c.validate();
      detail::run_interference_point(res, c, M, detail::point_key(3, static_cast<std::uint64_t>(M)));
    }
  } else if (preset == "fig7" || preset == "fig8") {
    for (int reuse : cfg.reuse_values) {
      SystemConfig c = cfg;
      c.reuse_factor = reuse;
      c.ris_count = reuse - 1;
      c.ues = reuse * c.pilots;
      c.validate();
      detail::run_ul_point(res, c, "reuse", reuse,
                           detail::point_key(7, static_cast<std::uint64_t>(reuse)));
    }
  } else {
    const std::uint64_t family = preset == "k16" ? 16 : 6;
    for (int M : cfg.m_values) {
      SystemConfig c = cfg;
      c.bs_antennas = M;
      c.validate();
      detail::run_ul_point(res, c, "M", M, detail::point_key(family, static_cast<std::uint64_t>(M)));
    }
  }
  res.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

} // namespace rispilot::harness

#endif // RISPILOT_HARNESS_EXPERIMENT_HPP
