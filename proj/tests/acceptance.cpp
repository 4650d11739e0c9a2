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

// Acceptance suite: one PASS/FAIL line per criterion. Criteria 1-7 are exact
// property checks; 8-13 run the Monte Carlo presets at their headline points
// with S = 1000 trials.
//
//   acceptance [--trials S] [--only 1,2,...] [--expect-fail 8,9,...]
//
// Exit status is 0 when the set of failing criteria equals the --expect-fail
// list (empty by default), 1 otherwise. An expected failure that starts
// passing is reported as a mismatch too.

#include "oracles.hpp"

#include "rispilot/rispilot.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace rispilot;
using namespace rispilot::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. tr(H diag(phi) R diag(phi)^H H^H) = phi^H (R* . H^H H) phi.
Outcome trace_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  const RMat kernel = oracle::sinc_kernel(4, 4, 0.05, 0.1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const CMat H = oracle::random_cmat(8, 16, rng);
    const CVec phi = oracle::random_unit_modulus(16, rng);
    const double ref = oracle::reflected_trace(H, phi, kernel.cast<cplx>());
    worst = std::max(worst, std::abs(objective(phi, build_quadratic(H, kernel)) - ref) / ref);
  }
  const double t = seconds_since(t0);
  return {worst < 1e-9 && t < 10, fmt("max rel err %.2e over 1000 instances, %.2f s", worst, t)};
}

// 2. Euclidean gradient vs central differences.
Outcome gradient_check() {
  Rng rng(102);
  const RMat kernel = oracle::sinc_kernel(4, 4, 0.05, 0.1);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const QuadraticForm f = build_quadratic(oracle::random_cmat(8, 16, rng), kernel);
    const CVec phi = oracle::random_unit_modulus(16, rng);
    const CVec g = euclidean_gradient(phi, f);
    const CVec fd =
        oracle::fd_gradient([&](const CVec &x) { return quadratic_value(x, f); }, phi, 1e-6);
    worst = std::max(worst, (g - fd).norm() / g.norm());
  }
  return {worst < 1e-4, fmt("max rel err %.2e over 100 instances", worst)};
}

// 3. Rank-one forms reach (sum |c_i|)^2 with a monotone trace.
Outcome rank_one_optimum() {
  Rng rng(103);
  const CVec c = oracle::random_cvec(32, rng);
  const QuadraticForm f{c * c.adjoint()};
  const double opt = std::pow(c.cwiseAbs().sum(), 2);
  double worst = 0;
  bool monotone = true;
  int max_iter = 0;
  for (int i = 0; i < 10; ++i) {
    const AscentReport rep = riemannian_ascent(f, oracle::random_unit_modulus(32, rng));
    worst = std::max(worst, std::abs(rep.objective_trace.back() - opt) / opt);
    for (std::size_t j = 1; j < rep.objective_trace.size(); ++j)
      monotone &= rep.objective_trace[j] >= rep.objective_trace[j - 1] * (1 - 1e-9);
    max_iter = std::max(max_iter, rep.iterations);
  }
  return {worst < 1e-6 && monotone,
          fmt("max rel gap %.2e, monotone %s, max iterations %d", worst, monotone ? "yes" : "no",
              max_iter)};
}

// 4. Empirical MMSE statistics.
Outcome mmse_statistics() {
  Rng rng(104);
  const Index M = 16;
  const std::vector<CMat> R{bs_ue_correlation(1.0, 0.5, 0.3, M),
                            bs_ue_correlation(0.5, 0.5, -1.2, M)};
  Association assoc{{{0}, {1}}};
  const PilotAssignment pa = assign_pilots(assoc, 1);
  const double rho = 2.0;
  const CMat F0 = sqrt_factor(R[0]), F1 = sqrt_factor(R[1]);
  const int S = 100000;
  std::vector<CVec> hat(S), err(S);
  CMat phi;
  for (int s = 0; s < S; ++s) {
    const std::vector<CVec> h{F0 * complex_gaussian(M, rng), F1 * complex_gaussian(M, rng)};
    const EstimationOutput est = estimate_all(simulate_pilot_phase(h, pa, rho, rng), R, pa, rho);
    hat[static_cast<std::size_t>(s)] = est.estimates[0];
    err[static_cast<std::size_t>(s)] = h[0] - est.estimates[0];
    if (s == 0)
      phi = est.estimate_cov[0];
  }
  const double scale = R[0].trace().real() / M;
  const double e_hat = (oracle::sample_cross(hat, hat) - phi).cwiseAbs().maxCoeff() / scale;
  const double e_err = (oracle::sample_cross(err, err) - (R[0] - phi)).cwiseAbs().maxCoeff() / scale;
  const double e_x = oracle::sample_cross(hat, err).cwiseAbs().maxCoeff() / scale;
  return {e_hat < 0.05 && e_err < 0.05 && e_x < 0.05,
          fmt("Cov(h^) %.3f, Cov(h-h^) %.3f, cross %.3f (of tr/M)", e_hat, e_err, e_x)};
}

// 5. ZF null steering.
Outcome zf_null_steering() {
  Rng rng(105);
  const CMat Hhat = oracle::random_cmat(32, 8, rng);
  const CMat G = zf_combiner(Hhat).vectors.adjoint() * Hhat;
  const double err = (G - CMat::Identity(8, 8)).cwiseAbs().maxCoeff();
  return {err < 1e-9, fmt("max |v^H h - delta| = %.2e", err)};
}

// 6. E|h_k^H h_k'|^2 = tr(R_k R_k').
Outcome cross_product() {
  Rng rng(106);
  const Index M = 16;
  const CMat R1 = bs_ue_correlation(1.0, 0.5, 0.4, M);
  const CMat R2 = oracle::random_psd(M, 5, 2.0, rng);
  const CMat F1 = sqrt_factor(R1), F2 = sqrt_factor(R2);
  double acc = 0;
  const int S = 100000;
  for (int s = 0; s < S; ++s)
    acc += std::norm((F1 * complex_gaussian(M, rng)).dot(F2 * complex_gaussian(M, rng)));
  const double mc = acc / S;
  const double ref = (R1 * R2).trace().real();
  const double rel = std::abs(mc - ref) / ref;
  return {rel < 0.03, fmt("MC %.5g vs tr %.5g, rel err %.4f", mc, ref, rel)};
}

// 7. Grid cardinality, worst gap and orthogonality.
Outcome grid_exactness() {
  const double lambda = 0.1, dB = 0.05;
  const AngularGrid g = build_angle_grid(128, dB, lambda);
  double worst_ip = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (!check_pair(g.angles[i], g.angles[j], dB, lambda))
        worst_ip = std::max(worst_ip, oracle::ula_inner(g.angles[i], g.angles[j], 128, dB, lambda));
  const bool ok = g.size() == 256 && std::abs(g.worst_gap() - 0.177) < 1e-3 && worst_ip < 1e-6 * 128;
  return {ok, fmt("%zu angles, worst gap %.4f rad, max |a^H a'| %.2e", g.size(), g.worst_gap(), worst_ip)};
}

struct Runs {
  SystemConfig base;
  std::optional<ExperimentResult> fig3, fig6, fig7;

  const ExperimentResult &get(const std::string &preset) {
    auto &slot = preset == "fig3" ? fig3 : preset == "fig6" ? fig6 : fig7;
    if (!slot) {
      SystemConfig c = base;
      c.m_values = {128};
      c.bs_antennas = 128;
      c.reuse_values = {4};
      c.rician_values_db = {10};
      std::cerr << "running " << preset << " (" << c.trials << " trials)..." << std::flush;
      slot = run_experiment(c, preset);
      std::cerr << " " << fmt("%.1f s", slot->runtime_s) << "\n";
    }
    return *slot;
  }
};

double val(const ExperimentResult &r, const char *metric, const char *scheme, const char *mode,
           const char *group, double point, const std::string &variant = "-") {
  const auto v = r.find(metric, scheme, mode, group, point, variant);
  if (!v)
    throw std::runtime_error(fmt("missing row %s/%s/%s/%s", metric, scheme, mode, group));
  return *v;
}

// 8. Grid snapping lowers the mean varpi under mo by 20-30 %.
Outcome fig3_reduction(Runs &runs) {
  const ExperimentResult &r = runs.get("fig3");
  const double raw = val(r, "varpi", "-", "mo", "pair", 128, "alpha_db=10;grid=raw");
  const double opt = val(r, "varpi", "-", "mo", "pair", 128, "alpha_db=10;grid=opt");
  const double red = 1 - opt / raw;
  return {red >= 0.20 && red <= 0.30,
          fmt("varpi raw %.4e -> opt %.4e, reduction %.1f %% (target 20-30 %%)", raw, opt, 100 * red)};
}

// 9. MMSE UL SE ratios and absolute no-RIS level, K = 4, tau_p = 1.
Outcome fig6_ratios(Runs &runs) {
  const ExperimentResult &r = runs.get("fig6");
  const double nr = val(r, "ul_se", "mmse", "nr", "all", 128);
  const double rps = val(r, "ul_se", "mmse", "rps", "all", 128);
  const double mo = val(r, "ul_se", "mmse", "mo", "all", 128);
  const bool ok = mo / nr >= 1.4 && mo / nr <= 1.9 && rps / nr >= 1.15 && rps / nr <= 1.55 &&
                  std::abs(nr - 1.346) <= 0.25 * 1.346;
  return {ok, fmt("SE nr %.3f rps %.3f mo %.3f; mo/nr %.3f [1.4,1.9], rps/nr %.3f [1.15,1.55], "
                  "nr vs 1.346: %+.1f %% [+-25]",
                  nr, rps, mo, mo / nr, rps / nr, 100 * (nr / 1.346 - 1))};
}

// 10. Per-group UL SE, K = 4, tau_p = 1.
Outcome fig4_groups(Runs &runs) {
  const ExperimentResult &r = runs.get("fig6");
  const double far_nr = val(r, "ul_se", "mmse", "nr", "farthest", 128);
  const double far_mo = val(r, "ul_se", "mmse", "mo", "farthest", 128);
  double lo = 1e9, hi = 0;
  for (const char *m : {"nr", "rps", "mo"}) {
    const double v = val(r, "ul_se", "mmse", m, "closest", 128);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double ratio = far_mo / far_nr;
  const double change = (hi - lo) / lo;
  return {ratio >= 1.7 && ratio <= 2.2 && change < 0.15,
          fmt("farthest nr %.3f mo %.3f ratio %.3f [1.7,2.2]; closest spread %.1f %% [<15]", far_nr,
              far_mo, ratio, 100 * change)};
}

// 11. Scheme and mode ordering on every UL/DL preset.
Outcome orderings(Runs &runs) {
  std::ostringstream bad;
  int checks = 0;
  auto check = [&](const ExperimentResult &r, const char *label, const char *metric, double point) {
    for (const char *m : {"nr", "rps", "mo"}) {
      const double mr = val(r, metric, "mr", m, "all", point);
      const double zf = val(r, metric, "zf", m, "all", point);
      const double mmse = val(r, metric, "mmse", m, "all", point);
      checks += 2;
      if (!(mmse >= zf && zf >= mr))
        bad << fmt(" %s/%s/%s: mr %.3f zf %.3f mmse %.3f;", label, metric, m, mr, zf, mmse);
    }
    const double nr = val(r, metric, "mmse", "nr", "all", point);
    const double rps = val(r, metric, "mmse", "rps", "all", point);
    const double mo = val(r, metric, "mmse", "mo", "all", point);
    checks += 2;
    if (!(mo >= rps && rps >= nr))
      bad << fmt(" %s/%s modes: nr %.3f rps %.3f mo %.3f;", label, metric, nr, rps, mo);
  };
  const ExperimentResult &f6 = runs.get("fig6");
  const ExperimentResult &f7 = runs.get("fig7");
  check(f6, "fig4/fig6 M=128", "ul_se", 128);
  check(f6, "fig9/fig10 M=128", "dl_se", 128);
  check(f7, "fig7/fig8/k16 reuse=4", "ul_se", 4);
  const std::string b = bad.str();
  return {b.empty(), b.empty() ? fmt("%d orderings hold", checks) : "violated:" + b};
}

// 12. Power decomposition at tau_p = 4, reuse 4.
Outcome fig8_powers(Runs &runs) {
  const ExperimentResult &r = runs.get("fig7");
  const double ds_nr = val(r, "ds", "mmse", "nr", "all", 4), ds_mo = val(r, "ds", "mmse", "mo", "all", 4);
  const double ipr_nr = val(r, "ipr", "mmse", "nr", "all", 4), ipr_mo = val(r, "ipr", "mmse", "mo", "all", 4);
  const double iop_mo = val(r, "iop", "mmse", "mo", "all", 4);
  const bool ok = ds_mo > ds_nr && ipr_mo < ipr_nr && iop_mo < ds_mo;
  return {ok, fmt("DS %.3g -> %.3g, IPR %.3g -> %.3g, IOP(mo) %.3g", ds_nr, ds_mo, ipr_nr, ipr_mo,
                  iop_mo)};
}

// 13. Downlink MMSE ratio.
Outcome fig9_downlink(Runs &runs) {
  const ExperimentResult &r = runs.get("fig6");
  const double nr = val(r, "dl_se", "mmse", "nr", "all", 128);
  const double mo = val(r, "dl_se", "mmse", "mo", "all", 128);
  return {mo / nr >= 1.25 && mo / nr <= 1.6,
          fmt("DL SE nr %.3f mo %.3f ratio %.3f [1.25,1.6]", nr, mo, mo / nr)};
}

} // namespace

int main(int argc, char **argv) {
  Runs runs;
  runs.base.trials = 1000;
  std::set<int> only, expected;
  auto parse_list = [](const char *arg, std::set<int> &out) {
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ','))
      out.insert(std::stoi(item));
  };
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--trials") && i + 1 < argc) {
      runs.base.trials = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      parse_list(argv[++i], only);
    } else if (!std::strcmp(argv[i], "--expect-fail") && i + 1 < argc) {
      parse_list(argv[++i], expected);
    } else {
      std::cerr << "usage: acceptance [--trials S] [--only 1,2,...] [--expect-fail 8,9,...]\n";
      return 2;
    }
  }

  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"trace identity", trace_identity},
      {"gradient check", gradient_check},
      {"rank-one optimum", rank_one_optimum},
      {"MMSE statistics", mmse_statistics},
      {"ZF null steering", zf_null_steering},
      {"cross-product moment", cross_product},
      {"grid exactness", grid_exactness},
      {"grid snapping interference", [&] { return fig3_reduction(runs); }},
      {"UL SE ratios (K=4, tau_p=1)", [&] { return fig6_ratios(runs); }},
      {"UL SE per group", [&] { return fig4_groups(runs); }},
      {"scheme and mode ordering", [&] { return orderings(runs); }},
      {"UL power decomposition", [&] { return fig8_powers(runs); }},
      {"DL SE ratio", [&] { return fig9_downlink(runs); }},
  };

  std::set<int> failed, ran;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id))
      continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ran.insert(id);
    if (!o.pass)
      failed.insert(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }

  auto join = [](const std::set<int> &xs) {
    std::string out;
    for (int x : xs)
      out += (out.empty() ? "" : ",") + std::to_string(x);
    return out.empty() ? std::string("none") : out;
  };
  std::set<int> expected_ran;
  for (int x : expected)
    if (ran.count(x))
      expected_ran.insert(x);
  std::cout << "acceptance: " << ran.size() - failed.size() << " passed, " << failed.size()
            << " failed (failing: " << join(failed) << "; expected failing: " << join(expected_ran)
            << ")" << std::endl;
  if (failed != expected_ran) {
    std::cout << "acceptance: failing set differs from the expected set" << std::endl;
    return 1;
  }
  return 0;
}
