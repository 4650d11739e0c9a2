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

#ifndef RISPILOT_ESTIMATION_HPP
#define RISPILOT_ESTIMATION_HPP

// Pilot bookkeeping under intra-cell reuse and MMSE estimation of the overall
// channels. Pilots are never materialized: the simulation works on the
// despread statistic y_t = sum_{i in S_t} sqrt(rho) h_i + n_t,
// n_t ~ CN(0, I / tau_p).

#include "rispilot/types.hpp"

#include <Eigen/Cholesky>

#include <algorithm>

namespace rispilot {

/// Pilot indices are 0-based (0..tau_p-1).
struct PilotAssignment {
  int pilot_count = 1;
  std::vector<int> pilot_of;
  std::vector<std::vector<int>> share_sets;
  int reuse_factor = 1;

  /// True iff S_{c(k)} intersected with K_{r(k)} is exactly {k} for every k.
  bool satisfies_scheduling(const Association &assoc) const {
    for (std::size_t k = 0; k < pilot_of.size(); ++k) {
      const int r = assoc.ris_of(static_cast<int>(k));
      const auto &share = share_sets[static_cast<std::size_t>(pilot_of[k])];
      for (int other : share)
        if (other != static_cast<int>(k) && assoc.ris_of(other) == r)
          return false;
    }
    return true;
  }
};

/// Cyclic assignment continuing across K_0, K_1, ..., K_R (UEs in index
/// order within each set). Consecutive runs of at most tau_p pilots are
/// distinct, so UEs of one set never share a pilot, and every pilot is used
/// ceil(K / tau_p) or floor(K / tau_p) times.
inline PilotAssignment assign_pilots(const Association &assoc, int tau_p) {
  require(tau_p >= 1, "tau_p must be positive");
  assoc.validate();
  PilotAssignment pa;
  pa.pilot_count = tau_p;
  const int K = assoc.num_ues();
  pa.pilot_of.assign(static_cast<std::size_t>(K), -1);
  pa.share_sets.assign(static_cast<std::size_t>(tau_p), {});
  int counter = 0;
  for (std::size_t r = 0; r < assoc.sets.size(); ++r) {
    if (static_cast<int>(assoc.sets[r].size()) > tau_p)
      throw InfeasibleSchedule("association set K_" + std::to_string(r) +
                               " has " + std::to_string(assoc.sets[r].size()) +
                               " UEs but only " + std::to_string(tau_p) +
                               " pilots exist");
    std::vector<int> members = assoc.sets[r];
    std::sort(members.begin(), members.end());
    for (int k : members) {
      const int t = counter++ % tau_p;
      pa.pilot_of[static_cast<std::size_t>(k)] = t;
      pa.share_sets[static_cast<std::size_t>(t)].push_back(k);
    }
  }
  for (auto &s : pa.share_sets)
    std::sort(s.begin(), s.end());
  pa.reuse_factor = (K + tau_p - 1) / tau_p;
  return pa;
}

/// Despread pilot observations, one per pilot. With add_noise = false the
/// noise term is omitted (consistency checks).
inline std::vector<CVec> simulate_pilot_phase(const std::vector<CVec> &channels,
                                              const PilotAssignment &pa,
                                              double rho, Rng &rng,
                                              bool add_noise = true) {
  require(!channels.empty(), "no channels given");
  require(channels.size() == pa.pilot_of.size(),
          "channel count does not match pilot assignment");
  const Index M = channels.front().size();
  const double noise_sd = std::sqrt(1.0 / pa.pilot_count);
  std::vector<CVec> y;
  y.reserve(static_cast<std::size_t>(pa.pilot_count));
  for (int t = 0; t < pa.pilot_count; ++t) {
    CVec yt = CVec::Zero(M);
    for (int i : pa.share_sets[static_cast<std::size_t>(t)])
      yt += std::sqrt(rho) * channels[static_cast<std::size_t>(i)];
    if (add_noise)
      yt += noise_sd * complex_gaussian(M, rng);
    y.push_back(std::move(yt));
  }
  return y;
}

struct MmseEstimate {
  CVec estimate; // h-hat_k
  CMat cov;      // Phi_k
};

/// Factorization of Q_t = sum_{i in S_t} R_i + I / (rho tau_p).
inline Eigen::LLT<CMat> pilot_covariance_factor(int t,
                                                const std::vector<CMat> &R,
                                                const PilotAssignment &pa,
                                                double rho) {
  require(!R.empty(), "no correlation matrices given");
  const Index M = R.front().rows();
  CMat Q = CMat::Identity(M, M) / (rho * pa.pilot_count);
  for (int i : pa.share_sets[static_cast<std::size_t>(t)]) {
    const CMat &Ri = R[static_cast<std::size_t>(i)];
    require(Ri.rows() == M && Ri.cols() == M, "correlation dimension mismatch");
    Q += Ri;
  }
  Eigen::LLT<CMat> llt(Q);
  if (llt.info() != Eigen::Success)
    throw SingularMatrix("pilot covariance Q is not positive definite");
  return llt;
}

/// h-hat_k = R_k Q^-1 y_{c(k)} / sqrt(rho) and Phi_k = R_k Q^-1 R_k.
inline MmseEstimate mmse_estimate(const CVec &y, int k, const std::vector<CMat> &R,
                                  const PilotAssignment &pa, double rho) {
  const auto ku = static_cast<std::size_t>(k);
  require(ku < R.size() && ku < pa.pilot_of.size(), "UE index out of range");
  const CMat &Rk = R[ku];
  require(y.size() == Rk.rows(), "observation and correlation dimensions differ");
  const auto llt = pilot_covariance_factor(pa.pilot_of[ku], R, pa, rho);
  const CMat QinvR = llt.solve(Rk); // Q^-1 R_k
  MmseEstimate out;
  out.estimate = QinvR.adjoint() * y / std::sqrt(rho); // R_k Q^-1 y
  out.cov = Rk * QinvR;
  out.cov = 0.5 * (out.cov + out.cov.adjoint()).eval();
  return out;
}

struct EstimationOutput {
  std::vector<CVec> estimates;
  std::vector<CMat> estimate_cov; // Phi_k
  std::vector<CMat> error_cov;    // R_k - Phi_k
  std::vector<CVec> despread;     // y_t
};

/// Estimates every UE, factoring each Q_t once.
inline EstimationOutput estimate_all(std::vector<CVec> despread,
                                     const std::vector<CMat> &R,
                                     const PilotAssignment &pa, double rho) {
  const std::size_t K = pa.pilot_of.size();
  require(R.size() == K, "correlation count does not match UE count");
  EstimationOutput out;
  out.estimates.resize(K);
  out.estimate_cov.resize(K);
  out.error_cov.resize(K);
  for (int t = 0; t < pa.pilot_count; ++t) {
    const auto &share = pa.share_sets[static_cast<std::size_t>(t)];
    if (share.empty())
      continue;
    const auto llt = pilot_covariance_factor(t, R, pa, rho);
    const CVec Qinv_y = llt.solve(despread[static_cast<std::size_t>(t)]);
    for (int k : share) {
      const auto ku = static_cast<std::size_t>(k);
      const CMat &Rk = R[ku];
      const CMat QinvR = llt.solve(Rk);
      out.estimates[ku] = Rk * Qinv_y / std::sqrt(rho);
      CMat phi = Rk * QinvR;
      phi = 0.5 * (phi + phi.adjoint()).eval();
      out.error_cov[ku] = Rk - phi;
      out.estimate_cov[ku] = std::move(phi);
    }
  }
  out.despread = std::move(despread);
  return out;
}

} // namespace rispilot

#endif // RISPILOT_ESTIMATION_HPP
