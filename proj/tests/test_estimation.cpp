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

#include "oracles.hpp"

#include "rispilot/channels.hpp"
#include "rispilot/estimation.hpp"

#include <gtest/gtest.h>

using namespace rispilot;

namespace {

Association one_per_set(int sets) {
  Association a;
  for (int r = 0; r < sets; ++r)
    a.sets.push_back({r});
  return a;
}

} // namespace

TEST(AssignPilots, SinglePilotFourSets) {
  const Association assoc = one_per_set(4);
  const PilotAssignment pa = assign_pilots(assoc, 1);
  EXPECT_EQ(pa.pilot_count, 1);
  EXPECT_EQ(pa.reuse_factor, 4);
  for (int k = 0; k < 4; ++k)
    EXPECT_EQ(pa.pilot_of[static_cast<std::size_t>(k)], 0);
  EXPECT_EQ(pa.share_sets[0], (std::vector<int>{0, 1, 2, 3}));
  EXPECT_TRUE(pa.satisfies_scheduling(assoc));
}

TEST(AssignPilots, SixteenUesFourPilots) {
  Association assoc;
  for (int r = 0; r < 4; ++r)
    assoc.sets.push_back({4 * r, 4 * r + 1, 4 * r + 2, 4 * r + 3});
  const PilotAssignment pa = assign_pilots(assoc, 4);
  EXPECT_EQ(pa.reuse_factor, 4);
  for (const auto &s : pa.share_sets) {
    ASSERT_EQ(s.size(), 4u);
    std::set<int> sets_hit;
    for (int k : s)
      sets_hit.insert(assoc.ris_of(k));
    EXPECT_EQ(sets_hit.size(), 4u);
  }
  EXPECT_TRUE(pa.satisfies_scheduling(assoc));
}

TEST(AssignPilots, OverfullSetIsInfeasible) {
  Association assoc{{{0}, {1, 2, 3, 4, 5}}};
  EXPECT_THROW(assign_pilots(assoc, 4), InfeasibleSchedule);
}

TEST(AssignPilots, RandomFeasibleScenariosSatisfyScheduling) {
  Rng rng(8);
  std::uniform_int_distribution<int> tau_d(1, 6), sets_d(1, 7);
  for (int trial = 0; trial < 300; ++trial) {
    const int tau = tau_d(rng);
    const int sets = sets_d(rng);
    std::uniform_int_distribution<int> size_d(0, tau);
    Association assoc;
    int next = 0;
    for (int r = 0; r < sets; ++r) {
      std::vector<int> s;
      for (int i = size_d(rng); i > 0; --i)
        s.push_back(next++);
      assoc.sets.push_back(s);
    }
    if (next == 0)
      continue;
    const PilotAssignment pa = assign_pilots(assoc, tau);
    EXPECT_TRUE(pa.satisfies_scheduling(assoc));
    for (const auto &s : pa.share_sets)
      EXPECT_LE(static_cast<int>(s.size()), pa.reuse_factor);
    for (int p : pa.pilot_of)
      EXPECT_TRUE(p >= 0 && p < tau);
  }
}

TEST(PilotPhase, NoiseFreeSuperposition) {
  Rng rng(1);
  const std::vector<CVec> h{oracle::random_cvec(4, rng), oracle::random_cvec(4, rng),
                            oracle::random_cvec(4, rng)};
  Association assoc{{{0}, {1}, {2}}};
  const PilotAssignment pa = assign_pilots(assoc, 2); // pilots 0, 1, 0
  const auto y = simulate_pilot_phase(h, pa, 4.0, rng, false);
  ASSERT_EQ(y.size(), 2u);
  EXPECT_NEAR((y[0] - 2.0 * (h[0] + h[2])).norm(), 0.0, 1e-14);
  EXPECT_NEAR((y[1] - 2.0 * h[1]).norm(), 0.0, 1e-14);
}

TEST(PilotPhase, NoiseCovariance) {
  Rng rng(2);
  const std::vector<CVec> h{CVec::Zero(3), CVec::Zero(3), CVec::Zero(3), CVec::Zero(3)};
  Association assoc{{{0, 1, 2, 3}}};
  const PilotAssignment pa = assign_pilots(assoc, 4);
  std::vector<CVec> draws;
  for (int s = 0; s < 100000; ++s)
    draws.push_back(simulate_pilot_phase(h, pa, 1.0, rng)[1]);
  const CMat C = oracle::sample_cross(draws, draws);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      EXPECT_NEAR(std::abs(C(i, j) - (i == j ? cplx(0.25, 0) : cplx(0, 0))), 0.0, 0.03 * 0.25);
}

TEST(Mmse, ZeroCorrelationGivesZeroEstimate) {
  Rng rng(3);
  const std::vector<CMat> R{CMat::Zero(4, 4), oracle::random_psd(4, 4, 4.0, rng)};
  Association assoc{{{0}, {1}}};
  const PilotAssignment pa = assign_pilots(assoc, 1);
  const MmseEstimate e = mmse_estimate(oracle::random_cvec(4, rng), 0, R, pa, 10.0);
  EXPECT_EQ(e.estimate.norm(), 0.0);
  EXPECT_EQ(e.cov.norm(), 0.0);
}

TEST(Mmse, MatchesExplicitInverse) {
  Rng rng(4);
  const Index M = 8;
  const std::vector<CMat> R{oracle::random_psd(M, 3, 8.0, rng), oracle::random_psd(M, 5, 2.0, rng)};
  Association assoc{{{0}, {1}}};
  const PilotAssignment pa = assign_pilots(assoc, 1);
  const double rho = 3.0;
  const CVec y = oracle::random_cvec(M, rng);
  const CMat Q = R[0] + R[1] + CMat::Identity(M, M) / rho;
  for (int k = 0; k < 2; ++k) {
    const MmseEstimate e = mmse_estimate(y, k, R, pa, rho);
    const CVec ref = oracle::mmse_direct(y, R[static_cast<std::size_t>(k)], Q, rho);
    EXPECT_NEAR((e.estimate - ref).norm(), 0.0, 1e-10 * ref.norm());
    const CMat phi_ref = R[static_cast<std::size_t>(k)] * Q.inverse() * R[static_cast<std::size_t>(k)];
    EXPECT_NEAR((e.cov - phi_ref).norm(), 0.0, 1e-10 * phi_ref.norm());
  }
  const EstimationOutput all = estimate_all({y}, R, pa, rho);
  EXPECT_NEAR((all.estimates[1] - mmse_estimate(y, 1, R, pa, rho).estimate).norm(), 0.0,
              1e-12 * all.estimates[1].norm());
}

TEST(Mmse, HighSnrConsistency) {
  Rng rng(5);
  const Index M = 6;
  const std::vector<CMat> R{oracle::random_psd(M, M, 6.0, rng)};
  Association assoc{{{0}}};
  const PilotAssignment pa = assign_pilots(assoc, 1);
  const double rho = 1e8;
  const CVec h = sample_correlated_vector(R[0], rng);
  const auto y = simulate_pilot_phase({h}, pa, rho, rng, false);
  const MmseEstimate e = mmse_estimate(y[0], 0, R, pa, rho);
  EXPECT_LT((e.estimate - h).norm() / h.norm(), 1e-2);
}

TEST(Mmse, ContaminationStructure) {
  Rng rng(6);
  const Index M = 6;
  const std::vector<CMat> R{oracle::random_psd(M, M, 6.0, rng), oracle::random_psd(M, M, 3.0, rng)};
  Association assoc{{{0}, {1}}};
  const PilotAssignment pa = assign_pilots(assoc, 1);
  const auto y = simulate_pilot_phase({sample_correlated_vector(R[0], rng),
                                       sample_correlated_vector(R[1], rng)},
                                      pa, 5.0, rng);
  const EstimationOutput est = estimate_all(y, R, pa, 5.0);
  const CVec predicted = R[1] * R[0].inverse() * est.estimates[0];
  EXPECT_NEAR((est.estimates[1] - predicted).norm(), 0.0, 1e-9 * est.estimates[1].norm());
}

TEST(Mmse, PowerSplitAndPsd) {
  Rng rng(7);
  const Index M = 10;
  const std::vector<CMat> R{oracle::random_psd(M, 4, 10.0, rng), oracle::random_psd(M, 10, 1.0, rng),
                            oracle::random_psd(M, 2, 5.0, rng)};
  Association assoc{{{0}, {1}, {2}}};
  const PilotAssignment pa = assign_pilots(assoc, 2);
  std::vector<CVec> y{oracle::random_cvec(M, rng), oracle::random_cvec(M, rng)};
  const EstimationOutput est = estimate_all(y, R, pa, 2.0);
  for (std::size_t k = 0; k < 3; ++k) {
    const double tr = R[k].trace().real();
    EXPECT_NEAR(est.estimate_cov[k].trace().real() + est.error_cov[k].trace().real(), tr,
                1e-10 * tr);
    Eigen::SelfAdjointEigenSolver<CMat> a(est.estimate_cov[k]), b(est.error_cov[k]);
    EXPECT_GE(a.eigenvalues().minCoeff(), -1e-9 * tr);
    EXPECT_GE(b.eigenvalues().minCoeff(), -1e-9 * tr);
  }
}

// Empirical second-order statistics of the estimator with two UEs sharing a
// pilot: Cov(h-hat) = Phi, Cov(h - h-hat) = R - Phi, and orthogonality.
TEST(Mmse, MonteCarloStatistics) {
  Rng rng(8);
  const Index M = 16;
  const CMat R0 = bs_ue_correlation(1.0, 0.5, 0.3, M);
  const CMat R1 = bs_ue_correlation(0.5, 0.5, -1.2, M);
  const std::vector<CMat> R{R0, R1};
  Association assoc{{{0}, {1}}};
  const PilotAssignment pa = assign_pilots(assoc, 1);
  const double rho = 2.0;
  const CMat F0 = sqrt_factor(R0), F1 = sqrt_factor(R1);

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
  const double scale = R0.trace().real() / M;
  const CMat c_hat = oracle::sample_cross(hat, hat);
  const CMat c_err = oracle::sample_cross(err, err);
  const CMat c_x = oracle::sample_cross(hat, err);
  for (Index i = 0; i < M; ++i)
    for (Index j = 0; j < M; ++j) {
      EXPECT_LT(std::abs(c_hat(i, j) - phi(i, j)), 0.05 * scale);
      EXPECT_LT(std::abs(c_err(i, j) - (R0 - phi)(i, j)), 0.05 * scale);
      EXPECT_LT(std::abs(c_x(i, j)), 0.05 * scale);
    }
}
