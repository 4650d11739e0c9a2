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

#ifndef RISPILOT_BEAMFORMING_HPP
#define RISPILOT_BEAMFORMING_HPP

#include "rispilot/estimation.hpp"
#include "rispilot/types.hpp"

#include <Eigen/QR>

#include <array>
#include <cmath>
#include <string_view>

namespace rispilot {

enum class Scheme { MR, ZF, MMSE };

inline constexpr std::array<Scheme, 3> kAllSchemes{Scheme::MR, Scheme::ZF,
                                                   Scheme::MMSE};

inline std::string_view scheme_name(Scheme s) {
  switch (s) {
  case Scheme::MR:
    return "mr";
  case Scheme::ZF:
    return "zf";
  case Scheme::MMSE:
    return "mmse";
  }
  return "?";
}

/// Combining vectors stored column-wise (M x K).
struct CombinerSet {
  CMat vectors;
  Scheme scheme = Scheme::MR;
};

/// Stacks per-UE vectors into the M x K matrix H-hat.
inline CMat stack_columns(const std::vector<CVec> &cols) {
  require(!cols.empty(), "nothing to stack");
  CMat out(cols.front().size(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    require(cols[k].size() == out.rows(), "column length mismatch");
    out.col(static_cast<Index>(k)) = cols[k];
  }
  return out;
}

inline CombinerSet mr_combiner(const CMat &estimates) {
  return {estimates, Scheme::MR};
}

/// Columns of H-hat (H-hat^H H-hat)^-1.
inline CombinerSet zf_combiner(const CMat &estimates) {
  const Index M = estimates.rows();
  const Index K = estimates.cols();
  if (K > M)
    throw SingularMatrix("ZF needs K <= M (K=" + std::to_string(K) +
                         ", M=" + std::to_string(M) + ")");
  Eigen::ColPivHouseholderQR<CMat> qr(estimates);
  qr.setThreshold(1e-10);
  if (qr.rank() < K)
    throw SingularMatrix("channel estimate matrix is rank deficient");
  const CMat gram = estimates.adjoint() * estimates;
  return {estimates * gram.ldlt().solve(CMat::Identity(K, K)), Scheme::ZF};
}

/// v_k = Z h-hat_k with Z = [sum_k (h-hat h-hat^H + R_k - Phi_k) + I/rho]^-1.
inline CombinerSet mmse_combiner(const CMat &estimates,
                                 const std::vector<CMat> &error_cov,
                                 double rho) {
  const Index M = estimates.rows();
  CMat S = estimates * estimates.adjoint();
  S.diagonal().array() += 1.0 / rho;
  for (const auto &C : error_cov) {
    require(C.rows() == M && C.cols() == M, "error covariance dimension mismatch");
    S += C;
  }
  return {S.llt().solve(estimates), Scheme::MMSE};
}

inline CombinerSet make_combiner(Scheme scheme, const CMat &estimates,
                                 const std::vector<CMat> &error_cov, double rho) {
  switch (scheme) {
  case Scheme::MR:
    return mr_combiner(estimates);
  case Scheme::ZF:
    return zf_combiner(estimates);
  case Scheme::MMSE:
    return mmse_combiner(estimates, error_cov, rho);
  }
  throw InvalidArgument("unknown scheme");
}

/// UL power terms at the combiner output, each divided by ||v_k||^2 / rho so
/// that noise == 1.
struct PowerDecomposition {
  double ds = 0;  // desired signal
  double ipr = 0; // interference from UEs reusing the pilot
  double iop = 0; // interference from UEs on other pilots
  double ee = 0;  // estimation error
  double noise = 1;

  double sinr() const { return ds / (ipr + iop + ee + noise); }
};

struct SinrResult {
  double sinr = 0;
  PowerDecomposition terms;
};

/// gamma_k = |v^H h_k|^2 / (sum_{k'!=k} |v^H h_k'|^2 + v^H (sum_k' C_k') v
///                          + ||v||^2 / rho),
/// where C_k' = R_k' - Phi_k'. error_cov_sum is that sum over all UEs.
inline SinrResult ul_sinr(int k, const CombinerSet &combiners, const CMat &channels,
                          const CMat &error_cov_sum, const PilotAssignment &pa,
                          double rho) {
  const CVec v = combiners.vectors.col(k);
  const double vnorm2 = v.squaredNorm();
  if (!(vnorm2 > 0))
    throw UndefinedSinr("combiner of UE " + std::to_string(k) + " is zero");
  const double noise = vnorm2 / rho;
  const auto ku = static_cast<std::size_t>(k);
  const int pilot = pa.pilot_of[ku];
  const RVec gains = (channels.adjoint() * v).cwiseAbs2();
  SinrResult out;
  out.terms.ds = gains[k] / noise;
  for (Index j = 0; j < channels.cols(); ++j) {
    if (j == k)
      continue;
    if (pa.pilot_of[static_cast<std::size_t>(j)] == pilot)
      out.terms.ipr += gains[j] / noise;
    else
      out.terms.iop += gains[j] / noise;
  }
  out.terms.ee = std::max(0.0, (v.adjoint() * error_cov_sum * v)(0, 0).real()) / noise;
  out.sinr = out.terms.sinr();
  return out;
}

/// Convenience overload summing R_k' - Phi_k' on the fly.
inline SinrResult ul_sinr(int k, const CombinerSet &combiners, const CMat &channels,
                          const std::vector<CMat> &error_cov,
                          const PilotAssignment &pa, double rho) {
  const Index M = channels.rows();
  CMat sum = CMat::Zero(M, M);
  for (const auto &C : error_cov)
    sum += C;
  return ul_sinr(k, combiners, channels, sum, pa, rho);
}

/// w_k = v_k / ||v_k||.
inline CMat precoders(const CombinerSet &combiners) {
  CMat W = combiners.vectors;
  for (Index k = 0; k < W.cols(); ++k) {
    const double n = W.col(k).norm();
    if (!(n > 0))
      throw UndefinedSinr("precoder of UE " + std::to_string(k) +
                          " is undefined (zero combiner)");
    W.col(k) /= n;
  }
  return W;
}

/// Ensemble averages needed by the DL hardening bound: mean of h_k^H w_k and
/// mean of sum_k' |h_k^H w_k'|^2. Trials must be added in a fixed order for
/// bitwise reproducibility.
class DlHardeningAccumulator {
public:
  explicit DlHardeningAccumulator(Index K = 0)
      : gain_sum_(CVec::Zero(K)), power_sum_(RVec::Zero(K)) {}

  /// channels and precoders are M x K with matching columns.
  void add(const CMat &channels, const CMat &precoders) {
    require(channels.cols() == precoders.cols() && channels.rows() == precoders.rows(),
            "channel/precoder shape mismatch");
    if (gain_sum_.size() == 0) {
      gain_sum_ = CVec::Zero(channels.cols());
      power_sum_ = RVec::Zero(channels.cols());
    }
    require(channels.cols() == gain_sum_.size(), "UE count changed mid-ensemble");
    const CMat G = channels.adjoint() * precoders; // G(k, j) = h_k^H w_j
    add_gains(G);
  }

  /// G(k, j) = h_k^H w_j for one realization.
  void add_gains(const CMat &G) {
    add_terms(G.diagonal(), G.cwiseAbs2().rowwise().sum());
  }

  /// diag: h_k^H w_k per UE; power: sum_k' |h_k^H w_k'|^2 per UE.
  void add_terms(const CVec &diag, const RVec &power) {
    require(diag.size() == power.size(), "gain/power length mismatch");
    if (gain_sum_.size() == 0) {
      gain_sum_ = CVec::Zero(diag.size());
      power_sum_ = RVec::Zero(diag.size());
    }
    require(diag.size() == gain_sum_.size(), "UE count changed mid-ensemble");
    gain_sum_ += diag;
    power_sum_ += power;
    ++count_;
  }

  /// Folds in another accumulator's partial sums (for ordered reductions).
  void merge(const DlHardeningAccumulator &other) {
    if (other.count_ == 0)
      return;
    if (gain_sum_.size() == 0) {
      *this = other;
      return;
    }
    gain_sum_ += other.gain_sum_;
    power_sum_ += other.power_sum_;
    count_ += other.count_;
  }

  long count() const { return count_; }

  double sinr(int k, double rho) const {
    if (count_ == 0)
      throw InvalidArgument("DL SINR needs a non-empty ensemble");
    const double n = static_cast<double>(count_);
    const double signal = std::norm(gain_sum_[k] / n);
    const double total = power_sum_[k] / n;
    return rho * signal / (rho * total - rho * signal + 1.0);
  }

private:
  CVec gain_sum_;
  RVec power_sum_;
  long count_ = 0;
};

struct DlSample {
  CMat channels;  // M x K, columns h_k
  CMat precoders; // M x K, columns w_k
};

/// Hardening-bound DL SINR of UE k from an ensemble of realizations.
inline double dl_sinr(int k, const std::vector<DlSample> &ensemble, double rho) {
  if (ensemble.empty())
    throw InvalidArgument("DL SINR needs a non-empty ensemble");
  DlHardeningAccumulator acc;
  for (const auto &s : ensemble)
    acc.add(s.channels, s.precoders);
  return acc.sinr(k, rho);
}

inline double spectral_efficiency(double sinr, double prelog = 1.0) {
  require(sinr >= 0, "SINR must be non-negative");
  require(prelog > 0 && prelog <= 1, "prelog must lie in (0, 1]");
  return prelog * std::log2(1.0 + sinr);
}

} // namespace rispilot

#endif // RISPILOT_BEAMFORMING_HPP
