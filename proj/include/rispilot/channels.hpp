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

#ifndef RISPILOT_CHANNELS_HPP
#define RISPILOT_CHANNELS_HPP

// Array responses, large-scale fading, spatial correlation models and random
// channel synthesis for the three link types of an RIS-aided cell:
//   BS-RIS  (Rician, LoS from the ULA/UPA responses),
//   RIS-UE  (correlated Rayleigh, isotropic sinc kernel),
//   BS-UE   (correlated Rayleigh, exponential model).
// Angles are azimuths measured counterclockwise from the BS boresight (+x).

#include "rispilot/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace rispilot {

struct ArrayGeometry {
  int bs_antennas = 128;     // M
  double bs_spacing = 0.05;  // d_B [m]
  int ris_rows = 16;         // N_v
  int ris_cols = 16;         // N_h
  double ris_spacing = 0.05; // d_R [m]
  double wavelength = 0.1;   // lambda [m]

  int ris_elements() const { return ris_rows * ris_cols; }

  void validate() const {
    require(bs_antennas >= 1, "bs_antennas must be positive");
    require(ris_rows >= 1 && ris_cols >= 1, "RIS dimensions must be positive");
    require(bs_spacing > 0 && ris_spacing > 0 && wavelength > 0,
            "spacings and wavelength must be positive");
  }
};

/// BS-RIS link: distance, AoA at the BS and AoD (azimuth, elevation) at the RIS.
struct RisLink {
  double distance = 120.0;
  double bs_aoa = 0.0;
  double aod_azimuth = kPi / 6;
  double aod_elevation = 0.0;
};

/// Per-UE link geometry. ris_distance is meaningless for directly served UEs.
struct UeLink {
  double bs_distance = 90.0;
  double bs_aoa = 0.0;
  double ris_distance = 30.0;
};

struct FadingParams {
  double ref_loss = 2.9512092266663854e-4; // beta_0, -35.3 dB
  double kappa_br = 2.3;
  double kappa_ru = 2.3;
  double kappa_bu = 4.2;
  double rician_factor = 3.1622776601683795; // 5 dB
  double correlation = 0.5;                  // zeta

  void validate() const {
    require(ref_loss > 0, "reference loss must be positive");
    require(kappa_br >= 2 && kappa_ru >= 2 && kappa_bu >= 2,
            "path-loss exponents must be >= 2");
    require(rician_factor >= 0, "Rician factor must be non-negative");
    require(correlation >= 0 && correlation <= 1,
            "correlation factor must lie in [0, 1]");
  }
};

/// a(phi, F)[n] = exp(-i pi n phi), n = 0..F-1.
inline CVec steering_vector(double phase_arg, Index length) {
  require(length >= 1, "steering vector length must be >= 1");
  CVec a(length);
  for (Index n = 0; n < length; ++n)
    a[n] = std::polar(1.0, -kPi * static_cast<double>(n) * phase_arg);
  return a;
}

inline CVec bs_array_response(double aoa, const ArrayGeometry &geom) {
  return steering_vector(2.0 * geom.bs_spacing / geom.wavelength * std::sin(aoa),
                         geom.bs_antennas);
}

/// UPA response: horizontal factor (length N_h) Kronecker vertical factor
/// (length N_v), so element index = h * N_v + v.
inline CVec ris_array_response(double aod_azimuth, double aod_elevation,
                               const ArrayGeometry &geom) {
  const double scale = 2.0 * geom.ris_spacing / geom.wavelength;
  const CVec horiz = steering_vector(
      scale * std::sin(aod_azimuth) * std::cos(aod_elevation), geom.ris_cols);
  const CVec vert =
      steering_vector(scale * std::sin(aod_elevation), geom.ris_rows);
  CVec out(horiz.size() * vert.size());
  for (Index h = 0; h < horiz.size(); ++h)
    out.segment(h * vert.size(), vert.size()) = horiz[h] * vert;
  return out;
}

inline double path_loss(double distance, double exponent, double ref_loss) {
  require(distance > 0, "path_loss: distance must be positive");
  return ref_loss * std::pow(distance, -exponent);
}

/// sin(pi x) / (pi x), with a series branch near zero.
inline double sinc(double x) {
  if (std::abs(x) < 1e-6) {
    const double px2 = (kPi * x) * (kPi * x);
    return 1.0 - px2 / 6.0;
  }
  return std::sin(kPi * x) / (kPi * x);
}

/// Exponential correlation model beta * zeta^|n-m| * exp(i (n-m) aoa).
inline CMat bs_ue_correlation(double beta, double zeta, double aoa, Index M) {
  require(zeta >= 0 && zeta <= 1, "correlation factor must lie in [0, 1]");
  CMat R(M, M);
  for (Index m = 0; m < M; ++m)
    for (Index n = 0; n < M; ++n) {
      const auto d = static_cast<double>(n - m);
      R(m, n) = beta * std::pow(zeta, std::abs(d)) * std::polar(1.0, d * aoa);
    }
  return R;
}

/// Isotropic half-space kernel [R]_{m,n} = sinc(2 ||u_m - u_n|| / lambda),
/// u_l = [0, i(l) d_R, j(l) d_R] with i = l mod N_v and j = l / N_v (0-based l).
inline RMat ris_correlation_kernel(const ArrayGeometry &geom) {
  const int N = geom.ris_elements();
  const int Nv = geom.ris_rows;
  RMat R(N, N);
  for (int m = 0; m < N; ++m) {
    for (int n = m; n < N; ++n) {
      const double di = static_cast<double>(m % Nv - n % Nv);
      const double dj = static_cast<double>(m / Nv - n / Nv);
      const double dist = geom.ris_spacing * std::hypot(di, dj);
      R(m, n) = R(n, m) = sinc(2.0 * dist / geom.wavelength);
    }
  }
  return R;
}

/// Factor F with F F^H = cov from the Hermitian eigendecomposition. Eigenvalues
/// below 1e-10 * lambda_max are clipped to zero; anything more negative than
/// 1e-8 * lambda_max (or any negative value of a non-positive spectrum) is an error.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
sqrt_factor(const Eigen::MatrixBase<Derived> &cov) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require(cov.rows() == cov.cols(), "covariance must be square");
  if (cov.size() == 0 || cov.cwiseAbs().maxCoeff() == 0.0)
    return Mat::Zero(cov.rows(), cov.cols());
  Eigen::SelfAdjointEigenSolver<Mat> es(cov.derived());
  if (es.info() != Eigen::Success)
    throw InvalidArgument("covariance eigendecomposition failed");
  const auto &ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  if (lmax <= 0 || ev.minCoeff() < -1e-8 * lmax)
    throw InvalidArgument("covariance is not positive semidefinite");
  RVec s(ev.size());
  for (Index i = 0; i < ev.size(); ++i)
    s[i] = ev[i] > 1e-10 * lmax ? std::sqrt(ev[i]) : 0.0;
  return es.eigenvectors() * s.asDiagonal();
}

/// Draws CN(0, cov) as F w with F F^H = cov and w ~ CN(0, I).
inline CVec sample_correlated_vector(const CMat &cov, Rng &rng) {
  const CMat F = sqrt_factor(cov);
  return F * complex_gaussian(F.cols(), rng);
}

/// Square-root factor of the exponential model without a fresh eigensolve:
/// R = beta * L T L^H with L = diag(exp(-i n aoa)) and T the real Toeplitz
/// matrix zeta^|n-m|, so sqrt(beta) L T^{1/2} is a valid factor.
inline CMat bs_ue_correlation_factor(double beta, double aoa,
                                     const RMat &toeplitz_sqrt) {
  const Index M = toeplitz_sqrt.rows();
  CVec diag(M);
  for (Index n = 0; n < M; ++n)
    diag[n] = std::polar(std::sqrt(beta), -static_cast<double>(n) * aoa);
  return diag.asDiagonal() * toeplitz_sqrt.cast<cplx>();
}

inline RMat exponential_toeplitz(double zeta, Index M) {
  RMat T(M, M);
  for (Index m = 0; m < M; ++m)
    for (Index n = 0; n < M; ++n)
      T(m, n) = std::pow(zeta, std::abs(static_cast<double>(n - m)));
  return T;
}

/// Rician BS-RIS matrix sqrt(beta_br) (sqrt(a/(1+a)) H_LoS + sqrt(1/(1+a)) H_NLoS).
/// An infinite Rician factor yields the pure LoS matrix.
inline CMat sample_bs_ris_channel(const RisLink &link, const FadingParams &fading,
                                  const ArrayGeometry &geom, Rng &rng) {
  const double beta = path_loss(link.distance, fading.kappa_br, fading.ref_loss);
  const CMat los =
      bs_array_response(link.bs_aoa, geom) *
      ris_array_response(link.aod_azimuth, link.aod_elevation, geom).adjoint();
  const double a = fading.rician_factor;
  if (std::isinf(a))
    return std::sqrt(beta) * los;
  const CMat nlos = complex_gaussian(geom.bs_antennas, geom.ris_elements(), rng);
  return std::sqrt(beta) *
         (std::sqrt(a / (1.0 + a)) * los + std::sqrt(1.0 / (1.0 + a)) * nlos);
}

enum class PhaseProvenance { random, optimized, constant };

/// Unit-modulus phase vector per RIS; phases[0] belongs to RIS 1.
struct RISConfiguration {
  std::vector<CVec> phases;
  PhaseProvenance provenance = PhaseProvenance::constant;
};

/// One Monte Carlo draw. bs_ris[r-1] is H_r; ris_ue[k] is empty for UEs
/// served directly.
struct ChannelRealization {
  std::vector<CMat> bs_ris;
  std::vector<CVec> ris_ue;
  std::vector<CVec> direct;
  std::vector<CVec> overall;
};

/// Per-UE correlation data. beta_ru[k] is 0 for directly served UEs; overall
/// holds the effective R_k once computed.
struct CorrelationSet {
  std::vector<CMat> bs_ue;
  RMat ris_kernel;
  std::vector<double> beta_ru;
  std::vector<double> beta_bu;
  std::vector<CMat> overall;
};

inline bool is_unit_modulus(const CVec &phi, double tol = 1e-9) {
  for (Index i = 0; i < phi.size(); ++i)
    if (std::abs(std::abs(phi[i]) - 1.0) > tol)
      return false;
  return true;
}

/// h_k = h^d_k for k in K_0, else H_r diag(phi_r) h_{r,k} + h^d_k.
inline CVec compose_overall_channel(int k, const ChannelRealization &ch,
                                    const RISConfiguration &ris,
                                    const Association &assoc) {
  const int r = assoc.ris_of(k);
  const auto ku = static_cast<std::size_t>(k);
  require(ku < ch.direct.size(), "realization lacks a direct channel for UE");
  if (r == 0)
    return ch.direct[ku];
  const auto ri = static_cast<std::size_t>(r - 1);
  require(ri < ch.bs_ris.size() && ri < ris.phases.size(),
          "realization lacks the BS-RIS channel or phases");
  const CMat &H = ch.bs_ris[ri];
  const CVec &phi = ris.phases[ri];
  const CVec &g = ch.ris_ue[ku];
  require(H.cols() == phi.size() && g.size() == phi.size(),
          "RIS dimension mismatch");
  return H * phi.cwiseProduct(g) + ch.direct[ku];
}

/// RIS part of the effective correlation, H diag(phi) R diag(phi)^H H^H,
/// without the beta_ru factor. The real kernel is applied with two real GEMMs.
inline CMat reflected_correlation(const CMat &H, const CVec &phi,
                                  const RMat &kernel) {
  require(H.cols() == phi.size() && kernel.rows() == phi.size() &&
              kernel.cols() == phi.size(),
          "reflected_correlation: dimension mismatch");
  const CMat A = H * phi.asDiagonal();
  const RMat Are = A.real() * kernel;
  const RMat Aim = A.imag() * kernel;
  CMat B(A.rows(), A.cols());
  B.real() = Are;
  B.imag() = Aim;
  CMat out = B * A.adjoint();
  // Clean round-off so downstream Cholesky sees an exactly Hermitian matrix.
  return 0.5 * (out + out.adjoint());
}

/// R_k = beta_ru H_r diag(phi) R diag(phi)^H H_r^H + R^bu_k, or R^bu_k in K_0.
inline CMat effective_correlation(int k, const Association &assoc,
                                  const CorrelationSet &corr, const CMat &H,
                                  const CVec &phi) {
  const auto ku = static_cast<std::size_t>(k);
  require(ku < corr.bs_ue.size(), "no BS-UE correlation for UE");
  if (assoc.ris_of(k) == 0)
    return corr.bs_ue[ku];
  require(is_unit_modulus(phi), "RIS phases must be unit modulus");
  return corr.beta_ru[ku] * reflected_correlation(H, phi, corr.ris_kernel) +
         corr.bs_ue[ku];
}

} // namespace rispilot

#endif // RISPILOT_CHANNELS_HPP
