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

#ifndef RISPILOT_PHASE_OPTIMIZER_HPP
#define RISPILOT_PHASE_OPTIMIZER_HPP

// RIS phase design as a unit-modulus quadratic program
//
//   maximize  phi^H D phi   s.t. |phi_i| = 1,   D = R^* (Hadamard) H^H H,
//
// where phi^H D phi = tr(H diag(phi) R diag(phi)^H H^H) is the reflected part
// of tr(R_k) up to the UE-specific factor beta_ru. The feasible set is the
// complex circle manifold (a product of N unit circles). We run Riemannian
// conjugate gradient on it:
//
//   tangent projection   P_phi(u) = u - Re(u .* conj(phi)) .* phi
//   retraction           R_phi(u) = (phi + u) ./ |phi + u|
//   transport            projection onto the new tangent space
//
// with Polak-Ribiere(+) directions and Armijo backtracking.

#include "rispilot/channels.hpp"
#include "rispilot/types.hpp"

#include <limits>
#include <optional>

namespace rispilot {

struct QuadraticForm {
  CMat D;
  Index size() const { return D.rows(); }
};

/// D = conj(kernel) .* (H^H H). The kernel may be real symmetric (the sinc
/// kernel) or complex Hermitian (e.g. a weighted sum of per-UE kernels).
template <typename KernelDerived>
QuadraticForm build_quadratic(const CMat &H,
                              const Eigen::MatrixBase<KernelDerived> &kernel) {
  const Index N = H.cols();
  require(kernel.rows() == N && kernel.cols() == N,
          "build_quadratic: kernel must be N x N with N = H.cols()");
  CMat gram = CMat::Zero(N, N);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(H.adjoint());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.adjoint();
  QuadraticForm form;
  form.D = kernel.template cast<cplx>().conjugate().cwiseProduct(gram);
  return form;
}

/// Multi-UE variant: kernel replaced by sum_{k in K_r} R^ru_{r,k}.
inline QuadraticForm weighted_quadratic(int r, const Association &assoc,
                                        const CorrelationSet &corr,
                                        const CMat &H) {
  require(r >= 1 && r <= assoc.num_ris(), "RIS index out of range");
  double weight = 0;
  for (int k : assoc.sets[static_cast<std::size_t>(r)])
    weight += corr.beta_ru[static_cast<std::size_t>(k)];
  return build_quadratic(H, (weight * corr.ris_kernel).eval());
}

/// Quadratic form of the UE-centric problem for UE k. beta_ru and R^bu_k only
/// scale or shift tr(R_k), so the result is the same for every UE of one RIS.
inline QuadraticForm quadratic_for_ue(int k, const Association &assoc,
                                      const CorrelationSet &corr, const CMat &H) {
  require(assoc.ris_of(k) != 0, "UE is not aided by a RIS");
  return build_quadratic(H, corr.ris_kernel);
}

inline double quadratic_value(const CVec &phi, const QuadraticForm &form) {
  return phi.dot(form.D * phi).real();
}

inline double objective(const CVec &phi, const QuadraticForm &form) {
  require(phi.size() == form.size(), "phase vector length mismatch");
  require(is_unit_modulus(phi), "phases must be unit modulus");
  return quadratic_value(phi, form);
}

/// 2 D phi: the gradient of phi^H D phi w.r.t. the real inner product
/// <u, w> = Re(u^H w).
inline CVec euclidean_gradient(const CVec &phi, const QuadraticForm &form) {
  require(phi.size() == form.size(), "phase vector length mismatch");
  return 2.0 * (form.D * phi);
}

inline CVec tangent_projection(const CVec &phi, const CVec &u) {
  const RVec radial = (u.array() * phi.array().conjugate()).real();
  return u - (radial.cast<cplx>().array() * phi.array()).matrix();
}

inline CVec riemannian_gradient(const CVec &phi, const CVec &euclid) {
  return tangent_projection(phi, euclid);
}

inline CVec retract(const CVec &phi, const CVec &step) {
  CVec out = phi + step;
  for (Index i = 0; i < out.size(); ++i) {
    const double m = std::abs(out[i]);
    out[i] = m > 0 ? out[i] / m : phi[i];
  }
  return out;
}

/// Largest eigenvalue estimate of a Hermitian PSD matrix by power iteration.
inline double lambda_max_estimate(const CMat &D, int iterations = 60) {
  const Index n = D.rows();
  if (n == 0)
    return 0;
  CVec x = CVec::Ones(n) / std::sqrt(static_cast<double>(n));
  // A deterministic, non-symmetric start avoids landing in an invariant
  // subspace orthogonal to the top eigenvector for structured D.
  for (Index i = 0; i < n; ++i)
    x[i] *= std::polar(1.0, 0.37 * static_cast<double>(i * i));
  double lambda = 0;
  for (int it = 0; it < iterations; ++it) {
    CVec y = D * x;
    const double nrm = y.norm();
    if (nrm == 0)
      return std::max(lambda, D.diagonal().real().maxCoeff());
    lambda = x.dot(y).real();
    x = y / nrm;
  }
  return std::max({lambda, D.diagonal().real().maxCoeff(), 0.0});
}

struct AscentOptions {
  int max_iter = 500;
  double grad_tol = 1e-8; // relative to N * lambda_max estimate
  double armijo = 1e-4;
  double contraction = 0.5;
  int max_backtracks = 60;
};

struct AscentReport {
  int iterations = 0;
  std::vector<double> objective_trace;
  CVec phases;
  bool converged = false;
  double gradient_norm_final = 0;
};

inline AscentReport riemannian_ascent(const QuadraticForm &form, const CVec &phi_init,
                                      const AscentOptions &opt = {}) {
  const Index N = form.size();
  require(phi_init.size() == N, "initial phase vector length mismatch");
  require(is_unit_modulus(phi_init), "initial phases must be unit modulus");
  require(opt.max_iter >= 0 && opt.contraction > 0 && opt.contraction < 1,
          "invalid ascent options");

  AscentReport rep;
  CVec phi = phi_init;
  for (Index i = 0; i < N; ++i)
    phi[i] /= std::abs(phi[i]);

  const double lambda = lambda_max_estimate(form.D);
  const double tol = opt.grad_tol * static_cast<double>(N) * lambda;
  const double step0 = lambda > 0 ? 1.0 / lambda : 1.0;

  CVec Dphi = form.D * phi;
  double f = phi.dot(Dphi).real();
  CVec rgrad = riemannian_gradient(phi, 2.0 * Dphi);
  double gnorm2 = rgrad.squaredNorm();
  rep.objective_trace.push_back(f);

  CVec dir = rgrad;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::sqrt(gnorm2) <= tol) {
      rep.converged = true;
      break;
    }
    double slope = rgrad.dot(dir).real();
    if (!(slope > 0)) { // not an ascent direction: restart
      dir = rgrad;
      slope = gnorm2;
    }

    bool accepted = false;
    CVec cand, Dcand;
    double fc = f;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double t = step0;
      for (int bt = 0; bt < opt.max_backtracks; ++bt, t *= opt.contraction) {
        cand = retract(phi, t * dir);
        Dcand = form.D * cand;
        fc = cand.dot(Dcand).real();
        if (fc >= f + opt.armijo * t * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (dir.isApprox(rgrad))
          break;
        dir = rgrad;
        slope = gnorm2;
      }
    }
    if (!accepted)
      break; // no measurable progress along steepest ascent

    const CVec rgrad_new = riemannian_gradient(cand, 2.0 * Dcand);
    const CVec old_grad_t = tangent_projection(cand, rgrad);
    const CVec old_dir_t = tangent_projection(cand, dir);
    const double beta =
        std::max(0.0, rgrad_new.dot(rgrad_new - old_grad_t).real() / gnorm2);

    phi = std::move(cand);
    Dphi = std::move(Dcand);
    f = fc;
    rgrad = rgrad_new;
    gnorm2 = rgrad.squaredNorm();
    dir = rgrad + beta * old_dir_t;
    rep.objective_trace.push_back(f);
    rep.iterations = it + 1;
  }
  if (std::sqrt(gnorm2) <= tol)
    rep.converged = true;
  rep.gradient_norm_final = std::sqrt(gnorm2);
  rep.phases = std::move(phi);
  return rep;
}

/// e^{i psi}, psi ~ U[0, 2 pi), i.i.d.
inline CVec random_phases(Index N, Rng &rng) {
  std::uniform_real_distribution<double> ud(0.0, 2.0 * kPi);
  CVec out(N);
  for (Index i = 0; i < N; ++i)
    out[i] = std::polar(1.0, ud(rng));
  return out;
}

/// Ascent from the all-ones vector, plus `restarts` seeded random starts;
/// keeps the best final objective (first one on ties).
inline AscentReport optimize_phases(const QuadraticForm &form,
                                    const AscentOptions &opt = {}, int restarts = 0,
                                    Rng *rng = nullptr) {
  AscentReport best = riemannian_ascent(form, CVec::Ones(form.size()), opt);
  if (restarts > 0) {
    require(rng != nullptr, "random restarts need an RNG");
    for (int i = 0; i < restarts; ++i) {
      AscentReport rep = riemannian_ascent(form, random_phases(form.size(), *rng), opt);
      if (rep.objective_trace.back() > best.objective_trace.back())
        best = std::move(rep);
    }
  }
  return best;
}

} // namespace rispilot

#endif // RISPILOT_PHASE_OPTIMIZER_HPP
