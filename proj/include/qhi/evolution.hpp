#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qhi/dyson.hpp"
#include "qhi/metric.hpp"

namespace qhi {

using StateVector = ComplexVector;

struct PropagationOptions {
  double condition_cap = 1e8;  // eigenvector condition number above which the series route is used
  double residual_tol = 1e-6;  // relative Schroedinger-equation residual
  double probe_step = 1e-4;    // finite-difference half step for the residual check
};

namespace detail {

/// exp(-i H t) by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix expm_series(const ComplexMatrix& h, double t) {
  const Eigen::Index n = h.rows();
  ComplexMatrix a = Complex{0.0, -t} * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  a /= std::ldexp(1.0, squarings);

  ComplexMatrix sum = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  bool converged = false;
  for (int k = 1; k <= 60; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-17 * sum.norm()) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericFailure("propagate: Taylor series did not converge", term.norm());
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

struct Eigendecomposition {
  ComplexMatrix vectors;
  ComplexMatrix inverse;
  ComplexVector values;
  double condition = 0.0;
};

inline std::optional<Eigendecomposition> diagonalize(const ComplexMatrix& h, double cap) {
  Eigen::ComplexEigenSolver<ComplexMatrix> ces(h, true);
  if (ces.info() != Eigen::Success) return std::nullopt;
  Eigendecomposition d;
  d.vectors = ces.eigenvectors();
  d.values = ces.eigenvalues();
  Eigen::JacobiSVD<ComplexMatrix> svd(d.vectors);
  const auto sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::nullopt;
  d.condition = sv(0) / smin;
  if (!(d.condition <= cap)) return std::nullopt;
  d.inverse = d.vectors.inverse();
  return d;
}

inline StateVector apply_propagator(const ComplexMatrix& h, const std::optional<Eigendecomposition>& eig,
                                    const StateVector& psi0, double t) {
  if (eig) {
    const ComplexVector phases = (Complex{0.0, -t} * eig->values).array().exp();
    return eig->vectors * (phases.asDiagonal() * (eig->inverse * psi0));
  }
  return expm_series(h, t) * psi0;
}

inline void require_state(const ComplexMatrix& h, const StateVector& psi) {
  if (psi.size() != h.rows()) throw DimensionMismatch("propagate: state and Hamiltonian dimensions differ");
  if (!psi.allFinite()) throw InvalidArgument("propagate: state has non-finite amplitudes");
}

}  // namespace detail

/// Reusable propagator exp(-i H t) for a stationary H.
class Propagator {
 public:
  explicit Propagator(ComplexMatrix h, PropagationOptions opts = {}) : h_(std::move(h)), opts_(opts) {
    require_square_finite(h_, "propagate");
    eig_ = detail::diagonalize(h_, opts_.condition_cap);
  }

  bool uses_eigendecomposition() const noexcept { return eig_.has_value(); }

  StateVector operator()(const StateVector& psi0, double t) const {
    detail::require_state(h_, psi0);
    StateVector psi = detail::apply_propagator(h_, eig_, psi0, t);
    const double dt = opts_.probe_step;
    const StateVector ahead = detail::apply_propagator(h_, eig_, psi0, t + dt);
    const StateVector behind = detail::apply_propagator(h_, eig_, psi0, t - dt);
    const StateVector hpsi = h_ * psi;
    const double residual = ((ahead - behind) / (2.0 * dt) + Complex{0.0, 1.0} * hpsi).norm();
    const double scale = std::max({1.0, hpsi.norm(), psi.norm()});
    if (!(residual <= opts_.residual_tol * scale))
      throw NumericFailure("propagate: Schroedinger residual check failed", residual / scale);
    return psi;
  }

 private:
  ComplexMatrix h_;
  PropagationOptions opts_;
  std::optional<detail::Eigendecomposition> eig_;
};

/// exp(-i H t) psi0.
inline StateVector propagate(const ComplexMatrix& h, const StateVector& psi0, double t,
                             const PropagationOptions& opts = {}) {
  return Propagator(h, opts)(psi0, t);
}

/// sqrt(psi^dagger Theta psi).
inline double theta_norm(const StateVector& psi, const ComplexMatrix& theta) {
  if (psi.size() != theta.rows()) throw DimensionMismatch("theta_norm: dimension mismatch");
  if (!check_positive_definite(theta).is_pd) throw InvalidMetric("theta_norm: metric is not positive definite");
  return std::sqrt(std::max(0.0, psi.dot(theta * psi).real()));
}

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> theta_norms;
  std::vector<double> naive_norms;
  std::vector<double> mapped_norms;  // ||Omega Psi(t)||
};

/// Norm bookkeeping of Psi(t) = exp(-i H t) psi0 in the three spaces.
inline EvolutionTrace unitarity_report(const ComplexMatrix& h, const ComplexMatrix& theta, const StateVector& psi0,
                                       const std::vector<double>& times, double tol = 1e-9) {
  const double residual = quasi_hermiticity_residual(h, theta);
  if (residual > tol * std::max(1.0, max_abs(theta)))
    throw ConstraintViolation("unitarity_report: H is not quasi-Hermitian with respect to Theta", residual);
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidArgument("unitarity_report: times must increase");

  const ComplexMatrix omega = matrix_sqrt_pd(theta, tol);
  const Propagator prop(h);
  EvolutionTrace tr;
  for (double t : times) {
    const StateVector psi = prop(psi0, t);
    tr.times.push_back(t);
    tr.theta_norms.push_back(theta_norm(psi, theta));
    tr.naive_norms.push_back(psi.norm());
    tr.mapped_norms.push_back((omega * psi).norm());
  }
  return tr;
}

}  // namespace qhi
