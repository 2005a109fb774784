#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qhi/metric.hpp"
#include "qhi/parallel.hpp"
#include "qhi/spectral.hpp"

namespace qhi {

/// Hermitian positive square root of a Hermitian positive-definite metric.
inline ComplexMatrix matrix_sqrt_pd(const ComplexMatrix& theta, double tol = 1e-9) {
  const auto pd = check_positive_definite(theta, tol);
  if (!pd.is_pd)
    throw NotPositiveDefinite("matrix_sqrt_pd: metric is not positive definite", pd.eigenvalues.front());
  const auto he = hermitian_eigen(theta);
  const Eigen::VectorXcd root = he.values.array().sqrt().cast<Complex>();
  return he.vectors * root.asDiagonal() * he.vectors.adjoint();
}

struct DysonDecomposition {
  ComplexMatrix omega;
  ComplexMatrix omega_inverse;
  ComplexMatrix theta;
  ComplexMatrix hermitized;
  double hermiticity_defect = 0.0;
  double isospectral_defect = 0.0;
  double theta_condition_number = 1.0;
};

/// Largest pointwise distance between two spectra in the shared sort order.
inline double spectral_distance(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) throw DimensionMismatch("spectral_distance: spectra differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// h = Omega H Omega^{-1} with Omega = Theta^{1/2}.
inline DysonDecomposition hermitize(const ComplexMatrix& h, const ComplexMatrix& theta, double tol = 1e-9) {
  require_square_finite(h, "hermitize");
  require_same_shape(h, theta, "hermitize");
  const double residual = quasi_hermiticity_residual(h, theta);
  if (residual > tol * std::max(1.0, max_abs(theta)))
    throw ConstraintViolation("hermitize: H is not quasi-Hermitian with respect to Theta", residual);

  const auto pd = check_positive_definite(theta, tol);
  if (!pd.is_pd)
    throw NotPositiveDefinite("hermitize: metric is not positive definite", pd.eigenvalues.front());

  const auto he = hermitian_eigen(theta);
  const Eigen::ArrayXd root = he.values.array().sqrt();
  DysonDecomposition out;
  out.theta = theta;
  out.omega = he.vectors * root.cast<Complex>().matrix().asDiagonal() * he.vectors.adjoint();
  out.omega_inverse = he.vectors * root.inverse().cast<Complex>().matrix().asDiagonal() * he.vectors.adjoint();
  out.hermitized = out.omega * h * out.omega_inverse;
  out.hermiticity_defect = qhi::hermiticity_defect(out.hermitized);
  out.isospectral_defect = spectral_distance(eigenvalues(h), eigenvalues(out.hermitized));
  out.theta_condition_number = pd.eigenvalues.back() / pd.eigenvalues.front();
  return out;
}

enum class Continuation {
  own_matrix,  // h(sigma) = H(sigma), already Hermitian for sigma <= sigma_minus
  constant,    // h(sigma) = H(sigma_minus)
};

struct HermitizedPoint {
  double param = 0.0;
  std::optional<DysonDecomposition> decomposition;
  std::string status = "ok";  // ok | singular | not_pd | not_quasi_hermitian | numeric
  std::string error;          // message when decomposition is absent
};

/// The interface-normalized metric used for pencil Hermitization at `param`.
inline ComplexMatrix interface_metric(const HamiltonianPencil& pencil, double param) {
  const bool hermitian_branch = pencil.family == PencilFamily::hermitian ||
                                (pencil.family == PencilFamily::unified && param <= 0.0);
  if (hermitian_branch) return ComplexMatrix::Identity(pencil.dim(), pencil.dim());
  return diagonal_metric(param, pencil.lambda);
}

/// Per-point Hermitization along a grid; failures are recorded per point and the sweep continues.
inline std::vector<HermitizedPoint> hermitized_pencil(const HamiltonianPencil& pencil, const std::vector<double>& grid,
                                                      Continuation continuation = Continuation::own_matrix,
                                                      double tol = 1e-9, unsigned threads = 1) {
  return ordered_parallel_map(grid.size(), threads, [&](std::size_t i) {
    HermitizedPoint pt;
    pt.param = grid[i];
    try {
      double at = grid[i];
      if (continuation == Continuation::constant && pencil.family == PencilFamily::unified && at < 0.0) at = 0.0;
      pt.decomposition = hermitize(pencil.at(at), interface_metric(pencil, at), tol);
    } catch (const MetricSingularity& e) {
      pt.status = "singular";
      pt.error = e.what();
    } catch (const NotPositiveDefinite& e) {
      pt.status = "not_pd";
      pt.error = e.what();
    } catch (const ConstraintViolation& e) {
      pt.status = "not_quasi_hermitian";
      pt.error = e.what();
    } catch (const Error& e) {
      pt.status = "numeric";
      pt.error = e.what();
    }
    return pt;
  });
}

}  // namespace qhi
