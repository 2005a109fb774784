#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "qhi/eigensolver.hpp"
#include "qhi/lattice.hpp"

namespace qhi {

/// Free parameters of the four-parameter metric family. The interface-normalized choice is
/// c = d = g = 0, f = 1.
struct MetricParams {
  double c = 0.0;
  double d = 0.0;
  double f = 1.0;
  double g = 0.0;
};

struct MetricBasis {
  std::vector<ComplexMatrix> basis;  // Hermitian, trace-orthonormal
  std::vector<double> residuals;     // ||H^dagger B - B H||_max per element
  int dimension() const noexcept { return static_cast<int>(basis.size()); }
};

/// ||H^dagger Theta - Theta H||_max.
inline double quasi_hermiticity_residual(const ComplexMatrix& h, const ComplexMatrix& theta) {
  require_same_shape(h, theta, "quasi_hermiticity_residual");
  return max_abs(h.adjoint() * theta - theta * h);
}

struct KernelOptions {
  double tol = 1e-9;          // relative singular-value threshold
  double min_gap_ratio = 1e3; // required ratio across the rank cut
};

/// Hermitian solutions of H^dagger Theta = Theta H. The linear map Theta -> H^dagger Theta - Theta H
/// is vectorized, its null space taken by SVD thresholding, split into Hermitian parts and
/// re-orthonormalized under the trace inner product.
inline MetricBasis solve_metric_kernel(const ComplexMatrix& h, const KernelOptions& opts = {}) {
  require_square_finite(h, "solve_metric_kernel");
  if (!(opts.tol > 0.0)) throw InvalidArgument("solve_metric_kernel: tol must be > 0");
  const Eigen::Index n = h.rows();
  const Eigen::Index n2 = n * n;

  // Column-major vec: vec(A X) = (I kron A) vec X, vec(X B) = (B^T kron I) vec X.
  ComplexMatrix op = ComplexMatrix::Zero(n2, n2);
  const ComplexMatrix ha = h.adjoint();
  for (Eigen::Index col = 0; col < n; ++col) {
    op.block(n * col, n * col, n, n) = ha;
    for (Eigen::Index k = 0; k < n; ++k)
      op.block(n * col, n * k, n, n).diagonal().array() -= h(k, col);
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(op, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cut = opts.tol * std::max(smax, std::numeric_limits<double>::min());

  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  if (rank > 0 && rank < sv.size()) {
    const double above = sv(rank - 1);
    const double below = std::max(sv(rank), std::numeric_limits<double>::min());
    if (above / below < opts.min_gap_ratio)
      throw RankAmbiguity("solve_metric_kernel: no clear rank cut in the singular spectrum",
                          std::vector<double>(sv.data(), sv.data() + sv.size()));
  }
  const Eigen::Index nullity = sv.size() - rank;

  MetricBasis out;
  if (nullity == 0) return out;

  // Hermitian and anti-Hermitian parts of each null vector, as real coordinates (Re, Im of entries).
  Eigen::MatrixXd cand(2 * n2, 2 * nullity);
  for (Eigen::Index k = 0; k < nullity; ++k) {
    const ComplexVector v = svd.matrixV().col(rank + k);
    const ComplexMatrix b = Eigen::Map<const ComplexMatrix>(v.data(), n, n);
    const ComplexMatrix herm = 0.5 * (b + b.adjoint());
    const ComplexMatrix skew = Complex{0.0, 0.5} * (b - b.adjoint());
    for (Eigen::Index e = 0; e < n2; ++e) {
      cand(e, 2 * k) = herm(e).real();
      cand(e + n2, 2 * k) = herm(e).imag();
      cand(e, 2 * k + 1) = skew(e).real();
      cand(e + n2, 2 * k + 1) = skew(e).imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(cand, Eigen::ComputeThinU);
  const Eigen::VectorXd cs = csvd.singularValues();
  const double cmax = cs.size() ? cs(0) : 0.0;
  for (Eigen::Index k = 0; k < cs.size(); ++k) {
    if (!(cs(k) > 1e-6 * cmax)) break;
    ComplexMatrix b(n, n);
    for (Eigen::Index e = 0; e < n2; ++e) b(e) = Complex{csvd.matrixU()(e, k), csvd.matrixU()(e + n2, k)};
    b = (0.5 * (b + b.adjoint())).eval();
    b /= b.norm();
    out.residuals.push_back(quasi_hermiticity_residual(h, b));
    out.basis.push_back(std::move(b));
  }
  return out;
}

namespace detail {

inline constexpr double kSingularTol = 1e-13;

inline void check_metric_denominators(double eta, double lambda) {
  if (std::abs(1.0 - eta) <= kSingularTol || std::abs(1.0 + eta) <= kSingularTol)
    throw MetricSingularity("metric: singular at eta = +-1 (second-kind EP)", "+-1");
  if (std::abs(1.0 - eta * lambda) <= kSingularTol || std::abs(1.0 + eta * lambda) <= kSingularTol)
    throw MetricSingularity("metric: singular at eta = +-1/lambda (first-kind EP)", "+-1/lambda");
}

}  // namespace detail

/// The general real symmetric metric compatible with eval_nonhermitian(eta, lambda).
inline ComplexMatrix metric_from_params(double eta, double lambda, const MetricParams& p) {
  detail::check_metric_denominators(eta, lambda);
  const double el = eta * lambda;
  const double num = p.f - p.f * eta * eta - p.c + p.c * eta * eta * lambda * lambda;
  const double corner_top = num / ((1.0 - eta) * (1.0 - eta) * (1.0 - el));
  const double corner_bottom = num / ((1.0 + eta) * (1.0 + eta) * (1.0 + el));
  const double s12 = (p.g - p.d) * (1.0 + eta) / (1.0 - el);
  const double s34 = (p.g - p.d) * (1.0 - eta) / (1.0 + el);
  const double s13 = p.c / (1.0 - eta);
  const double s24 = p.c / (1.0 + eta);

  Eigen::Matrix4d t;
  t << corner_top, s12, s13, p.d,
       s12, p.f / (1.0 - el), p.g, s24,
       s13, p.g, p.f / (1.0 + el), s34,
       p.d, s24, s34, corner_bottom;
  return t.cast<Complex>();
}

/// Diagonal member of the family (c = d = g = 0, f = 1).
inline ComplexMatrix diagonal_metric(double eta, double lambda) {
  detail::check_metric_denominators(eta, lambda);
  const double el = eta * lambda;
  ComplexMatrix t = ComplexMatrix::Zero(kModelDim, kModelDim);
  t(0, 0) = (1.0 + eta) / ((1.0 - eta) * (1.0 - el));
  t(1, 1) = 1.0 / (1.0 - el);
  t(2, 2) = 1.0 / (1.0 + el);
  t(3, 3) = (1.0 - eta) / ((1.0 + eta) * (1.0 + el));
  return t;
}

struct PositivityReport {
  bool is_pd = false;
  std::vector<double> eigenvalues;  // ascending
};

inline PositivityReport check_positive_definite(const ComplexMatrix& theta, double tol = 1e-9) {
  require_square_finite(theta, "check_positive_definite");
  if (hermiticity_defect(theta) > tol * std::max(1.0, max_abs(theta)))
    throw InvalidMetric("check_positive_definite: metric is not Hermitian");
  const auto he = hermitian_eigen(theta);
  PositivityReport r;
  r.eigenvalues.assign(he.values.data(), he.values.data() + he.values.size());
  r.is_pd = r.eigenvalues.front() > tol;
  return r;
}

/// Interface check: along probe points decreasing toward sigma_minus, ||Theta(sigma) - I||_max must
/// not increase, and its three-point Richardson (quadratic) extrapolation to sigma_minus must be <= tol.
inline bool interface_match(const std::function<ComplexMatrix(double)>& metric, double sigma_minus,
                            const std::vector<double>& probe, double tol) {
  if (probe.size() < 3) throw InvalidArgument("interface_match: need at least three probe points");
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (!(probe[i] > sigma_minus)) throw InvalidArgument("interface_match: probes must lie above sigma_minus");
    if (i > 0 && !(probe[i] < probe[i - 1])) throw InvalidArgument("interface_match: probes must decrease");
  }
  std::vector<double> dist;
  for (double s : probe) {
    const ComplexMatrix th = metric(s);
    dist.push_back(max_abs(th - ComplexMatrix::Identity(th.rows(), th.cols())));
  }
  for (std::size_t i = 1; i < dist.size(); ++i)
    if (dist[i] > dist[i - 1]) return false;

  const std::size_t m = probe.size();
  const double x[3] = {probe[m - 3] - sigma_minus, probe[m - 2] - sigma_minus, probe[m - 1] - sigma_minus};
  const double y[3] = {dist[m - 3], dist[m - 2], dist[m - 1]};
  double limit = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= (0.0 - x[j]) / (x[i] - x[j]);
    limit += w * y[i];
  }
  return std::abs(limit) <= tol;
}

}  // namespace qhi
