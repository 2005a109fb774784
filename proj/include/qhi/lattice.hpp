#pragma once

#include <string_view>

#include "qhi/matrix.hpp"

namespace qhi {

/// Dimension of every interaction model; the couplings are only defined at N = 4.
inline constexpr int kModelDim = 4;

/// Truncated difference-operator Laplacian: zero diagonal, -1 on both off-diagonals.
inline ComplexMatrix build_kinetic(int dim) {
  if (dim < 2) throw InvalidDimension("build_kinetic: dim must be >= 2");
  ComplexMatrix t = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    t(k, k + 1) = -1.0;
    t(k + 1, k) = -1.0;
  }
  return t;
}

namespace detail {

// Zero-diagonal 4x4 tridiagonal matrix from its three super- and sub-diagonal entries.
inline ComplexMatrix tridiagonal4(const Complex (&super)[3], const Complex (&sub)[3]) {
  ComplexMatrix m = ComplexMatrix::Zero(kModelDim, kModelDim);
  for (int k = 0; k < 3; ++k) {
    m(k, k + 1) = super[k];
    m(k + 1, k) = sub[k];
  }
  return m;
}

}  // namespace detail

/// Hermitian weakly non-local interaction: superdiagonal (i, i*lambda, i), subdiagonal its conjugate.
inline ComplexMatrix build_hermitian_interaction(double lambda) {
  return detail::tridiagonal4({kI, kI * lambda, kI}, {-kI, -kI * lambda, -kI});
}

/// T + epsilon * v(lambda).
inline ComplexMatrix eval_hermitian(double epsilon, double lambda) {
  const Complex outer = kI * epsilon;
  const Complex middle = kI * (epsilon * lambda);
  return detail::tridiagonal4({-1.0 + outer, -1.0 + middle, -1.0 + outer},
                              {-1.0 - outer, -1.0 - middle, -1.0 - outer});
}

/// Real non-symmetric pencil T + eta * W(lambda).
inline ComplexMatrix eval_nonhermitian(double eta, double lambda) {
  const double middle = eta * lambda;
  return detail::tridiagonal4({-1.0 + eta, -1.0 + middle, -1.0 + eta},
                              {-1.0 - eta, -1.0 - middle, -1.0 - eta});
}

/// sqrt(tau*|tau|) on the branch i*tau for tau < 0 and tau for tau >= 0.
inline Complex gamma(double tau) {
  return tau < 0.0 ? Complex{0.0, tau} : Complex{tau, 0.0};
}

/// Interface Hamiltonian: gamma(tau) in the outer couplings, lambda*gamma(tau) in the middle one.
inline ComplexMatrix eval_unified(double tau, double lambda) {
  const Complex g = gamma(tau);
  const Complex gm = lambda * g;
  return detail::tridiagonal4({-1.0 + g, -1.0 + gm, -1.0 + g}, {-1.0 - g, -1.0 - gm, -1.0 - g});
}

enum class PencilFamily { hermitian, nonhermitian, unified };

inline std::string_view to_string(PencilFamily f) {
  switch (f) {
    case PencilFamily::hermitian: return "hermitian";
    case PencilFamily::nonhermitian: return "nonhermitian";
    case PencilFamily::unified: return "unified";
  }
  return "?";
}

/// A one-parameter family of 4x4 Hamiltonians at fixed interaction shape lambda.
struct HamiltonianPencil {
  PencilFamily family = PencilFamily::hermitian;
  double lambda = 1.0;

  int dim() const noexcept { return kModelDim; }

  std::string_view sweep_param_name() const noexcept {
    switch (family) {
      case PencilFamily::hermitian: return "epsilon";
      case PencilFamily::nonhermitian: return "eta";
      case PencilFamily::unified: return "tau";
    }
    return "param";
  }

  ComplexMatrix at(double param) const {
    switch (family) {
      case PencilFamily::hermitian: return eval_hermitian(param, lambda);
      case PencilFamily::nonhermitian: return eval_nonhermitian(param, lambda);
      case PencilFamily::unified: return eval_unified(param, lambda);
    }
    return {};
  }
};

}  // namespace qhi
