#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SVD>

#include "qhi/eigensolver.hpp"
#include "qhi/grid.hpp"
#include "qhi/lattice.hpp"
#include "qhi/parallel.hpp"

namespace qhi {

/// Default threshold on |Im E| below which an eigenvalue counts as real.
inline constexpr double kRealityTol = 1e-9;

enum class Reality { all_real, partially_complex };

inline std::string_view to_string(Reality r) {
  return r == Reality::all_real ? "all_real" : "partially_complex";
}

/// Eigenvalues sorted by (Re, Im), with the reality class they fall in at `tol_used`.
struct Spectrum {
  std::vector<Complex> values;
  Reality reality = Reality::all_real;
  double tol_used = kRealityTol;

  std::size_t size() const noexcept { return values.size(); }
  const Complex& operator[](std::size_t i) const { return values[i]; }

  double max_abs_imag() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  /// Smallest distance between two eigenvalues, and the (sorted) indices achieving it.
  double min_gap(std::size_t* first = nullptr, std::size_t* second = nullptr) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        const double d = std::abs(values[i] - values[j]);
        if (d < best) {
          best = d;
          if (first) *first = i;
          if (second) *second = j;
        }
      }
    return best;
  }
};

inline Reality classify_reality(const Spectrum& s, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("classify_reality: tol must be > 0");
  return s.max_abs_imag() <= tol ? Reality::all_real : Reality::partially_complex;
}

inline bool spectrum_order(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// Snaps components with magnitude <= tol onto the axes, optionally pairs complex-conjugate
/// partners exactly (real-entried source matrix), sorts and classifies.
inline Spectrum make_spectrum(std::vector<Complex> values, double tol, bool conjugate_pairs) {
  if (!(tol > 0.0)) throw InvalidArgument("spectrum: tol must be > 0");
  for (auto& v : values) {
    if (std::abs(v.imag()) <= tol) v.imag(0.0);
    if (std::abs(v.real()) <= tol) v.real(0.0);
  }
  if (conjugate_pairs) {
    std::vector<char> used(values.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (used[i] || values[i].imag() <= 0.0) continue;
      std::size_t best = values.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (used[j] || j == i || values[j].imag() >= 0.0) continue;
        const double d = std::abs(values[j] - std::conj(values[i]));
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best < values.size() && best_d <= tol * std::max(1.0, std::abs(values[i]))) {
        const double re = 0.5 * (values[i].real() + values[best].real());
        const double im = 0.5 * (values[i].imag() - values[best].imag());
        values[i] = {re, im};
        values[best] = {re, -im};
        used[i] = used[best] = 1;
      }
    }
  }
  std::sort(values.begin(), values.end(), spectrum_order);
  Spectrum s{std::move(values), Reality::all_real, tol};
  s.reality = classify_reality(s, tol);
  return s;
}

/// Smallest singular value of (m - e I).
inline double eigen_residual(const ComplexMatrix& m, Complex e) {
  ComplexMatrix shifted = m;
  shifted.diagonal().array() -= e;
  Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
  return svd.singularValues().minCoeff();
}

/// Sorted spectrum of `m`. Exactly Hermitian input goes through the Jacobi solver; everything
/// else through balanced Hessenberg QR. Each eigenvalue must pass the residual check
/// sigma_min(m - E I) <= 1e-6 * max(1, n ||m||_max).
inline Spectrum eigenvalues(const ComplexMatrix& m, double tol = kRealityTol) {
  require_square_finite(m, "eigenvalues");
  if (!(tol > 0.0)) throw InvalidArgument("eigenvalues: tol must be > 0");

  std::vector<Complex> raw;
  if (hermiticity_defect(m) == 0.0) {
    const auto he = hermitian_eigen(m);
    for (Eigen::Index i = 0; i < he.values.size(); ++i) raw.emplace_back(he.values(i), 0.0);
  } else {
    raw = general_eigenvalues(m);
  }
  Spectrum s = make_spectrum(std::move(raw), tol, is_real_entried(m));

  const double bound = 1e-6 * std::max(1.0, static_cast<double>(m.rows()) * max_abs(m));
  double worst = 0.0;
  for (const auto& e : s.values) worst = std::max(worst, eigen_residual(m, e));
  if (!(worst <= bound)) throw NumericFailure("eigenvalues: residual check failed", worst);
  return s;
}

namespace detail {

inline constexpr double kSqrt5 = 2.23606797749978969640917366873128;

/// ±(1/2) sqrt((6 ± 2 sqrt 5) * factor) for all four sign pairs.
inline std::vector<Complex> golden_quartet(Complex factor) {
  std::vector<Complex> v;
  for (double inner : {+1.0, -1.0}) {
    const Complex e = 0.5 * std::sqrt((6.0 + inner * 2.0 * kSqrt5) * factor);
    v.push_back(e);
    v.push_back(-e);
  }
  return v;
}

}  // namespace detail

/// Closed-form spectrum of the Hermitian pencil at lambda = 1.
inline Spectrum closed_form_hermitian(double epsilon, double tol = kRealityTol) {
  return make_spectrum(detail::golden_quartet(Complex{1.0 + epsilon * epsilon}), tol, false);
}

/// Closed-form spectrum of the non-Hermitian pencil:
/// E^2 = [3 - (l^2+2) eta^2 ± sqrt((5 - (l^2+4) eta^2)(1 - l^2 eta^2))] / 2, principal roots.
/// The smaller E^2 is taken from the product of the two roots, (1 - eta^2)^2, so it stays
/// accurate where the two terms cancel (eta = ±1).
inline Spectrum closed_form_nonhermitian(double eta, double lambda, double tol = kRealityTol) {
  const double l2 = lambda * lambda;
  const double e2 = eta * eta;
  // written in the coupling products 1 - eta^2 and 1 - lambda^2 eta^2
  const double outer = 1.0 - e2;
  const double middle = 1.0 - l2 * e2;
  const Complex sum{2.0 * outer + middle};
  const Complex root = std::sqrt(Complex{(middle + 4.0 * outer) * middle});
  const double product = outer * outer;
  const Complex plus = 0.5 * (sum + root);
  const Complex minus = 0.5 * (sum - root);
  const Complex big = std::abs(plus) >= std::abs(minus) ? plus : minus;
  const Complex small = big == Complex{} ? Complex{} : product / big;
  std::vector<Complex> v;
  for (const Complex& e_sq : {big, small}) {
    const Complex e = std::sqrt(e_sq);
    v.push_back(e);
    v.push_back(-e);
  }
  return make_spectrum(std::move(v), tol, true);
}

/// Closed-form spectrum of the unified pencil at lambda = 1: the Hermitian formula for tau < 0,
/// the analytic continuation with (1 - tau^2) for tau >= 0 (purely imaginary beyond tau = 1).
inline Spectrum closed_form_unified(double tau, double tol = kRealityTol) {
  if (tau < 0.0) return closed_form_hermitian(tau, tol);
  return make_spectrum(detail::golden_quartet(Complex{1.0 - tau * tau}), tol, false);
}

struct SweepPoint {
  double param = 0.0;
  Spectrum spectrum;
};

/// Spectrum at every grid point, in grid order. Results do not depend on `threads`.
inline std::vector<SweepPoint> sweep_spectrum(const HamiltonianPencil& pencil, const std::vector<double>& grid,
                                              double tol = kRealityTol, unsigned threads = 1) {
  if (grid.empty()) throw InvalidArgument("sweep_spectrum: grid is empty");
  if (!strictly_increasing(grid)) throw InvalidArgument("sweep_spectrum: grid must be strictly increasing");
  return ordered_parallel_map(grid.size(), threads, [&](std::size_t i) {
    try {
      return SweepPoint{grid[i], eigenvalues(pencil.at(grid[i]), tol)};
    } catch (const NumericFailure& e) {
      throw NumericFailure(std::string(e.what()) + " at " + std::string(pencil.sweep_param_name()) + "=" +
                               std::to_string(grid[i]),
                           e.best_residual());
    }
  });
}

}  // namespace qhi
