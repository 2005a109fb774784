#pragma once

// Dense eigensolvers for small matrices.
//
// general_eigenvalues() splits the matrix into its irreducible diagonal blocks,
// balances each block, reduces it to upper Hessenberg form and runs complex
// single-shift QR with Wilkinson shifts. hermitian_eigen() is cyclic complex
// Jacobi and also returns eigenvectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "qhi/matrix.hpp"

namespace qhi {

namespace detail {

/// Index sets of the strongly connected components of the sparsity graph (i -> j iff m(i,j) != 0).
/// Eigenvalues of m are the union of the eigenvalues of the corresponding principal submatrices.
inline std::vector<std::vector<int>> irreducible_blocks(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (int j = 0; j < n; ++j)
      if (m(i, j) != Complex{}) reach[i][j] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  std::vector<int> owner(n, -1);
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) {
    if (owner[i] >= 0) continue;
    std::vector<int> block;
    for (int j = i; j < n; ++j)
      if (owner[j] < 0 && reach[i][j] && reach[j][i]) {
        owner[j] = static_cast<int>(blocks.size());
        block.push_back(j);
      }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

/// Radix-2 diagonal similarity scaling that equalizes off-diagonal row and column norms.
inline void balance(ComplexMatrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  for (int pass = 0; !done && pass < 200; ++pass) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

/// In-place Householder reduction to upper Hessenberg form (similarity).
inline void hessenberg_reduce(ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    ComplexVector v = a.block(k + 1, k, len, 1);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const Complex x0 = v(0);
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    v(0) += phase * xnorm;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // A <- P A P with P = I - 2 v v^H acting on rows/cols k+1..n-1.
    auto rows = a.bottomRows(len);
    const Eigen::RowVectorXcd vr = v.adjoint() * rows;
    rows -= 2.0 * v * vr;
    auto cols = a.rightCols(len);
    const ComplexVector vc = cols * v;
    cols -= 2.0 * vc * v.adjoint();
    for (Eigen::Index i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

/// Both eigenvalues of [[a, b], [c, d]].
inline std::pair<Complex, Complex> eigenvalues_2x2(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_trace = 0.5 * (a + d);
  const Complex p = 0.5 * (a - d);
  const Complex disc = std::sqrt(p * p + b * c);
  return {half_trace + disc, half_trace - disc};
}

/// Eigenvalues of an upper Hessenberg matrix by shifted QR; at most 100*n iterations.
inline std::vector<Complex> hessenberg_qr_eigenvalues(ComplexMatrix h) {
  const int n = static_cast<int>(h.rows());
  std::vector<Complex> ev(n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(max_abs(h), std::numeric_limits<double>::min());
  const int cap = 100 * n;
  int total = 0;
  int since_deflation = 0;
  int hi = n - 1;
  std::vector<Complex> cs(n), sn(n);

  while (hi >= 0) {
    if (hi == 0) {
      ev[0] = h(0, 0);
      break;
    }
    int l = hi;
    for (; l > 0; --l) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = scale;
      if (std::abs(h(l, l - 1)) <= eps * s) {
        h(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi) {
      ev[hi] = h(hi, hi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (l == hi - 1) {
      const auto [e1, e2] = eigenvalues_2x2(h(l, l), h(l, hi), h(hi, l), h(hi, hi));
      ev[l] = e1;
      ev[hi] = e2;
      hi -= 2;
      since_deflation = 0;
      continue;
    }
    if (++total > cap) {
      throw NumericFailure("eigenvalues: QR iteration did not converge", std::abs(h(hi, hi - 1)));
    }
    ++since_deflation;

    Complex mu;
    if (since_deflation % 11 == 10) {
      // Exceptional shift to break cycling.
      mu = h(hi, hi) + Complex{0.75, 0.5} * std::abs(h(hi, hi - 1));
    } else {
      const auto [e1, e2] = eigenvalues_2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      mu = std::abs(e1 - h(hi, hi)) <= std::abs(e2 - h(hi, hi)) ? e1 : e2;
    }

    for (int k = l; k <= hi; ++k) h(k, k) -= mu;
    for (int k = l; k < hi; ++k) {
      const Complex a = h(k, k);
      const Complex b = h(k + 1, k);
      const double r = std::hypot(std::abs(a), std::abs(b));
      const Complex c = r == 0.0 ? Complex{1.0} : a / r;
      const Complex s = r == 0.0 ? Complex{} : b / r;
      cs[k] = c;
      sn[k] = s;
      for (int j = k; j <= hi; ++j) {
        const Complex x = h(k, j);
        const Complex y = h(k + 1, j);
        h(k, j) = std::conj(c) * x + std::conj(s) * y;
        h(k + 1, j) = -s * x + c * y;
      }
    }
    for (int k = l; k < hi; ++k) {
      const Complex c = cs[k];
      const Complex s = sn[k];
      const int last = std::min(k + 2, hi);
      for (int i = l; i <= last; ++i) {
        const Complex x = h(i, k);
        const Complex y = h(i, k + 1);
        h(i, k) = x * c + y * s;
        h(i, k + 1) = -x * std::conj(s) + y * std::conj(c);
      }
    }
    for (int k = l; k <= hi; ++k) h(k, k) += mu;
  }
  return ev;
}

}  // namespace detail

/// Unsorted eigenvalues of a finite square matrix.
inline std::vector<Complex> general_eigenvalues(const ComplexMatrix& m) {
  require_square_finite(m, "general_eigenvalues");
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(m.rows()));
  for (const auto& block : detail::irreducible_blocks(m)) {
    const auto bn = static_cast<Eigen::Index>(block.size());
    ComplexMatrix sub(bn, bn);
    for (Eigen::Index i = 0; i < bn; ++i)
      for (Eigen::Index j = 0; j < bn; ++j) sub(i, j) = m(block[i], block[j]);
    detail::balance(sub);
    detail::hessenberg_reduce(sub);
    const auto ev = detail::hessenberg_qr_eigenvalues(std::move(sub));
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns, orthonormal
};

/// Cyclic complex Jacobi for a Hermitian matrix (the Hermitian part of `m` is used).
inline HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  require_square_finite(m, "hermitian_eigen");
  const Eigen::Index n = m.rows();
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double fro = a.norm();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= eps * fro || off == 0.0) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq == 0.0) continue;
        const Complex e = a(p, q) / apq;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex rpq = s * e;
        const Complex rqp = -s * std::conj(e);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex x = a(i, p);
          const Complex y = a(i, q);
          a(i, p) = x * c + y * rqp;
          a(i, q) = x * rpq + y * c;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex x = a(p, j);
          const Complex y = a(q, j);
          a(p, j) = c * x + std::conj(rqp) * y;
          a(q, j) = std::conj(rpq) * x + c * y;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex x = v(i, p);
          const Complex y = v(i, q);
          v(i, p) = x * c + y * rqp;
          v(i, q) = x * rpq + y * c;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out{Eigen::VectorXd(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace qhi
