#pragma once

// Exceptional-point location for one-parameter pencils.
//
// Two indicators are bisected:
//  * the axis signature of the spectrum (how many eigenvalues are real, how many purely
//    imaginary). It changes at every square-root branch point where a colliding pair leaves
//    along the perpendicular direction: the onset of complexification, and the collapse of
//    complex quartets onto the imaginary axis.
//  * the sign of the slope of the smallest pairwise gap while the spectrum stays real. It flips
//    at a linear level crossing; a crossing is accepted only if the gap actually closes.
// The kind is assigned afterwards by probing both sides of the located value.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhi/spectral.hpp"

namespace qhi {

enum class EpKind { first_kind, second_kind };

inline std::string_view to_string(EpKind k) {
  return k == EpKind::first_kind ? "first_kind" : "second_kind";
}

struct ExceptionalPoint {
  double param_value = 0.0;
  EpKind kind = EpKind::first_kind;
  std::pair<int, int> level_pair{0, 1};  // 0-based indices into the sorted spectrum
  double residual_gap = 0.0;
  int multiplicity = 2;  // eigenvalues clustered at the merging value
};

struct EpSearchOptions {
  double reality_tol = kRealityTol;
  int scan_cells = 64;
};

namespace detail {

struct AxisSignature {
  int real_count = 0;
  int imaginary_count = 0;
  bool operator==(const AxisSignature&) const = default;
};

inline AxisSignature axis_signature(const Spectrum& s) {
  AxisSignature sig;
  for (const auto& v : s.values) {
    if (v.imag() == 0.0)
      ++sig.real_count;
    else if (v.real() == 0.0)
      ++sig.imaginary_count;
  }
  return sig;
}

struct EpProbe {
  const HamiltonianPencil& pencil;
  double reality_tol;

  Spectrum spectrum(double x) const { return eigenvalues(pencil.at(x), reality_tol); }
  AxisSignature signature(double x) const { return axis_signature(spectrum(x)); }

  // +1 / -1: min-gap slope sign at x from a central difference of half-width h; 0 if the
  // spectrum is not real at both stencil points.
  int gap_slope_sign(double x, double h) const {
    const Spectrum lo = spectrum(x - h);
    const Spectrum hi = spectrum(x + h);
    if (lo.reality != Reality::all_real || hi.reality != Reality::all_real) return 0;
    const double d = hi.min_gap() - lo.min_gap();
    return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
  }
};

struct Candidate {
  double param;
  bool from_crossing;
};

}  // namespace detail

/// Builds the EP record at `param`: merging pair, residual gap, cluster size, kind by probing.
inline ExceptionalPoint describe_ep(const HamiltonianPencil& pencil, double param, double kind_probe, double tol,
                                    const EpSearchOptions& opts = {}) {
  const detail::EpProbe probe{pencil, opts.reality_tol};
  const Spectrum s = probe.spectrum(param);
  std::size_t i = 0, j = 1;
  const double gap = s.min_gap(&i, &j);

  const Complex centre = 0.5 * (s[i] + s[j]);
  double radius = 0.0;
  for (const auto& v : s.values) radius = std::max(radius, std::abs(v));
  radius = 10.0 * std::sqrt(tol) * std::max(1.0, radius);
  radius = std::max(radius, gap);
  int cluster = 0;
  for (const auto& v : s.values)
    if (std::abs(v - centre) <= radius) ++cluster;

  const bool real_left = probe.spectrum(param - kind_probe).reality == Reality::all_real;
  const bool real_right = probe.spectrum(param + kind_probe).reality == Reality::all_real;

  ExceptionalPoint ep;
  ep.param_value = param;
  ep.kind = (real_left && real_right) ? EpKind::second_kind : EpKind::first_kind;
  ep.level_pair = {static_cast<int>(i), static_cast<int>(j)};
  ep.residual_gap = gap;
  ep.multiplicity = std::max(cluster, 2);
  return ep;
}

/// All EPs detected between consecutive scan nodes, sorted by parameter.
inline std::vector<ExceptionalPoint> scan_eps(const HamiltonianPencil& pencil, const std::vector<double>& nodes,
                                              double kind_probe, double tol, const EpSearchOptions& opts = {}) {
  if (nodes.size() < 2 || !strictly_increasing(nodes))
    throw InvalidArgument("scan_eps: need at least two strictly increasing nodes");
  if (!(tol > 0.0) || !(kind_probe > 0.0)) throw InvalidArgument("scan_eps: tol and kind_probe must be > 0");

  const detail::EpProbe probe{pencil, opts.reality_tol};
  const double width = nodes.back() - nodes.front();
  const double h = 1e-6 * std::max(1.0, width);
  const double gap_tol = 1e3 * tol;

  std::vector<detail::AxisSignature> sig;
  std::vector<Reality> reality;
  std::vector<int> slope;
  for (double x : nodes) {
    const Spectrum s = probe.spectrum(x);
    sig.push_back(detail::axis_signature(s));
    reality.push_back(s.reality);
    slope.push_back(s.reality == Reality::all_real ? probe.gap_slope_sign(x, h) : 0);
  }

  std::vector<detail::Candidate> found;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    double lo = nodes[k];
    double hi = nodes[k + 1];
    if (!(sig[k] == sig[k + 1])) {
      // a node sitting on an EP can hide a second change in the same cell
      auto left = sig[k];
      for (int guard = 0; guard < 8 && !(left == sig[k + 1]); ++guard) {
        double a = lo, b = hi;
        while (b - a > tol) {
          const double mid = 0.5 * (a + b);
          if (probe.signature(mid) == left)
            a = mid;
          else
            b = mid;
        }
        found.push_back({0.5 * (a + b), false});
        if (b >= hi) break;
        lo = b;
        left = probe.signature(lo);
      }
    } else if (reality[k] == Reality::all_real && reality[k + 1] == Reality::all_real && slope[k] < 0 &&
               slope[k + 1] > 0) {
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const int sgn = probe.gap_slope_sign(mid, h);
        if (sgn < 0) {
          lo = mid;
        } else if (sgn > 0) {
          hi = mid;
        } else {
          lo = hi = mid;
        }
      }
      const double x = 0.5 * (lo + hi);
      const Spectrum s = probe.spectrum(x);
      double scale = 1.0;
      for (const auto& v : s.values) scale = std::max(scale, std::abs(v));
      if (s.min_gap() <= gap_tol * scale) found.push_back({x, true});
    }
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.param < b.param; });
  std::vector<detail::Candidate> merged;
  for (const auto& c : found) {
    if (!merged.empty() && c.param - merged.back().param <= 100.0 * tol) {
      if (c.from_crossing != merged.back().from_crossing) {
        const double first = c.from_crossing ? merged.back().param : c.param;
        const double second = c.from_crossing ? c.param : merged.back().param;
        throw AmbiguousEp("locate_ep: first- and second-kind candidates coincide", first, second);
      }
      continue;
    }
    merged.push_back(c);
  }

  std::vector<ExceptionalPoint> out;
  out.reserve(merged.size());
  for (const auto& c : merged) out.push_back(describe_ep(pencil, c.param, kind_probe, tol, opts));
  return out;
}

/// The leftmost EP inside [bracket_lo, bracket_hi], located to a bracket width <= tol.
inline ExceptionalPoint locate_ep(const HamiltonianPencil& pencil, double bracket_lo, double bracket_hi,
                                  double kind_probe, double tol, const EpSearchOptions& opts = {}) {
  if (!(bracket_lo < bracket_hi)) throw InvalidArgument("locate_ep: bracket must satisfy lo < hi");
  const auto eps = scan_eps(pencil, linspace(bracket_lo, bracket_hi, std::max(opts.scan_cells, 1) + 1),
                            kind_probe, tol, opts);
  if (eps.empty())
    throw NoEpInBracket("locate_ep: no indicator change in [" + std::to_string(bracket_lo) + ", " +
                        std::to_string(bracket_hi) + "]");
  return eps.front();
}

}  // namespace qhi
