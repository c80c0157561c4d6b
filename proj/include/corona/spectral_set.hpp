#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace corona {

using cplx = std::complex<double>;

struct Segment {
  cplx a;
  cplx b;
};

struct Circle {
  cplx center;
  double radius = 0.0;
};

/// Compact subset of the complex plane: a point cloud plus exact segments
/// and circles. `resolution` bounds the Hausdorff distance between what is
/// stored and the set it approximates.
struct SpectralSet {
  std::vector<cplx> points;
  std::vector<Segment> segments;
  std::vector<Circle> circles;
  double resolution = 0.0;

  static SpectralSet empty() { return {}; }
  static SpectralSet point(cplx z);
  static SpectralSet interval(double lo, double hi);
  static SpectralSet cloud(std::vector<cplx> pts, double resolution);

  bool is_empty() const { return points.empty() && segments.empty() && circles.empty(); }
  /// Exact distance from z to the stored primitives and points.
  double distance_to(cplx z) const;
  double max_abs() const;
  /// {re_min, re_max, im_min, im_max}; throws on an empty set.
  std::array<double, 4> bounding_box() const;
  /// True when every stored element lies within tol of the real axis.
  bool is_real(double tol) const;
};

SpectralSet set_union(const SpectralSet& a, const SpectralSet& b);
SpectralSet set_scale(const SpectralSet& a, cplx factor);
SpectralSet set_translate(const SpectralSet& a, cplx shift);
/// {x + y}; exact on collinear primitives, sampled otherwise.
SpectralSet set_minkowski_sum(const SpectralSet& a, const SpectralSet& b);
/// {x * y}; exact for real intervals and point factors, sampled otherwise.
SpectralSet set_product(const SpectralSet& a, const SpectralSet& b);

/// Replaces segments and circles by points spaced at most `step` apart.
SpectralSet to_cloud(const SpectralSet& a, double step);

/// sup_{x in a} dist(x, b). Primitives of `a` are sampled at `sample_step`
/// (0 picks 1e-5 of the diameter), so the result is within step/2 of the
/// exact value.
double directed_distance(const SpectralSet& a, const SpectralSet& b, double sample_step = 0.0);
double hausdorff_distance(const SpectralSet& a, const SpectralSet& b, double sample_step = 0.0);

/// Merges real-axis points and segments whose gaps are at most `gap` into
/// segments; the resolution grows by gap/2 when a gap is bridged.
SpectralSet consolidate(const SpectralSet& a, double gap);
/// Keeps one point per square cell of side `cell`; resolution grows by the
/// half-diagonal when points are dropped.
SpectralSet thin(const SpectralSet& a, double cell);

/// Real-axis components of a set after consolidation, sorted; used for
/// gap reporting.
std::vector<std::array<double, 2>> real_components(const SpectralSet& a, double im_tol = 1e-9);

std::string summarize(const SpectralSet& a);

}  // namespace corona
