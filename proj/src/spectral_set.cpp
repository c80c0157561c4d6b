#include "corona/spectral_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace corona {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool real_value(cplx z) { return std::abs(z.imag()) <= 1e-14 * (1.0 + std::abs(z.real())); }
bool real_segment(const Segment& s) { return real_value(s.a) && real_value(s.b); }

double segment_distance(cplx z, const Segment& s) {
  const cplx d = s.b - s.a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - s.a);
  const double t = std::clamp(((z - s.a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (s.a + t * d));
}

using Interval = std::array<double, 2>;

// Real intervals of a set when every element is real; false otherwise.
bool real_intervals(const SpectralSet& s, std::vector<Interval>& out) {
  if (!s.circles.empty()) {
    for (const auto& c : s.circles)
      if (c.radius != 0.0 || !real_value(c.center)) return false;
  }
  out.clear();
  for (auto p : s.points) {
    if (!real_value(p)) return false;
    out.push_back({p.real(), p.real()});
  }
  for (const auto& g : s.segments) {
    if (!real_segment(g)) return false;
    out.push_back({std::min(g.a.real(), g.b.real()), std::max(g.a.real(), g.b.real())});
  }
  for (const auto& c : s.circles) out.push_back({c.center.real(), c.center.real()});
  std::sort(out.begin(), out.end());
  std::vector<Interval> merged;
  for (const auto& iv : out) {
    if (!merged.empty() && iv[0] <= merged.back()[1])
      merged.back()[1] = std::max(merged.back()[1], iv[1]);
    else
      merged.push_back(iv);
  }
  out = std::move(merged);
  return true;
}

double interval_distance(double x, const std::vector<Interval>& ivs) {
  if (ivs.empty()) return kInf;
  auto it = std::upper_bound(ivs.begin(), ivs.end(), x, [](double v, const Interval& iv) { return v < iv[0]; });
  double best = kInf;
  if (it != ivs.end()) best = it->at(0) - x;
  if (it != ivs.begin()) {
    const auto& prev = *std::prev(it);
    best = std::min(best, x <= prev[1] ? 0.0 : x - prev[1]);
  }
  return best;
}

// sup over [lo, hi] of the distance to a union of sorted disjoint intervals:
// attained at the endpoints or at a midpoint of a gap.
double interval_sup_distance(double lo, double hi, const std::vector<Interval>& ivs) {
  double worst = std::max(interval_distance(lo, ivs), interval_distance(hi, ivs));
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
    const double mid = 0.5 * (ivs[i][1] + ivs[i + 1][0]);
    if (mid > lo && mid < hi) worst = std::max(worst, interval_distance(mid, ivs));
  }
  return worst;
}

// Points sorted by real part; queries sweep outward until the real-part
// gap alone exceeds the best distance found.
class PointIndex {
 public:
  explicit PointIndex(std::vector<cplx> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
  }

  double nearest(cplx z) const {
    double best = kInf;
    auto mid = std::lower_bound(pts_.begin(), pts_.end(), z.real(), [](cplx p, double v) { return p.real() < v; });
    for (auto it = mid; it != pts_.end() && it->real() - z.real() < best; ++it) best = std::min(best, std::abs(z - *it));
    for (auto it = mid; it != pts_.begin();) {
      --it;
      if (z.real() - it->real() >= best) break;
      best = std::min(best, std::abs(z - *it));
    }
    return best;
  }

 private:
  std::vector<cplx> pts_;
};

double diameter(const SpectralSet& s) {
  if (s.is_empty()) return 0.0;
  const auto b = s.bounding_box();
  return std::hypot(b[1] - b[0], b[3] - b[2]);
}

std::vector<cplx> sample_segment(const Segment& s, double step) {
  const double len = std::abs(s.b - s.a);
  const auto n = static_cast<std::size_t>(std::ceil(len / step)) + 1;
  std::vector<cplx> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(n == 1 ? s.a : s.a + (s.b - s.a) * (double(i) / double(n - 1)));
  return out;
}

std::vector<cplx> sample_circle(const Circle& c, double step) {
  const auto n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2 * std::numbers::pi * c.radius / step)));
  std::vector<cplx> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(c.center + std::polar(c.radius, 2 * std::numbers::pi * i / n));
  return out;
}

double auto_step(const SpectralSet& a, double sample_step) {
  if (sample_step > 0.0) return sample_step;
  const double d = diameter(a);
  return d > 0.0 ? 1e-5 * d : 1e-5;
}

}  // namespace

SpectralSet SpectralSet::point(cplx z) {
  SpectralSet s;
  s.points.push_back(z);
  return s;
}

SpectralSet SpectralSet::interval(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  SpectralSet s;
  if (lo == hi)
    s.points.push_back(lo);
  else
    s.segments.push_back({lo, hi});
  return s;
}

SpectralSet SpectralSet::cloud(std::vector<cplx> pts, double resolution) {
  SpectralSet s;
  s.points = std::move(pts);
  s.resolution = resolution;
  return s;
}

double SpectralSet::distance_to(cplx z) const {
  double best = kInf;
  for (auto p : points) best = std::min(best, std::abs(z - p));
  for (const auto& g : segments) best = std::min(best, segment_distance(z, g));
  for (const auto& c : circles) best = std::min(best, std::abs(std::abs(z - c.center) - c.radius));
  return best;
}

double SpectralSet::max_abs() const {
  double m = 0.0;
  for (auto p : points) m = std::max(m, std::abs(p));
  for (const auto& g : segments) m = std::max({m, std::abs(g.a), std::abs(g.b)});
  for (const auto& c : circles) m = std::max(m, std::abs(c.center) + c.radius);
  return m;
}

std::array<double, 4> SpectralSet::bounding_box() const {
  if (is_empty()) throw std::invalid_argument("bounding box of an empty set");
  std::array<double, 4> b{kInf, -kInf, kInf, -kInf};
  auto add = [&](cplx z, double r) {
    b[0] = std::min(b[0], z.real() - r), b[1] = std::max(b[1], z.real() + r);
    b[2] = std::min(b[2], z.imag() - r), b[3] = std::max(b[3], z.imag() + r);
  };
  for (auto p : points) add(p, 0.0);
  for (const auto& g : segments) add(g.a, 0.0), add(g.b, 0.0);
  for (const auto& c : circles) add(c.center, c.radius);
  return b;
}

bool SpectralSet::is_real(double tol) const {
  for (auto p : points)
    if (std::abs(p.imag()) > tol) return false;
  for (const auto& g : segments)
    if (std::abs(g.a.imag()) > tol || std::abs(g.b.imag()) > tol) return false;
  for (const auto& c : circles)
    if (std::abs(c.center.imag()) + c.radius > tol) return false;
  return true;
}

SpectralSet set_union(const SpectralSet& a, const SpectralSet& b) {
  SpectralSet s = a;
  s.points.insert(s.points.end(), b.points.begin(), b.points.end());
  s.segments.insert(s.segments.end(), b.segments.begin(), b.segments.end());
  s.circles.insert(s.circles.end(), b.circles.begin(), b.circles.end());
  s.resolution = std::max(a.resolution, b.resolution);
  return s;
}

SpectralSet set_scale(const SpectralSet& a, cplx factor) {
  SpectralSet s = a;
  for (auto& p : s.points) p *= factor;
  for (auto& g : s.segments) g.a *= factor, g.b *= factor;
  for (auto& c : s.circles) c.center *= factor, c.radius *= std::abs(factor);
  s.resolution *= std::abs(factor);
  return s;
}

SpectralSet set_translate(const SpectralSet& a, cplx shift) {
  SpectralSet s = a;
  for (auto& p : s.points) p += shift;
  for (auto& g : s.segments) g.a += shift, g.b += shift;
  for (auto& c : s.circles) c.center += shift;
  return s;
}

SpectralSet set_minkowski_sum(const SpectralSet& a, const SpectralSet& b) {
  if (a.is_empty() || b.is_empty()) return SpectralSet::empty();
  std::vector<Interval> ia, ib;
  SpectralSet s;
  if (real_intervals(a, ia) && real_intervals(b, ib)) {
    for (const auto& x : ia)
      for (const auto& y : ib) {
        const double lo = x[0] + y[0], hi = x[1] + y[1];
        if (lo == hi)
          s.points.push_back(lo);
        else
          s.segments.push_back({lo, hi});
      }
    s.resolution = a.resolution + b.resolution;
    return s;
  }
  // Point summands translate primitives exactly; primitive pairs are sampled.
  const double step = 1e-3 * std::max({diameter(a), diameter(b), 1e-12});
  const SpectralSet prim_a{{}, a.segments, a.circles, 0.0}, prim_b{{}, b.segments, b.circles, 0.0};
  for (auto p : a.points) s = set_union(s, set_translate(prim_b, p));
  for (auto q : b.points) s = set_union(s, set_translate(prim_a, q));
  for (auto p : a.points)
    for (auto q : b.points) s.points.push_back(p + q);
  const bool sampled = !prim_a.is_empty() && !prim_b.is_empty();
  if (sampled) {
    const auto pa = to_cloud(prim_a, step).points, pb = to_cloud(prim_b, step).points;
    for (auto x : pa)
      for (auto y : pb) s.points.push_back(x + y);
  }
  s.resolution = a.resolution + b.resolution + (sampled ? step : 0.0);
  return sampled ? thin(s, step / 2) : s;
}

SpectralSet set_product(const SpectralSet& a, const SpectralSet& b) {
  if (a.is_empty() || b.is_empty()) return SpectralSet::empty();
  std::vector<Interval> ia, ib;
  const double ma = a.max_abs(), mb = b.max_abs();
  SpectralSet s;
  if (real_intervals(a, ia) && real_intervals(b, ib)) {
    for (const auto& x : ia)
      for (const auto& y : ib) {
        const double c[4] = {x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]};
        const double lo = *std::min_element(c, c + 4), hi = *std::max_element(c, c + 4);
        if (lo == hi)
          s.points.push_back(lo);
        else
          s.segments.push_back({lo, hi});
      }
  } else {
    const double step = 1e-3 * std::max({ma, mb, 1e-12});
    const auto ca = to_cloud(a, step / std::max(mb, 1e-12));
    const auto cb = to_cloud(b, step / std::max(ma, 1e-12));
    for (auto x : ca.points)
      for (auto y : cb.points) s.points.push_back(x * y);
    s.resolution = ca.resolution * mb + cb.resolution * ma;
    s = thin(s, step / 2);
  }
  s.resolution += a.resolution * mb + b.resolution * ma + a.resolution * b.resolution;
  return s;
}

SpectralSet to_cloud(const SpectralSet& a, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("cloud step must be positive");
  SpectralSet s;
  s.points = a.points;
  for (const auto& g : a.segments)
    for (auto z : sample_segment(g, step)) s.points.push_back(z);
  for (const auto& c : a.circles)
    for (auto z : sample_circle(c, step)) s.points.push_back(z);
  const bool sampled = !a.segments.empty() || !a.circles.empty();
  s.resolution = a.resolution + (sampled ? step / 2 : 0.0);
  return s;
}

double directed_distance(const SpectralSet& a, const SpectralSet& b, double sample_step) {
  if (a.is_empty()) return 0.0;
  if (b.is_empty()) return kInf;
  std::vector<Interval> ia, ib;
  if (real_intervals(a, ia) && real_intervals(b, ib)) {
    double worst = 0.0;
    for (const auto& x : ia) worst = std::max(worst, interval_sup_distance(x[0], x[1], ib));
    return worst;
  }
  const auto cloud = to_cloud(a, auto_step(a, sample_step));
  const PointIndex index(b.points);
  double worst = 0.0;
  for (auto z : cloud.points) {
    double d = index.nearest(z);
    for (const auto& g : b.segments) d = std::min(d, segment_distance(z, g));
    for (const auto& c : b.circles) d = std::min(d, std::abs(std::abs(z - c.center) - c.radius));
    worst = std::max(worst, d);
  }
  return worst;
}

double hausdorff_distance(const SpectralSet& a, const SpectralSet& b, double sample_step) {
  return std::max(directed_distance(a, b, sample_step), directed_distance(b, a, sample_step));
}

SpectralSet consolidate(const SpectralSet& a, double gap) {
  SpectralSet s;
  std::vector<Interval> ivs;
  for (auto p : a.points) {
    if (real_value(p))
      ivs.push_back({p.real(), p.real()});
    else
      s.points.push_back(p);
  }
  for (const auto& g : a.segments) {
    if (real_segment(g))
      ivs.push_back({std::min(g.a.real(), g.b.real()), std::max(g.a.real(), g.b.real())});
    else
      s.segments.push_back(g);
  }
  s.circles = a.circles;
  std::sort(ivs.begin(), ivs.end());
  double bridged = 0.0;
  std::vector<Interval> merged;
  for (const auto& iv : ivs) {
    if (!merged.empty() && iv[0] - merged.back()[1] <= gap) {
      bridged = std::max(bridged, iv[0] - merged.back()[1]);
      merged.back()[1] = std::max(merged.back()[1], iv[1]);
    } else {
      merged.push_back(iv);
    }
  }
  for (const auto& iv : merged) {
    if (iv[0] == iv[1])
      s.points.push_back(iv[0]);
    else
      s.segments.push_back({iv[0], iv[1]});
  }
  s.resolution = a.resolution + bridged / 2;
  return s;
}

SpectralSet thin(const SpectralSet& a, double cell) {
  if (!(cell > 0.0)) return a;
  SpectralSet s = a;
  s.points.clear();
  std::unordered_map<std::uint64_t, char> seen;
  seen.reserve(a.points.size());
  bool dropped = false;
  for (auto p : a.points) {
    const auto cx = static_cast<long long>(std::floor(p.real() / cell));
    const auto cy = static_cast<long long>(std::floor(p.imag() / cell));
    const auto k = (static_cast<std::uint64_t>(cx) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(cy);
    if (seen.emplace(k, 0).second)
      s.points.push_back(p);
    else
      dropped = true;
  }
  if (dropped) s.resolution += cell * std::numbers::sqrt2;
  return s;
}

std::vector<std::array<double, 2>> real_components(const SpectralSet& a, double im_tol) {
  std::vector<Interval> ivs;
  for (auto p : a.points)
    if (std::abs(p.imag()) <= im_tol) ivs.push_back({p.real(), p.real()});
  for (const auto& g : a.segments)
    if (std::abs(g.a.imag()) <= im_tol && std::abs(g.b.imag()) <= im_tol)
      ivs.push_back({std::min(g.a.real(), g.b.real()), std::max(g.a.real(), g.b.real())});
  std::sort(ivs.begin(), ivs.end());
  std::vector<Interval> merged;
  for (const auto& iv : ivs) {
    if (!merged.empty() && iv[0] <= merged.back()[1])
      merged.back()[1] = std::max(merged.back()[1], iv[1]);
    else
      merged.push_back(iv);
  }
  return merged;
}

std::string summarize(const SpectralSet& a) {
  if (a.is_empty()) return "empty set";
  char buf[128];
  std::string out;
  const auto comps = real_components(a);
  std::size_t shown = 0;
  for (const auto& c : comps) {
    if (shown++ == 6) {
      out += " ...";
      break;
    }
    if (c[0] == c[1])
      std::snprintf(buf, sizeof buf, "{%.10g}", c[0]);
    else
      std::snprintf(buf, sizeof buf, "[%.10g, %.10g]", c[0], c[1]);
    out += (out.empty() ? "" : " u ") + std::string(buf);
  }
  std::size_t complex_pts = 0;
  for (auto p : a.points) complex_pts += std::abs(p.imag()) > 1e-9;
  if (complex_pts) {
    std::snprintf(buf, sizeof buf, "%s%zu non-real points", out.empty() ? "" : "; ", complex_pts);
    out += buf;
  }
  if (!a.circles.empty()) out += "; " + std::to_string(a.circles.size()) + " circles";
  std::snprintf(buf, sizeof buf, " (resolution %.3g)", a.resolution);
  return out + buf;
}

}  // namespace corona
