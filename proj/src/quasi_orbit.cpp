#include "corona/quasi_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "corona/errors.hpp"

namespace corona {
namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

struct Channel {
  int coordinate = 0;
  std::vector<SlowlyOscillatingNode> leaves;  // leaves this channel moves
};

bool moves(const GroupSpec& g, int coordinate, const SlowlyOscillatingNode& leaf) {
  return leaf.factor < 0 || g.factors()[leaf.factor].coord_offset == coordinate;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Phase samples for the oscillating generators present in a channel.
std::vector<double> phase_grid(bool has_sin, bool has_cos, int count) {
  std::vector<double> phases;
  if (!has_sin && !has_cos) return phases;
  const double pi = std::numbers::pi;
  if (has_sin && has_cos) {
    for (int j = 0; j < count; ++j) phases.push_back(2.0 * pi * j / count);
  } else {
    const double lo = has_sin ? -pi / 2 : 0.0;
    for (int j = 0; j < count; ++j) phases.push_back(lo + pi * j / (count - 1));
  }
  return phases;
}

Probe make_probe(int coordinate, int sign, std::optional<double> phase, std::optional<double> osc_scale,
                 std::int64_t residue, std::int64_t modulus, const GroupSpec& g, const ProbeOptions& opts) {
  Probe p;
  p.coordinate = coordinate;
  p.sign = sign;
  p.phase = phase;
  p.residue = residue;
  p.modulus = modulus;
  long double turns = static_cast<long double>(opts.phase_turns);
  if (phase) {
    // Keep t = u^2 s inside int64 with room for the residue adjustment.
    const long double s = *osc_scale;
    const long double u_max = std::sqrt(4.0e18L / s);
    turns = std::min(turns, std::floor(u_max / kTwoPi) - opts.samples - 2);
    if (turns < 1000) throw UnsupportedAlgebraPattern("oscillating generator scale too large for phase probes");
  }
  for (int k = 1; k <= opts.samples; ++k) {
    std::int64_t t;
    if (phase) {
      const long double u = static_cast<long double>(*phase) + kTwoPi * (turns + k);
      t = std::llround(u * u * *osc_scale);
    } else {
      t = static_cast<std::int64_t>(k) * k * opts.escape_scale;
    }
    std::int64_t x = sign * t;
    x += positive_mod(residue - x, modulus);
    Element e = g.identity();
    e.coords[coordinate] = x;
    p.samples.push_back(std::move(e));
  }
  return p;
}

}  // namespace

std::string Probe::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "axis %d, %s infinity", coordinate, sign > 0 ? "+" : "-");
  std::string s = buf;
  if (phase) {
    std::snprintf(buf, sizeof buf, ", phase %.17g", *phase);
    s += buf;
  }
  if (modulus > 1) s += ", residue " + std::to_string(residue) + " mod " + std::to_string(modulus);
  return s;
}

const LeafLimit* QuasiOrbitSpec::find(const std::string& leaf) const {
  for (const auto& l : limits)
    if (l.leaf == leaf) return &l;
  return nullptr;
}

bool probe_moves(const GroupSpec& g, const Probe& probe, const SlowlyOscillatingNode& leaf) {
  return moves(g, probe.coordinate, leaf);
}

LeafLimit probe_limit(const GroupSpec& g, const SlowlyOscillatingNode& leaf, const Probe& probe,
                      const ProbeOptions& opts) {
  if (probe.samples.empty()) throw DivergentProbe("probe has no samples");
  const CoefficientSymbol a(leaf);
  std::vector<cplx> values;
  for (const auto& x : probe.samples) values.push_back(evaluate(g, a, x));
  const cplx last = values.back();
  double spread = 0.0;
  const auto window = std::min<std::size_t>(static_cast<std::size_t>(opts.cauchy_window), values.size());
  for (std::size_t i = values.size() - window; i < values.size(); ++i)
    spread = std::max(spread, std::abs(values[i] - last));
  if (spread > opts.cauchy_tolerance) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " (spread %.3g)", spread);
    throw DivergentProbe("leaf " + key(leaf) + " does not converge along " + probe.describe() + buf);
  }
  return {key(leaf), last, spread};
}

std::vector<QuasiOrbitSpec> sufficient_family(const GroupSpec& g, std::span<const CoefficientSymbol> coefficients,
                                              const ProbeOptions& opts) {
  for (const auto& a : coefficients) validate_symbol(g, a);
  if (g.is_finite()) return {};

  std::vector<SlowlyOscillatingNode> leaves;
  std::set<std::string> seen;
  std::vector<PeriodicNode> periodics;
  for (const auto& a : coefficients) {
    for (const auto& l : so_leaves(a))
      if (seen.insert(key(l)).second) leaves.push_back(l);
    for (auto& p : periodic_leaves(a)) periodics.push_back(std::move(p));
  }

  std::vector<int> lattice_factors;
  for (std::size_t i = 0; i < g.factors().size(); ++i)
    if (g.factors()[i].kind == GroupSpec::Kind::Lattice) lattice_factors.push_back(static_cast<int>(i));
  const bool axis_leaves = std::any_of(leaves.begin(), leaves.end(), [](const auto& l) { return l.factor >= 0; });
  const bool product_mode = axis_leaves && lattice_factors.size() > 1;

  std::vector<Channel> channels;
  if (product_mode) {
    for (int f : lattice_factors) channels.push_back({g.factors()[f].coord_offset, {}});
  } else {
    channels.push_back({0, {}});
  }
  for (auto& ch : channels)
    for (const auto& l : leaves)
      if (moves(g, ch.coordinate, l)) ch.leaves.push_back(l);

  std::vector<QuasiOrbitSpec> family;
  int orbit_class = 0;
  for (const auto& ch : channels) {
    bool sign_sensitive = false, has_sin = false, has_cos = false;
    std::optional<double> osc_scale;
    std::optional<int> osc_factor;
    for (const auto& l : ch.leaves) {
      if (so_is_sign_sensitive(l.generator) && l.factor >= 0) sign_sensitive = true;
      if (so_is_oscillating(l.generator)) {
        (l.generator == SoGenerator::SinSqrt ? has_sin : has_cos) = true;
        if ((osc_scale && *osc_scale != l.scale) || (osc_factor && *osc_factor != l.factor))
          throw UnsupportedAlgebraPattern("oscillating leaves with different arguments in one channel: " + key(l));
        osc_scale = l.scale;
        osc_factor = l.factor;
      }
    }
    std::int64_t modulus = 1;
    for (const auto& p : periodics) modulus = std::lcm(modulus, p.period[ch.coordinate]);
    const bool periodic_only = !periodics.empty() && leaves.empty();
    const std::int64_t residues = periodic_only ? modulus : 1;

    std::vector<int> signs = sign_sensitive ? std::vector<int>{1, -1} : std::vector<int>{1};
    auto phases = phase_grid(has_sin, has_cos, opts.phase_count);
    std::vector<std::optional<double>> phase_opts;
    if (phases.empty()) phase_opts.push_back(std::nullopt);
    for (double ph : phases) phase_opts.push_back(ph);

    for (int sign : signs) {
      for (const auto& phase : phase_opts) {
        for (std::int64_t r = 0; r < residues; ++r) {
          QuasiOrbitSpec q;
          q.probe = make_probe(ch.coordinate, sign, phase, osc_scale, r, modulus, g, opts);
          for (const auto& l : ch.leaves) q.limits.push_back(probe_limit(g, l, q.probe, opts));
          q.orbit_class = orbit_class;
          q.representative = r == 0;
          family.push_back(std::move(q));
        }
        ++orbit_class;
      }
    }
  }
  return family;
}

std::vector<QuasiOrbitSpec> sufficient_family(const GroupSpec& g, const CoefficientSymbol& a,
                                              const ProbeOptions& opts) {
  return sufficient_family(g, std::span<const CoefficientSymbol>(&a, 1), opts);
}

CoefficientSymbol asymptotic_coefficient(const GroupSpec& g, const CoefficientSymbol& a, const QuasiOrbitSpec& q,
                                         const ProbeOptions& opts) {
  return std::visit(
      [&](const auto& n) -> CoefficientSymbol {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return a;
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          return constant(0.0);
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          if (!probe_moves(g, q.probe, n)) return a;
          if (const auto* lim = q.find(key(n))) return constant(lim->value);
          return constant(probe_limit(g, n, q.probe, opts).value);
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          if (q.probe.samples.empty()) return a;
          // The samples all share one residue class, so lim a(x_k q) = a(x_1 q).
          Element x = q.probe.samples.front();
          for (std::size_t i = 0; i < n.period.size(); ++i) x.coords[i] = positive_mod(x.coords[i], n.period[i]);
          return translate(g, a, g.inverse(x));
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          return translate(g, asymptotic_coefficient(g, n.child, q, opts), n.shift);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<CoefficientSymbol> terms;
          for (const auto& t : n.terms) terms.push_back(asymptotic_coefficient(g, t, q, opts));
          return sum(g, std::move(terms));
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          std::vector<CoefficientSymbol> fs;
          for (const auto& t : n.factors) fs.push_back(asymptotic_coefficient(g, t, q, opts));
          return product(g, std::move(fs));
        } else {
          return scale(g, n.factor, asymptotic_coefficient(g, n.child, q, opts));
        }
      },
      a.node());
}

int oscillation_degree(const CoefficientSymbol& a) {
  return std::visit(
      [&](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return so_is_oscillating(n.generator) ? 1 : 0;
        } else if constexpr (std::is_same_v<T, TranslateNode> || std::is_same_v<T, ScaleNode>) {
          return oscillation_degree(n.child);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          int d = 0;
          for (const auto& t : n.terms) d = std::max(d, oscillation_degree(t));
          return d;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          int d = 0;
          for (const auto& t : n.factors) d += oscillation_degree(t);
          return d;
        } else {
          return 0;
        }
      },
      a.node());
}

SpectralSet cluster_range(const GroupSpec& g, const CoefficientSymbol& a, const ProbeOptions& opts) {
  const auto cls = classify(a);
  if (cls != CoefficientClass::Constant && cls != CoefficientClass::Vanishing &&
      cls != CoefficientClass::SlowlyOscillating)
    throw NotSlowlyOscillating("coefficient of class " + class_name(cls) + " has no cluster range: " + key(a));
  if (a.is_constant()) return SpectralSet::point(a.constant_value());
  if (cls == CoefficientClass::Vanishing) return SpectralSet::point(0.0);

  const auto family = sufficient_family(g, a, opts);
  std::vector<cplx> values;
  std::vector<const QuasiOrbitSpec*> probes;
  for (const auto& q : family) {
    if (!q.representative) continue;
    auto lim = asymptotic_coefficient(g, a, q, opts);
    if (!lim.is_constant())
      throw UnsupportedAlgebraPattern("limit of " + key(a) + " along " + q.probe.describe() + " is not constant");
    values.push_back(lim.constant_value());
    probes.push_back(&q);
  }

  std::set<SoGenerator> osc_kinds;
  for (const auto& l : so_leaves(a))
    if (so_is_oscillating(l.generator)) osc_kinds.insert(l.generator);

  if (osc_kinds.empty()) {
    SpectralSet s;
    for (auto v : values)
      if (s.is_empty() || s.distance_to(v) > 0.0) s.points.push_back(v);
    return s;
  }

  const bool single_channel = std::all_of(probes.begin(), probes.end(),
                                          [&](const auto* q) { return q->probe.coordinate == probes.front()->probe.coordinate; });
  if (osc_kinds.size() == 1 && oscillation_degree(a) <= 1 && single_channel) {
    // Affine in the oscillating value v in [-1, 1]: the image is the segment f(-1)..f(1).
    SpectralSet s;
    std::set<int> signs_done;
    for (const auto* q : probes) {
      if (!signs_done.insert(q->probe.sign).second) continue;
      QuasiOrbitSpec lo = *q, hi = *q;
      for (const auto& l : so_leaves(a)) {
        if (!so_is_oscillating(l.generator)) continue;
        for (auto* spec : {&lo, &hi}) {
          const cplx v = spec == &lo ? -1.0 : 1.0;
          bool found = false;
          for (auto& lim : spec->limits)
            if (lim.leaf == key(l)) lim.value = v, found = true;
          if (!found) spec->limits.push_back({key(l), v, 0.0});
        }
      }
      s.segments.push_back({asymptotic_coefficient(g, a, lo, opts).constant_value(),
                            asymptotic_coefficient(g, a, hi, opts).constant_value()});
    }
    return s;
  }

  // Sampled curve: the resolution is the largest step between adjacent phases.
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < probes.size(); ++i)
    if (probes[i]->probe.sign == probes[i + 1]->probe.sign && probes[i]->probe.coordinate == probes[i + 1]->probe.coordinate)
      gap = std::max(gap, std::abs(values[i + 1] - values[i]));
  if (osc_kinds.size() > 1 && !probes.empty()) {
    // Full-circle phases wrap around within each sign group.
    std::size_t start = 0;
    for (std::size_t i = 1; i <= probes.size(); ++i)
      if (i == probes.size() || probes[i]->probe.sign != probes[start]->probe.sign) {
        gap = std::max(gap, std::abs(values[i - 1] - values[start]));
        start = i;
      }
  }
  return SpectralSet::cloud(std::move(values), gap);
}

}  // namespace corona
