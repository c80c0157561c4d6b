#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corona/coeff.hpp"
#include "corona/spectral_set.hpp"

namespace corona {

struct ProbeOptions {
  int samples = 64;
  int cauchy_window = 8;
  double cauchy_tolerance = 1e-9;
  /// Quadratic probes escape as x_k = round(k^2 * escape_scale) along the axis.
  std::int64_t escape_scale = std::int64_t{1} << 20;
  /// Discretization of the phase circle for oscillating generators.
  int phase_count = 4096;
  /// Phase probes start this many turns out, so rounding jitter stays
  /// below the Cauchy tolerance.
  std::int64_t phase_turns = 400'000'000;
};

/// An escaping sequence along one lattice axis standing in for a point
/// of the corona.
struct Probe {
  int coordinate = 0;         // lattice coordinate the sequence escapes along
  int sign = 1;               // escape direction
  std::optional<double> phase;  // target phase for oscillating generators
  std::int64_t residue = 0;   // samples are congruent to this modulo `modulus`
  std::int64_t modulus = 1;
  std::vector<Element> samples;

  std::string describe() const;
};

struct LeafLimit {
  std::string leaf;  // key of the slowly oscillating leaf
  cplx value;
  double spread = 0.0;  // Cauchy spread over the last window of samples
};

struct QuasiOrbitSpec {
  Probe probe;
  std::vector<LeafLimit> limits;
  /// Probes with equal orbit_class lie on the same quasi-orbit.
  int orbit_class = 0;
  bool representative = true;

  const LeafLimit* find(const std::string& leaf) const;
};

/// Quasi-orbit representatives covering the corona of the algebra generated
/// by the given coefficients. Empty for finite groups (no corona).
std::vector<QuasiOrbitSpec> sufficient_family(const GroupSpec& g, std::span<const CoefficientSymbol> coefficients,
                                              const ProbeOptions& opts = {});
std::vector<QuasiOrbitSpec> sufficient_family(const GroupSpec& g, const CoefficientSymbol& a,
                                              const ProbeOptions& opts = {});

/// Samples a leaf along the probe and applies the Cauchy test; throws
/// DivergentProbe on failure.
LeafLimit probe_limit(const GroupSpec& g, const SlowlyOscillatingNode& leaf, const Probe& probe,
                      const ProbeOptions& opts = {});

/// True when the probe escapes in the coordinates this leaf depends on.
bool probe_moves(const GroupSpec& g, const Probe& probe, const SlowlyOscillatingNode& leaf);

/// The coefficient q -> lim_k a(x_k q): SO leaves collapse to their limits,
/// vanishing leaves to 0, periodic leaves shift by the probe residue.
CoefficientSymbol asymptotic_coefficient(const GroupSpec& g, const CoefficientSymbol& a, const QuasiOrbitSpec& q,
                                         const ProbeOptions& opts = {});

/// Asymptotic range of a slowly oscillating coefficient: exact segments
/// when the limit map is affine in a single oscillating generator, a
/// sampled cloud otherwise. Throws NotSlowlyOscillating.
SpectralSet cluster_range(const GroupSpec& g, const CoefficientSymbol& a, const ProbeOptions& opts = {});

/// Polynomial degree of a in the values of oscillating leaves (0 when none).
int oscillation_degree(const CoefficientSymbol& a);

}  // namespace corona
