#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corona/group.hpp"

namespace corona {

/// Catalog of audited slowly oscillating generators. Each acts on one
/// scalar t(x): the coordinate of a Z^1 factor, or the Euclidean norm of
/// the whole lattice part (radial mode).
enum class SoGenerator {
  SinSqrt,  // sin(sqrt(|t| / s)), cluster set [-1, 1]
  CosSqrt,  // cos(sqrt(|t| / s)), cluster set [-1, 1]
  Arctan,   // arctan(t / s), limits -pi/2 and pi/2
  Tanh,     // tanh(t / s), limits -1 and 1
};

std::string so_generator_name(SoGenerator g);
SoGenerator so_generator_from_name(const std::string& name);
/// Generators whose cluster values depend on an oscillation phase.
bool so_is_oscillating(SoGenerator g);
/// Generators whose limit depends on the escape direction along a Z^1 axis.
bool so_is_sign_sensitive(SoGenerator g);

/// Ordered from the smallest algebra upward: C ⊂ C0 + C ⊂ SO, C ⊂ Periodic,
/// and Periodic·SO spans the largest supported class.
enum class CoefficientClass { Constant, Vanishing, SlowlyOscillating, Periodic, PeriodicSlowlyOscillating };
std::string class_name(CoefficientClass c);

class CoefficientSymbol;

struct ConstantNode {
  cplx value;
};
/// Finitely supported table, or amplitude * exp(-rate * |n|_1) on the lattice part.
struct VanishingNode {
  std::map<Element, cplx> table;
  std::optional<std::pair<cplx, double>> decay;
};
struct SlowlyOscillatingNode {
  SoGenerator generator;
  int factor;  // -1 for radial
  double scale;
};
/// Periodic in the lattice part with the given period vector, arbitrary on F.
/// values[residue_flat * |F| + finite_flat], residues lexicographic with the
/// last coordinate fastest.
struct PeriodicNode {
  std::vector<std::int64_t> period;
  std::vector<cplx> values;
};
/// Left translate l_y(c)(x) = c(y^-1 x); only wraps leaves without a table.
struct TranslateNode;
struct SumNode;
struct ProductNode;
struct ScaleNode;

/// Immutable expression tree over the coefficient algebra. Composite nodes
/// are built through the group-aware constructors below, which keep the
/// tree in a simplified canonical form.
class CoefficientSymbol {
 public:
  using Node = std::variant<ConstantNode, VanishingNode, SlowlyOscillatingNode, PeriodicNode, TranslateNode,
                            SumNode, ProductNode, ScaleNode>;

  CoefficientSymbol();
  explicit CoefficientSymbol(Node node);

  const Node& node() const;
  template <class T>
  const T* as() const;
  bool is_constant() const;
  cplx constant_value() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct TranslateNode {
  Element shift;
  CoefficientSymbol child;
};
struct SumNode {
  std::vector<CoefficientSymbol> terms;
};
struct ProductNode {
  std::vector<CoefficientSymbol> factors;
};
struct ScaleNode {
  cplx factor;
  CoefficientSymbol child;
};

inline const CoefficientSymbol::Node& CoefficientSymbol::node() const { return *node_; }
template <class T>
const T* CoefficientSymbol::as() const {
  return std::get_if<T>(node_.get());
}
inline bool CoefficientSymbol::is_constant() const { return as<ConstantNode>() != nullptr; }

// Leaves.
CoefficientSymbol constant(cplx c);
CoefficientSymbol vanishing(const GroupSpec& g, std::map<Element, cplx> table);
CoefficientSymbol vanishing_decay(cplx amplitude, double rate);
CoefficientSymbol slowly_oscillating(const GroupSpec& g, SoGenerator gen, int factor, double scale = 1.0);
CoefficientSymbol periodic(const GroupSpec& g, std::vector<std::int64_t> period, std::vector<cplx> values);

// Simplifying constructors.
CoefficientSymbol sum(const GroupSpec& g, std::vector<CoefficientSymbol> terms);
CoefficientSymbol product(const GroupSpec& g, std::vector<CoefficientSymbol> factors);
CoefficientSymbol scale(const GroupSpec& g, cplx factor, const CoefficientSymbol& a);
CoefficientSymbol conjugate(const GroupSpec& g, const CoefficientSymbol& a);

/// Pointwise value a(q).
cplx evaluate(const GroupSpec& g, const CoefficientSymbol& a, const Element& q);

/// l_y(a), so that evaluate(translate(a, y), q) == evaluate(a, y^-1 q).
CoefficientSymbol translate(const GroupSpec& g, const CoefficientSymbol& a, const Element& y);

CoefficientClass classify(const CoefficientSymbol& a);

/// Upper bound for sup_q |a(q)|.
double sup_bound(const CoefficientSymbol& a);

/// Deterministic textual form; equal keys mean equal symbols.
std::string key(const CoefficientSymbol& a);
bool same_symbol(const CoefficientSymbol& a, const CoefficientSymbol& b);
std::string key(const SlowlyOscillatingNode& leaf);

/// Distinct slowly oscillating leaves (translates collapse onto their leaf).
std::vector<SlowlyOscillatingNode> so_leaves(const CoefficientSymbol& a);
std::vector<PeriodicNode> periodic_leaves(const CoefficientSymbol& a);

/// Checks |a(x + y) - a(x)| -> 0 on growing annuli for unit steps y.
struct OscillationCheck {
  std::vector<double> radii;
  std::vector<double> max_increment;
  bool passed = false;
};
OscillationCheck check_slowly_oscillating(const GroupSpec& g, const SlowlyOscillatingNode& leaf);

/// Validates factor references and table shapes against the group.
void validate_symbol(const GroupSpec& g, const CoefficientSymbol& a);

}  // namespace corona
