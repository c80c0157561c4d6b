#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corona {

using cplx = std::complex<double>;

/// A point of a concrete discrete group. `coords` holds the lattice part
/// (all Z^n factors concatenated), `indices` one entry per finite factor.
struct Element {
  std::vector<std::int64_t> coords;
  std::vector<int> indices;

  friend auto operator<=>(const Element&, const Element&) = default;
  friend bool operator==(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

std::string to_string(const Element& e);

/// Unitary irreducible representation of a finite group, stored as one
/// d x d matrix per group element.
struct Irrep {
  int dim = 1;
  std::vector<Eigen::MatrixXcd> images;
};

/// Finite group given by its Cayley table. The constructor validates the
/// table (Latin square, identity, inverses, associativity) and, when
/// supplied, the irreducible representations.
class FiniteGroup {
 public:
  FiniteGroup(std::string name, int order, std::vector<int> table,
              std::vector<Irrep> irreps = {});

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  int identity() const { return identity_; }
  int multiply(int a, int b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  int inverse(int a) const { return inverses_[a]; }
  bool is_abelian() const { return abelian_; }
  const std::vector<int>& table() const { return table_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  bool has_dual() const { return !irreps_.empty(); }

 private:
  std::string name_;
  int order_;
  std::vector<int> table_;
  int identity_ = 0;
  std::vector<int> inverses_;
  bool abelian_ = true;
  std::vector<Irrep> irreps_;
};

/// Extends generator images to a full irrep by walking the Cayley graph
/// from the identity. Throws ValidationError if the generators do not
/// generate the group.
Irrep irrep_from_generators(const FiniteGroup& g, const std::vector<int>& generators,
                            const std::vector<Eigen::MatrixXcd>& generator_images);

/// Checks homomorphism, unitarity, irreducibility, pairwise inequivalence
/// and completeness (sum of d^2 equals the order). Throws ValidationError.
void validate_irreps(const FiniteGroup& g, const std::vector<Irrep>& irreps, double tol = 1e-10);

/// Dimension of the commutant of an irrep, i.e. of {X : X rho(g) = rho(g) X}.
int commutant_dimension(const Irrep& rho, double tol = 1e-10);

inline constexpr std::size_t kDefaultWindowCap = std::size_t{1} << 24;

/// Z^n, a finite group, or a product of those (products of products are
/// rejected).
class GroupSpec {
 public:
  enum class Kind { Lattice, Finite, Product };

  struct Factor {
    Kind kind = Kind::Lattice;
    int dimension = 0;
    std::shared_ptr<const FiniteGroup> finite;
    int coord_offset = 0;
    int index_offset = 0;
  };

  static GroupSpec lattice(int dimension);
  static GroupSpec finite(FiniteGroup group);
  static GroupSpec finite(std::shared_ptr<const FiniteGroup> group);
  static GroupSpec product(const std::vector<GroupSpec>& factors);

  Kind kind() const { return kind_; }
  const std::vector<Factor>& factors() const { return factors_; }
  int lattice_rank() const { return lattice_rank_; }
  int finite_factor_count() const { return finite_count_; }
  /// Order of the finite part F in G = Z^n x F (1 if there is none).
  int finite_order() const { return finite_order_; }
  bool is_abelian() const;
  bool is_finite() const { return lattice_rank_ == 0; }
  /// True when every finite factor carries a complete irrep catalog.
  bool has_dual() const;

  Element identity() const;
  bool contains(const Element& x) const;
  void validate(const Element& x) const;

  Element multiply(const Element& x, const Element& y) const;
  Element inverse(const Element& x) const;
  /// Discrete groups are unimodular.
  double modular_function(const Element& x) const;

  /// Box [-radius, radius]^n in lexicographic order times all of F, with
  /// the first factor varying slowest.
  std::vector<Element> enumerate_window(std::int64_t radius,
                                        std::size_t cap = kDefaultWindowCap) const;

  /// Sup-norm of the lattice part.
  static std::int64_t lattice_radius(const Element& x);

  /// Mixed-radix index of the finite part, in [0, finite_order()).
  int finite_flat_index(const Element& x) const;
  std::vector<int> finite_indices(int flat) const;
  int finite_multiply_flat(int a, int b) const;
  int finite_inverse_flat(int a) const;

  Element make(std::vector<std::int64_t> coords, std::vector<int> indices = {}) const;
  /// Index of the factor owning lattice coordinate `coord`.
  int factor_of_coordinate(int coord) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::Lattice;
  std::vector<Factor> factors_;
  int lattice_rank_ = 0;
  int finite_count_ = 0;
  int finite_order_ = 1;
};

}  // namespace corona
