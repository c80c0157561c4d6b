#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "corona/coeff.hpp"
#include "corona/quasi_orbit.hpp"

namespace corona {

using Profile = std::map<Element, cplx>;

struct KernelTerm {
  CoefficientSymbol coefficient;
  Profile profile;
};

inline constexpr std::size_t kDefaultTermCap = 10'000;

/// Band kernel Phi(q; x) = sum_j a_j(q) phi_j(x) with finitely supported phi_j.
class KernelSymbol {
 public:
  explicit KernelSymbol(std::shared_ptr<const GroupSpec> group, std::vector<KernelTerm> terms = {});

  const GroupSpec& group() const { return *group_; }
  const std::shared_ptr<const GroupSpec>& group_ptr() const { return group_; }
  const std::vector<KernelTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Largest sup-norm of the lattice part over all profile supports.
  std::int64_t support_radius() const;
  /// sum_j sup|a_j| * sum_x |phi_j(x)|, an upper bound for the L1 norm.
  double l1_majorant() const;
  cplx evaluate(const Element& q, const Element& x) const;

 private:
  std::shared_ptr<const GroupSpec> group_;
  std::vector<KernelTerm> terms_;
};

/// Canonical form: constant coefficients folded into profiles, terms with
/// equal coefficients merged, zero terms dropped, terms sorted by key.
KernelSymbol normalize(const KernelSymbol& k);

KernelSymbol make_kernel(std::shared_ptr<const GroupSpec> g, const CoefficientSymbol& a, Profile phi);
Profile delta(const Element& x, cplx weight = 1.0);

KernelSymbol add(const KernelSymbol& a, const KernelSymbol& b);
KernelSymbol scale(const KernelSymbol& a, cplx factor);

/// (Phi <> Psi)(q; x) = sum_y Phi(q; y) Psi(y^-1 q; y^-1 x). Throws
/// TermCapExceeded when the normalized result has more than `term_cap` terms.
KernelSymbol diamond(const KernelSymbol& phi, const KernelSymbol& psi, std::size_t term_cap = kDefaultTermCap);
/// Phi^<>(q; x) = conj Phi(x^-1 q; x^-1) (the modular function is 1).
KernelSymbol involution(const KernelSymbol& phi);

std::string kernel_key(const KernelSymbol& k);
bool symbolically_equal(const KernelSymbol& a, const KernelSymbol& b);
bool is_self_adjoint(const KernelSymbol& k);

/// Termwise asymptotic coefficients along a quasi-orbit.
KernelSymbol limit_kernel(const KernelSymbol& phi, const QuasiOrbitSpec& q, const ProbeOptions& opts = {});

/// Finite section of an operator on the window of radius window_radius + margin.
struct OperatorMatrix {
  std::vector<Element> window;
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> entries;
  /// Positions in `window` of the elements with lattice radius <= window_radius.
  std::vector<int> interior;
  bool hermitian = false;

  Eigen::MatrixXcd dense() const;
  Eigen::MatrixXcd interior_block() const;
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> interior_sparse() const;
};

/// M[q, y] = Phi(q; q y^-1). Throws MarginTooSmall if margin < support_radius().
OperatorMatrix schrodinger_matrix(const KernelSymbol& phi, std::int64_t window_radius, std::int64_t margin);
OperatorMatrix conv_matrix(const GroupSpec& g, const Profile& phi, std::int64_t window_radius, std::int64_t margin);
/// Multiplication operator by a on the same window layout.
OperatorMatrix mult_matrix(const GroupSpec& g, const CoefficientSymbol& a, std::int64_t window_radius, std::int64_t margin);

double max_hermitian_defect(const Eigen::MatrixXcd& m);

}  // namespace corona
