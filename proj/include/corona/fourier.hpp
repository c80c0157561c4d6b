#pragma once

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "corona/kernel.hpp"
#include "corona/spectral_set.hpp"

namespace corona {

/// Unitary dual of G = Z^n x F: the torus T^n times the irreps of F.
struct DualIrrep {
  int dim = 1;
  std::vector<Eigen::MatrixXcd> images;  // indexed by the flat finite index
  double weight = 1.0;                   // Plancherel weight d / |F|
};

struct DualData {
  int torus_dim = 0;
  int finite_order = 1;
  std::vector<DualIrrep> irreps;
};

/// Tensor products of the factor catalogs. Throws ValidationError when a
/// finite factor has no irreps.
DualData dual_of(const GroupSpec& g);
/// Homomorphism, unitarity, irreducibility, inequivalence and completeness.
void validate_dual(const GroupSpec& g, const DualData& dual, double tol = 1e-10);

/// Trigonometric polynomial in theta with per-irrep matrix coefficients:
/// F(theta, xi) = sum_k coefficients[k][xi] exp(i k . theta).
struct OperatorField {
  std::map<std::vector<std::int64_t>, std::vector<Eigen::MatrixXcd>> coefficients;

  std::vector<Eigen::MatrixXcd> at(const DualData& dual, const std::vector<double>& theta) const;
};

/// u^(xi) = sum_x u(x) xi(x)^*; the lattice part lands on frequency -n.
OperatorField fourier(const GroupSpec& g, const DualData& dual, const Profile& u);

/// sum_xi w_xi integral |F(theta, xi)|_HS^2, integrated exactly through the
/// trigonometric coefficients.
double plancherel_norm(const DualData& dual, const OperatorField& f);
/// The same integral by the rectangle rule on a grid^n torus grid.
double plancherel_norm_grid(const DualData& dual, const OperatorField& f, int grid);

struct SymbolTerm {
  CoefficientSymbol coefficient;
  OperatorField field;
};

/// f(x, xi) = sum_j a_j(x) F_j(xi), the partial Fourier transform of a kernel.
struct SymbolField {
  std::shared_ptr<const GroupSpec> group;
  std::vector<SymbolTerm> terms;
};

SymbolField partial_fourier(const KernelSymbol& phi, const DualData& dual);

/// [Op(f)]_{x,y} = sum_xi w_xi Tr[xi(x y^-1) f(x, xi)] with the torus integral
/// taken exactly from the trigonometric coefficients.
OperatorMatrix op_quantize(const SymbolField& f, const DualData& dual, std::int64_t window_radius,
                           std::int64_t margin);

/// Range of the symbol of Conv(phi) on an abelian group. Real symbols come
/// back as one segment [min, max] of sampled values per character; complex
/// ones as the sampled cloud. resolution = L h with L = sum_x |x|_1 |phi(x)|
/// and h = 2 pi / grid. Throws NonAbelianGroup.
SpectralSet conv_symbol_range(const Profile& phi, const GroupSpec& g, int grid);

/// Grid size per torus dimension used for n-dimensional scans: `grid` for
/// n = 1, reduced so that the total stays near 2^20 points otherwise.
int grid_per_dimension(int grid, int torus_dim);

}  // namespace corona
