#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "corona/fourier.hpp"
#include "corona/kernel.hpp"
#include "corona/quasi_orbit.hpp"
#include "corona/spectral_set.hpp"

namespace corona {

struct SpectraOptions {
  int dual_grid = 4096;
  int pseudo_grid = 256;
  std::size_t bloch_cell_cap = 4096;
  ProbeOptions probe;
};

/// Eigenvalues sorted by (real, imag). Hermitian input takes the banded or
/// dense symmetric path. Throws NonConvergence.
std::vector<cplx> eig_dense(const Eigen::MatrixXcd& m, bool hermitian);
/// Eigenvalues of the interior compression.
std::vector<cplx> eig_dense(const OperatorMatrix& m);
/// Real eigenvalues of a Hermitian band matrix (LAPACK zhbev).
std::vector<double> eig_band_hermitian(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& m);
int bandwidth(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& m);

/// Smallest singular value of (T - z) for upper triangular T, by inverse iteration.
double sigma_min_triangular(const Eigen::MatrixXcd& t, cplx z);

/// {z on the grid : sigma_min(M - z) <= eps} over the interior compression.
/// box = {re_lo, re_hi, im_lo, im_hi}; empty picks a padded bounding box of
/// the eigenvalues. Throws EmptyRegion.
SpectralSet pseudospectrum(const OperatorMatrix& m, double eps, std::optional<std::array<double, 4>> box = {},
                           int grid = 256);

/// Spectrum of a limit kernel whose coefficients are constant or periodic.
/// Throws UnsupportedLimitKernel otherwise.
SpectralSet asymptotic_spectrum(const KernelSymbol& limit, const SpectraOptions& opts = {});

/// Floquet-Bloch reduction over one period cell. Hermitian fibers give one
/// segment per band. Throws IncommensurablePeriods when the cell is too big.
SpectralSet bloch_spectrum(const KernelSymbol& limit, int grid, std::size_t cell_cap = 4096);

/// True when the set provably contains 0: an exact zero point, or a real
/// segment whose endpoints are attained values with opposite signs.
bool certifies_zero(const SpectralSet& s);

struct ProbeRecord {
  std::string probe;
  int orbit_class = 0;
  bool representative = true;
  std::vector<LeafLimit> limits;
  std::string limit_kernel;
  std::string component;
  double resolution = 0.0;
};

struct EssentialSpectrum {
  SpectralSet set;
  std::vector<ProbeRecord> provenance;
  /// Bound on the change of H^omega between adjacent cluster samples.
  double cluster_delta = 0.0;
  std::string note;
};

EssentialSpectrum essential_spectrum(const KernelSymbol& phi, const SpectraOptions& opts = {});

/// Closed-form paths: a (x) phi with slowly oscillating a gives
/// cluster_range(a) * sp(Conv phi); 1 (x) phi + a (x) delta_e gives
/// sp(Conv phi) + cluster_range(a). Empty for other shapes.
std::optional<SpectralSet> formula_spectrum(const KernelSymbol& phi, const SpectraOptions& opts = {});

enum class Verdict { Fredholm, NotFredholm, Inconclusive };
enum class WitnessStatus { Invertible, NotInvertible, Inconclusive };
std::string verdict_name(Verdict v);
std::string witness_name(WitnessStatus s);

struct Witness {
  std::string probe;
  WitnessStatus status = WitnessStatus::Inconclusive;
  double distance_to_zero = 0.0;  // distance from 0 to the computed set
  double margin = 0.0;            // resolution plus cluster discretization
  double lower_bound = 0.0;       // distance_to_zero - margin when invertible
};

struct FredholmCertificate {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Witness> witnesses;
  std::optional<Verdict> closed_form;
  std::string note;
};

FredholmCertificate is_fredholm(const KernelSymbol& phi, const SpectraOptions& opts = {});

struct CrosscheckReport {
  bool decisive = false;
  std::int64_t window = 0;
  double epsilon = 0.0;
  SpectralSet predicted;
  std::vector<cplx> eigenvalues;
  /// sup over the predicted set of the distance to the eigenvalue cloud.
  double containment_distance = 0.0;
  bool contained = false;
  /// Truncation eigenvalues farther than epsilon from the predicted set.
  std::vector<cplx> outliers;
  /// Advisory mode: sigma_min(M - z) at sampled predicted points.
  double max_sigma_min = 0.0;
  std::string note;
};

CrosscheckReport truncation_crosscheck(const KernelSymbol& phi, std::int64_t window, double eps,
                                       const SpectraOptions& opts = {});

}  // namespace corona
