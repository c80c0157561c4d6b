#include "corona/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>

#include "corona/errors.hpp"
#include "corona/parallel.hpp"

namespace corona {
namespace {

using SparseRow = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

constexpr std::size_t kDenseLimit = 6000;

void sort_spectrum(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
}

std::int64_t positive_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) { return (a - positive_mod(a, m)) / m; }

}  // namespace

int bandwidth(const SparseRow& m) {
  int bw = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseRow::InnerIterator it(m, k); it; ++it) bw = std::max(bw, std::abs(static_cast<int>(it.col()) - k));
  return bw;
}

std::vector<double> eig_band_hermitian(const SparseRow& m) {
  const auto n = static_cast<lapack_int>(m.rows());
  if (n == 0) return {};
  const lapack_int kd = bandwidth(m);
  const lapack_int ldab = kd + 1;
  std::vector<cplx> ab(static_cast<std::size_t>(ldab) * n, 0.0);
  // Upper band storage, column major: AB(kd + i - j, j) = A(i, j) for i <= j.
  for (int i = 0; i < m.outerSize(); ++i)
    for (SparseRow::InnerIterator it(m, i); it; ++it) {
      const auto j = static_cast<lapack_int>(it.col());
      if (i <= j) ab[static_cast<std::size_t>(j) * ldab + (kd + i - j)] = it.value();
    }
  std::vector<double> w(n);
  const lapack_int info = LAPACKE_zhbev(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), ldab, w.data(), nullptr, 1);
  if (info != 0) throw NonConvergence("zhbev failed with info " + std::to_string(info));
  return w;
}

std::vector<cplx> eig_dense(const Eigen::MatrixXcd& m, bool hermitian) {
  if (m.rows() != m.cols()) throw DimensionMismatch("eigenvalues of a non-square matrix");
  std::vector<cplx> out;
  if (m.rows() == 0) return out;
  if (hermitian) {
    const SparseRow sp = m.sparseView();
    if (m.rows() > 64 && bandwidth(sp) * 8 <= m.rows()) {
      for (double v : eig_band_hermitian(sp)) out.emplace_back(v, 0.0);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) throw NonConvergence("Hermitian eigensolver did not converge");
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.emplace_back(es.eigenvalues()(i), 0.0);
    }
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success) throw NonConvergence("complex eigensolver did not converge");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  }
  sort_spectrum(out);
  return out;
}

std::vector<cplx> eig_dense(const OperatorMatrix& m) {
  const SparseRow inner = m.interior_sparse();
  if (m.hermitian && inner.rows() > 64 && bandwidth(inner) * 8 <= inner.rows()) {
    std::vector<cplx> out;
    for (double v : eig_band_hermitian(inner)) out.emplace_back(v, 0.0);
    sort_spectrum(out);
    return out;
  }
  if (static_cast<std::size_t>(inner.rows()) > kDenseLimit)
    throw ValidationError("interior of size " + std::to_string(inner.rows()) + " is too large for the dense eigensolver");
  return eig_dense(Eigen::MatrixXcd(inner), m.hermitian);
}

double sigma_min_triangular(const Eigen::MatrixXcd& t, cplx z) {
  const auto n = t.rows();
  if (n == 0) return 0.0;
  Eigen::MatrixXcd a = t;
  a.diagonal().array() -= z;
  for (Eigen::Index i = 0; i < n; ++i)
    if (a(i, i) == cplx{}) return 0.0;
  const auto upper = a.triangularView<Eigen::Upper>();
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
  double growth = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    Eigen::VectorXcd y = upper.solve(v);
    const double ny = y.norm();
    if (!std::isfinite(ny)) return 0.0;
    Eigen::VectorXcd x = upper.adjoint().solve(y / ny);
    const double nx = x.norm();
    if (!std::isfinite(nx) || nx == 0.0) return 0.0;
    v = x / nx;
    // ||A^-1 v|| rises monotonically toward 1 / sigma_min.
    if (std::abs(ny - growth) <= 1e-10 * ny) {
      growth = ny;
      break;
    }
    growth = ny;
  }
  return 1.0 / std::max(growth, upper.solve(v).norm());
}

SpectralSet pseudospectrum(const OperatorMatrix& m, double eps, std::optional<std::array<double, 4>> box, int grid) {
  if (!(eps > 0.0)) throw ValidationError("pseudospectrum needs eps > 0");
  if (grid < 2) throw ValidationError("pseudospectrum grid must be at least 2");
  const Eigen::MatrixXcd inner = m.interior_block();
  if (static_cast<std::size_t>(inner.rows()) > kDenseLimit) throw ValidationError("interior too large for a Schur scan");
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(inner);
  if (schur.info() != Eigen::Success) throw NonConvergence("Schur decomposition did not converge");
  const Eigen::MatrixXcd& t = schur.matrixT();
  if (!box) {
    std::array<double, 4> b{0.0, 0.0, 0.0, 0.0};
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const cplx l = t(i, i);
      if (i == 0) b = {l.real(), l.real(), l.imag(), l.imag()};
      b[0] = std::min(b[0], l.real()), b[1] = std::max(b[1], l.real());
      b[2] = std::min(b[2], l.imag()), b[3] = std::max(b[3], l.imag());
    }
    const double pad = std::max({2.0 * eps, 0.1 * (b[1] - b[0]), 0.1 * (b[3] - b[2])});
    box = std::array<double, 4>{b[0] - pad, b[1] + pad, b[2] - pad, b[3] + pad};
  }
  const auto [x0, x1, y0, y1] = *box;
  if (!(x1 > x0) || !(y1 > y0)) throw EmptyRegion("pseudospectrum box is empty");
  const double dx = (x1 - x0) / (grid - 1), dy = (y1 - y0) / (grid - 1);
  const auto total = static_cast<std::size_t>(grid) * grid;
  std::vector<char> inside(total, 0);
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const cplx z(x0 + dx * static_cast<double>(p / grid), y0 + dy * static_cast<double>(p % grid));
      inside[p] = sigma_min_triangular(t, z) <= eps;
    }
  });
  SpectralSet s;
  for (std::size_t p = 0; p < total; ++p)
    if (inside[p]) s.points.emplace_back(x0 + dx * static_cast<double>(p / grid), y0 + dy * static_cast<double>(p % grid));
  s.resolution = 0.5 * std::hypot(dx, dy);
  return s;
}

SpectralSet bloch_spectrum(const KernelSymbol& limit, int grid, std::size_t cell_cap) {
  const auto& g = limit.group();
  const int n = g.lattice_rank();
  const int nf = g.finite_order();
  std::vector<std::int64_t> period(n, 1);
  for (const auto& t : limit.terms()) {
    if (t.coefficient.is_constant()) continue;
    const auto* p = t.coefficient.as<PeriodicNode>();
    if (!p)
      throw UnsupportedLimitKernel("coefficient of class " + class_name(classify(t.coefficient)) +
                                   " survives in the limit kernel: " + key(t.coefficient));
    for (int i = 0; i < n; ++i) period[i] = std::lcm(period[i], p->period[i]);
  }
  std::size_t residues = 1;
  for (auto p : period) {
    residues *= static_cast<std::size_t>(p);
    if (residues * nf > cell_cap) break;
  }
  if (residues * nf > cell_cap)
    throw IncommensurablePeriods("common period cell exceeds " + std::to_string(cell_cap) + " sites");
  const auto cell = static_cast<int>(residues * nf);

  // Cell sites in residue-lexicographic order times F.
  std::vector<Element> sites;
  for (std::size_t r = 0; r < residues; ++r) {
    std::vector<std::int64_t> coords(n);
    std::size_t rest = r;
    for (int i = n - 1; i >= 0; --i) coords[i] = static_cast<std::int64_t>(rest % period[i]), rest /= period[i];
    for (int f = 0; f < nf; ++f) sites.push_back(Element{coords, g.finite_indices(f)});
  }
  auto site_index = [&](const Element& y) {
    std::size_t r = 0;
    for (int i = 0; i < n; ++i) r = r * period[i] + static_cast<std::size_t>(y.coords[i]);
    return static_cast<int>(r * nf + g.finite_flat_index(y));
  };

  struct Entry {
    int row, col;
    std::vector<std::int64_t> k;
    cplx value;
  };
  std::vector<Entry> entries;
  std::vector<double> row_l(cell, 0.0), col_l(cell, 0.0);
  for (int c = 0; c < cell; ++c) {
    const Element& q = sites[c];
    for (const auto& t : limit.terms()) {
      const cplx aq = evaluate(g, t.coefficient, q);
      if (aq == cplx{}) continue;
      for (const auto& [x, v] : t.profile) {
        Element y = g.multiply(g.inverse(x), q);
        std::vector<std::int64_t> k(n);
        double kl1 = 0.0;
        for (int i = 0; i < n; ++i) {
          k[i] = floor_div(y.coords[i], period[i]);
          y.coords[i] = positive_mod(y.coords[i], period[i]);
          kl1 += std::fabs(static_cast<double>(k[i]));
        }
        const int col = site_index(y);
        row_l[c] += std::abs(aq * v) * kl1;
        col_l[col] += std::abs(aq * v) * kl1;
        entries.push_back({c, col, std::move(k), aq * v});
      }
    }
  }

  const int gp = n == 0 ? 1 : grid_per_dimension(grid, n);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(gp);
  std::vector<std::vector<cplx>> spectra(total);
  std::vector<char> hermitian(total, 0);
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    std::vector<double> theta(n);
    for (std::size_t p = begin; p < end; ++p) {
      std::size_t rest = p;
      for (int d = n - 1; d >= 0; --d) theta[d] = 2.0 * std::numbers::pi * static_cast<double>(rest % gp) / gp, rest /= gp;
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(cell, cell);
      for (const auto& e : entries) {
        double phase = 0.0;
        for (int i = 0; i < n; ++i) phase += theta[i] * static_cast<double>(e.k[i]);
        h(e.row, e.col) += e.value * std::polar(1.0, phase);
      }
      const double scale = 1.0 + h.cwiseAbs().maxCoeff();
      hermitian[p] = max_hermitian_defect(h) <= 1e-12 * scale;
      if (hermitian[p]) h = 0.5 * (h + h.adjoint()).eval();
      spectra[p] = eig_dense(h, hermitian[p]);
    }
  });

  SpectralSet s;
  const double lip = std::sqrt(*std::max_element(row_l.begin(), row_l.end()) * *std::max_element(col_l.begin(), col_l.end()));
  s.resolution = n == 0 ? 0.0 : lip * 2.0 * std::numbers::pi / gp;
  if (std::all_of(hermitian.begin(), hermitian.end(), [](char h) { return h != 0; })) {
    // Sorted eigenvalues are continuous in theta, so each band is an interval.
    for (int b = 0; b < cell; ++b) {
      double lo = spectra[0][b].real(), hi = lo;
      for (const auto& sp : spectra) lo = std::min(lo, sp[b].real()), hi = std::max(hi, sp[b].real());
      if (lo == hi)
        s.points.push_back(lo);
      else
        s.segments.push_back({lo, hi});
    }
  } else {
    for (const auto& sp : spectra) s.points.insert(s.points.end(), sp.begin(), sp.end());
  }
  return s;
}

SpectralSet asymptotic_spectrum(const KernelSymbol& limit, const SpectraOptions& opts) {
  const auto k = normalize(limit);
  if (k.empty()) return SpectralSet::point(0.0);
  bool all_constant = true;
  Profile combined;
  for (const auto& t : k.terms()) {
    if (!t.coefficient.is_constant()) {
      all_constant = false;
      if (!t.coefficient.as<PeriodicNode>())
        throw UnsupportedLimitKernel("coefficient of class " + class_name(classify(t.coefficient)) +
                                     " survives in the limit kernel: " + key(t.coefficient));
      continue;
    }
    for (const auto& [x, v] : t.profile) combined[x] += t.coefficient.constant_value() * v;
  }
  if (all_constant && k.group().is_abelian()) return conv_symbol_range(combined, k.group(), opts.dual_grid);
  return bloch_spectrum(k, opts.dual_grid, opts.bloch_cell_cap);
}

bool certifies_zero(const SpectralSet& s) {
  for (auto p : s.points)
    if (p == cplx{}) return true;
  for (const auto& g : s.segments) {
    if (g.a.imag() != 0.0 || g.b.imag() != 0.0) continue;
    if (std::min(g.a.real(), g.b.real()) <= 0.0 && std::max(g.a.real(), g.b.real()) >= 0.0) return true;
  }
  return false;
}

namespace {

std::vector<CoefficientSymbol> coefficients_of(const KernelSymbol& phi) {
  std::vector<CoefficientSymbol> out;
  for (const auto& t : phi.terms()) out.push_back(t.coefficient);
  return out;
}

struct LimitData {
  const QuasiOrbitSpec* spec;
  KernelSymbol kernel;
};

// Largest l1 distance between limit kernels at adjacent cluster samples.
double cluster_delta(const std::vector<LimitData>& limits) {
  double delta = 0.0;
  auto same_run = [](const QuasiOrbitSpec& a, const QuasiOrbitSpec& b) {
    return a.probe.phase && b.probe.phase && a.probe.coordinate == b.probe.coordinate && a.probe.sign == b.probe.sign;
  };
  auto gap = [](const KernelSymbol& a, const KernelSymbol& b) { return add(a, scale(b, -1.0)).l1_majorant(); };
  std::size_t start = 0;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    const bool last_of_run = i + 1 == limits.size() || !same_run(*limits[i].spec, *limits[i + 1].spec);
    if (!last_of_run) {
      delta = std::max(delta, gap(limits[i].kernel, limits[i + 1].kernel));
    } else {
      // Phases that cover the whole circle wrap around.
      const auto& first = *limits[start].spec;
      if (i > start && first.probe.phase && *first.probe.phase == 0.0 && *limits[i].spec->probe.phase > std::numbers::pi)
        delta = std::max(delta, gap(limits[i].kernel, limits[start].kernel));
      start = i + 1;
    }
  }
  return delta;
}

std::vector<LimitData> representative_limits(const KernelSymbol& phi, const std::vector<QuasiOrbitSpec>& family,
                                             const ProbeOptions& opts) {
  std::vector<LimitData> out;
  for (const auto& q : family)
    if (q.representative) out.push_back({&q, limit_kernel(phi, q, opts)});
  return out;
}

}  // namespace

EssentialSpectrum essential_spectrum(const KernelSymbol& phi, const SpectraOptions& opts) {
  EssentialSpectrum out;
  const auto& g = phi.group();
  if (g.is_finite()) {
    out.note = "finite group: l2(G) is finite dimensional, so the essential spectrum is empty";
    return out;
  }
  const auto coeffs = coefficients_of(phi);
  const auto family = sufficient_family(g, coeffs, opts.probe);
  const auto limits = representative_limits(phi, family, opts.probe);
  out.cluster_delta = cluster_delta(limits);

  std::size_t li = 0;
  SpectralSet acc;
  for (const auto& q : family) {
    ProbeRecord rec{q.probe.describe(), q.orbit_class, q.representative, q.limits, {}, {}, 0.0};
    if (q.representative) {
      const auto& lk = limits[li++].kernel;
      rec.limit_kernel = kernel_key(lk);
      auto comp = consolidate(asymptotic_spectrum(lk, opts), 0.0);
      rec.component = summarize(comp);
      rec.resolution = comp.resolution;
      acc = consolidate(set_union(acc, comp), 0.0);
      if (acc.points.size() > (std::size_t{1} << 18)) acc = thin(acc, std::max(acc.resolution, 1e-9) / 2);
    } else {
      rec.component = "same quasi-orbit as the representative of class " + std::to_string(q.orbit_class);
    }
    out.provenance.push_back(std::move(rec));
  }
  acc.resolution += out.cluster_delta;
  out.set = std::move(acc);
  out.note = std::to_string(limits.size()) + " quasi-orbit representatives; union taken without closure";
  return out;
}

std::optional<SpectralSet> formula_spectrum(const KernelSymbol& phi, const SpectraOptions& opts) {
  const auto k = normalize(phi);
  const auto& g = k.group();
  if (k.empty() || !g.is_abelian() || g.is_finite()) return std::nullopt;
  auto is_so = [](const CoefficientSymbol& a) {
    const auto c = classify(a);
    return c == CoefficientClass::Constant || c == CoefficientClass::Vanishing || c == CoefficientClass::SlowlyOscillating;
  };
  for (const auto& t : k.terms())
    if (!is_so(t.coefficient)) return std::nullopt;

  // Product shape: every profile is a multiple of one profile phi.
  const Profile& base = k.terms().front().profile;
  const auto& [x0, v0] = *base.begin();
  std::vector<CoefficientSymbol> parts;
  bool proportional = true;
  for (const auto& t : k.terms()) {
    if (t.profile.size() != base.size()) {
      proportional = false;
      break;
    }
    auto it0 = t.profile.find(x0);
    if (it0 == t.profile.end()) {
      proportional = false;
      break;
    }
    const cplx ratio = it0->second / v0;
    for (const auto& [x, v] : base) {
      auto it = t.profile.find(x);
      if (it == t.profile.end() || std::abs(it->second - ratio * v) > 1e-14 * (std::abs(it->second) + std::abs(v))) {
        proportional = false;
        break;
      }
    }
    if (!proportional) break;
    parts.push_back(scale(g, ratio, t.coefficient));
  }
  if (proportional) {
    const auto a = sum(g, parts);
    return set_product(cluster_range(g, a, opts.probe), conv_symbol_range(base, g, opts.dual_grid));
  }

  // Additive shape: constant-coefficient convolution plus a multiplication operator.
  Profile conv;
  std::vector<CoefficientSymbol> mult;
  const Element e = g.identity();
  for (const auto& t : k.terms()) {
    if (t.coefficient.is_constant()) {
      for (const auto& [x, v] : t.profile) conv[x] += t.coefficient.constant_value() * v;
    } else if (t.profile.size() == 1 && t.profile.begin()->first == e) {
      mult.push_back(scale(g, t.profile.begin()->second, t.coefficient));
    } else {
      return std::nullopt;
    }
  }
  if (conv.empty()) conv[e] = 0.0;
  return set_minkowski_sum(conv_symbol_range(conv, g, opts.dual_grid), cluster_range(g, sum(g, mult), opts.probe));
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Fredholm: return "Fredholm";
    case Verdict::NotFredholm: return "NotFredholm";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string witness_name(WitnessStatus s) {
  switch (s) {
    case WitnessStatus::Invertible: return "invertible";
    case WitnessStatus::NotInvertible: return "not-invertible";
    case WitnessStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Verdict decide(const SpectralSet& s, double margin, Witness* w) {
  const double d0 = s.is_empty() ? std::numeric_limits<double>::infinity() : s.distance_to(0.0);
  WitnessStatus status;
  if (certifies_zero(s))
    status = WitnessStatus::NotInvertible;
  else if (d0 > margin)
    status = WitnessStatus::Invertible;
  else
    status = WitnessStatus::Inconclusive;
  if (w) {
    w->status = status;
    w->distance_to_zero = d0;
    w->margin = margin;
    w->lower_bound = status == WitnessStatus::Invertible ? d0 - margin : 0.0;
  }
  return status == WitnessStatus::Invertible      ? Verdict::Fredholm
         : status == WitnessStatus::NotInvertible ? Verdict::NotFredholm
                                                  : Verdict::Inconclusive;
}

}  // namespace

FredholmCertificate is_fredholm(const KernelSymbol& phi, const SpectraOptions& opts) {
  FredholmCertificate cert;
  const auto& g = phi.group();
  if (g.is_finite()) {
    cert.verdict = Verdict::Fredholm;
    cert.note = "finite group: every operator on l2(G) is Fredholm";
    return cert;
  }
  const auto family = sufficient_family(g, coefficients_of(phi), opts.probe);
  const auto limits = representative_limits(phi, family, opts.probe);
  const double delta = cluster_delta(limits);
  bool any_not = false, any_inconclusive = false;
  for (const auto& l : limits) {
    Witness w;
    w.probe = l.spec->probe.describe();
    const auto s = asymptotic_spectrum(l.kernel, opts);
    const auto v = decide(s, s.resolution + delta, &w);
    any_not = any_not || v == Verdict::NotFredholm;
    any_inconclusive = any_inconclusive || v == Verdict::Inconclusive;
    cert.witnesses.push_back(std::move(w));
  }
  cert.verdict = any_not ? Verdict::NotFredholm : any_inconclusive ? Verdict::Inconclusive : Verdict::Fredholm;

  if (auto f = formula_spectrum(phi, opts)) {
    cert.closed_form = decide(*f, f->resolution, nullptr);
    if (cert.verdict == Verdict::Inconclusive && *cert.closed_form != Verdict::Inconclusive) {
      cert.verdict = *cert.closed_form;
      cert.note = "decided by the closed-form asymptotic range";
    } else if (cert.verdict != Verdict::Inconclusive && *cert.closed_form != Verdict::Inconclusive &&
               *cert.closed_form != cert.verdict) {
      cert.note = "closed-form path disagrees with the quasi-orbit witnesses";
    }
  }
  return cert;
}

CrosscheckReport truncation_crosscheck(const KernelSymbol& phi, std::int64_t window, double eps,
                                       const SpectraOptions& opts) {
  if (!(eps > 0.0)) throw ValidationError("crosscheck needs epsilon > 0");
  CrosscheckReport r;
  r.window = window;
  r.epsilon = eps;
  r.predicted = essential_spectrum(phi, opts).set;
  const auto margin = phi.support_radius();
  const bool self_adjoint = is_self_adjoint(phi);
  if (self_adjoint) {
    const auto m = schrodinger_matrix(phi, window, margin);
    if (m.hermitian) {
      r.decisive = true;
      r.eigenvalues = eig_dense(m);
    }
  }
  if (r.decisive) {
    SpectralSet cloud;
    for (auto l : r.eigenvalues) cloud.points.push_back(l);
    r.containment_distance = directed_distance(r.predicted, cloud);
    r.contained = r.containment_distance <= eps;
    r.note =
        "finite sections can carry spurious or boundary eigenvalues; outliers are listed as discrete or edge "
        "candidates and are not treated as errors";
  } else {
    r.window = std::min<std::int64_t>(window, 60);
    const auto m = schrodinger_matrix(phi, r.window, margin);
    r.eigenvalues = eig_dense(m);
    const Eigen::MatrixXcd inner = m.interior_block();
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(inner);
    const Eigen::MatrixXcd& t = schur.matrixT();
    if (!r.predicted.is_empty()) {
      const auto b = r.predicted.bounding_box();
      const double diam = std::max(std::hypot(b[1] - b[0], b[3] - b[2]), 1e-6);
      auto samples = to_cloud(r.predicted, diam / 64).points;
      if (samples.size() > 256) {
        std::vector<cplx> picked;
        for (std::size_t i = 0; i < 256; ++i) picked.push_back(samples[i * samples.size() / 256]);
        samples = std::move(picked);
      }
      for (auto z : samples) r.max_sigma_min = std::max(r.max_sigma_min, sigma_min_triangular(t, z));
    }
    r.contained = r.max_sigma_min <= eps;
    r.note = self_adjoint ? "advisory mode: truncation is not Hermitian" : "advisory mode: kernel is not self-adjoint";
    r.note += "; predicted points checked against the eps-pseudospectrum of the window of radius " +
              std::to_string(r.window);
  }
  for (auto l : r.eigenvalues)
    if (r.predicted.is_empty() || r.predicted.distance_to(l) > eps) r.outliers.push_back(l);
  return r;
}

}  // namespace corona
