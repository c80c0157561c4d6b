#include "corona/fourier.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "corona/errors.hpp"
#include "corona/parallel.hpp"

namespace corona {
namespace {

using Eigen::MatrixXcd;

// Enumerates integer vectors in [0, grid)^n, last coordinate fastest.
template <class F>
void for_each_grid_point(int n, int grid, F&& f) {
  std::vector<int> idx(n, 0);
  while (true) {
    f(idx);
    int d = n - 1;
    while (d >= 0 && ++idx[d] == grid) idx[d--] = 0;
    if (d < 0) break;
  }
}

std::vector<double> grid_theta(const std::vector<int>& idx, int grid) {
  std::vector<double> theta(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) theta[i] = 2.0 * std::numbers::pi * idx[i] / grid;
  return theta;
}

}  // namespace

DualData dual_of(const GroupSpec& g) {
  DualData dual;
  dual.torus_dim = g.lattice_rank();
  dual.finite_order = g.finite_order();
  DualIrrep trivial;
  trivial.images.assign(1, MatrixXcd::Identity(1, 1));
  std::vector<DualIrrep> current{trivial};
  int order_so_far = 1;
  for (const auto& f : g.factors()) {
    if (f.kind != GroupSpec::Kind::Finite) continue;
    if (!f.finite->has_dual()) throw ValidationError("finite factor " + f.finite->name() + " has no irrep catalog");
    const int m = f.finite->order();
    std::vector<DualIrrep> next;
    for (const auto& a : current)
      for (const auto& b : f.finite->irreps()) {
        DualIrrep t;
        t.dim = a.dim * b.dim;
        t.images.resize(static_cast<std::size_t>(order_so_far) * m);
        // Mixed radix with the earlier factors slower.
        for (int i = 0; i < order_so_far; ++i)
          for (int j = 0; j < m; ++j) {
            const auto& A = a.images[i];
            const auto& B = b.images[j];
            MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
            for (Eigen::Index r = 0; r < A.rows(); ++r)
              for (Eigen::Index c = 0; c < A.cols(); ++c)
                K.block(r * B.rows(), c * B.cols(), B.rows(), B.cols()) = A(r, c) * B;
            t.images[static_cast<std::size_t>(i) * m + j] = std::move(K);
          }
        next.push_back(std::move(t));
      }
    current = std::move(next);
    order_so_far *= m;
  }
  for (auto& r : current) r.weight = static_cast<double>(r.dim) / order_so_far;
  dual.irreps = std::move(current);
  return dual;
}

void validate_dual(const GroupSpec& g, const DualData& dual, double tol) {
  const int n = g.finite_order();
  if (dual.finite_order != n || dual.torus_dim != g.lattice_rank())
    throw DimensionMismatch("dual data does not match group " + g.describe());
  int sum_d2 = 0;
  for (std::size_t r = 0; r < dual.irreps.size(); ++r) {
    const auto& xi = dual.irreps[r];
    if (static_cast<int>(xi.images.size()) != n) throw ValidationError("irrep " + std::to_string(r) + " is incomplete");
    sum_d2 += xi.dim * xi.dim;
    const MatrixXcd id = MatrixXcd::Identity(xi.dim, xi.dim);
    for (int a = 0; a < n; ++a) {
      if ((xi.images[a] * xi.images[a].adjoint() - id).cwiseAbs().maxCoeff() > tol)
        throw ValidationError("irrep " + std::to_string(r) + " is not unitary");
      for (int b = 0; b < n; ++b)
        if ((xi.images[a] * xi.images[b] - xi.images[g.finite_multiply_flat(a, b)]).cwiseAbs().maxCoeff() > tol)
          throw ValidationError("irrep " + std::to_string(r) + " is not a homomorphism");
    }
    if (commutant_dimension(Irrep{xi.dim, xi.images}, tol) != 1)
      throw ValidationError("irrep " + std::to_string(r) + " is reducible");
    // Character orthogonality gives inequivalence.
    for (std::size_t s = 0; s < r; ++s) {
      cplx inner = 0.0;
      for (int a = 0; a < n; ++a) inner += xi.images[a].trace() * std::conj(dual.irreps[s].images[a].trace());
      if (std::abs(inner) / n > 1e-8) throw ValidationError("irreps " + std::to_string(s) + " and " + std::to_string(r) + " are equivalent");
    }
  }
  if (sum_d2 != n) throw ValidationError("irrep dimensions do not satisfy sum d^2 = |F|");
}

std::vector<MatrixXcd> OperatorField::at(const DualData& dual, const std::vector<double>& theta) const {
  std::vector<MatrixXcd> out;
  for (const auto& xi : dual.irreps) out.push_back(MatrixXcd::Zero(xi.dim, xi.dim));
  for (const auto& [k, mats] : coefficients) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += static_cast<double>(k[i]) * theta[i];
    const cplx e = std::polar(1.0, phase);
    for (std::size_t r = 0; r < mats.size(); ++r) out[r] += e * mats[r];
  }
  return out;
}

OperatorField fourier(const GroupSpec& g, const DualData& dual, const Profile& u) {
  if (dual.torus_dim != g.lattice_rank() || dual.finite_order != g.finite_order())
    throw DimensionMismatch("dual data does not match group " + g.describe());
  OperatorField f;
  for (const auto& [x, v] : u) {
    g.validate(x);
    std::vector<std::int64_t> k(x.coords.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = -x.coords[i];
    auto [it, fresh] = f.coefficients.try_emplace(k);
    if (fresh)
      for (const auto& xi : dual.irreps) it->second.push_back(MatrixXcd::Zero(xi.dim, xi.dim));
    const int flat = g.finite_flat_index(x);
    for (std::size_t r = 0; r < dual.irreps.size(); ++r) it->second[r] += v * dual.irreps[r].images[flat].adjoint();
  }
  return f;
}

double plancherel_norm(const DualData& dual, const OperatorField& f) {
  double s = 0.0;
  for (const auto& [k, mats] : f.coefficients)
    for (std::size_t r = 0; r < mats.size(); ++r) s += dual.irreps[r].weight * mats[r].squaredNorm();
  return s;
}

double plancherel_norm_grid(const DualData& dual, const OperatorField& f, int grid) {
  const int n = dual.torus_dim;
  double s = 0.0;
  std::size_t count = 0;
  for_each_grid_point(n, grid, [&](const std::vector<int>& idx) {
    const auto vals = f.at(dual, grid_theta(idx, grid));
    for (std::size_t r = 0; r < vals.size(); ++r) s += dual.irreps[r].weight * vals[r].squaredNorm();
    ++count;
  });
  return s / static_cast<double>(count);
}

SymbolField partial_fourier(const KernelSymbol& phi, const DualData& dual) {
  SymbolField f{phi.group_ptr(), {}};
  for (const auto& t : phi.terms()) f.terms.push_back({t.coefficient, fourier(phi.group(), dual, t.profile)});
  return f;
}

OperatorMatrix op_quantize(const SymbolField& f, const DualData& dual, std::int64_t window_radius,
                           std::int64_t margin) {
  const auto& g = *f.group;
  const int nf = g.finite_order();
  std::int64_t reach = 0;
  // table[k][h] = sum_xi w_xi Tr[xi(h) c_k(xi)] for every term.
  struct Lowered {
    const CoefficientSymbol* coefficient;
    std::vector<std::pair<std::vector<std::int64_t>, std::vector<cplx>>> table;
  };
  std::vector<Lowered> lowered;
  for (const auto& t : f.terms) {
    Lowered l{&t.coefficient, {}};
    for (const auto& [k, mats] : t.field.coefficients) {
      for (auto c : k) reach = std::max<std::int64_t>(reach, std::llabs(c));
      std::vector<cplx> row(nf, 0.0);
      for (int h = 0; h < nf; ++h)
        for (std::size_t r = 0; r < mats.size(); ++r)
          row[h] += dual.irreps[r].weight * (dual.irreps[r].images[h] * mats[r]).trace();
      l.table.emplace_back(k, std::move(row));
    }
    lowered.push_back(std::move(l));
  }
  if (margin < reach)
    throw MarginTooSmall("margin " + std::to_string(margin) + " is below the symbol degree " + std::to_string(reach));

  OperatorMatrix m;
  m.window = g.enumerate_window(window_radius + margin);
  std::unordered_map<Element, int, ElementHash> index;
  for (std::size_t i = 0; i < m.window.size(); ++i) {
    index.emplace(m.window[i], static_cast<int>(i));
    if (GroupSpec::lattice_radius(m.window[i]) <= window_radius) m.interior.push_back(static_cast<int>(i));
  }
  std::vector<std::vector<Eigen::Triplet<cplx>>> rows(m.window.size());
  parallel_for(m.window.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Element& x = m.window[i];
      const int fx = g.finite_flat_index(x);
      for (const auto& l : lowered) {
        const cplx ax = evaluate(g, *l.coefficient, x);
        if (ax == cplx{}) continue;
        for (const auto& [k, row] : l.table) {
          // The torus integral keeps frequency k = -(n_x - n_y), i.e. n_y = n_x + k.
          Element y = x;
          for (std::size_t c = 0; c < k.size(); ++c) y.coords[c] += k[c];
          for (int fy = 0; fy < nf; ++fy) {
            const auto idx = g.finite_indices(fy);
            y.indices = idx;
            auto it = index.find(y);
            if (it == index.end()) continue;
            const cplx v = ax * row[g.finite_multiply_flat(fx, g.finite_inverse_flat(fy))];
            if (v != cplx{}) rows[i].emplace_back(static_cast<int>(i), it->second, v);
          }
        }
      }
    }
  });
  std::vector<Eigen::Triplet<cplx>> trips;
  for (auto& r : rows) trips.insert(trips.end(), r.begin(), r.end());
  const auto n = static_cast<Eigen::Index>(m.window.size());
  m.entries.resize(n, n);
  m.entries.setFromTriplets(trips.begin(), trips.end());
  m.entries.makeCompressed();
  const Eigen::MatrixXcd interior = m.interior_block();
  m.hermitian = interior.size() == 0 || max_hermitian_defect(interior) < 1e-12;
  return m;
}

int grid_per_dimension(int grid, int torus_dim) {
  if (torus_dim <= 1) return grid;
  const int cap = static_cast<int>(std::floor(std::pow(double(1 << 20), 1.0 / torus_dim)));
  return std::max(4, std::min(grid, cap));
}

SpectralSet conv_symbol_range(const Profile& phi, const GroupSpec& g, int grid) {
  if (!g.is_abelian())
    throw NonAbelianGroup("symbol range needs an abelian group; " + g.describe() + " is not (use the Bloch path)");
  if (grid < 1) throw ValidationError("dual grid must be positive");
  const auto dual = dual_of(g);
  const int n = dual.torus_dim;
  const auto field = fourier(g, dual, phi);
  SpectralSet out;

  if (n == 0) {
    for (const auto& v : field.at(dual, {})) out.points.push_back(v(0, 0));
    return out;
  }
  const int gp = grid_per_dimension(grid, n);
  double lipschitz = 0.0;
  for (const auto& [x, v] : phi) {
    double l1 = 0.0;
    for (auto c : x.coords) l1 += std::fabs(static_cast<double>(c));
    lipschitz += l1 * std::abs(v);
  }
  out.resolution = lipschitz * 2.0 * std::numbers::pi / gp;

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(gp);
  const std::size_t nchar = dual.irreps.size();
  std::vector<cplx> values(total * nchar);
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    std::vector<int> idx(n);
    for (std::size_t p = begin; p < end; ++p) {
      std::size_t rest = p;
      for (int d = n - 1; d >= 0; --d) idx[d] = static_cast<int>(rest % gp), rest /= gp;
      const auto vals = field.at(dual, grid_theta(idx, gp));
      for (std::size_t r = 0; r < nchar; ++r) values[r * total + p] = vals[r](0, 0);
    }
  });
  for (std::size_t r = 0; r < nchar; ++r) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(r * total);
    const auto last = first + static_cast<std::ptrdiff_t>(total);
    double scale = 0.0, max_im = 0.0;
    for (auto it = first; it != last; ++it) scale = std::max(scale, std::abs(*it)), max_im = std::max(max_im, std::abs(it->imag()));
    if (max_im <= 1e-12 * (1.0 + scale)) {
      // A real continuous function on the connected torus has an interval range.
      double lo = first->real(), hi = first->real();
      for (auto it = first; it != last; ++it) lo = std::min(lo, it->real()), hi = std::max(hi, it->real());
      if (lo == hi)
        out.points.push_back(lo);
      else
        out.segments.push_back({lo, hi});
    } else {
      out.points.insert(out.points.end(), first, last);
    }
  }
  return out;
}

}  // namespace corona
