#include "corona/kernel.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "corona/errors.hpp"
#include "corona/parallel.hpp"

namespace corona {
namespace {

std::string num(cplx v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.real() == 0.0 ? 0.0 : v.real(), v.imag() == 0.0 ? 0.0 : v.imag());
  return buf;
}

void accumulate(Profile& into, const Profile& from, cplx factor) {
  for (const auto& [x, v] : from) into[x] += factor * v;
}

// Splits sums into separate terms and folds scalars into the profile.
void expand_term(const GroupSpec& g, const CoefficientSymbol& a, const Profile& phi, cplx factor,
                 std::vector<KernelTerm>& out) {
  if (auto c = a.as<ConstantNode>()) {
    if (c->value != cplx{}) out.push_back({constant(1.0), {}}), accumulate(out.back().profile, phi, factor * c->value);
    return;
  }
  if (auto s = a.as<ScaleNode>()) return expand_term(g, s->child, phi, factor * s->factor, out);
  if (auto s = a.as<SumNode>()) {
    for (const auto& t : s->terms) expand_term(g, t, phi, factor, out);
    return;
  }
  out.push_back({a, {}});
  accumulate(out.back().profile, phi, factor);
}

}  // namespace

KernelSymbol::KernelSymbol(std::shared_ptr<const GroupSpec> group, std::vector<KernelTerm> terms)
    : group_(std::move(group)), terms_(std::move(terms)) {
  if (!group_) throw ValidationError("kernel without a group");
  for (const auto& t : terms_) {
    validate_symbol(*group_, t.coefficient);
    for (const auto& [x, v] : t.profile) group_->validate(x);
  }
}

std::int64_t KernelSymbol::support_radius() const {
  std::int64_t r = 0;
  for (const auto& t : terms_)
    for (const auto& [x, v] : t.profile) r = std::max(r, GroupSpec::lattice_radius(x));
  return r;
}

double KernelSymbol::l1_majorant() const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double p = 0.0;
    for (const auto& [x, v] : t.profile) p += std::abs(v);
    s += sup_bound(t.coefficient) * p;
  }
  return s;
}

cplx KernelSymbol::evaluate(const Element& q, const Element& x) const {
  cplx s = 0.0;
  for (const auto& t : terms_) {
    auto it = t.profile.find(x);
    if (it != t.profile.end()) s += corona::evaluate(*group_, t.coefficient, q) * it->second;
  }
  return s;
}

KernelSymbol normalize(const KernelSymbol& k) {
  const auto& g = k.group();
  std::vector<KernelTerm> expanded;
  for (const auto& t : k.terms()) expand_term(g, t.coefficient, t.profile, 1.0, expanded);
  std::map<std::string, KernelTerm> merged;
  for (auto& t : expanded) {
    auto [it, inserted] = merged.try_emplace(key(t.coefficient), KernelTerm{t.coefficient, {}});
    accumulate(it->second.profile, t.profile, 1.0);
  }
  std::vector<KernelTerm> terms;
  for (auto& [k2, t] : merged) {
    for (auto it = t.profile.begin(); it != t.profile.end();) it = it->second == cplx{} ? t.profile.erase(it) : std::next(it);
    if (!t.profile.empty()) terms.push_back(std::move(t));
  }
  return KernelSymbol(k.group_ptr(), std::move(terms));
}

Profile delta(const Element& x, cplx weight) { return Profile{{x, weight}}; }

KernelSymbol make_kernel(std::shared_ptr<const GroupSpec> g, const CoefficientSymbol& a, Profile phi) {
  return normalize(KernelSymbol(std::move(g), {KernelTerm{a, std::move(phi)}}));
}

KernelSymbol add(const KernelSymbol& a, const KernelSymbol& b) {
  if (a.group().describe() != b.group().describe()) throw DimensionMismatch("kernels live on different groups");
  auto terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return normalize(KernelSymbol(a.group_ptr(), std::move(terms)));
}

KernelSymbol scale(const KernelSymbol& a, cplx factor) {
  auto terms = a.terms();
  for (auto& t : terms)
    for (auto& [x, v] : t.profile) v *= factor;
  return normalize(KernelSymbol(a.group_ptr(), std::move(terms)));
}

KernelSymbol diamond(const KernelSymbol& phi, const KernelSymbol& psi, std::size_t term_cap) {
  if (phi.group().describe() != psi.group().describe()) throw DimensionMismatch("kernels live on different groups");
  const auto& g = phi.group();
  std::vector<KernelTerm> terms;
  for (const auto& a : phi.terms())
    for (const auto& [y, phi_y] : a.profile)
      for (const auto& b : psi.terms()) {
        KernelTerm t{product(g, {a.coefficient, translate(g, b.coefficient, y)}), {}};
        for (const auto& [z, psi_z] : b.profile) t.profile[g.multiply(y, z)] += phi_y * psi_z;
        terms.push_back(std::move(t));
      }
  auto out = normalize(KernelSymbol(phi.group_ptr(), std::move(terms)));
  if (out.terms().size() > term_cap)
    throw TermCapExceeded("diamond product has " + std::to_string(out.terms().size()) + " terms, cap is " +
                          std::to_string(term_cap));
  return out;
}

KernelSymbol involution(const KernelSymbol& phi) {
  const auto& g = phi.group();
  std::vector<KernelTerm> terms;
  for (const auto& t : phi.terms()) {
    const auto ca = conjugate(g, t.coefficient);
    for (const auto& [y, v] : t.profile) {
      const Element x = g.inverse(y);
      terms.push_back({translate(g, ca, x), delta(x, std::conj(v) / g.modular_function(x))});
    }
  }
  return normalize(KernelSymbol(phi.group_ptr(), std::move(terms)));
}

std::string kernel_key(const KernelSymbol& k) {
  const auto n = normalize(k);
  std::string s;
  for (const auto& t : n.terms()) {
    s += key(t.coefficient) + "<x>{";
    for (const auto& [x, v] : t.profile) s += to_string(x) + ":" + num(v) + ";";
    s += "}\n";
  }
  return s;
}

bool symbolically_equal(const KernelSymbol& a, const KernelSymbol& b) { return kernel_key(a) == kernel_key(b); }

bool is_self_adjoint(const KernelSymbol& k) { return symbolically_equal(k, involution(k)); }

KernelSymbol limit_kernel(const KernelSymbol& phi, const QuasiOrbitSpec& q, const ProbeOptions& opts) {
  std::vector<KernelTerm> terms;
  for (const auto& t : phi.terms())
    terms.push_back({asymptotic_coefficient(phi.group(), t.coefficient, q, opts), t.profile});
  return normalize(KernelSymbol(phi.group_ptr(), std::move(terms)));
}

Eigen::MatrixXcd OperatorMatrix::dense() const { return Eigen::MatrixXcd(entries); }

Eigen::SparseMatrix<cplx, Eigen::RowMajor> OperatorMatrix::interior_sparse() const {
  std::vector<int> pos(window.size(), -1);
  for (std::size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int i : interior)
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(entries, i); it; ++it)
      if (pos[it.col()] >= 0) trips.emplace_back(pos[i], pos[it.col()], it.value());
  const auto n = static_cast<Eigen::Index>(interior.size());
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::MatrixXcd OperatorMatrix::interior_block() const { return Eigen::MatrixXcd(interior_sparse()); }

double max_hermitian_defect(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

double sparse_hermitian_defect(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& m) {
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> d = m - Eigen::SparseMatrix<cplx, Eigen::RowMajor>(m.adjoint());
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(d, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

struct WindowLayout {
  std::vector<Element> window;
  std::unordered_map<Element, int, ElementHash> index;
  std::vector<int> interior;
};

WindowLayout layout(const GroupSpec& g, std::int64_t window_radius, std::int64_t margin) {
  WindowLayout w;
  w.window = g.enumerate_window(window_radius + margin);
  w.index.reserve(w.window.size());
  for (std::size_t i = 0; i < w.window.size(); ++i) {
    w.index.emplace(w.window[i], static_cast<int>(i));
    if (GroupSpec::lattice_radius(w.window[i]) <= window_radius) w.interior.push_back(static_cast<int>(i));
  }
  return w;
}

OperatorMatrix finish(WindowLayout w, std::vector<std::vector<Eigen::Triplet<cplx>>>& rows) {
  OperatorMatrix m;
  const auto n = static_cast<Eigen::Index>(w.window.size());
  std::vector<Eigen::Triplet<cplx>> trips;
  for (auto& r : rows) trips.insert(trips.end(), r.begin(), r.end());
  m.entries.resize(n, n);
  m.entries.setFromTriplets(trips.begin(), trips.end());
  m.entries.makeCompressed();
  m.window = std::move(w.window);
  m.interior = std::move(w.interior);
  m.hermitian = sparse_hermitian_defect(m.interior_sparse()) < 1e-12;
  return m;
}

}  // namespace

OperatorMatrix schrodinger_matrix(const KernelSymbol& phi, std::int64_t window_radius, std::int64_t margin) {
  if (window_radius < 0) throw ValidationError("window radius must be non-negative");
  if (margin < phi.support_radius())
    throw MarginTooSmall("margin " + std::to_string(margin) + " is below the kernel support radius " +
                         std::to_string(phi.support_radius()));
  const auto& g = phi.group();
  auto w = layout(g, window_radius, margin);
  // M[q, y] = Phi(q; x) with y = x^-1 q.
  std::vector<std::vector<Eigen::Triplet<cplx>>> rows(w.window.size());
  parallel_for(w.window.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Element& q = w.window[i];
      for (const auto& t : phi.terms()) {
        const cplx aq = corona::evaluate(g, t.coefficient, q);
        if (aq == cplx{}) continue;
        for (const auto& [x, v] : t.profile) {
          auto it = w.index.find(g.multiply(g.inverse(x), q));
          if (it != w.index.end()) rows[i].emplace_back(static_cast<int>(i), it->second, aq * v);
        }
      }
    }
  });
  return finish(std::move(w), rows);
}

OperatorMatrix conv_matrix(const GroupSpec& g, const Profile& phi, std::int64_t window_radius, std::int64_t margin) {
  auto gp = std::make_shared<const GroupSpec>(g);
  return schrodinger_matrix(KernelSymbol(gp, {KernelTerm{constant(1.0), phi}}), window_radius, margin);
}

OperatorMatrix mult_matrix(const GroupSpec& g, const CoefficientSymbol& a, std::int64_t window_radius,
                           std::int64_t margin) {
  auto gp = std::make_shared<const GroupSpec>(g);
  return schrodinger_matrix(KernelSymbol(gp, {KernelTerm{a, delta(g.identity())}}), window_radius, margin);
}

}  // namespace corona
