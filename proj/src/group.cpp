#include "corona/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "corona/errors.hpp"

namespace corona {

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto c : e.coords) mix(static_cast<std::uint64_t>(c));
  mix(0xfeedu);
  for (auto i : e.indices) mix(static_cast<std::uint64_t>(i));
  return h;
}

std::string to_string(const Element& e) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e.coords.size(); ++i) os << (i ? "," : "") << e.coords[i];
  if (!e.indices.empty()) {
    os << (e.coords.empty() ? "" : ";") << 'f';
    for (std::size_t i = 0; i < e.indices.size(); ++i) os << (i ? "," : "") << e.indices[i];
  }
  os << ')';
  return os.str();
}

FiniteGroup::FiniteGroup(std::string name, int order, std::vector<int> table,
                         std::vector<Irrep> irreps)
    : name_(std::move(name)), order_(order), table_(std::move(table)) {
  if (order_ <= 0) throw ValidationError("finite group order must be positive");
  const auto n = static_cast<std::size_t>(order_);
  if (table_.size() != n * n)
    throw ValidationError("multiplication table of " + name_ + " has " +
                          std::to_string(table_.size()) + " entries, expected " +
                          std::to_string(n * n));
  for (int v : table_)
    if (v < 0 || v >= order_) throw ValidationError("table entry out of range in " + name_);

  // Latin square: every row and column is a permutation.
  for (int r = 0; r < order_; ++r) {
    std::vector<char> row(n, 0), col(n, 0);
    for (int c = 0; c < order_; ++c) {
      if (row[multiply(r, c)]++) throw ValidationError(name_ + ": row " + std::to_string(r) + " repeats an entry");
      if (col[multiply(c, r)]++) throw ValidationError(name_ + ": column " + std::to_string(r) + " repeats an entry");
    }
  }

  identity_ = -1;
  for (int e = 0; e < order_ && identity_ < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < order_ && ok; ++x) ok = multiply(e, x) == x && multiply(x, e) == x;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw ValidationError(name_ + ": no identity element");

  inverses_.assign(n, -1);
  for (int a = 0; a < order_; ++a) {
    for (int b = 0; b < order_; ++b) {
      if (multiply(a, b) == identity_ && multiply(b, a) == identity_) {
        inverses_[a] = b;
        break;
      }
    }
    if (inverses_[a] < 0) throw ValidationError(name_ + ": element " + std::to_string(a) + " has no inverse");
  }

  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      for (int c = 0; c < order_; ++c)
        if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c)))
          throw ValidationError(name_ + ": table is not associative");

  for (int a = 0; a < order_ && abelian_; ++a)
    for (int b = 0; b < order_ && abelian_; ++b) abelian_ = multiply(a, b) == multiply(b, a);

  if (!irreps.empty()) {
    validate_irreps(*this, irreps);
    irreps_ = std::move(irreps);
  }
}

Irrep irrep_from_generators(const FiniteGroup& g, const std::vector<int>& generators,
                            const std::vector<Eigen::MatrixXcd>& generator_images) {
  if (generators.size() != generator_images.size())
    throw ValidationError(g.name() + ": irrep lists " + std::to_string(generator_images.size()) +
                          " generator images for " + std::to_string(generators.size()) + " generators");
  if (generator_images.empty()) throw ValidationError(g.name() + ": irrep without generator images");
  const auto d = generator_images.front().rows();
  for (const auto& m : generator_images)
    if (m.rows() != d || m.cols() != d) throw ValidationError(g.name() + ": irrep images must be square of equal size");
  for (int s : generators)
    if (s < 0 || s >= g.order()) throw ValidationError(g.name() + ": generator index out of range");

  Irrep rho;
  rho.dim = static_cast<int>(d);
  rho.images.assign(static_cast<std::size_t>(g.order()), Eigen::MatrixXcd());
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  std::queue<int> queue;
  rho.images[g.identity()] = Eigen::MatrixXcd::Identity(d, d);
  seen[g.identity()] = 1;
  queue.push(g.identity());
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop();
    for (std::size_t k = 0; k < generators.size(); ++k) {
      int y = g.multiply(x, generators[k]);
      if (seen[y]) continue;
      seen[y] = 1;
      rho.images[y] = rho.images[x] * generator_images[k];
      queue.push(y);
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw ValidationError(g.name() + ": listed generators do not generate the group");
  return rho;
}

int commutant_dimension(const Irrep& rho, double tol) {
  const Eigen::Index d = rho.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(rho.images.size());
  Eigen::MatrixXcd system(n * d * d, d * d);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  for (Eigen::Index g = 0; g < n; ++g) {
    const auto& m = rho.images[g];
    // vec(X M - M X) = (M^T (x) I - I (x) M) vec(X), column-major vec.
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        block.block(i * d, j * d, d, d) += m(j, i) * id;
        block.block(i * d, j * d, d, d) -= id(i, j) * m;
      }
    system.block(g * d * d, 0, d * d, d * d) = block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system);
  const auto& s = svd.singularValues();
  int nullity = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < tol * std::max(1.0, s(0))) ++nullity;
  return nullity;
}

void validate_irreps(const FiniteGroup& g, const std::vector<Irrep>& irreps, double tol) {
  const int n = g.order();
  int dim_sq = 0;
  std::vector<Eigen::VectorXcd> characters;
  for (std::size_t r = 0; r < irreps.size(); ++r) {
    const auto& rho = irreps[r];
    const std::string tag = g.name() + " irrep " + std::to_string(r);
    if (rho.dim <= 0) throw ValidationError(tag + ": non-positive dimension");
    if (static_cast<int>(rho.images.size()) != n)
      throw ValidationError(tag + ": expected one matrix per element");
    for (const auto& m : rho.images)
      if (m.rows() != rho.dim || m.cols() != rho.dim) throw ValidationError(tag + ": matrix has wrong shape");
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rho.dim, rho.dim);
    if ((rho.images[g.identity()] - id).cwiseAbs().maxCoeff() > tol)
      throw ValidationError(tag + ": identity is not mapped to the identity matrix");
    for (int a = 0; a < n; ++a) {
      if ((rho.images[a] * rho.images[a].adjoint() - id).cwiseAbs().maxCoeff() > tol)
        throw ValidationError(tag + ": image of element " + std::to_string(a) + " is not unitary");
      for (int b = 0; b < n; ++b)
        if ((rho.images[a] * rho.images[b] - rho.images[g.multiply(a, b)]).cwiseAbs().maxCoeff() > tol)
          throw ValidationError(tag + ": not a homomorphism at (" + std::to_string(a) + "," +
                                std::to_string(b) + ")");
    }
    if (commutant_dimension(rho, 1e-8) != 1) throw ValidationError(tag + ": representation is reducible");
    Eigen::VectorXcd chi(n);
    for (int a = 0; a < n; ++a) chi(a) = rho.images[a].trace();
    characters.push_back(chi);
    dim_sq += rho.dim * rho.dim;
  }
  for (std::size_t i = 0; i < characters.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(characters[j].dot(characters[i])) / n > 1e-8)
        throw ValidationError(g.name() + ": irreps " + std::to_string(j) + " and " + std::to_string(i) +
                              " are equivalent");
  if (dim_sq != n)
    throw ValidationError(g.name() + ": irrep catalog incomplete (sum of d^2 = " + std::to_string(dim_sq) +
                          ", order = " + std::to_string(n) + ")");
}

GroupSpec GroupSpec::lattice(int dimension) {
  if (dimension <= 0) throw ValidationError("lattice dimension must be positive");
  GroupSpec g;
  g.kind_ = Kind::Lattice;
  g.factors_.push_back(Factor{Kind::Lattice, dimension, nullptr, 0, 0});
  g.lattice_rank_ = dimension;
  return g;
}

GroupSpec GroupSpec::finite(FiniteGroup group) {
  return finite(std::make_shared<const FiniteGroup>(std::move(group)));
}

GroupSpec GroupSpec::finite(std::shared_ptr<const FiniteGroup> group) {
  GroupSpec g;
  g.kind_ = Kind::Finite;
  g.finite_order_ = group->order();
  g.factors_.push_back(Factor{Kind::Finite, 0, std::move(group), 0, 0});
  g.finite_count_ = 1;
  return g;
}

GroupSpec GroupSpec::product(const std::vector<GroupSpec>& factors) {
  if (factors.empty()) throw ValidationError("product of an empty list of groups");
  GroupSpec g;
  g.kind_ = Kind::Product;
  for (const auto& f : factors) {
    if (f.kind() == Kind::Product) throw ValidationError("product nesting depth exceeds 2");
    Factor fac = f.factors().front();
    fac.coord_offset = g.lattice_rank_;
    fac.index_offset = g.finite_count_;
    if (fac.kind == Kind::Lattice) {
      g.lattice_rank_ += fac.dimension;
    } else {
      g.finite_count_ += 1;
      const double next = static_cast<double>(g.finite_order_) * fac.finite->order();
      if (next > 1e8) throw ValidationError("finite part of product group too large");
      g.finite_order_ *= fac.finite->order();
    }
    g.factors_.push_back(std::move(fac));
  }
  return g;
}

bool GroupSpec::is_abelian() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) {
    return f.kind == Kind::Lattice || f.finite->is_abelian();
  });
}

bool GroupSpec::has_dual() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) {
    return f.kind == Kind::Lattice || f.finite->has_dual();
  });
}

Element GroupSpec::identity() const {
  Element e;
  e.coords.assign(static_cast<std::size_t>(lattice_rank_), 0);
  for (const auto& f : factors_)
    if (f.kind == Kind::Finite) e.indices.push_back(f.finite->identity());
  return e;
}

bool GroupSpec::contains(const Element& x) const {
  if (static_cast<int>(x.coords.size()) != lattice_rank_) return false;
  if (static_cast<int>(x.indices.size()) != finite_count_) return false;
  for (const auto& f : factors_) {
    if (f.kind != Kind::Finite) continue;
    int i = x.indices[f.index_offset];
    if (i < 0 || i >= f.finite->order()) return false;
  }
  return true;
}

void GroupSpec::validate(const Element& x) const {
  if (static_cast<int>(x.coords.size()) != lattice_rank_ ||
      static_cast<int>(x.indices.size()) != finite_count_)
    throw DimensionMismatch("element " + to_string(x) + " does not match group " + describe());
  if (!contains(x)) throw DimensionMismatch("element " + to_string(x) + " has a finite index out of range for " + describe());
}

Element GroupSpec::multiply(const Element& x, const Element& y) const {
  validate(x);
  validate(y);
  Element z = x;
  for (std::size_t i = 0; i < z.coords.size(); ++i) z.coords[i] += y.coords[i];
  for (const auto& f : factors_)
    if (f.kind == Kind::Finite)
      z.indices[f.index_offset] = f.finite->multiply(x.indices[f.index_offset], y.indices[f.index_offset]);
  return z;
}

Element GroupSpec::inverse(const Element& x) const {
  validate(x);
  Element z = x;
  for (auto& c : z.coords) c = -c;
  for (const auto& f : factors_)
    if (f.kind == Kind::Finite) z.indices[f.index_offset] = f.finite->inverse(x.indices[f.index_offset]);
  return z;
}

double GroupSpec::modular_function(const Element& x) const {
  validate(x);
  return 1.0;
}

std::vector<Element> GroupSpec::enumerate_window(std::int64_t radius, std::size_t cap) const {
  if (radius < 0) throw ValidationError("window radius must be non-negative");
  double count = 1.0;
  for (const auto& f : factors_)
    count *= f.kind == Kind::Lattice ? std::pow(2.0 * static_cast<double>(radius) + 1.0, f.dimension)
                                     : static_cast<double>(f.finite->order());
  if (count > static_cast<double>(cap))
    throw WindowOverflow("window of radius " + std::to_string(radius) + " on " + describe() + " has " +
                         std::to_string(count) + " elements, cap is " + std::to_string(cap));

  std::vector<Element> out{Element{}};
  for (const auto& f : factors_) {
    std::vector<Element> next;
    next.reserve(out.size() * (f.kind == Kind::Lattice ? static_cast<std::size_t>(std::pow(2 * radius + 1, f.dimension))
                                                       : static_cast<std::size_t>(f.finite->order())));
    if (f.kind == Kind::Lattice) {
      std::vector<std::vector<std::int64_t>> boxes{{}};
      for (int d = 0; d < f.dimension; ++d) {
        std::vector<std::vector<std::int64_t>> grown;
        for (const auto& b : boxes)
          for (std::int64_t v = -radius; v <= radius; ++v) {
            auto c = b;
            c.push_back(v);
            grown.push_back(std::move(c));
          }
        boxes = std::move(grown);
      }
      for (const auto& prefix : out)
        for (const auto& b : boxes) {
          Element e = prefix;
          e.coords.insert(e.coords.end(), b.begin(), b.end());
          next.push_back(std::move(e));
        }
    } else {
      for (const auto& prefix : out)
        for (int i = 0; i < f.finite->order(); ++i) {
          Element e = prefix;
          e.indices.push_back(i);
          next.push_back(std::move(e));
        }
    }
    out = std::move(next);
  }
  return out;
}

std::int64_t GroupSpec::lattice_radius(const Element& x) {
  std::int64_t r = 0;
  for (auto c : x.coords) r = std::max(r, c < 0 ? -c : c);
  return r;
}

int GroupSpec::finite_flat_index(const Element& x) const {
  int flat = 0;
  for (const auto& f : factors_)
    if (f.kind == Kind::Finite) flat = flat * f.finite->order() + x.indices[f.index_offset];
  return flat;
}

std::vector<int> GroupSpec::finite_indices(int flat) const {
  std::vector<int> idx(static_cast<std::size_t>(finite_count_), 0);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    if (it->kind != Kind::Finite) continue;
    idx[it->index_offset] = flat % it->finite->order();
    flat /= it->finite->order();
  }
  return idx;
}

int GroupSpec::finite_multiply_flat(int a, int b) const {
  auto ia = finite_indices(a), ib = finite_indices(b);
  int flat = 0;
  for (const auto& f : factors_)
    if (f.kind == Kind::Finite)
      flat = flat * f.finite->order() + f.finite->multiply(ia[f.index_offset], ib[f.index_offset]);
  return flat;
}

int GroupSpec::finite_inverse_flat(int a) const {
  auto ia = finite_indices(a);
  int flat = 0;
  for (const auto& f : factors_)
    if (f.kind == Kind::Finite) flat = flat * f.finite->order() + f.finite->inverse(ia[f.index_offset]);
  return flat;
}

Element GroupSpec::make(std::vector<std::int64_t> coords, std::vector<int> indices) const {
  Element e{std::move(coords), std::move(indices)};
  validate(e);
  return e;
}

int GroupSpec::factor_of_coordinate(int coord) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (f.kind == Kind::Lattice && coord >= f.coord_offset && coord < f.coord_offset + f.dimension)
      return static_cast<int>(i);
  }
  return -1;
}

std::string GroupSpec::describe() const {
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " x ";
    const auto& f = factors_[i];
    s += f.kind == Kind::Lattice ? "Z^" + std::to_string(f.dimension) : f.finite->name();
  }
  return s;
}

}  // namespace corona
