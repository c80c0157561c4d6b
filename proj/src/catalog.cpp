#include "corona/catalog.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <queue>

#include "corona/errors.hpp"

namespace corona::catalog {
namespace {

using Eigen::MatrixXcd;

// Rounded entries make a hashable key for small exact matrix groups.
std::vector<long long> matrix_key(const MatrixXcd& m) {
  std::vector<long long> key;
  key.reserve(static_cast<std::size_t>(2 * m.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      key.push_back(std::llround(m(i, j).real() * 1e8));
      key.push_back(std::llround(m(i, j).imag() * 1e8));
    }
  return key;
}

struct Closure {
  std::vector<MatrixXcd> elements;
  std::vector<int> table;
  std::vector<int> generators;
};

// BFS closure of a faithful matrix representation; element 0 is the identity.
Closure close_matrix_group(const std::vector<MatrixXcd>& gens) {
  Closure c;
  std::map<std::vector<long long>, int> index;
  const auto d = gens.front().rows();
  MatrixXcd id = MatrixXcd::Identity(d, d);
  c.elements.push_back(id);
  index[matrix_key(id)] = 0;
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop();
    for (const auto& s : gens) {
      MatrixXcd y = c.elements[x] * s;
      auto key = matrix_key(y);
      if (index.count(key)) continue;
      index[key] = static_cast<int>(c.elements.size());
      c.elements.push_back(y);
      queue.push(static_cast<int>(c.elements.size()) - 1);
    }
  }
  const auto n = c.elements.size();
  c.table.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      c.table[a * n + b] = index.at(matrix_key(c.elements[a] * c.elements[b]));
  for (const auto& s : gens) c.generators.push_back(index.at(matrix_key(s)));
  return c;
}

MatrixXcd scalar(cplx v) {
  MatrixXcd m(1, 1);
  m(0, 0) = v;
  return m;
}

FiniteGroup from_closure(const std::string& name, const Closure& c,
                         const std::vector<std::vector<MatrixXcd>>& irrep_gen_images) {
  const int order = static_cast<int>(c.elements.size());
  FiniteGroup bare(name, order, c.table);
  std::vector<Irrep> irreps;
  for (const auto& images : irrep_gen_images) irreps.push_back(irrep_from_generators(bare, c.generators, images));
  return FiniteGroup(name, order, c.table, std::move(irreps));
}

}  // namespace

FiniteGroup cyclic(int m) {
  if (m <= 0) throw ValidationError("cyclic group order must be positive");
  std::vector<int> table(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) table[static_cast<std::size_t>(a) * m + b] = (a + b) % m;
  std::vector<Irrep> irreps;
  for (int j = 0; j < m; ++j) {
    Irrep chi;
    chi.dim = 1;
    for (int k = 0; k < m; ++k)
      chi.images.push_back(scalar(std::polar(1.0, 2.0 * std::numbers::pi * j * k / m)));
    irreps.push_back(std::move(chi));
  }
  return FiniteGroup("Z/" + std::to_string(m), m, std::move(table), std::move(irreps));
}

FiniteGroup symmetric3() {
  const double c = std::cos(2.0 * std::numbers::pi / 3.0), s = std::sin(2.0 * std::numbers::pi / 3.0);
  MatrixXcd rot(2, 2), ref(2, 2);
  rot << c, -s, s, c;
  ref << 1, 0, 0, -1;
  auto closure = close_matrix_group({rot, ref});
  return from_closure("S3", closure,
                      {{scalar(1), scalar(1)}, {scalar(1), scalar(-1)}, {rot, ref}});
}

FiniteGroup dihedral4() {
  MatrixXcd rot(2, 2), ref(2, 2);
  rot << 0, -1, 1, 0;
  ref << 1, 0, 0, -1;
  auto closure = close_matrix_group({rot, ref});
  return from_closure("D4", closure,
                      {{scalar(1), scalar(1)},
                       {scalar(1), scalar(-1)},
                       {scalar(-1), scalar(1)},
                       {scalar(-1), scalar(-1)},
                       {rot, ref}});
}

FiniteGroup quaternion8() {
  const cplx i(0.0, 1.0);
  MatrixXcd qi(2, 2), qj(2, 2);
  qi << i, 0, 0, -i;
  qj << 0, 1, -1, 0;
  auto closure = close_matrix_group({qi, qj});
  return from_closure("Q8", closure,
                      {{scalar(1), scalar(1)},
                       {scalar(1), scalar(-1)},
                       {scalar(-1), scalar(1)},
                       {scalar(-1), scalar(-1)},
                       {qi, qj}});
}

FiniteGroup by_name(const std::string& name) {
  if (name == "S3") return symmetric3();
  if (name == "D4") return dihedral4();
  if (name == "Q8") return quaternion8();
  if (name.rfind("Z/", 0) == 0) {
    try {
      return cyclic(std::stoi(name.substr(2)));
    } catch (const std::logic_error&) {
    }
  }
  throw ValidationError("unknown catalog group '" + name + "'");
}

std::vector<std::string> names() { return {"Z/2", "Z/3", "Z/4", "Z/5", "S3", "D4", "Q8"}; }

}  // namespace corona::catalog
