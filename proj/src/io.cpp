#include "corona/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "corona/catalog.hpp"
#include "corona/errors.hpp"

namespace corona {
namespace {

std::string child(const std::string& at, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~')
      escaped += "~0";
    else if (c == '/')
      escaped += "~1";
    else
      escaped += c;
  }
  return at + "/" + escaped;
}

std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

const json& require(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw ConfigError(at.empty() ? "/" : at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(child(at, key), "missing required field");
  return *it;
}

const json& require_array(const json& j, const std::string& at) {
  if (!j.is_array()) throw ConfigError(at, "expected an array");
  return j;
}

double get_number(const json& j, const std::string& at) {
  if (!j.is_number()) throw ConfigError(at, "expected a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& at) {
  if (!j.is_number_integer()) throw ConfigError(at, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& at) {
  if (!j.is_string()) throw ConfigError(at, "expected a string");
  return j.get<std::string>();
}

// Library validation errors are re-raised with the location of the offending node.
template <class F>
auto located(const std::string& at, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(at.empty() ? "/" : at, e.what());
  }
}

Eigen::MatrixXcd parse_matrix(const json& j, int dim, const std::string& at) {
  require_array(j, at);
  if (static_cast<int>(j.size()) != dim) throw ConfigError(at, "expected " + std::to_string(dim) + " rows");
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto rat = child(at, r);
    const auto& row = require_array(j[r], rat);
    if (static_cast<int>(row.size()) != dim) throw ConfigError(rat, "expected " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) m(r, c) = parse_complex(row[c], child(rat, c));
  }
  return m;
}

FiniteGroup parse_finite(const json& j, const std::string& at) {
  if (j.is_string()) return located(at, [&] { return catalog::by_name(j.get<std::string>()); });
  const std::string name = j.contains("name") ? get_string(j["name"], child(at, "name")) : "custom";
  const auto order = get_integer(require(j, "order", at), child(at, "order"));
  if (order < 1 || order > 4096) throw ConfigError(child(at, "order"), "order must lie in [1, 4096]");
  const auto& tj = require_array(require(j, "table", at), child(at, "table"));
  std::vector<int> table;
  for (std::size_t i = 0; i < tj.size(); ++i) table.push_back(static_cast<int>(get_integer(tj[i], child(child(at, "table"), i))));
  FiniteGroup bare = located(child(at, "table"), [&] { return FiniteGroup(name, static_cast<int>(order), table); });
  if (!j.contains("irreps")) return bare;

  const auto gat = child(at, "generators");
  const auto& gj = require_array(require(j, "generators", at), gat);
  std::vector<int> gens;
  for (std::size_t i = 0; i < gj.size(); ++i) gens.push_back(static_cast<int>(get_integer(gj[i], child(gat, i))));
  const auto iat = child(at, "irreps");
  const auto& ij = require_array(j["irreps"], iat);
  std::vector<Irrep> irreps;
  for (std::size_t k = 0; k < ij.size(); ++k) {
    const auto kat = child(iat, k);
    const auto dim = get_integer(require(ij[k], "dim", kat), child(kat, "dim"));
    if (dim < 1) throw ConfigError(child(kat, "dim"), "dimension must be positive");
    const auto mat = child(kat, "matrices");
    const auto& mj = require_array(require(ij[k], "matrices", kat), mat);
    if (mj.size() != gens.size()) throw ConfigError(mat, "expected one matrix per generator");
    std::vector<Eigen::MatrixXcd> images;
    for (std::size_t i = 0; i < mj.size(); ++i) images.push_back(parse_matrix(mj[i], static_cast<int>(dim), child(mat, i)));
    irreps.push_back(located(kat, [&] { return irrep_from_generators(bare, gens, images); }));
  }
  return located(iat, [&] { return FiniteGroup(name, static_cast<int>(order), table, irreps); });
}

std::vector<cplx> parse_complex_list(const json& j, const std::string& at) {
  require_array(j, at);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], child(at, i)));
  return out;
}

const json& single_key(const json& j, const std::string& key, const std::string& at) {
  if (j.size() != 1) throw ConfigError(at, "expression node '" + key + "' takes no sibling keys");
  return j.begin().value();
}

}  // namespace

cplx parse_complex(const json& j, const std::string& at) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError(at, "complex pair must have two entries");
    return {get_number(j[0], child(at, 0)), get_number(j[1], child(at, 1))};
  }
  if (j.is_object()) {
    const double re = j.contains("re") ? get_number(j["re"], child(at, "re")) : 0.0;
    const double im = j.contains("im") ? get_number(j["im"], child(at, "im")) : 0.0;
    return {re, im};
  }
  throw ConfigError(at, "expected a complex number");
}

GroupSpec parse_group(const json& j, const std::string& at) {
  if (!j.is_object() || j.size() != 1) throw ConfigError(at.empty() ? "/" : at, "group must have exactly one of lattice, finite, product");
  const std::string k = j.begin().key();
  const json& v = j.begin().value();
  const auto vat = child(at, k);
  if (k == "lattice") {
    const auto n = get_integer(v, vat);
    if (n < 1 || n > 8) throw ConfigError(vat, "lattice dimension must lie in [1, 8]");
    return GroupSpec::lattice(static_cast<int>(n));
  }
  if (k == "finite") return GroupSpec::finite(parse_finite(v, vat));
  if (k == "product") {
    require_array(v, vat);
    std::vector<GroupSpec> factors;
    for (std::size_t i = 0; i < v.size(); ++i) factors.push_back(parse_group(v[i], child(vat, i)));
    return located(vat, [&] { return GroupSpec::product(factors); });
  }
  throw ConfigError(vat, "unknown group kind");
}

Element parse_element(const GroupSpec& g, const json& j, const std::string& at) {
  std::vector<std::int64_t> coords;
  std::vector<int> indices;
  if (j.is_number_integer()) {
    coords.push_back(j.get<std::int64_t>());
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) coords.push_back(get_integer(j[i], child(at, i)));
  } else if (j.is_object()) {
    if (j.contains("coords")) {
      const auto cat = child(at, "coords");
      const auto& cj = require_array(j["coords"], cat);
      for (std::size_t i = 0; i < cj.size(); ++i) coords.push_back(get_integer(cj[i], child(cat, i)));
    }
    if (j.contains("indices")) {
      const auto iat = child(at, "indices");
      const auto& ij = require_array(j["indices"], iat);
      for (std::size_t i = 0; i < ij.size(); ++i) indices.push_back(static_cast<int>(get_integer(ij[i], child(iat, i))));
    }
  } else {
    throw ConfigError(at, "expected a group element");
  }
  return located(at, [&] { return g.make(std::move(coords), std::move(indices)); });
}

CoefficientSymbol parse_coefficient(const GroupSpec& g, const json& j, const std::string& at) {
  if (j.is_number() || j.is_array()) return constant(parse_complex(j, at));
  if (!j.is_object() || j.empty()) throw ConfigError(at.empty() ? "/" : at, "expected a coefficient expression");
  if (j.contains("re") || j.contains("im")) return constant(parse_complex(j, at));
  if (j.contains("so")) {
    const auto name = get_string(j["so"], child(at, "so"));
    int factor = -1;
    double scale = 1.0;
    for (const auto& [k, v] : j.items()) {
      if (k == "so") continue;
      if (k == "factor") {
        if (v.is_string() && v.get<std::string>() == "radial")
          factor = -1;
        else
          factor = static_cast<int>(get_integer(v, child(at, k)));
      } else if (k == "scale") {
        scale = get_number(v, child(at, k));
      } else {
        throw ConfigError(child(at, k), "unknown field of an so node");
      }
    }
    return located(at, [&] { return slowly_oscillating(g, so_generator_from_name(name), factor, scale); });
  }
  const std::string key = j.begin().key();
  const auto kat = child(at, key);
  const json& v = single_key(j, key, at);
  if (key == "const") return constant(parse_complex(v, kat));
  if (key == "vanishing") {
    require_array(v, kat);
    std::map<Element, cplx> table;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto eat = child(kat, i);
      table[parse_element(g, require(v[i], "element", eat), child(eat, "element"))] += parse_complex(v[i], eat);
    }
    return located(kat, [&] { return vanishing(g, std::move(table)); });
  }
  if (key == "decay") {
    const auto amp = parse_complex(require(v, "amplitude", kat), child(kat, "amplitude"));
    const auto rate = get_number(require(v, "rate", kat), child(kat, "rate"));
    return located(kat, [&] { return vanishing_decay(amp, rate); });
  }
  if (key == "periodic") {
    const auto pat = child(kat, "period");
    const auto& pj = require_array(require(v, "period", kat), pat);
    std::vector<std::int64_t> period;
    for (std::size_t i = 0; i < pj.size(); ++i) period.push_back(get_integer(pj[i], child(pat, i)));
    auto values = parse_complex_list(require(v, "values", kat), child(kat, "values"));
    return located(kat, [&] { return periodic(g, std::move(period), std::move(values)); });
  }
  if (key == "sum" || key == "product") {
    require_array(v, kat);
    if (v.empty()) throw ConfigError(kat, "needs at least one operand");
    std::vector<CoefficientSymbol> parts;
    for (std::size_t i = 0; i < v.size(); ++i) parts.push_back(parse_coefficient(g, v[i], child(kat, i)));
    return located(kat, [&] { return key == "sum" ? sum(g, std::move(parts)) : product(g, std::move(parts)); });
  }
  if (key == "conj") return conjugate(g, parse_coefficient(g, v, kat));
  if (key == "scale") {
    const auto factor = parse_complex(require(v, "factor", kat), child(kat, "factor"));
    return scale(g, factor, parse_coefficient(g, require(v, "of", kat), child(kat, "of")));
  }
  if (key == "translate") {
    const auto y = parse_element(g, require(v, "by", kat), child(kat, "by"));
    return translate(g, parse_coefficient(g, require(v, "of", kat), child(kat, "of")), y);
  }
  throw ConfigError(kat, "unknown coefficient node");
}

KernelSymbol parse_kernel(std::shared_ptr<const GroupSpec> g, const json& j, const std::string& at) {
  require_array(j, at.empty() ? "/" : at);
  std::vector<KernelTerm> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto tat = child(at, i);
    KernelTerm t{parse_coefficient(*g, require(j[i], "coeff", tat), child(tat, "coeff")), {}};
    const auto pat = child(tat, "profile");
    const auto& pj = require_array(require(j[i], "profile", tat), pat);
    for (std::size_t k = 0; k < pj.size(); ++k) {
      const auto eat = child(pat, k);
      t.profile[parse_element(*g, require(pj[k], "element", eat), child(eat, "element"))] += parse_complex(pj[k], eat);
    }
    terms.push_back(std::move(t));
  }
  return located(at, [&] { return normalize(KernelSymbol(std::move(g), std::move(terms))); });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("JSON syntax error: ") + e.what());
  }
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string spectral_set_csv(const SpectralSet& s) {
  std::ostringstream out;
  const auto res = format_double(s.resolution);
  out << "re,im,tag,resolution\n";
  auto row = [&](cplx z, const char* tag) {
    out << format_double(z.real()) << ',' << format_double(z.imag()) << ',' << tag << ',' << res << '\n';
  };
  for (auto p : s.points) row(p, "point");
  for (const auto& g : s.segments) row(g.a, "segment_a"), row(g.b, "segment_b");
  for (const auto& c : s.circles) row(c.center, "circle_center"), row(c.radius, "circle_radius");
  return out.str();
}

json spectral_set_json(const SpectralSet& s) {
  json j;
  j["resolution"] = s.resolution;
  j["points"] = json::array();
  for (auto p : s.points) j["points"].push_back({p.real(), p.imag()});
  j["segments"] = json::array();
  for (const auto& g : s.segments) j["segments"].push_back({{g.a.real(), g.a.imag()}, {g.b.real(), g.b.imag()}});
  j["circles"] = json::array();
  for (const auto& c : s.circles) j["circles"].push_back({{"center", {c.center.real(), c.center.imag()}}, {"radius", c.radius}});
  j["summary"] = summarize(s);
  return j;
}

}  // namespace corona
