#include "corona/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include "corona/errors.hpp"

namespace corona {
namespace {

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(cplx v) { return num(v.real()) + "," + num(v.imag()); }

std::int64_t positive_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t residue_count(const std::vector<std::int64_t>& period) {
  std::int64_t n = 1;
  for (auto p : period) n *= p;
  return n;
}

std::int64_t residue_flat(const std::vector<std::int64_t>& period, const std::vector<std::int64_t>& coords) {
  std::int64_t flat = 0;
  for (std::size_t i = 0; i < period.size(); ++i) flat = flat * period[i] + positive_mod(coords[i], period[i]);
  return flat;
}

std::vector<std::int64_t> residue_tuple(const std::vector<std::int64_t>& period, std::int64_t flat) {
  std::vector<std::int64_t> r(period.size(), 0);
  for (std::size_t i = period.size(); i-- > 0;) {
    r[i] = flat % period[i];
    flat /= period[i];
  }
  return r;
}

cplx periodic_value(const GroupSpec& g, const PeriodicNode& p, const Element& q) {
  const auto idx = residue_flat(p.period, q.coords) * g.finite_order() + g.finite_flat_index(q);
  return p.values[static_cast<std::size_t>(idx)];
}

PeriodicNode expand_periodic(const GroupSpec& g, const PeriodicNode& p, const std::vector<std::int64_t>& period) {
  PeriodicNode out{period, {}};
  const auto nres = residue_count(period);
  const int nf = g.finite_order();
  out.values.resize(static_cast<std::size_t>(nres * nf));
  for (std::int64_t r = 0; r < nres; ++r) {
    const auto tuple = residue_tuple(period, r);
    const auto src = residue_flat(p.period, tuple);
    for (int f = 0; f < nf; ++f) out.values[r * nf + f] = p.values[src * nf + f];
  }
  return out;
}

std::vector<std::int64_t> lcm_period(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::lcm(a[i], b[i]);
  return out;
}

template <class Op>
PeriodicNode combine_periodic(const GroupSpec& g, const PeriodicNode& a, const PeriodicNode& b, Op op) {
  auto period = lcm_period(a.period, b.period);
  auto ea = expand_periodic(g, a, period);
  auto eb = expand_periodic(g, b, period);
  for (std::size_t i = 0; i < ea.values.size(); ++i) ea.values[i] = op(ea.values[i], eb.values[i]);
  return ea;
}

long double so_argument(const GroupSpec& g, const SlowlyOscillatingNode& s, const Element& q) {
  if (s.factor >= 0) return static_cast<long double>(q.coords[g.factors()[s.factor].coord_offset]);
  long double r2 = 0.0L;
  for (auto c : q.coords) r2 += static_cast<long double>(c) * static_cast<long double>(c);
  return std::sqrt(r2);
}

cplx so_value(const GroupSpec& g, const SlowlyOscillatingNode& s, const Element& q) {
  const long double t = so_argument(g, s, q);
  const long double sc = s.scale;
  switch (s.generator) {
    case SoGenerator::SinSqrt:
      return static_cast<double>(std::sin(std::sqrt(std::fabs(t) / sc)));
    case SoGenerator::CosSqrt:
      return static_cast<double>(std::cos(std::sqrt(std::fabs(t) / sc)));
    case SoGenerator::Arctan:
      return static_cast<double>(std::atan(t / sc));
    case SoGenerator::Tanh:
      return static_cast<double>(std::tanh(t / sc));
  }
  return 0.0;
}

double so_sup(SoGenerator gen) { return gen == SoGenerator::Arctan ? std::numbers::pi / 2 : 1.0; }

bool is_table_vanishing(const CoefficientSymbol& a) {
  auto v = a.as<VanishingNode>();
  return v && !v->decay;
}

}  // namespace

std::string so_generator_name(SoGenerator g) {
  switch (g) {
    case SoGenerator::SinSqrt: return "sin_sqrt";
    case SoGenerator::CosSqrt: return "cos_sqrt";
    case SoGenerator::Arctan: return "arctan";
    case SoGenerator::Tanh: return "tanh";
  }
  return "?";
}

SoGenerator so_generator_from_name(const std::string& name) {
  for (auto g : {SoGenerator::SinSqrt, SoGenerator::CosSqrt, SoGenerator::Arctan, SoGenerator::Tanh})
    if (so_generator_name(g) == name) return g;
  throw ValidationError("unknown slowly oscillating generator '" + name + "'");
}

bool so_is_oscillating(SoGenerator g) { return g == SoGenerator::SinSqrt || g == SoGenerator::CosSqrt; }
bool so_is_sign_sensitive(SoGenerator g) { return g == SoGenerator::Arctan || g == SoGenerator::Tanh; }

std::string class_name(CoefficientClass c) {
  switch (c) {
    case CoefficientClass::Constant: return "constant";
    case CoefficientClass::Vanishing: return "vanishing";
    case CoefficientClass::SlowlyOscillating: return "slowly-oscillating";
    case CoefficientClass::Periodic: return "periodic";
    case CoefficientClass::PeriodicSlowlyOscillating: return "periodic*slowly-oscillating";
  }
  return "?";
}

CoefficientSymbol::CoefficientSymbol() : node_(std::make_shared<const Node>(ConstantNode{0.0})) {}
CoefficientSymbol::CoefficientSymbol(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

cplx CoefficientSymbol::constant_value() const {
  auto c = as<ConstantNode>();
  if (!c) throw ValidationError("coefficient is not constant: " + key(*this));
  return c->value;
}

CoefficientSymbol constant(cplx c) { return CoefficientSymbol(ConstantNode{c}); }

CoefficientSymbol vanishing(const GroupSpec& g, std::map<Element, cplx> table) {
  for (auto it = table.begin(); it != table.end();) {
    g.validate(it->first);
    it = it->second == cplx{} ? table.erase(it) : std::next(it);
  }
  if (table.empty()) return constant(0.0);
  return CoefficientSymbol(VanishingNode{std::move(table), std::nullopt});
}

CoefficientSymbol vanishing_decay(cplx amplitude, double rate) {
  if (!(rate > 0.0)) throw ValidationError("decay rate must be positive");
  if (amplitude == cplx{}) return constant(0.0);
  return CoefficientSymbol(VanishingNode{{}, std::make_pair(amplitude, rate)});
}

CoefficientSymbol slowly_oscillating(const GroupSpec& g, SoGenerator gen, int factor, double scale) {
  SlowlyOscillatingNode leaf{gen, factor, scale};
  CoefficientSymbol a(leaf);
  validate_symbol(g, a);
  return a;
}

CoefficientSymbol periodic(const GroupSpec& g, std::vector<std::int64_t> period, std::vector<cplx> values) {
  if (static_cast<int>(period.size()) != g.lattice_rank())
    throw ValidationError("period vector has " + std::to_string(period.size()) + " entries, lattice rank is " +
                          std::to_string(g.lattice_rank()));
  for (auto p : period)
    if (p < 1) throw ValidationError("periods must be positive");
  const auto expected = residue_count(period) * g.finite_order();
  if (static_cast<std::int64_t>(values.size()) != expected)
    throw ValidationError("periodic table has " + std::to_string(values.size()) + " values, expected " +
                          std::to_string(expected));
  return CoefficientSymbol(PeriodicNode{std::move(period), std::move(values)});
}

CoefficientSymbol sum(const GroupSpec& g, std::vector<CoefficientSymbol> terms) {
  std::vector<CoefficientSymbol> flat;
  for (auto& t : terms) {
    if (auto s = t.as<SumNode>())
      flat.insert(flat.end(), s->terms.begin(), s->terms.end());
    else
      flat.push_back(std::move(t));
  }
  cplx c = 0.0;
  std::optional<PeriodicNode> per;
  std::map<Element, cplx> table;
  bool has_table = false;
  std::vector<CoefficientSymbol> rest;
  for (const auto& t : flat) {
    if (auto k = t.as<ConstantNode>()) {
      c += k->value;
    } else if (auto p = t.as<PeriodicNode>()) {
      per = per ? combine_periodic(g, *per, *p, std::plus<cplx>{}) : *p;
    } else if (is_table_vanishing(t)) {
      has_table = true;
      for (const auto& [x, v] : t.as<VanishingNode>()->table) table[x] += v;
    } else {
      rest.push_back(t);
    }
  }
  std::vector<CoefficientSymbol> out;
  if (per) {
    for (auto& v : per->values) v += c;
    c = 0.0;
    out.emplace_back(std::move(*per));
  }
  if (c != cplx{}) out.push_back(constant(c));
  if (has_table) {
    auto v = vanishing(g, std::move(table));
    if (!v.is_constant()) out.push_back(std::move(v));
  }
  out.insert(out.end(), rest.begin(), rest.end());
  if (out.empty()) return constant(0.0);
  if (out.size() == 1) return out.front();
  std::stable_sort(out.begin(), out.end(),
                   [](const CoefficientSymbol& a, const CoefficientSymbol& b) { return key(a) < key(b); });
  return CoefficientSymbol(SumNode{std::move(out)});
}

CoefficientSymbol product(const GroupSpec& g, std::vector<CoefficientSymbol> factors) {
  std::vector<CoefficientSymbol> flat;
  for (auto& t : factors) {
    if (auto p = t.as<ProductNode>())
      flat.insert(flat.end(), p->factors.begin(), p->factors.end());
    else
      flat.push_back(std::move(t));
  }
  cplx c = 1.0;
  std::optional<PeriodicNode> per;
  std::vector<CoefficientSymbol> rest;
  const VanishingNode* table = nullptr;
  std::size_t table_pos = 0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto& t = flat[i];
    if (auto k = t.as<ConstantNode>()) {
      c *= k->value;
    } else if (auto p = t.as<PeriodicNode>()) {
      per = per ? combine_periodic(g, *per, *p, std::multiplies<cplx>{}) : *p;
    } else {
      if (!table && is_table_vanishing(t)) {
        table = t.as<VanishingNode>();
        table_pos = i;
      }
      rest.push_back(t);
    }
  }
  if (c == cplx{}) return constant(0.0);

  // A finitely supported factor absorbs everything else pointwise.
  if (table) {
    std::map<Element, cplx> out;
    for (const auto& [x, v] : table->table) {
      cplx val = v * c;
      if (per) val *= periodic_value(g, *per, x);
      for (std::size_t i = 0; i < flat.size(); ++i)
        if (i != table_pos && !flat[i].is_constant() && !flat[i].as<PeriodicNode>()) val *= evaluate(g, flat[i], x);
      out[x] = val;
    }
    return vanishing(g, std::move(out));
  }

  std::vector<CoefficientSymbol> out;
  if (per) {
    for (auto& v : per->values) v *= c;
    c = 1.0;
    out.emplace_back(std::move(*per));
  }
  out.insert(out.end(), rest.begin(), rest.end());
  if (out.empty()) return constant(c);
  std::stable_sort(out.begin(), out.end(),
                   [](const CoefficientSymbol& a, const CoefficientSymbol& b) { return key(a) < key(b); });
  CoefficientSymbol result = out.size() == 1 ? out.front() : CoefficientSymbol(ProductNode{std::move(out)});
  return c == cplx{1.0} ? result : scale(g, c, result);
}

CoefficientSymbol scale(const GroupSpec& g, cplx factor, const CoefficientSymbol& a) {
  if (factor == cplx{}) return constant(0.0);
  if (factor == cplx{1.0}) return a;
  return std::visit(
      [&](const auto& n) -> CoefficientSymbol {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return constant(n.value * factor);
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          if (n.decay) return vanishing_decay(n.decay->first * factor, n.decay->second);
          auto t = n.table;
          for (auto& [x, v] : t) v *= factor;
          return vanishing(g, std::move(t));
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          auto p = n;
          for (auto& v : p.values) v *= factor;
          return CoefficientSymbol(std::move(p));
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          const cplx f = n.factor * factor;
          return f == cplx{1.0} ? n.child : CoefficientSymbol(ScaleNode{f, n.child});
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<CoefficientSymbol> terms;
          for (const auto& t : n.terms) terms.push_back(scale(g, factor, t));
          return sum(g, std::move(terms));
        } else {
          return CoefficientSymbol(ScaleNode{factor, a});
        }
      },
      a.node());
}

CoefficientSymbol conjugate(const GroupSpec& g, const CoefficientSymbol& a) {
  return std::visit(
      [&](const auto& n) -> CoefficientSymbol {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return constant(std::conj(n.value));
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          if (n.decay) return vanishing_decay(std::conj(n.decay->first), n.decay->second);
          auto t = n.table;
          for (auto& [x, v] : t) v = std::conj(v);
          return CoefficientSymbol(VanishingNode{std::move(t), std::nullopt});
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return a;  // catalog generators are real
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          auto p = n;
          for (auto& v : p.values) v = std::conj(v);
          return CoefficientSymbol(std::move(p));
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          return CoefficientSymbol(TranslateNode{n.shift, conjugate(g, n.child)});
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<CoefficientSymbol> terms;
          for (const auto& t : n.terms) terms.push_back(conjugate(g, t));
          return sum(g, std::move(terms));
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          std::vector<CoefficientSymbol> fs;
          for (const auto& t : n.factors) fs.push_back(conjugate(g, t));
          return product(g, std::move(fs));
        } else {
          return scale(g, std::conj(n.factor), conjugate(g, n.child));
        }
      },
      a.node());
}

cplx evaluate(const GroupSpec& g, const CoefficientSymbol& a, const Element& q) {
  return std::visit(
      [&](const auto& n) -> cplx {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          if (n.decay) {
            double l1 = 0.0;
            for (auto c : q.coords) l1 += std::fabs(static_cast<double>(c));
            return n.decay->first * std::exp(-n.decay->second * l1);
          }
          auto it = n.table.find(q);
          return it == n.table.end() ? cplx{} : it->second;
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return so_value(g, n, q);
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          return periodic_value(g, n, q);
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          return evaluate(g, n.child, g.multiply(g.inverse(n.shift), q));
        } else if constexpr (std::is_same_v<T, SumNode>) {
          cplx s = 0.0;
          for (const auto& t : n.terms) s += evaluate(g, t, q);
          return s;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          cplx p = 1.0;
          for (const auto& t : n.factors) p *= evaluate(g, t, q);
          return p;
        } else {
          return n.factor * evaluate(g, n.child, q);
        }
      },
      a.node());
}

CoefficientSymbol translate(const GroupSpec& g, const CoefficientSymbol& a, const Element& y) {
  g.validate(y);
  if (y == g.identity()) return a;
  return std::visit(
      [&](const auto& n) -> CoefficientSymbol {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return a;
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          if (n.decay) return CoefficientSymbol(TranslateNode{y, a});
          std::map<Element, cplx> t;
          for (const auto& [x, v] : n.table) t[g.multiply(y, x)] = v;
          return CoefficientSymbol(VanishingNode{std::move(t), std::nullopt});
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return CoefficientSymbol(TranslateNode{y, a});
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          // l_y(c)(n, f) = c(n - n_y, f_y^-1 f)
          PeriodicNode out = n;
          const auto nres = residue_count(n.period);
          const int nf = g.finite_order();
          const int yinv = g.finite_inverse_flat(g.finite_flat_index(y));
          for (std::int64_t r = 0; r < nres; ++r) {
            auto tuple = residue_tuple(n.period, r);
            for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] -= y.coords[i];
            const auto src = residue_flat(n.period, tuple);
            for (int f = 0; f < nf; ++f)
              out.values[r * nf + f] = n.values[src * nf + g.finite_multiply_flat(yinv, f)];
          }
          return CoefficientSymbol(std::move(out));
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          Element shift = g.multiply(y, n.shift);
          if (shift == g.identity()) return n.child;
          return CoefficientSymbol(TranslateNode{std::move(shift), n.child});
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<CoefficientSymbol> terms;
          for (const auto& t : n.terms) terms.push_back(translate(g, t, y));
          return sum(g, std::move(terms));
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          std::vector<CoefficientSymbol> fs;
          for (const auto& t : n.factors) fs.push_back(translate(g, t, y));
          return product(g, std::move(fs));
        } else {
          return scale(g, n.factor, translate(g, n.child, y));
        }
      },
      a.node());
}

CoefficientClass classify(const CoefficientSymbol& a) {
  using C = CoefficientClass;
  auto flags = [](const std::vector<C>& cs, bool& p, bool& s) {
    p = s = false;
    for (auto c : cs) {
      p = p || c == C::Periodic || c == C::PeriodicSlowlyOscillating;
      s = s || c == C::Vanishing || c == C::SlowlyOscillating || c == C::PeriodicSlowlyOscillating;
    }
  };
  return std::visit(
      [&](const auto& n) -> C {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return C::Constant;
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          return C::Vanishing;
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return C::SlowlyOscillating;
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          return C::Periodic;
        } else if constexpr (std::is_same_v<T, TranslateNode> || std::is_same_v<T, ScaleNode>) {
          return classify(n.child);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<C> cs;
          for (const auto& t : n.terms) cs.push_back(classify(t));
          if (std::all_of(cs.begin(), cs.end(), [](C c) { return c == C::Constant; })) return C::Constant;
          if (std::all_of(cs.begin(), cs.end(), [](C c) { return c == C::Vanishing; })) return C::Vanishing;
          bool p, s;
          flags(cs, p, s);
          if (p && s) return C::PeriodicSlowlyOscillating;
          return p ? C::Periodic : C::SlowlyOscillating;
        } else {
          std::vector<C> cs;
          for (const auto& t : n.factors) cs.push_back(classify(t));
          if (std::any_of(cs.begin(), cs.end(), [](C c) { return c == C::Vanishing; })) return C::Vanishing;
          bool p, s;
          flags(cs, p, s);
          if (p && s) return C::PeriodicSlowlyOscillating;
          if (p) return C::Periodic;
          return s ? C::SlowlyOscillating : C::Constant;
        }
      },
      a.node());
}

double sup_bound(const CoefficientSymbol& a) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return std::abs(n.value);
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          if (n.decay) return std::abs(n.decay->first);
          double m = 0.0;
          for (const auto& [x, v] : n.table) m = std::max(m, std::abs(v));
          return m;
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return so_sup(n.generator);
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          double m = 0.0;
          for (auto v : n.values) m = std::max(m, std::abs(v));
          return m;
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          return sup_bound(n.child);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          double s = 0.0;
          for (const auto& t : n.terms) s += sup_bound(t);
          return s;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          double p = 1.0;
          for (const auto& t : n.factors) p *= sup_bound(t);
          return p;
        } else {
          return std::abs(n.factor) * sup_bound(n.child);
        }
      },
      a.node());
}

std::string key(const SlowlyOscillatingNode& leaf) {
  return "S(" + so_generator_name(leaf.generator) + "," + std::to_string(leaf.factor) + "," + num(leaf.scale) + ")";
}

std::string key(const CoefficientSymbol& a) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return "C(" + num(n.value) + ")";
        } else if constexpr (std::is_same_v<T, VanishingNode>) {
          if (n.decay) return "D(" + num(n.decay->first) + "," + num(n.decay->second) + ")";
          std::string s = "V{";
          for (const auto& [x, v] : n.table) s += to_string(x) + ":" + num(v) + ";";
          return s + "}";
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          return key(n);
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          std::string s = "P[";
          for (auto p : n.period) s += std::to_string(p) + ",";
          s += "](";
          for (auto v : n.values) s += num(v) + ";";
          return s + ")";
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          return "T" + to_string(n.shift) + "(" + key(n.child) + ")";
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::string s = "+(";
          for (const auto& t : n.terms) s += key(t) + "|";
          return s + ")";
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          std::string s = "*(";
          for (const auto& t : n.factors) s += key(t) + "|";
          return s + ")";
        } else {
          return "x(" + num(n.factor) + ")(" + key(n.child) + ")";
        }
      },
      a.node());
}

bool same_symbol(const CoefficientSymbol& a, const CoefficientSymbol& b) { return key(a) == key(b); }

namespace {

void collect(const CoefficientSymbol& a, std::vector<SlowlyOscillatingNode>& so, std::set<std::string>& seen,
             std::vector<PeriodicNode>* per) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          if (seen.insert(key(n)).second) so.push_back(n);
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          if (per) per->push_back(n);
        } else if constexpr (std::is_same_v<T, TranslateNode> || std::is_same_v<T, ScaleNode>) {
          collect(n.child, so, seen, per);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          for (const auto& t : n.terms) collect(t, so, seen, per);
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          for (const auto& t : n.factors) collect(t, so, seen, per);
        }
      },
      a.node());
}

}  // namespace

std::vector<SlowlyOscillatingNode> so_leaves(const CoefficientSymbol& a) {
  std::vector<SlowlyOscillatingNode> out;
  std::set<std::string> seen;
  collect(a, out, seen, nullptr);
  return out;
}

std::vector<PeriodicNode> periodic_leaves(const CoefficientSymbol& a) {
  std::vector<SlowlyOscillatingNode> so;
  std::set<std::string> seen;
  std::vector<PeriodicNode> out;
  collect(a, so, seen, &out);
  return out;
}

OscillationCheck check_slowly_oscillating(const GroupSpec& g, const SlowlyOscillatingNode& leaf) {
  OscillationCheck check;
  if (g.lattice_rank() == 0) return check;
  const int axis = leaf.factor >= 0 ? g.factors()[leaf.factor].coord_offset : 0;
  CoefficientSymbol a(leaf);
  for (double radius : {1e2, 1e4, 1e6, 1e8}) {
    double worst = 0.0;
    for (int sign : {1, -1}) {
      for (int j = 0; j < 32; ++j) {
        Element x = g.identity();
        x.coords[axis] = sign * (static_cast<std::int64_t>(radius) + 7 * j);
        if (leaf.factor < 0 && g.lattice_rank() > 1) x.coords[(axis + 1) % g.lattice_rank()] = 3 * j;
        const cplx ax = evaluate(g, a, x);
        for (int c = 0; c < g.lattice_rank(); ++c)
          for (int step : {1, -1}) {
            Element y = x;
            y.coords[c] += step;
            worst = std::max(worst, std::abs(evaluate(g, a, y) - ax));
          }
      }
    }
    check.radii.push_back(radius);
    check.max_increment.push_back(worst);
  }
  check.passed = check.max_increment.back() < 1e-3;
  for (std::size_t i = 1; i < check.max_increment.size(); ++i)
    check.passed = check.passed && check.max_increment[i] <= check.max_increment[i - 1] + 1e-15;
  return check;
}

void validate_symbol(const GroupSpec& g, const CoefficientSymbol& a) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VanishingNode>) {
          for (const auto& [x, v] : n.table) g.validate(x);
        } else if constexpr (std::is_same_v<T, SlowlyOscillatingNode>) {
          if (!(n.scale > 0.0)) throw ValidationError("slowly oscillating scale must be positive");
          if (g.lattice_rank() == 0)
            throw UnsupportedAlgebraPattern("slowly oscillating leaf " + key(n) + " on finite group " + g.describe());
          if (n.factor < -1 || n.factor >= static_cast<int>(g.factors().size()))
            throw ValidationError("slowly oscillating leaf refers to missing factor " + std::to_string(n.factor));
          if (n.factor >= 0) {
            const auto& f = g.factors()[n.factor];
            if (f.kind != GroupSpec::Kind::Lattice || f.dimension != 1)
              throw UnsupportedAlgebraPattern("axis generator " + key(n) + " needs a Z^1 factor; use radial mode on " +
                                              g.describe());
          }
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          if (static_cast<int>(n.period.size()) != g.lattice_rank() ||
              static_cast<std::int64_t>(n.values.size()) != residue_count(n.period) * g.finite_order())
            throw ValidationError("periodic table does not match group " + g.describe());
        } else if constexpr (std::is_same_v<T, TranslateNode>) {
          g.validate(n.shift);
          validate_symbol(g, n.child);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          validate_symbol(g, n.child);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          for (const auto& t : n.terms) validate_symbol(g, t);
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          for (const auto& t : n.factors) validate_symbol(g, t);
        }
      },
      a.node());
}

}  // namespace corona
