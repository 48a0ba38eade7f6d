#ifndef CATSEC_GROUP_HPP
#define CATSEC_GROUP_HPP

// Finite groups given by explicit Cayley tables, the induced generator
// morphisms in FinStoch (multiplication, unit, inverse, copy, delete,
// uniform integral), and machine checks of the Hopf-with-integral
// equations E1..E6 and the exponentiation-module equations E7..E10.

#include <cstddef>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "finstoch.hpp"

namespace catsec {

struct FiniteGroup {
  FinSet carrier;
  std::vector<std::vector<std::size_t>> cayley;  // cayley[x][y] = x*y
  std::size_t unit_index = 0;
  std::vector<std::size_t> inverse;

  FiniteGroup() = default;

  // Validates that the table is a group: Latin square, two-sided unit,
  // two-sided inverses, associativity.
  static FiniteGroup from_table(std::vector<std::vector<std::size_t>> table,
                                std::string name = {}) {
    FiniteGroup g = from_table_unchecked(std::move(table), std::move(name));
    const std::size_t n = g.order();
    // Latin square.
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<bool> row(n, false), col(n, false);
      for (std::size_t y = 0; y < n; ++y) {
        std::size_t r = g.cayley[x][y], c = g.cayley[y][x];
        if (r >= n || c >= n) throw std::invalid_argument("group: table entry out of range");
        if (row[r] || col[c]) throw std::invalid_argument("group: table is not a Latin square");
        row[r] = col[c] = true;
      }
    }
    // Unit.
    bool found_unit = false;
    for (std::size_t e = 0; e < n && !found_unit; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n; ++x)
        if (g.cayley[e][x] != x || g.cayley[x][e] != x) {
          ok = false;
          break;
        }
      if (ok) {
        g.unit_index = e;
        found_unit = true;
      }
    }
    if (!found_unit) throw std::invalid_argument("group: no two-sided unit");
    // Inverses.
    g.inverse.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      bool found = false;
      for (std::size_t y = 0; y < n; ++y)
        if (g.cayley[x][y] == g.unit_index && g.cayley[y][x] == g.unit_index) {
          g.inverse[x] = y;
          found = true;
          break;
        }
      if (!found) throw std::invalid_argument("group: element without two-sided inverse");
    }
    // Associativity.
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          if (g.cayley[g.cayley[x][y]][z] != g.cayley[x][g.cayley[y][z]])
            throw std::invalid_argument("group: table is not associative");
    return g;
  }

  // No validation; used by tests to force broken tables through the checkers.
  static FiniteGroup from_table_unchecked(std::vector<std::vector<std::size_t>> table,
                                          std::string name = {}) {
    FiniteGroup g;
    const std::size_t n = table.size();
    if (n == 0) throw std::invalid_argument("group: empty table");
    for (const auto& row : table)
      if (row.size() != n) throw std::invalid_argument("group: table is not square");
    g.carrier = FinSet(n, std::move(name));
    g.cayley = std::move(table);
    g.unit_index = 0;
    g.inverse.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (g.cayley[x][y] == g.unit_index) {
          g.inverse[x] = y;
          break;
        }
    return g;
  }

  static FiniteGroup cyclic(std::size_t n) {
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) t[x][y] = (x + y) % n;
    return from_table(std::move(t), "Z" + std::to_string(n));
  }

  static FiniteGroup klein4() {
    // Z_2 x Z_2 with elements encoded as bit pairs.
    std::vector<std::vector<std::size_t>> t(4, std::vector<std::size_t>(4));
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) t[x][y] = x ^ y;
    return from_table(std::move(t), "V4");
  }

  static FiniteGroup symmetric3() {
    // S_3 as permutations of {0,1,2} in lexicographic order.
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto index_of = [](const int p[3]) {
      for (std::size_t i = 0; i < 6; ++i)
        if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2]) return i;
      throw std::logic_error("symmetric3: bad permutation");
    };
    std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
    for (std::size_t x = 0; x < 6; ++x)
      for (std::size_t y = 0; y < 6; ++y) {
        int comp[3];
        for (int i = 0; i < 3; ++i) comp[i] = perms[x][perms[y][i]];  // x after y
        t[x][y] = index_of(comp);
      }
    return from_table(std::move(t), "S3");
  }

  std::size_t order() const { return carrier.size; }
  std::size_t mul(std::size_t x, std::size_t y) const { return cayley[x][y]; }

  // h^a by repeated multiplication.
  std::size_t power(std::size_t h, std::size_t a) const {
    std::size_t r = unit_index;
    for (std::size_t i = 0; i < a; ++i) r = mul(r, h);
    return r;
  }

  bool generates(std::size_t g) const {
    std::size_t x = unit_index, count = 1;
    for (;;) {
      x = mul(x, g);
      if (x == unit_index) break;
      ++count;
      if (count > order()) throw std::logic_error("generates: orbit overflow");
    }
    return count == order();
  }
};

struct GroupGens {
  FinSet carrier;
  Morphism mult;      // G (x) G -> G
  Morphism unit;      // I -> G
  Morphism inv;       // G -> G
  Morphism copy;      // G -> G (x) G
  Morphism del;       // G -> I
  Morphism integral;  // I -> G, uniform
};

inline GroupGens group_generators(const FiniteGroup& G) {
  const std::size_t n = G.order();
  const FinSet& s = G.carrier;
  GroupGens gens;
  gens.carrier = s;

  Morphism mult;
  mult.dom = WireList{s, s};
  mult.cod = WireList{s};
  mult.matrix.assign(n * n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) mult.at(G.mul(x, y), x * n + y) = 1.0;
  gens.mult = std::move(mult);

  gens.unit = point(G.unit_index, s);

  Morphism inv;
  inv.dom = WireList{s};
  inv.cod = WireList{s};
  inv.matrix.assign(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) inv.at(G.inverse[x], x) = 1.0;
  gens.inv = std::move(inv);

  gens.copy = copy(s);
  gens.del = discard(s);
  gens.integral = uniform(s);
  return gens;
}

struct ActionGens {
  FinSet modulus;     // Z_n, n = |G|
  FinSet carrier;     // G
  Morphism act;       // Z_n (x) G -> G, (a,h) |-> h^a
  Morphism exp_mult;  // Z_n (x) Z_n -> Z_n, multiplication mod n
  Morphism exp_one;   // I -> Z_n, the multiplicative unit 1 mod n
  Morphism exp_rand;  // I -> Z_n, uniform
  Morphism gen_point; // I -> G, the generator g
};

inline ActionGens action_generators(const FinSet& n_obj, const FiniteGroup& G,
                                    std::size_t g_index) {
  const std::size_t n = G.order();
  if (n_obj.size != n)
    throw std::invalid_argument("action_generators: exponent object must have size |G|");
  if (g_index >= n) throw std::invalid_argument("action_generators: generator out of range");
  if (!G.generates(g_index))
    throw std::invalid_argument("action_generators: index " + std::to_string(g_index) +
                                " does not generate the group");
  ActionGens a;
  a.modulus = n_obj;
  a.carrier = G.carrier;

  Morphism act;
  act.dom = WireList{n_obj, G.carrier};
  act.cod = WireList{G.carrier};
  act.matrix.assign(n * n * n, 0.0);
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t h = 0; h < n; ++h) act.at(G.power(h, e), e * n + h) = 1.0;
  a.act = std::move(act);

  Morphism em;
  em.dom = WireList{n_obj, n_obj};
  em.cod = WireList{n_obj};
  em.matrix.assign(n * n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) em.at((x * y) % n, x * n + y) = 1.0;
  a.exp_mult = std::move(em);

  a.exp_one = point(n == 1 ? 0 : 1, n_obj);
  a.exp_rand = uniform(n_obj);
  a.gen_point = point(g_index, G.carrier);
  return a;
}

struct AxiomReport {
  std::map<std::string, double> residuals;
  double tol = 1e-9;

  bool pass(const std::string& tag) const { return residuals.at(tag) <= tol; }
  bool all_pass() const {
    for (const auto& [tag, r] : residuals)
      if (r > tol) return false;
    return true;
  }
  double max_residual() const {
    double m = 0;
    for (const auto& [tag, r] : residuals) m = std::max(m, r);
    return m;
  }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& [tag, r] : residuals)
      os << tag << ": " << (r <= tol ? "pass" : "FAIL") << " (residual " << r << ")\n";
    return os.str();
  }
};

// Equations (1)-(6): monoid, comonoid, bialgebra, antipode, integral
// absorption, integral normalization.
inline AxiomReport check_hopf(const GroupGens& g, Tolerance tol = {}) {
  const Morphism idg = identity(WireList{g.carrier});
  const Morphism sw = swap(g.carrier, g.carrier);
  AxiomReport rep;
  rep.tol = tol.eps;
  auto put = [&](const std::string& tag, const Morphism& lhs, const Morphism& rhs) {
    double r = max_abs_diff(lhs, rhs);
    auto it = rep.residuals.find(tag);
    if (it == rep.residuals.end())
      rep.residuals[tag] = r;
    else
      it->second = std::max(it->second, r);
  };

  // E1: associativity and unitality of mult.
  put("E1", compose(g.mult, tensor(g.mult, idg)), compose(g.mult, tensor(idg, g.mult)));
  put("E1", compose(g.mult, tensor(g.unit, idg)), idg);
  put("E1", compose(g.mult, tensor(idg, g.unit)), idg);

  // E2: coassociativity and counitality of copy.
  put("E2", compose(tensor(g.copy, idg), g.copy), compose(tensor(idg, g.copy), g.copy));
  put("E2", compose(tensor(g.del, idg), g.copy), idg);
  put("E2", compose(tensor(idg, g.del), g.copy), idg);

  // E3: bialgebra law, copy after mult = doubled mult on copied inputs.
  Morphism mid = tensor(tensor(idg, sw), idg);
  put("E3", compose(tensor(g.mult, g.mult), compose(mid, tensor(g.copy, g.copy))),
      compose(g.copy, g.mult));

  // E4: antipode, mult of an element with its inverse yields the unit.
  Morphism unit_del = compose(g.unit, g.del);
  put("E4", compose(g.mult, compose(tensor(idg, g.inv), g.copy)), unit_del);
  put("E4", compose(g.mult, compose(tensor(g.inv, idg), g.copy)), unit_del);

  // E5: adding a uniform key yields uniform noise.
  Morphism int_del = compose(g.integral, g.del);
  put("E5", compose(g.mult, tensor(g.integral, idg)), int_del);
  put("E5", compose(g.mult, tensor(idg, g.integral)), int_del);

  // E6: sampling a key and deleting it is a no-op.
  put("E6", compose(g.del, g.integral), Morphism());
  return rep;
}

// Equations (7)-(10): module laws of the exponent action, determinism of
// act and of the generator point, commutativity, cocommutativity.
inline AxiomReport check_action(const GroupGens& g, const ActionGens& a, Tolerance tol = {}) {
  const Morphism idg = identity(WireList{g.carrier});
  const Morphism idz = identity(WireList{a.modulus});
  AxiomReport rep;
  rep.tol = tol.eps;
  auto put = [&](const std::string& tag, const Morphism& lhs, const Morphism& rhs) {
    double r = max_abs_diff(lhs, rhs);
    auto it = rep.residuals.find(tag);
    if (it == rep.residuals.end())
      rep.residuals[tag] = r;
    else
      it->second = std::max(it->second, r);
  };

  // E7: h^(xy) = (h^y)^x and h^1 = h.
  put("E7", compose(a.act, tensor(a.exp_mult, idg)), compose(a.act, tensor(idz, a.act)));
  put("E7", compose(a.act, tensor(a.exp_one, idg)), idg);

  // E8: act and the generator point are deterministic (copy commutes past them).
  {
    // copy_G o act = (act (x) act) o (id (x) swap (x) id) o (copy_Z (x) copy_G)
    Morphism lhs = compose(g.copy, a.act);
    Morphism mid = tensor(tensor(idz, swap(a.modulus, g.carrier)), idg);
    Morphism rhs = compose(tensor(a.act, a.act), compose(mid, tensor(copy(a.modulus), g.copy)));
    put("E8", lhs, rhs);
    put("E8", compose(g.copy, a.gen_point), tensor(a.gen_point, a.gen_point));
  }

  // E9: exponent multiplication is commutative.
  put("E9", compose(a.exp_mult, swap(a.modulus, a.modulus)), a.exp_mult);

  // E10: copying is cocommutative.
  put("E10", compose(swap(g.carrier, g.carrier), g.copy), g.copy);
  put("E10", compose(swap(a.modulus, a.modulus), copy(a.modulus)), copy(a.modulus));
  return rep;
}

// CLI group spec strings: "cyclic:n", "klein4", "sym:3".
inline FiniteGroup parse_group_spec(const std::string& spec) {
  if (spec.rfind("cyclic:", 0) == 0) {
    long n = std::stol(spec.substr(7));
    if (n < 1) throw std::invalid_argument("group spec: cyclic order must be >= 1");
    return FiniteGroup::cyclic(static_cast<std::size_t>(n));
  }
  if (spec == "klein4") return FiniteGroup::klein4();
  if (spec == "sym:3") return FiniteGroup::symmetric3();
  throw std::invalid_argument("group spec: expected cyclic:n, klein4 or sym:3, got '" + spec +
                              "'");
}

}  // namespace catsec

#endif  // CATSEC_GROUP_HPP
