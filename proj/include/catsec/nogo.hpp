#ifndef CATSEC_NOGO_HPP
#define CATSEC_NOGO_HPP

// No-go feasibility checkers.
//
// Bipartite splittability: a functionality r splits if r = (r (x) r)
// contracted with a causal effect g across the inner Bob/Alice ports. The
// causal two-stage strategies over the inner ports form, after allowing
// arbitrary classical memory, exactly the no-signaling polytope of the
// joint kernel g (outputs at a timeline position may not depend on inputs
// that arrive later), so the minimum channel-TV residual is one exact LP.
// Dropping the no-signaling rows gives the acausal ablation.
//
// Tripartite: the four-box chain f_A f_B f_B f_C admits three attack
// factorizations; each yields a linear expression E_X(s_X) in its simulator
// and the residual is the LP minimum of the largest pairwise channel-TV
// distance between the three expressions.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lp.hpp"
#include "resource.hpp"

namespace catsec {

struct SearchCfg {
  std::size_t restarts = 0;  // kept for report provenance; the LP is exact
  std::uint64_t seed = 0;
  bool acausal = false;  // drop the causality rows (ablation)
};

struct ResidualReport {
  double min_residual = 0.0;
  std::vector<Morphism> witness;  // g, or (s_A, s_B, s_C)
  std::string method = "lp-exact";
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  bool feasible_at_zero = false;
};

inline PartiteResource build_instance(const std::string& kind) {
  const FinSet bit(2, "bit");
  PartiteResource r;
  Block b;
  b.name = kind;
  if (kind == "perfect_channel") {
    r.parties = {"Alice", "Bob"};
    b.inputs = {{"in", "Alice", 1, bit}};
    b.outputs = {{"out", "Bob", 1, bit}};
    b.kernel = identity(WireList{bit});
  } else if (kind == "product_state") {
    r.parties = {"Alice", "Bob"};
    b.outputs = {{"x", "Alice", 1, bit}, {"y", "Bob", 1, bit}};
    b.kernel = tensor(uniform(bit), uniform(bit));
  } else if (kind == "bit_commitment") {
    r.parties = {"Alice", "Bob"};
    const FinSet ok(1, "ok");
    const FinSet msg(3, "msg");  // 0 = undisclosed, 1 = "0", 2 = "1"
    b.inputs = {{"b", "Alice", 1, bit}, {"o", "Alice", 2, bit}};  // o: 0 hold, 1 open
    b.outputs = {{"receipt", "Bob", 1, ok}, {"m", "Bob", 2, msg}};
    std::vector<double> m(3 * 4, 0.0);
    for (std::size_t bv = 0; bv < 2; ++bv)
      for (std::size_t o = 0; o < 2; ++o) m[(o == 1 ? bv + 1 : 0) * 4 + bv * 2 + o] = 1.0;
    b.kernel = Morphism(WireList{bit, bit}, WireList{ok, msg}, std::move(m));
  } else if (kind == "oblivious_transfer") {
    r.parties = {"Alice", "Bob"};
    const FinSet pair(4, "bits");  // index 2*x0 + x1
    b.inputs = {{"x", "Alice", 1, pair}, {"c", "Bob", 1, bit}};
    b.outputs = {{"y", "Bob", 1, bit}};
    std::vector<double> m(2 * 8, 0.0);
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t c = 0; c < 2; ++c) {
        std::size_t y = c == 0 ? (x >> 1) : (x & 1);
        m[y * 8 + x * 2 + c] = 1.0;
      }
    b.kernel = Morphism(WireList{pair, bit}, WireList{bit}, std::move(m));
  } else if (kind == "broadcast") {
    r.parties = {"Alice", "Bob", "Charlie"};
    b.inputs = {{"b", "Bob", 1, bit}};
    b.outputs = {{"a", "Alice", 1, bit}, {"c", "Charlie", 1, bit}};
    std::vector<double> m(4 * 2, 0.0);
    for (std::size_t v = 0; v < 2; ++v) m[(v * 2 + v) * 2 + v] = 1.0;
    b.kernel = Morphism(WireList{bit}, WireList{bit, bit}, std::move(m));
  } else {
    throw std::invalid_argument("build_instance: unknown kind '" + kind + "'");
  }
  r.blocks.push_back(std::move(b));
  r.validate();
  return r;
}

// Tripartite positive control: Alice's and Charlie's outputs are local
// uniform bits, independent of Bob's (ignored) input.
inline PartiteResource build_tripartite_instance(const std::string& kind) {
  if (kind == "broadcast") return build_instance("broadcast");
  if (kind == "product_state" || kind == "local_bits") {
    const FinSet bit(2, "bit");
    PartiteResource r;
    r.parties = {"Alice", "Bob", "Charlie"};
    Block b;
    b.name = "local_bits";
    b.inputs = {{"b", "Bob", 1, bit}};
    b.outputs = {{"a", "Alice", 1, bit}, {"c", "Charlie", 1, bit}};
    b.kernel = Morphism(WireList{bit}, WireList{bit, bit}, std::vector<double>(8, 0.25));
    r.blocks.push_back(std::move(b));
    r.validate();
    return r;
  }
  throw std::invalid_argument("build_tripartite_instance: unknown kind '" + kind + "'");
}

namespace detail {

struct SidePorts {
  std::vector<Port> a_in, a_out, b_in, b_out;
};

inline SidePorts side_ports(const PartiteResource& r) {
  if (r.blocks.size() != 1) throw std::invalid_argument("nogo: expected a single-block instance");
  SidePorts s;
  for (const auto& p : r.blocks[0].inputs) (p.party == "Alice" ? s.a_in : s.b_in).push_back(p);
  for (const auto& p : r.blocks[0].outputs) (p.party == "Alice" ? s.a_out : s.b_out).push_back(p);
  return s;
}

inline WireList wires_of(const std::vector<Port>& ps) {
  WireList w;
  for (const auto& p : ps) w.wires.push_back(p.type);
  return w;
}

// Timeline position of a port within the split composite; smaller acts
// earlier. Per round: Bob-in of copy 1, then copy-1 outputs, then Alice-in
// of copy 2, then copy-2 outputs.
inline int split_pos(const Port& p, bool is_g_input, bool copy1) {
  // copy 1 = Alice-facing copy (g touches its Bob ports);
  // copy 2 = Bob-facing copy (g touches its Alice ports).
  if (copy1) return 4 * p.round + (is_g_input ? 1 : 0);
  return 4 * p.round + (is_g_input ? 3 : 2);
}

// No-signaling rows for a kernel h : ins -> outs where each port carries a
// timeline position: for every cut, the marginal of the outputs up to the
// cut may not depend on inputs after the cut.
inline std::vector<LinearEq> no_signaling_rows(const std::vector<Port>& out_ports,
                                               const std::vector<int>& out_pos,
                                               const std::vector<Port>& in_ports,
                                               const std::vector<int>& in_pos) {
  WireList outs = wires_of(out_ports), ins = wires_of(in_ports);
  const std::size_t dout = outs.total_size(), din = ins.total_size();
  std::vector<LinearEq> rows;
  std::vector<int> cuts = out_pos;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (int cut : cuts) {
    bool any_late_in = false;
    for (int ip : in_pos)
      if (ip > cut) any_late_in = true;
    if (!any_late_in) continue;
    // Canonical column: late inputs zeroed.
    for (std::size_t col = 0; col < din; ++col) {
      auto t = unflatten(ins, col);
      auto tz = t;
      bool is_canon = true;
      for (std::size_t i = 0; i < in_pos.size(); ++i)
        if (in_pos[i] > cut) {
          if (t[i] != 0) is_canon = false;
          tz[i] = 0;
        }
      if (is_canon) continue;
      std::size_t canon = flat_index(ins, tz);
      // For each early-output assignment: marginal difference = 0.
      std::vector<bool> late_out(out_pos.size());
      for (std::size_t i = 0; i < out_pos.size(); ++i) late_out[i] = out_pos[i] > cut;
      std::map<std::size_t, std::vector<std::size_t>> groups;  // early-pattern -> rows
      for (std::size_t row = 0; row < dout; ++row) {
        auto ot = unflatten(outs, row);
        auto oe = ot;
        for (std::size_t i = 0; i < late_out.size(); ++i)
          if (late_out[i]) oe[i] = 0;
        groups[flat_index(outs, oe)].push_back(row);
      }
      for (const auto& [early, members] : groups) {
        LinearEq eq;
        eq.coeffs.assign(dout * din, 0.0);
        for (auto row : members) {
          eq.coeffs[row * din + col] += 1.0;
          eq.coeffs[row * din + canon] -= 1.0;
        }
        eq.rhs = 0.0;
        rows.push_back(std::move(eq));
      }
    }
  }
  return rows;
}

}  // namespace detail

inline ResidualReport splittability_residual(const PartiteResource& r, SearchCfg cfg = {}) {
  r.validate();
  if (r.parties.size() != 2) throw std::invalid_argument("splittability: instance must be bipartite");
  auto sp = detail::side_ports(r);
  const Morphism k = r.blocks[0].kernel;

  // g consumes copy-1 Bob outputs and copy-2 Alice outputs; it produces
  // copy-1 Bob inputs and copy-2 Alice inputs.
  std::vector<Port> g_in_ports, g_out_ports;
  std::vector<int> g_in_pos, g_out_pos;
  for (const auto& p : sp.b_out) {
    g_in_ports.push_back(p);
    g_in_pos.push_back(detail::split_pos(p, true, true));
  }
  for (const auto& p : sp.a_out) {
    g_in_ports.push_back(p);
    g_in_pos.push_back(detail::split_pos(p, true, false));
  }
  for (const auto& p : sp.b_in) {
    g_out_ports.push_back(p);
    g_out_pos.push_back(detail::split_pos(p, false, true));
  }
  for (const auto& p : sp.a_in) {
    g_out_ports.push_back(p);
    g_out_pos.push_back(detail::split_pos(p, false, false));
  }
  WireList g_dom = detail::wires_of(g_in_ports), g_cod = detail::wires_of(g_out_ports);

  WireList a_in = detail::wires_of(sp.a_in), a_out = detail::wires_of(sp.a_out);
  WireList b_in = detail::wires_of(sp.b_in), b_out = detail::wires_of(sp.b_out);
  const std::size_t nai = a_in.total_size(), nao = a_out.total_size();
  const std::size_t nbi = b_in.total_size(), nbo = b_out.total_size();

  // S_h[(a_out1, b_out2) | (a_in1, b_in2)], linear in h.
  auto builder = [&](const Morphism& h) {
    Morphism s(k.dom, k.cod, std::vector<double>(k.matrix.size(), 0.0), Flavor::nonneg);
    for (std::size_t ai1 = 0; ai1 < nai; ++ai1)
      for (std::size_t bi1 = 0; bi1 < nbi; ++bi1)
        for (std::size_t ao1 = 0; ao1 < nao; ++ao1)
          for (std::size_t bo1 = 0; bo1 < nbo; ++bo1) {
            double w1 = k.at(ao1 * nbo + bo1, ai1 * nbi + bi1);
            if (w1 == 0.0) continue;
            for (std::size_t ai2 = 0; ai2 < nai; ++ai2)
              for (std::size_t bi2 = 0; bi2 < nbi; ++bi2)
                for (std::size_t ao2 = 0; ao2 < nao; ++ao2)
                  for (std::size_t bo2 = 0; bo2 < nbo; ++bo2) {
                    double w2 = k.at(ao2 * nbo + bo2, ai2 * nbi + bi2);
                    if (w2 == 0.0) continue;
                    double hv = h.at(bi1 * nai + ai2, bo1 * nao + ao2);
                    if (hv == 0.0) continue;
                    s.at(ao1 * nbo + bo2, ai1 * nbi + bi2) += w1 * w2 * hv;
                  }
          }
    return s;
  };

  std::vector<LinearEq> causality;
  if (!cfg.acausal)
    causality = detail::no_signaling_rows(g_out_ports, g_out_pos, g_in_ports, g_in_pos);

  TvFitResult fit = min_tv_fit(builder, k, g_dom, g_cod, causality);
  ResidualReport rep;
  rep.min_residual = fit.residual;
  rep.witness = {fit.simulator};
  rep.method = cfg.acausal ? "lp-exact-acausal" : "lp-exact";
  rep.restarts = cfg.restarts;
  rep.seed = cfg.seed;
  rep.feasible_at_zero = fit.residual <= 1e-8;
  return rep;
}

inline ResidualReport tripartite_residual(const PartiteResource& r, SearchCfg cfg = {},
                                          bool force_equal_middle = false) {
  r.validate();
  if (r.parties.size() != 3)
    throw std::invalid_argument("tripartite_residual: instance must be tripartite");
  auto& blk = r.blocks[0];
  // Expected shape: Bob input b, Alice output a, Charlie output c.
  if (blk.inputs.size() != 1 || blk.outputs.size() != 2)
    throw std::invalid_argument("tripartite_residual: expected kernel b -> (a, c)");
  const std::size_t nb = blk.inputs[0].type.size;
  const std::size_t na = blk.outputs[0].type.size;
  const std::size_t nc = blk.outputs[1].type.size;
  const Morphism& k = blk.kernel;  // k[(a,c) | b]

  // Simulators: s_A[a | (a_r, b1)], s_B[b_r | (b1, b2)], s_C[c | (c_r, b2)].
  const std::size_t nsa = na * na * nb, nsb = nb * nb * nb, nsc = nc * nc * nb;
  const std::size_t oa = 0, ob = nsa, oc = nsa + nsb;
  const std::size_t nsim = nsa + nsb + nsc;

  // Columns of the three expressions: (b1, b2); rows: (a, c).
  const std::size_t ncol = nb * nb, nrow = na * nc;
  auto ea_coeff = [&](std::size_t a, std::size_t c, std::size_t b1, std::size_t b2,
                      std::vector<double>& row) {
    for (std::size_t ar = 0; ar < na; ++ar)
      row[oa + a * (na * nb) + ar * nb + b1] += k.at(ar * nc + c, b2);
  };
  auto eb_coeff = [&](std::size_t a, std::size_t c, std::size_t b1, std::size_t b2,
                      std::vector<double>& row) {
    for (std::size_t br = 0; br < nb; ++br)
      row[ob + br * (nb * nb) + b1 * nb + b2] += k.at(a * nc + c, br);
  };
  auto ec_coeff = [&](std::size_t a, std::size_t c, std::size_t b1, std::size_t b2,
                      std::vector<double>& row) {
    for (std::size_t cr = 0; cr < nc; ++cr)
      row[oc + c * (nc * nb) + cr * nb + b2] += k.at(a * nc + cr, b1);
  };

  std::vector<std::size_t> cols;
  for (std::size_t b1 = 0; b1 < nb; ++b1)
    for (std::size_t b2 = 0; b2 < nb; ++b2)
      if (!force_equal_middle || b1 == b2) cols.push_back(b1 * nb + b2);

  // Build once as a generic LP: vars = [sims, p/q per pair-entry, t].
  const std::size_t npairs = 3;  // (A,B), (B,C), (A,C)
  const std::size_t ne = npairs * cols.size() * nrow;
  const std::size_t vpq = nsim;          // p then q interleaved per entry: p at vpq+2e, q at +1
  const std::size_t vt = nsim + 2 * ne;  // epigraph
  LpProblem lp;
  lp.c.assign(vt + 1, 0.0);
  lp.c[vt] = 1.0;
  SolveOptions opts;

  auto fill_pair = [&](std::size_t pair_idx, std::size_t b1, std::size_t b2, std::size_t a,
                       std::size_t c, std::vector<double>& row) {
    if (pair_idx == 0) {
      ea_coeff(a, c, b1, b2, row);
      std::vector<double> neg(row.size(), 0.0);
      eb_coeff(a, c, b1, b2, neg);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] -= neg[i];
    } else if (pair_idx == 1) {
      eb_coeff(a, c, b1, b2, row);
      std::vector<double> neg(row.size(), 0.0);
      ec_coeff(a, c, b1, b2, neg);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] -= neg[i];
    } else {
      ea_coeff(a, c, b1, b2, row);
      std::vector<double> neg(row.size(), 0.0);
      ec_coeff(a, c, b1, b2, neg);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] -= neg[i];
    }
  };

  std::size_t e = 0;
  for (std::size_t pi = 0; pi < npairs; ++pi)
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      std::size_t b1 = cols[ci] / nb, b2 = cols[ci] % nb;
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t c = 0; c < nc; ++c) {
          std::vector<double> row(vt + 1, 0.0);
          fill_pair(pi, b1, b2, a, c, row);
          row[vpq + 2 * e] = -1.0;      // p_e
          row[vpq + 2 * e + 1] = 1.0;   // q_e
          lp.eq_a.push_back(std::move(row));
          lp.eq_b.push_back(0.0);
          opts.basis_hint.push_back(SolveOptions::npos);
          ++e;
        }
    }
  // Per pair and column: sum_e (p+q) + s - 2t = 0 (slack variables appended).
  const std::size_t nslack = npairs * cols.size();
  const std::size_t base = lp.c.size();
  lp.c.resize(base + nslack, 0.0);
  for (auto& rrow : lp.eq_a) rrow.resize(base + nslack, 0.0);
  e = 0;
  std::size_t srow = 0;
  for (std::size_t pi = 0; pi < npairs; ++pi)
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      std::vector<double> row(base + nslack, 0.0);
      for (std::size_t j = 0; j < nrow; ++j) {
        row[vpq + 2 * (e + j)] = 1.0;
        row[vpq + 2 * (e + j) + 1] = 1.0;
      }
      e += nrow;
      row[vt] = -2.0;
      row[base + srow] = 1.0;
      lp.eq_a.push_back(std::move(row));
      lp.eq_b.push_back(0.0);
      opts.basis_hint.push_back(SolveOptions::npos);
      ++srow;
    }
  // Stochasticity of each simulator.
  auto stoch_rows = [&](std::size_t off, std::size_t out_n, std::size_t in_n) {
    for (std::size_t j = 0; j < in_n; ++j) {
      std::vector<double> row(base + nslack, 0.0);
      for (std::size_t i = 0; i < out_n; ++i) row[off + i * in_n + j] = 1.0;
      lp.eq_a.push_back(std::move(row));
      lp.eq_b.push_back(1.0);
      opts.basis_hint.push_back(SolveOptions::npos);
    }
  };
  stoch_rows(oa, na, na * nb);
  stoch_rows(ob, nb, nb * nb);
  stoch_rows(oc, nc, nc * nb);

  LpSolution sol = solve(lp, opts);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("tripartite_residual: LP not optimal");

  ResidualReport rep;
  rep.min_residual = std::max(0.0, sol.objective_value);
  rep.method = "lp-exact";
  rep.restarts = cfg.restarts;
  rep.seed = cfg.seed;
  auto cut = [&](std::size_t off, std::size_t out_n, std::size_t in_n, WireList dom, WireList cod) {
    Morphism m(std::move(dom), std::move(cod), std::vector<double>(out_n * in_n, 0.0),
               Flavor::nonneg);
    for (std::size_t i = 0; i < out_n * in_n; ++i) m.matrix[i] = std::max(0.0, sol.x[off + i]);
    for (std::size_t j = 0; j < in_n; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < out_n; ++i) s += m.matrix[i * in_n + j];
      for (std::size_t i = 0; i < out_n; ++i)
        m.matrix[i * in_n + j] = s > 0 ? m.matrix[i * in_n + j] / s : 1.0 / out_n;
    }
    m.flavor = Flavor::stochastic;
    m.validate();
    return m;
  };
  const FinSet A(na), B(nb), C(nc);
  rep.witness = {cut(oa, na, na * nb, WireList{A, B}, WireList{A}),
                 cut(ob, nb, nb * nb, WireList{B, B}, WireList{B}),
                 cut(oc, nc, nc * nb, WireList{C, B}, WireList{C})};

  // Exact-feasibility probe: force the three expressions equal.
  {
    LpProblem feas;
    feas.c.assign(nsim, 0.0);
    SolveOptions fopts;
    for (std::size_t pi = 0; pi < 2; ++pi)  // A=B and B=C imply A=C
      for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        std::size_t b1 = cols[ci] / nb, b2 = cols[ci] % nb;
        for (std::size_t a = 0; a < na; ++a)
          for (std::size_t c = 0; c < nc; ++c) {
            std::vector<double> row(vt + 1, 0.0);
            fill_pair(pi, b1, b2, a, c, row);
            row.resize(nsim);
            feas.eq_a.push_back(std::move(row));
            feas.eq_b.push_back(0.0);
          }
      }
    auto srows = [&](std::size_t off, std::size_t out_n, std::size_t in_n) {
      for (std::size_t j = 0; j < in_n; ++j) {
        std::vector<double> row(nsim, 0.0);
        for (std::size_t i = 0; i < out_n; ++i) row[off + i * in_n + j] = 1.0;
        feas.eq_a.push_back(std::move(row));
        feas.eq_b.push_back(1.0);
      }
    };
    srows(oa, na, na * nb);
    srows(ob, nb, nb * nb);
    srows(oc, nc, nc * nb);
    rep.feasible_at_zero = solve(feas, fopts).status == LpStatus::optimal;
  }
  return rep;
}

inline nlohmann::json to_json(const ResidualReport& rep, const std::string& instance) {
  nlohmann::json j;
  j["instance"] = instance;
  j["method"] = rep.method;
  j["min_residual"] = rep.min_residual;
  j["witness_present"] = !rep.witness.empty();
  j["restarts"] = rep.restarts;
  j["seed"] = rep.seed;
  return j;
}

}  // namespace catsec

#endif  // CATSEC_NOGO_HPP
