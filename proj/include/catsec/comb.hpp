#ifndef CATSEC_COMB_HPP
#define CATSEC_COMB_HPP

// m-combs: circuits with m ordered holes, given as a tuple of pieces
// (g_0, ..., g_m) threaded by memory wires. Plugging alternates pieces with
// hole fillers; the process tensor is the kernel obtained by exposing every
// hole boundary externally, which fully determines the comb's action on all
// fillers (a filler's composite is a linear contraction of the tensor).
//
// Conventions: piece g_0 : C -> A_s(1) (x) Y_1; piece g_i (1<=i<m) :
// B_s(i) (x) Y_i -> A_s(i+1) (x) Y_{i+1}; piece g_m : B_s(m) (x) Y_m -> D,
// where s = sigma is the slot visiting order.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "finstoch.hpp"

namespace catsec {

struct Comb {
  std::vector<std::pair<WireList, WireList>> slots;  // (A_i, B_i)
  std::vector<std::size_t> sigma;                    // visiting order, a permutation
  std::vector<Morphism> pieces;                      // g_0 .. g_m
  std::vector<WireList> memory;                      // Y_1 .. Y_m
  std::pair<WireList, WireList> outer;               // (C, D)

  std::size_t arity() const { return slots.size(); }

  void validate() const {
    const std::size_t m = slots.size();
    if (sigma.size() != m) throw shape_error("comb: sigma arity mismatch");
    if (pieces.size() != m + 1) throw shape_error("comb: expected m+1 pieces");
    if (memory.size() != m) throw shape_error("comb: expected m memory lists");
    std::vector<bool> seen(m, false);
    for (auto s : sigma) {
      if (s >= m || seen[s]) throw shape_error("comb: sigma is not a permutation");
      seen[s] = true;
    }
    for (std::size_t i = 0; i <= m; ++i) {
      WireList want_dom = i == 0 ? outer.first : slots[sigma[i - 1]].second.concat(memory[i - 1]);
      WireList want_cod = i == m ? outer.second : slots[sigma[i]].first.concat(memory[i]);
      if (!(pieces[i].dom == want_dom) || !(pieces[i].cod == want_cod))
        throw shape_error("comb: piece " + std::to_string(i) + " has the wrong shape");
    }
  }
};

// A hole filler: kernel mem_in (x) A -> mem_out (x) B. Independent fillers
// have empty memory; a multi-slot strategy threads memory between
// consecutive fillers (the first mem_in and last mem_out must be empty).
struct Filler {
  Morphism kernel;
  WireList mem_in;
  WireList mem_out;

  static Filler plain(Morphism k) { return Filler{std::move(k), {}, {}}; }
};

inline Morphism plug(const Comb& comb, const std::vector<Filler>& fillers) {
  comb.validate();
  const std::size_t m = comb.arity();
  if (fillers.size() != m)
    throw shape_error("plug: comb has " + std::to_string(m) + " slots, got " +
                      std::to_string(fillers.size()) + " fillers");
  for (std::size_t k = 0; k < m; ++k) {
    const auto& slot = comb.slots[comb.sigma[k]];
    WireList want_dom = fillers[k].mem_in.concat(slot.first);
    WireList want_cod = fillers[k].mem_out.concat(slot.second);
    if (!(fillers[k].kernel.dom == want_dom) || !(fillers[k].kernel.cod == want_cod))
      throw shape_error("plug: filler " + std::to_string(k) + " does not fit slot " +
                        std::to_string(comb.sigma[k]));
    if (k == 0 && fillers[k].mem_in.arity() != 0)
      throw shape_error("plug: first filler must not expect memory");
    if (k + 1 < m && !(fillers[k].mem_out == fillers[k + 1].mem_in))
      throw shape_error("plug: filler memory chain mismatch at slot " + std::to_string(k));
    if (k + 1 == m && fillers[k].mem_out.arity() != 0)
      throw shape_error("plug: last filler must not emit memory");
  }

  Circuit c;
  auto ext_in = c.add_inputs(comb.outer.first);
  auto cur = c.add_box(comb.pieces[0], ext_in, "g0");  // A_s(1), Y_1
  std::vector<Circuit::WireId> filler_mem;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t na = comb.slots[comb.sigma[k]].first.arity();
    std::vector<Circuit::WireId> a_wires(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(na));
    std::vector<Circuit::WireId> y_wires(cur.begin() + static_cast<std::ptrdiff_t>(na), cur.end());
    std::vector<Circuit::WireId> fin = filler_mem;
    fin.insert(fin.end(), a_wires.begin(), a_wires.end());
    auto fout = c.add_box(fillers[k].kernel, fin, "filler" + std::to_string(k));
    const std::size_t nz = fillers[k].mem_out.arity();
    filler_mem.assign(fout.begin(), fout.begin() + static_cast<std::ptrdiff_t>(nz));
    std::vector<Circuit::WireId> b_wires(fout.begin() + static_cast<std::ptrdiff_t>(nz), fout.end());
    std::vector<Circuit::WireId> pin = b_wires;
    pin.insert(pin.end(), y_wires.begin(), y_wires.end());
    cur = c.add_box(comb.pieces[k + 1], pin, "g" + std::to_string(k + 1));
  }
  return c.finish(cur);
}

// Kernel C (x) B_s(1) (x) ... (x) B_s(m) -> A_s(1) (x) ... (x) A_s(m) (x) D:
// every hole's A output is copied out and its B input supplied externally.
inline Morphism process_tensor(const Comb& comb) {
  comb.validate();
  const std::size_t m = comb.arity();
  Circuit c;
  auto ext_in = c.add_inputs(comb.outer.first);
  std::vector<std::vector<Circuit::WireId>> b_in(m);
  for (std::size_t k = 0; k < m; ++k) b_in[k] = c.add_inputs(comb.slots[comb.sigma[k]].second);

  std::vector<Circuit::WireId> outs;
  auto cur = c.add_box(comb.pieces[0], ext_in, "g0");
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t na = comb.slots[comb.sigma[k]].first.arity();
    outs.insert(outs.end(), cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(na));
    std::vector<Circuit::WireId> pin = b_in[k];
    pin.insert(pin.end(), cur.begin() + static_cast<std::ptrdiff_t>(na), cur.end());
    cur = c.add_box(comb.pieces[k + 1], pin, "g" + std::to_string(k + 1));
  }
  outs.insert(outs.end(), cur.begin(), cur.end());
  return c.finish(outs);
}

// Flattens a filler chain into the kernel A_s(1)..A_s(m) -> B_s(1)..B_s(m)
// (all A values supplied upfront; valid for pairing with a process tensor
// because each B_k output of the chain depends only on A_1..A_k).
inline Morphism filler_chain_kernel(const Comb& comb, const std::vector<Filler>& fillers) {
  Circuit c;
  std::vector<std::vector<Circuit::WireId>> a_in(fillers.size());
  for (std::size_t k = 0; k < fillers.size(); ++k)
    a_in[k] = c.add_inputs(comb.slots[comb.sigma[k]].first);
  std::vector<Circuit::WireId> mem, outs;
  for (std::size_t k = 0; k < fillers.size(); ++k) {
    std::vector<Circuit::WireId> fin = mem;
    fin.insert(fin.end(), a_in[k].begin(), a_in[k].end());
    auto fout = c.add_box(fillers[k].kernel, fin, "filler" + std::to_string(k));
    const std::size_t nz = fillers[k].mem_out.arity();
    mem.assign(fout.begin(), fout.begin() + static_cast<std::ptrdiff_t>(nz));
    outs.insert(outs.end(), fout.begin() + static_cast<std::ptrdiff_t>(nz), fout.end());
  }
  return c.finish(outs);
}

// Pairs a process tensor with a flattened filler chain:
//   result[d|c] = sum_{a,b} T[(a,d) | (c,b)] . F[b|a].
inline Morphism contract_process(const Comb& comb, const Morphism& tensor_kernel,
                                 const Morphism& chain) {
  WireList all_a, all_b;
  for (std::size_t k = 0; k < comb.arity(); ++k) {
    all_a = all_a.concat(comb.slots[comb.sigma[k]].first);
    all_b = all_b.concat(comb.slots[comb.sigma[k]].second);
  }
  const std::size_t na = all_a.total_size(), nb = all_b.total_size();
  const std::size_t nc = comb.outer.first.total_size(), nd = comb.outer.second.total_size();
  if (tensor_kernel.rows() != na * nd || tensor_kernel.cols() != nc * nb)
    throw shape_error("contract_process: tensor shape mismatch");
  if (chain.rows() != nb || chain.cols() != na)
    throw shape_error("contract_process: chain shape mismatch");
  Morphism r;
  r.dom = comb.outer.first;
  r.cod = comb.outer.second;
  r.flavor = combine_flavor(tensor_kernel.flavor, chain.flavor);
  r.matrix.assign(nd * nc, 0.0);
  for (std::size_t cidx = 0; cidx < nc; ++cidx)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t a = 0; a < na; ++a) {
        double fv = chain.at(b, a);
        if (fv == 0.0) continue;
        for (std::size_t d = 0; d < nd; ++d)
          r.at(d, cidx) += tensor_kernel.at(a * nd + d, cidx * nb + b) * fv;
      }
  return r;
}

inline bool comb_equal(const Comb& c1, const Comb& c2, Tolerance tol = {}) {
  if (c1.arity() != c2.arity() || c1.sigma != c2.sigma) throw shape_error("comb_equal: slot mismatch");
  for (std::size_t i = 0; i < c1.arity(); ++i)
    if (!(c1.slots[i].first == c2.slots[i].first) || !(c1.slots[i].second == c2.slots[i].second))
      throw shape_error("comb_equal: slot type mismatch");
  if (!(c1.outer.first == c2.outer.first) || !(c1.outer.second == c2.outer.second))
    throw shape_error("comb_equal: outer type mismatch");
  return max_abs_diff(process_tensor(c1), process_tensor(c2)) <= tol.eps;
}

// Nests inner combs into the outer comb's slots (identity visiting orders
// only). inner[i] must have outer pair equal to outer's slot sigma(i).
inline Comb nest(const Comb& outer, const std::vector<Comb>& inners) {
  outer.validate();
  const std::size_t m = outer.arity();
  if (inners.size() != m) throw shape_error("nest: need one inner comb per slot");
  auto is_id = [](const std::vector<std::size_t>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != i) return false;
    return true;
  };
  if (!is_id(outer.sigma)) throw shape_error("nest: only identity slot orders are supported");
  for (std::size_t i = 0; i < m; ++i) {
    inners[i].validate();
    if (!is_id(inners[i].sigma)) throw shape_error("nest: only identity slot orders are supported");
    if (!(inners[i].outer.first == outer.slots[i].first) ||
        !(inners[i].outer.second == outer.slots[i].second))
      throw shape_error("nest: inner comb " + std::to_string(i) + " does not fit slot");
  }

  Comb r;
  r.outer = outer.outer;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& s : inners[i].slots) r.slots.push_back(s);
  r.sigma.resize(r.slots.size());
  for (std::size_t i = 0; i < r.sigma.size(); ++i) r.sigma[i] = i;

  // Walk the outer pieces; between outer.g_i and outer.g_{i+1} splice the
  // pieces of inner i, tensored with the identity on the outer memory.
  Morphism pending = outer.pieces[0];  // ... -> C_i (x) Y_i so far
  for (std::size_t i = 0; i < m; ++i) {
    const WireList& y = outer.memory[i];
    const Morphism idy = identity(y);
    const auto& inner = inners[i];
    const std::size_t mi = inner.arity();
    if (mi == 0) {
      // Slot filled by a 0-comb: splice its single piece and keep walking.
      pending = compose(tensor(inner.pieces[0], idy), pending);
    } else {
      for (std::size_t j = 0; j <= mi; ++j) {
        Morphism lifted = tensor(inner.pieces[j], idy);
        pending = compose(lifted, pending);
        if (j < mi) {
          r.pieces.push_back(pending);
          r.memory.push_back(inner.memory[j].concat(y));
          pending = identity(inner.slots[j].second.concat(inner.memory[j]).concat(y));
        }
      }
    }
    pending = compose(outer.pieces[i + 1], pending);
  }
  r.pieces.push_back(pending);
  r.validate();
  return r;
}

}  // namespace catsec

#endif  // CATSEC_COMB_HPP
