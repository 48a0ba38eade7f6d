#ifndef CATSEC_PROTOCOLS_HPP
#define CATSEC_PROTOCOLS_HPP

// Worked protocol instances: the one-time pad over an arbitrary finite
// group and Diffie-Hellman key exchange over a cyclic group, plus the exact
// DDH total-variation advantage by exhaustive enumeration.

#include <cstddef>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "group.hpp"
#include "resource.hpp"

namespace catsec {

struct OtpInstance {
  FiniteGroup group;
  Protocol protocol;
};

struct DhkeInstance {
  FiniteGroup group;
  std::size_t generator = 0;
  Protocol protocol;
};

// Source: shared uniform key (Alice, Bob) (x) authenticated broadcast
// Alice -> {Bob, Eve}. Target: secure channel Alice -> Bob (Eve sees
// nothing). Alice adds the key to her message; Bob subtracts it.
inline OtpInstance build_otp(const FiniteGroup& G) {
  GroupGens gens = group_generators(G);
  const FinSet g = G.carrier;

  OtpInstance inst;
  inst.group = G;
  Protocol& p = inst.protocol;
  p.source.parties = {"Alice", "Bob", "Eve"};
  p.target.parties = {"Alice", "Bob", "Eve"};

  Block key;
  key.name = "key";
  key.outputs = {{"key.A", "Alice", 1, g}, {"key.B", "Bob", 1, g}};
  key.kernel = compose(copy(g), gens.integral);
  p.source.blocks.push_back(key);

  Block auth;
  auth.name = "auth";
  auth.inputs = {{"auth.in", "Alice", 2, g}};
  auth.outputs = {{"auth.B", "Bob", 2, g}, {"auth.E", "Eve", 2, g}};
  auth.kernel = copy(g);
  p.source.blocks.push_back(auth);

  Block sec;
  sec.name = "sec";
  sec.inputs = {{"sec.in", "Alice", 1, g}};
  sec.outputs = {{"sec.out", "Bob", 1, g}};
  sec.kernel = identity(WireList{g});
  p.target.blocks.push_back(sec);

  // Alice: ciphertext = m * k.
  p.stages.push_back({"Alice", gens.mult, {"sec.in", "key.A"}, {"auth.in"}});
  // Bob: m = c * k^{-1}.
  Morphism bob = compose(gens.mult, tensor(identity(WireList{g}), gens.inv));
  p.stages.push_back({"Bob", bob, {"auth.B", "key.B"}, {"sec.out"}});
  // Eve (honest) discards her wiretap.
  p.stages.push_back({"Eve", discard(g), {"auth.E"}, {}});
  return inst;
}

// Source: two broadcast channels (Alice -> {Bob, Eve}, Bob -> {Alice, Eve}).
// Target: shared uniform key. Alice samples a, broadcasts g^a, computes
// (g^b)^a; Bob symmetrically.
inline DhkeInstance build_dhke(const FiniteGroup& G, std::size_t g_index) {
  const std::size_t n = G.carrier.size;
  ActionGens act = action_generators(FinSet(n, "Z" + std::to_string(n)), G, g_index);
  const FinSet g = G.carrier;
  const FinSet zn = act.modulus;

  DhkeInstance inst;
  inst.group = G;
  inst.generator = g_index;
  Protocol& p = inst.protocol;
  p.source.parties = {"Alice", "Bob", "Eve"};
  p.target.parties = {"Alice", "Bob", "Eve"};

  Block bca;
  bca.name = "bcastA";
  bca.inputs = {{"bcastA.in", "Alice", 1, g}};
  bca.outputs = {{"bcastA.B", "Bob", 1, g}, {"bcastA.E", "Eve", 1, g}};
  bca.kernel = copy(g);
  p.source.blocks.push_back(bca);

  Block bcb;
  bcb.name = "bcastB";
  bcb.inputs = {{"bcastB.in", "Bob", 1, g}};
  bcb.outputs = {{"bcastB.A", "Alice", 1, g}, {"bcastB.E", "Eve", 1, g}};
  bcb.kernel = copy(g);
  p.source.blocks.push_back(bcb);

  Block keyblk;
  keyblk.name = "key";
  keyblk.outputs = {{"key.A", "Alice", 1, g}, {"key.B", "Bob", 1, g}};
  keyblk.kernel = compose(copy(g), uniform(g));
  p.target.blocks.push_back(keyblk);

  // Round-1 stage: sample an exponent, output (g^x, x-kept-as-memory).
  Morphism sample = [&] {
    Circuit c;
    auto x = c.add_box(act.exp_rand, {}, "rand");
    auto xx = c.add_box(copy(zn), {x[0]}, "copy");
    auto gp = c.add_box(act.gen_point, {}, "gen");
    auto ga = c.add_box(act.act, {xx[0], gp[0]}, "act");
    return c.finish({ga[0], xx[1]});
  }();
  // Round-2 stage: key = (peer broadcast)^own exponent; dom = Z_n (x) G.
  const Morphism& finishk = act.act;

  p.stages.push_back({"Alice", sample, {}, {"bcastA.in", "mem.A"}});
  p.stages.push_back({"Alice", finishk, {"mem.A", "bcastB.A"}, {"key.A"}});
  p.stages.push_back({"Bob", sample, {}, {"bcastB.in", "mem.B"}});
  p.stages.push_back({"Bob", finishk, {"mem.B", "bcastA.B"}, {"key.B"}});
  p.stages.push_back({"Eve", discard_all(WireList{g, g}), {"bcastA.E", "bcastB.E"}, {}});
  return inst;
}

// Exact TV distance between (g^a, g^b, g^{ab}) and (g^a, g^b, g^c) under
// independent uniform exponents, by full enumeration.
inline double ddh_tv_advantage(const FiniteGroup& G, std::size_t g_index) {
  const std::size_t n = G.carrier.size;
  if (!G.generates(g_index))
    throw std::invalid_argument("ddh: index does not generate the group");
  const std::size_t m = n * n * n;
  std::vector<double> real(m, 0.0), ideal(m, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t ga = G.power(g_index, a);
      std::size_t gb = G.power(g_index, b);
      std::size_t gab = G.power(g_index, (a * b) % n);
      real[(ga * n + gb) * n + gab] += 1.0 / static_cast<double>(n * n);
      for (std::size_t c = 0; c < n; ++c)
        ideal[(ga * n + gb) * n + G.power(g_index, c)] += 1.0 / static_cast<double>(m);
    }
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) d += std::abs(real[i] - ideal[i]);
  return 0.5 * d;
}

}  // namespace catsec

#endif  // CATSEC_PROTOCOLS_HPP
