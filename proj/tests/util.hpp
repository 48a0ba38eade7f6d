#pragma once

// Shared helpers for the test suite: seeded random generators for wire
// lists, stochastic kernels, and states.

#include <random>
#include <vector>

#include <catsec/finstoch.hpp>

namespace testutil {

using Rng = std::mt19937_64;

inline catsec::WireList random_wires(Rng& rng, std::size_t max_arity, std::size_t max_size,
                                     std::size_t min_arity = 1) {
  std::uniform_int_distribution<std::size_t> na(min_arity, max_arity);
  std::uniform_int_distribution<std::size_t> ns(1, max_size);
  catsec::WireList w;
  const std::size_t n = na(rng);
  for (std::size_t i = 0; i < n; ++i) w.wires.push_back(catsec::FinSet(ns(rng)));
  return w;
}

// A random column-stochastic kernel via Dirichlet-ish columns.
inline catsec::Morphism random_stochastic(Rng& rng, const catsec::WireList& dom,
                                          const catsec::WireList& cod) {
  std::exponential_distribution<double> ex(1.0);
  const std::size_t r = cod.total_size(), c = dom.total_size();
  std::vector<double> m(r * c, 0.0);
  for (std::size_t j = 0; j < c; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < r; ++i) s += (m[i * c + j] = ex(rng) + 1e-12);
    for (std::size_t i = 0; i < r; ++i) m[i * c + j] /= s;
  }
  return catsec::Morphism(dom, cod, std::move(m));
}

inline catsec::Morphism random_state(Rng& rng, const catsec::WireList& cod) {
  return random_stochastic(rng, catsec::unit_wires(), cod);
}

// A random deterministic kernel (one unit entry per column).
inline catsec::Morphism random_deterministic(Rng& rng, const catsec::WireList& dom,
                                             const catsec::WireList& cod) {
  const std::size_t r = cod.total_size(), c = dom.total_size();
  std::uniform_int_distribution<std::size_t> pick(0, r - 1);
  std::vector<double> m(r * c, 0.0);
  for (std::size_t j = 0; j < c; ++j) m[pick(rng) * c + j] = 1.0;
  return catsec::Morphism(dom, cod, std::move(m));
}

}  // namespace testutil
