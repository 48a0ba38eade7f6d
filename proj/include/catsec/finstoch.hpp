#ifndef CATSEC_FINSTOCH_HPP
#define CATSEC_FINSTOCH_HPP

// Finite sets, column-stochastic matrices and the symmetric monoidal
// operations on them: composition, tensor (Kronecker), structural
// morphisms and the channel total-variation pseudometric.
//
// Conventions, fixed once:
//  - matrices are column-stochastic, entry (j,i) = P(output j | input i);
//  - composition is left matrix multiplication (g after f = g.matrix * f.matrix);
//  - a tuple (x_1,...,x_k) over wires of sizes (n_1,...,n_k) has flat index
//    x_1*n_2*...*n_k + ... + x_k (big-endian, leftmost wire most significant).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace catsec {

struct Tolerance {
  double eps = 1e-9;
};

class shape_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FinSet {
  std::size_t size = 1;
  std::string label;  // optional, purely diagnostic

  FinSet() = default;
  explicit FinSet(std::size_t n, std::string name = {}) : size(n), label(std::move(name)) {
    if (n == 0) throw std::invalid_argument("FinSet: size must be >= 1");
  }
  friend bool operator==(const FinSet& a, const FinSet& b) { return a.size == b.size; }
};

// Ordered list of wires; the empty list is the tensor unit I.
struct WireList {
  std::vector<FinSet> wires;

  WireList() = default;
  WireList(std::initializer_list<FinSet> ws) : wires(ws) {}
  explicit WireList(std::vector<FinSet> ws) : wires(std::move(ws)) {}

  std::size_t total_size() const {
    std::size_t t = 1;
    for (const auto& w : wires) t *= w.size;
    return t;
  }
  std::size_t arity() const { return wires.size(); }
  bool empty() const { return wires.empty(); }

  WireList concat(const WireList& other) const {
    WireList r = *this;
    r.wires.insert(r.wires.end(), other.wires.begin(), other.wires.end());
    return r;
  }
  friend bool operator==(const WireList& a, const WireList& b) {
    if (a.wires.size() != b.wires.size()) return false;
    for (std::size_t i = 0; i < a.wires.size(); ++i)
      if (!(a.wires[i] == b.wires[i])) return false;
    return true;
  }
};

inline WireList single(std::size_t n, std::string label = {}) {
  return WireList{std::vector<FinSet>{FinSet(n, std::move(label))}};
}
inline WireList unit_wires() { return WireList{}; }

// Flat index helpers (big-endian mixed radix over wire sizes).
inline std::size_t flat_index(const WireList& wl, const std::vector<std::size_t>& tuple) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < wl.wires.size(); ++i) idx = idx * wl.wires[i].size + tuple[i];
  return idx;
}
inline std::vector<std::size_t> unflatten(const WireList& wl, std::size_t idx) {
  std::vector<std::size_t> tuple(wl.wires.size());
  for (std::size_t i = wl.wires.size(); i-- > 0;) {
    tuple[i] = idx % wl.wires[i].size;
    idx /= wl.wires[i].size;
  }
  return tuple;
}

enum class Flavor { stochastic, nonneg };

struct Morphism {
  WireList dom;
  WireList cod;
  std::vector<double> matrix;  // row-major, shape cod.total_size() x dom.total_size()
  Flavor flavor = Flavor::stochastic;

  Morphism() : matrix{1.0} {}
  Morphism(WireList d, WireList c, std::vector<double> m, Flavor fl = Flavor::stochastic)
      : dom(std::move(d)), cod(std::move(c)), matrix(std::move(m)), flavor(fl) {
    validate();
  }

  std::size_t rows() const { return cod.total_size(); }
  std::size_t cols() const { return dom.total_size(); }
  double& at(std::size_t r, std::size_t c) { return matrix[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return matrix[r * cols() + c]; }

  void validate(double tol = 1e-9) const {
    if (matrix.size() != rows() * cols())
      throw shape_error("Morphism: matrix size does not match dom/cod shapes");
    for (double v : matrix)
      if (v < -1e-12 || !std::isfinite(v))
        throw std::invalid_argument("Morphism: entries must be finite and nonnegative");
    if (flavor == Flavor::stochastic) {
      for (std::size_t c = 0; c < cols(); ++c) {
        double s = 0;
        for (std::size_t r = 0; r < rows(); ++r) s += at(r, c);
        if (std::abs(s - 1.0) > tol)
          throw std::invalid_argument("Morphism: column " + std::to_string(c) +
                                      " sums to " + std::to_string(s) + ", expected 1");
      }
    }
  }
};

inline Flavor combine_flavor(Flavor a, Flavor b) {
  return (a == Flavor::stochastic && b == Flavor::stochastic) ? Flavor::stochastic
                                                              : Flavor::nonneg;
}

// g after f.
inline Morphism compose(const Morphism& g, const Morphism& f) {
  if (!(f.cod == g.dom)) {
    std::size_t k = 0;
    std::size_t n = std::min(f.cod.arity(), g.dom.arity());
    while (k < n && f.cod.wires[k] == g.dom.wires[k]) ++k;
    throw shape_error("compose: interface mismatch at wire position " + std::to_string(k) +
                      " (cod arity " + std::to_string(f.cod.arity()) + ", dom arity " +
                      std::to_string(g.dom.arity()) + ")");
  }
  Morphism r;
  r.dom = f.dom;
  r.cod = g.cod;
  r.flavor = combine_flavor(f.flavor, g.flavor);
  r.matrix.assign(r.rows() * r.cols(), 0.0);
  const std::size_t inner = f.rows();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      double gik = g.at(i, k);
      if (gik == 0.0) continue;
      for (std::size_t j = 0; j < f.cols(); ++j) r.at(i, j) += gik * f.at(k, j);
    }
  return r;
}

// Kronecker product, f most significant.
inline Morphism tensor(const Morphism& f, const Morphism& g) {
  Morphism r;
  r.dom = f.dom.concat(g.dom);
  r.cod = f.cod.concat(g.cod);
  r.flavor = combine_flavor(f.flavor, g.flavor);
  r.matrix.assign(r.rows() * r.cols(), 0.0);
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) {
      double fij = f.at(i, j);
      if (fij == 0.0) continue;
      for (std::size_t k = 0; k < g.rows(); ++k)
        for (std::size_t l = 0; l < g.cols(); ++l)
          r.at(i * g.rows() + k, j * g.cols() + l) = fij * g.at(k, l);
    }
  return r;
}

inline Morphism identity(const WireList& on) {
  Morphism r;
  r.dom = on;
  r.cod = on;
  const std::size_t n = on.total_size();
  r.matrix.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) r.matrix[i * n + i] = 1.0;
  return r;
}

// Wire reordering: cod wire j carries dom wire perm[j].
inline Morphism permute_wires(const WireList& on, const std::vector<std::size_t>& perm) {
  if (perm.size() != on.arity()) throw std::invalid_argument("permute: arity mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) throw std::invalid_argument("permute: not a permutation");
    seen[p] = true;
  }
  WireList cod;
  for (auto p : perm) cod.wires.push_back(on.wires[p]);
  Morphism r;
  r.dom = on;
  r.cod = cod;
  const std::size_t n = on.total_size();
  r.matrix.assign(n * n, 0.0);
  for (std::size_t in = 0; in < n; ++in) {
    auto t = unflatten(on, in);
    std::vector<std::size_t> out_t(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) out_t[j] = t[perm[j]];
    r.at(flat_index(cod, out_t), in) = 1.0;
  }
  return r;
}

inline Morphism swap(const FinSet& a, const FinSet& b) {
  return permute_wires(WireList{a, b}, {1, 0});
}

inline Morphism copy(const FinSet& x) {
  Morphism r;
  r.dom = WireList{x};
  r.cod = WireList{x, x};
  r.matrix.assign(x.size * x.size * x.size, 0.0);
  for (std::size_t v = 0; v < x.size; ++v) r.at(v * x.size + v, v) = 1.0;
  return r;
}

inline Morphism discard(const FinSet& x) {
  Morphism r;
  r.dom = WireList{x};
  r.cod = unit_wires();
  r.matrix.assign(x.size, 1.0);
  return r;
}

inline Morphism discard_all(const WireList& on) {
  Morphism r;
  r.dom = on;
  r.cod = unit_wires();
  r.matrix.assign(on.total_size(), 1.0);
  return r;
}

inline Morphism point(std::size_t x, const FinSet& on) {
  if (x >= on.size) throw std::invalid_argument("point: index out of range");
  Morphism r;
  r.dom = unit_wires();
  r.cod = WireList{on};
  r.matrix.assign(on.size, 0.0);
  r.matrix[x] = 1.0;
  return r;
}

inline Morphism uniform(const FinSet& on) {
  Morphism r;
  r.dom = unit_wires();
  r.cod = WireList{on};
  r.matrix.assign(on.size, 1.0 / static_cast<double>(on.size));
  return r;
}

// Channel pseudometric: worst case over deterministic inputs of the
// total-variation distance of the output distributions.
inline double tv_distance(const Morphism& r, const Morphism& s) {
  if (!(r.dom == s.dom) || !(r.cod == s.cod))
    throw shape_error("tv_distance: morphisms must share dom and cod");
  double best = 0.0;
  for (std::size_t c = 0; c < r.cols(); ++c) {
    double d = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i) d += std::abs(r.at(i, c) - s.at(i, c));
    best = std::max(best, 0.5 * d);
  }
  return best;
}

inline double max_abs_diff(const Morphism& r, const Morphism& s) {
  if (!(r.dom == s.dom) || !(r.cod == s.cod))
    throw shape_error("max_abs_diff: morphisms must share dom and cod");
  double best = 0.0;
  for (std::size_t i = 0; i < r.matrix.size(); ++i)
    best = std::max(best, std::abs(r.matrix[i] - s.matrix[i]));
  return best;
}

}  // namespace catsec

#endif  // CATSEC_FINSTOCH_HPP
