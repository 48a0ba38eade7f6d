#ifndef CATSEC_CIRCUIT_HPP
#define CATSEC_CIRCUIT_HPP

// A linear wiring evaluator: boxes (Morphisms) connected by wires, each wire
// produced exactly once and consumed exactly once (or exposed as an external
// input/output). Boxes are composed in the order they were added; a box may
// only consume wires that already exist, so callers list producers first.
//
// Evaluation keeps a frontier of live wires and a running morphism from the
// external inputs to the frontier. Applying a box permutes its input wires to
// the front of the frontier (a row reindexing, no permutation matrix is ever
// materialized) and multiplies the box against the leading block.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "finstoch.hpp"

namespace catsec {

class Circuit {
 public:
  using WireId = std::size_t;

  WireId add_input(const FinSet& s) {
    WireId id = new_wire(s);
    input_order_.push_back(id);
    frontier_.push_back(id);
    return id;
  }

  std::vector<WireId> add_inputs(const WireList& wl) {
    std::vector<WireId> ids;
    ids.reserve(wl.arity());
    for (const auto& w : wl.wires) ids.push_back(add_input(w));
    return ids;
  }

  // Consumes `ins` (in the order of the box's dom) and creates the box's
  // cod wires. Returns the new wire ids in cod order.
  std::vector<WireId> add_box(const Morphism& box, const std::vector<WireId>& ins,
                              const std::string& name = {}) {
    if (ins.size() != box.dom.arity())
      throw shape_error("circuit: box '" + name + "' expects " +
                        std::to_string(box.dom.arity()) + " inputs, got " +
                        std::to_string(ins.size()));
    for (std::size_t i = 0; i < ins.size(); ++i) {
      const auto& w = wire_at(ins[i], name);
      if (!(w == box.dom.wires[i]))
        throw shape_error("circuit: box '" + name + "' input " + std::to_string(i) +
                          " has size " + std::to_string(w.size) + ", expected " +
                          std::to_string(box.dom.wires[i].size));
    }
    steps_.push_back({box, ins, {}});
    auto& step = steps_.back();
    step.outs.reserve(box.cod.arity());
    for (const auto& w : box.cod.wires) step.outs.push_back(new_wire(w));
    consume(ins, name);
    for (auto id : step.outs) frontier_.push_back(id);
    return step.outs;
  }

  // Evaluates the circuit into a single morphism with the external outputs
  // in the given order. Every live wire must be listed exactly once.
  Morphism finish(const std::vector<WireId>& outs) const {
    // Replay the steps against a fresh frontier.
    std::vector<WireId> frontier = input_order_;
    WireList dom;
    for (auto id : input_order_) dom.wires.push_back(wires_[id]);
    Morphism f = identity(dom);
    for (const auto& step : steps_) {
      reorder_front(f, frontier, step.ins);
      apply_leading(f, frontier, step);
    }
    // Final permutation to the requested output order.
    if (outs.size() != frontier.size())
      throw shape_error("circuit: " + std::to_string(frontier.size()) +
                        " live wires but " + std::to_string(outs.size()) +
                        " outputs requested");
    reorder_front(f, frontier, outs);
    if (frontier != outs) throw shape_error("circuit: output list does not match live wires");
    return f;
  }

  const FinSet& wire_set(WireId id) const { return wires_[id]; }

 private:
  struct Step {
    Morphism box;
    std::vector<WireId> ins;
    std::vector<WireId> outs;
  };

  WireId new_wire(const FinSet& s) {
    wires_.push_back(s);
    return wires_.size() - 1;
  }

  const FinSet& wire_at(WireId id, const std::string& ctx) const {
    if (id >= wires_.size()) throw shape_error("circuit: unknown wire in '" + ctx + "'");
    return wires_[id];
  }

  void consume(const std::vector<WireId>& ins, const std::string& name) {
    for (auto id : ins) {
      bool found = false;
      for (std::size_t i = 0; i < frontier_.size(); ++i)
        if (frontier_[i] == id) {
          frontier_.erase(frontier_.begin() + static_cast<std::ptrdiff_t>(i));
          found = true;
          break;
        }
      if (!found)
        throw shape_error("circuit: box '" + name + "' consumes wire " + std::to_string(id) +
                          " which is not live (already consumed or never produced)");
    }
  }

  // Permute f's cod so the wires in `lead` come first, in order.
  void reorder_front(Morphism& f, std::vector<WireId>& frontier,
                     const std::vector<WireId>& lead) const {
    std::vector<WireId> rest;
    for (auto id : frontier) {
      bool is_lead = false;
      for (auto l : lead)
        if (l == id) {
          is_lead = true;
          break;
        }
      if (!is_lead) rest.push_back(id);
    }
    std::vector<WireId> target = lead;
    target.insert(target.end(), rest.begin(), rest.end());
    if (target == frontier) return;

    // Row reindex: new row index = position of the tuple under the new order.
    WireList old_wl, new_wl;
    for (auto id : frontier) old_wl.wires.push_back(wires_[id]);
    for (auto id : target) new_wl.wires.push_back(wires_[id]);
    std::vector<std::size_t> pos(target.size());  // new slot -> old slot
    for (std::size_t j = 0; j < target.size(); ++j) {
      for (std::size_t i = 0; i < frontier.size(); ++i)
        if (frontier[i] == target[j]) {
          pos[j] = i;
          break;
        }
    }
    const std::size_t n = f.rows();
    const std::size_t cols = f.cols();
    std::vector<double> out(f.matrix.size());
    for (std::size_t r = 0; r < n; ++r) {
      auto t = unflatten(old_wl, r);
      std::vector<std::size_t> nt(pos.size());
      for (std::size_t j = 0; j < pos.size(); ++j) nt[j] = t[pos[j]];
      std::size_t nr = flat_index(new_wl, nt);
      for (std::size_t c = 0; c < cols; ++c) out[nr * cols + c] = f.matrix[r * cols + c];
    }
    f.matrix = std::move(out);
    f.cod = new_wl;
    frontier = target;
  }

  // Frontier is [step.ins..., rest...]; replace the leading block via the box.
  void apply_leading(Morphism& f, std::vector<WireId>& frontier, const Step& step) const {
    const std::size_t din = step.box.cols();
    const std::size_t dout = step.box.rows();
    const std::size_t rest = f.rows() / (din == 0 ? 1 : din);
    const std::size_t cols = f.cols();
    std::vector<double> out(dout * rest * cols, 0.0);
    for (std::size_t o = 0; o < dout; ++o)
      for (std::size_t i = 0; i < din; ++i) {
        double b = step.box.at(o, i);
        if (b == 0.0) continue;
        const double* src = &f.matrix[i * rest * cols];
        double* dst = &out[o * rest * cols];
        for (std::size_t k = 0; k < rest * cols; ++k) dst[k] += b * src[k];
      }
    f.matrix = std::move(out);
    WireList new_cod = step.box.cod;
    for (std::size_t i = step.ins.size(); i < frontier.size(); ++i)
      new_cod.wires.push_back(wires_[frontier[i]]);
    f.cod = new_cod;
    f.flavor = combine_flavor(f.flavor, step.box.flavor);
    std::vector<WireId> nf = step.outs;
    nf.insert(nf.end(), frontier.begin() + static_cast<std::ptrdiff_t>(step.ins.size()),
              frontier.end());
    frontier = nf;
  }

  std::vector<FinSet> wires_;
  std::vector<WireId> input_order_;
  std::vector<WireId> frontier_;
  std::vector<Step> steps_;
};

}  // namespace catsec

#endif  // CATSEC_CIRCUIT_HPP
