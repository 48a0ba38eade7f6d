#ifndef CATSEC_RESOURCE_HPP
#define CATSEC_RESOURCE_HPP

// n-partite resources and protocols. A resource is a set of independent
// round-stamped blocks (kernels with named, party-tagged ports); a protocol
// is a set of per-party stages that consume target inputs / resource outputs
// / own memory and produce resource inputs / target outputs / memory.
// Application evaluates the induced circuit by data availability, which
// realizes the round interleaving without an explicit global schedule.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "circuit.hpp"
#include "finstoch.hpp"

namespace catsec {

struct Port {
  std::string name;   // globally unique wire name within a resource/protocol
  std::string party;
  int round = 1;
  FinSet type;
};

struct Block {
  std::string name;
  std::vector<Port> inputs;   // kernel dom order
  std::vector<Port> outputs;  // kernel cod order
  Morphism kernel;
};

struct PartiteResource {
  std::vector<std::string> parties;
  std::vector<Block> blocks;

  std::vector<Port> input_ports() const {
    std::vector<Port> r;
    for (const auto& b : blocks) r.insert(r.end(), b.inputs.begin(), b.inputs.end());
    return r;
  }
  std::vector<Port> output_ports() const {
    std::vector<Port> r;
    for (const auto& b : blocks) r.insert(r.end(), b.outputs.begin(), b.outputs.end());
    return r;
  }

  void validate() const {
    std::set<std::string> names;
    std::set<std::string> ps(parties.begin(), parties.end());
    for (const auto& b : blocks) {
      WireList dom, cod;
      for (const auto& p : b.inputs) {
        if (!names.insert(p.name).second)
          throw std::invalid_argument("resource: duplicate port name " + p.name);
        if (!ps.count(p.party)) throw std::invalid_argument("resource: unknown party " + p.party);
        if (p.round < 1) throw std::invalid_argument("resource: round stamps must be >= 1");
        dom.wires.push_back(p.type);
      }
      for (const auto& p : b.outputs) {
        if (!names.insert(p.name).second)
          throw std::invalid_argument("resource: duplicate port name " + p.name);
        if (!ps.count(p.party)) throw std::invalid_argument("resource: unknown party " + p.party);
        if (p.round < 1) throw std::invalid_argument("resource: round stamps must be >= 1");
        cod.wires.push_back(p.type);
      }
      if (!(b.kernel.dom == dom) || !(b.kernel.cod == cod))
        throw shape_error("resource: block '" + b.name + "' kernel shape mismatch");
      b.kernel.validate();
    }
  }

  // The whole resource as one kernel, ports in block-concatenated order.
  Morphism flat_kernel() const {
    Morphism r = identity(unit_wires());
    for (const auto& b : blocks) r = tensor(r, b.kernel);
    // tensor() concatenates dom/cod in block order, matching
    // input_ports()/output_ports(); blocks are independent by construction.
    return r;
  }
};

// One local computation step of one party. in_wires/out_wires name ports of
// the protocol's source and target resources plus private memory wires
// (any name not owned by either resource).
struct Stage {
  std::string party;
  Morphism kernel;  // dom/cod in in_wires/out_wires order
  std::vector<std::string> in_wires;
  std::vector<std::string> out_wires;
};

struct Protocol {
  PartiteResource source;
  PartiteResource target;
  std::vector<Stage> stages;
};

namespace detail {

struct NamedCircuit {
  Circuit circuit;
  std::map<std::string, Circuit::WireId> live;

  Circuit::WireId take(const std::string& name, const std::string& ctx) {
    auto it = live.find(name);
    if (it == live.end())
      throw shape_error(ctx + ": wire '" + name + "' is not available");
    Circuit::WireId id = it->second;
    live.erase(it);
    return id;
  }
};

// Evaluation by availability: repeatedly run any block or stage whose input
// wires have all been produced.
struct PendingBox {
  Morphism kernel;
  std::vector<std::string> ins;
  std::vector<std::string> outs;
  std::vector<FinSet> out_types;
  std::string label;
};

inline void run_to_completion(NamedCircuit& nc, std::vector<PendingBox> boxes) {
  bool progress = true;
  while (!boxes.empty() && progress) {
    progress = false;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      bool ready = true;
      for (const auto& w : boxes[i].ins)
        if (!nc.live.count(w)) {
          ready = false;
          break;
        }
      if (!ready) continue;
      std::vector<Circuit::WireId> ins;
      for (const auto& w : boxes[i].ins) ins.push_back(nc.take(w, boxes[i].label));
      auto outs = nc.circuit.add_box(boxes[i].kernel, ins, boxes[i].label);
      for (std::size_t j = 0; j < outs.size(); ++j) {
        if (nc.live.count(boxes[i].outs[j]))
          throw shape_error("protocol: wire '" + boxes[i].outs[j] + "' produced twice");
        nc.live[boxes[i].outs[j]] = outs[j];
      }
      boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(i));
      progress = true;
      break;
    }
  }
  if (!boxes.empty()) {
    std::string stuck;
    for (const auto& b : boxes) stuck += (stuck.empty() ? "" : ", ") + b.label;
    throw shape_error("protocol: circular or unsatisfiable wiring; stuck boxes: " + stuck);
  }
}

inline PendingBox box_of_block(const Block& b) {
  PendingBox pb;
  pb.kernel = b.kernel;
  for (const auto& p : b.inputs) pb.ins.push_back(p.name);
  for (const auto& p : b.outputs) pb.outs.push_back(p.name);
  pb.label = "block:" + b.name;
  return pb;
}

inline PendingBox box_of_stage(const Stage& s) {
  PendingBox pb;
  pb.kernel = s.kernel;
  pb.ins = s.in_wires;
  pb.outs = s.out_wires;
  pb.label = "stage:" + s.party;
  return pb;
}

}  // namespace detail

// Honest application: the target-shaped resource produced by running all
// source blocks and all per-party stages. Kernel port order follows the
// target's block-concatenated port order.
inline PartiteResource apply_protocol(const Protocol& p) {
  p.source.validate();
  p.target.validate();
  detail::NamedCircuit nc;
  for (const auto& port : p.target.input_ports())
    nc.live[port.name] = nc.circuit.add_input(port.type);

  std::vector<detail::PendingBox> boxes;
  for (const auto& b : p.source.blocks) boxes.push_back(detail::box_of_block(b));
  for (const auto& s : p.stages) boxes.push_back(detail::box_of_stage(s));
  detail::run_to_completion(nc, boxes);

  std::vector<Circuit::WireId> outs;
  for (const auto& port : p.target.output_ports()) outs.push_back(nc.take(port.name, "target"));
  if (!nc.live.empty())
    throw shape_error("protocol: unconsumed wire '" + nc.live.begin()->first + "'");
  Morphism k = nc.circuit.finish(outs);

  PartiteResource r;
  r.parties = p.target.parties;
  Block b;
  b.name = "applied";
  b.inputs = p.target.input_ports();
  b.outputs = p.target.output_ports();
  b.kernel = std::move(k);
  r.blocks.push_back(std::move(b));
  r.validate();
  return r;
}

// Appends a free resource to the protocol's source; its ports become extra
// source ports the stages may use (or that stay exposed to the parties).
inline Protocol with_free(const Protocol& p, const PartiteResource& free) {
  for (const auto& party : free.parties)
    if (std::find(p.source.parties.begin(), p.source.parties.end(), party) ==
        p.source.parties.end())
      throw std::invalid_argument("with_free: party " + party + " not in the protocol");
  Protocol r = p;
  for (const auto& b : free.blocks) r.source.blocks.push_back(b);
  r.source.validate();
  return r;
}

namespace detail {

// Structural interface match (party, direction, round, size) in canonical
// port order; returns the name map from `from` ports to `to` ports.
inline std::map<std::string, std::string> match_interface(const PartiteResource& from,
                                                          const PartiteResource& to,
                                                          const std::string& ctx) {
  auto fi = from.input_ports(), ti = to.input_ports();
  auto fo = from.output_ports(), to_ = to.output_ports();
  if (fi.size() != ti.size() || fo.size() != to_.size())
    throw shape_error(ctx + ": interface arity mismatch");
  std::map<std::string, std::string> m;
  auto link = [&](const std::vector<Port>& a, const std::vector<Port>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].party != b[i].party || !(a[i].type == b[i].type))
        throw shape_error(ctx + ": port " + a[i].name + " does not match " + b[i].name);
      m[a[i].name] = b[i].name;
    }
  };
  link(fi, ti);
  link(fo, to_);
  return m;
}

}  // namespace detail

// Sequential composition: p2 runs on p1's target. Ports are matched
// structurally (party/direction/size in canonical order); p2's stages are
// rewired onto p1's target port names, which the composite produces and
// consumes internally.
inline Protocol compose_protocols(const Protocol& p1, const Protocol& p2) {
  auto name_map = detail::match_interface(p2.source, p1.target, "compose_protocols");
  std::set<std::string> target_ports;
  for (const auto& port : p2.target.input_ports()) target_ports.insert(port.name);
  for (const auto& port : p2.target.output_ports()) target_ports.insert(port.name);
  Protocol r;
  r.source = p1.source;
  r.target = p2.target;
  r.stages = p1.stages;
  for (const auto& s : p2.stages) {
    Stage ns = s;
    auto rewire = [&](std::vector<std::string>& ws) {
      for (auto& w : ws) {
        auto it = name_map.find(w);
        if (it != name_map.end())
          w = it->second;
        else if (!target_ports.count(w))
          w = "p2." + w;  // private memory wires: keep namespaces apart
      }
    };
    rewire(ns.in_wires);
    rewire(ns.out_wires);
    r.stages.push_back(std::move(ns));
  }
  return r;
}

// Parallel composition; port and wire names from p2 get a prefix to stay
// disjoint from p1's.
inline Protocol tensor_protocols(const Protocol& p1, const Protocol& p2,
                                 const std::string& prefix = "par.") {
  Protocol r = p1;
  auto add_parties = [&](const std::vector<std::string>& ps) {
    for (const auto& p : ps)
      if (std::find(r.source.parties.begin(), r.source.parties.end(), p) ==
          r.source.parties.end()) {
        r.source.parties.push_back(p);
        r.target.parties.push_back(p);
      }
  };
  add_parties(p2.source.parties);
  add_parties(p2.target.parties);
  auto rename_block = [&](Block b) {
    b.name = prefix + b.name;
    for (auto& p : b.inputs) p.name = prefix + p.name;
    for (auto& p : b.outputs) p.name = prefix + p.name;
    return b;
  };
  for (const auto& b : p2.source.blocks) r.source.blocks.push_back(rename_block(b));
  for (const auto& b : p2.target.blocks) r.target.blocks.push_back(rename_block(b));
  for (const auto& s : p2.stages) {
    Stage ns = s;
    for (auto& w : ns.in_wires) w = prefix + w;
    for (auto& w : ns.out_wires) w = prefix + w;
    r.stages.push_back(std::move(ns));
  }
  return r;
}

// The do-nothing protocol on a resource: every port is forwarded unchanged;
// target ports get a "t." prefix.
inline Protocol identity_protocol(const PartiteResource& res) {
  Protocol p;
  p.source = res;
  p.target = res;
  for (auto& b : p.target.blocks) {
    b.name = "t." + b.name;
    for (auto& port : b.inputs) port.name = "t." + port.name;
    for (auto& port : b.outputs) port.name = "t." + port.name;
  }
  for (const auto& b : res.blocks) {
    for (const auto& port : b.inputs) {
      Stage s;
      s.party = port.party;
      s.kernel = identity(WireList{port.type});
      s.in_wires = {"t." + port.name};
      s.out_wires = {port.name};
      p.stages.push_back(std::move(s));
    }
    for (const auto& port : b.outputs) {
      Stage s;
      s.party = port.party;
      s.kernel = identity(WireList{port.type});
      s.in_wires = {port.name};
      s.out_wires = {"t." + port.name};
      p.stages.push_back(std::move(s));
    }
  }
  return p;
}

inline nlohmann::json to_json(const PartiteResource& r) {
  nlohmann::json j;
  j["parties"] = r.parties;
  nlohmann::json ports = nlohmann::json::array();
  for (const auto& p : r.input_ports())
    ports.push_back({{"party", p.party}, {"dir", "in"}, {"round", p.round}, {"size", p.type.size}});
  for (const auto& p : r.output_ports())
    ports.push_back({{"party", p.party}, {"dir", "out"}, {"round", p.round}, {"size", p.type.size}});
  j["ports"] = ports;
  j["kernel"] = r.flat_kernel().matrix;
  return j;
}

}  // namespace catsec

#endif  // CATSEC_RESOURCE_HPP
