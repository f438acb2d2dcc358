#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsqc/circuit.hpp"
#include "gsqc/generators.hpp"

namespace gsqc {

// Where to splice the measurement-based teleportation gadget.
//  AfterEveryCoupling: cut the *target* wire right after each coupling row.
//  BetweenCouplings:   cut each wire between two consecutive coupling
//                      participations (right after the first of the pair).
enum class TeleportPolicy { AfterEveryCoupling, BetweenCouplings };

namespace detail {

// cuts[qid] = sorted op indices; "cut after op c" sends ops 0..c to one piece
// and the rest to the next, with the gadget wired across the seam.
inline CircuitSpec splice_teleportation(const CircuitSpec& in,
                                        const std::map<std::string, std::vector<int>>& cuts,
                                        double lam) {
  struct Loc {
    std::string qubit;
    int op;
  };
  std::map<std::string, std::map<int, Loc>> op_map;  // (orig qid, orig op) -> new loc

  auto piece_id = [](const std::string& id, int j) {
    return id + "." + std::string(1, static_cast<char>('a' + j));
  };
  auto ancilla_id = [](const std::string& id, int j) {
    return id + ".m" + std::to_string(j + 1);
  };

  CircuitSpec out;
  out.epsilon = in.epsilon;
  for (const auto& q : in.qubits) {
    auto it = cuts.find(q.id);
    const std::vector<int>* cl = (it == cuts.end() || it->second.empty()) ? nullptr : &it->second;
    if (cl == nullptr) {
      QubitSpec copy = q;
      for (std::size_t oi = 0; oi < q.ops.size(); ++oi)
        op_map[q.id][static_cast<int>(oi)] = {q.id, static_cast<int>(oi)};
      out.qubits.push_back(std::move(copy));
      continue;
    }
    const int nc = static_cast<int>(cl->size());
    for (int j = 0; j <= nc; ++j) {
      const int lo = (j == 0) ? 0 : (*cl)[static_cast<std::size_t>(j - 1)] + 1;
      const int hi = (j == nc) ? static_cast<int>(q.ops.size()) - 1
                               : (*cl)[static_cast<std::size_t>(j)];
      if (lo > hi || hi >= static_cast<int>(q.ops.size()))
        throw std::invalid_argument("splice_teleportation: segment shorter than one row on qubit '" +
                                    q.id + "'");

      QubitSpec piece;
      piece.id = piece_id(q.id, j);
      piece.boundary = (j == 0) ? q.boundary : BoundaryCondition{{0.0, 0.0, -1.0}, q.boundary.E};
      if (j > 0)  // re-materializing head, partner filled in with the ancilla below
        piece.ops.push_back(RowOp::coupled_target(gate("X"), ancilla_id(q.id, j - 1), 2));
      for (int i = lo; i <= hi; ++i) {
        op_map[q.id][i] = {piece.id, static_cast<int>(piece.ops.size())};
        piece.ops.push_back(q.ops[static_cast<std::size_t>(i)]);
      }
      if (j < nc) {
        const int cc_row = static_cast<int>(piece.ops.size()) + 1;
        piece.ops.push_back(RowOp::coupled_control(ancilla_id(q.id, j), 3));
        piece.ops.push_back(RowOp::unitary(gate("H")));
        piece.ops.push_back(RowOp::project(0, lam));
        out.qubits.push_back(std::move(piece));

        QubitSpec m;
        m.id = ancilla_id(q.id, j);
        m.boundary = {{0.0, 0.0, -1.0}, q.boundary.E};
        m.ops.push_back(RowOp::unitary(gate("H")));
        m.ops.push_back(RowOp::coupled_control(piece_id(q.id, j + 1), 1));
        m.ops.push_back(RowOp::coupled_target(gate("X"), piece_id(q.id, j), cc_row));
        m.ops.push_back(RowOp::project(0, lam));
        out.qubits.push_back(std::move(m));
      } else {
        out.qubits.push_back(std::move(piece));
      }
    }
  }

  // rewire surviving couplings through the op map
  for (auto& q : out.qubits)
    for (auto& op : q.ops)
      if (op.is_coupling()) {
        auto qi = op_map.find(op.partner);
        if (qi == op_map.end()) continue;  // gadget-internal reference, already correct
        const Loc& loc = qi->second.at(op.partner_row - 1);
        op.partner = loc.qubit;
        op.partner_row = loc.op + 1;
      }
  return out;
}

inline double default_gadget_lambda(const CircuitSpec& spec) {
  double best = 0.0;
  for (const auto& q : spec.qubits)
    for (const auto& op : q.ops)
      if (op.kind == OpKind::Boost || op.kind == OpKind::Project)
        best = std::max(best, op.lambda);
  if (best <= 0.0)
    throw std::invalid_argument(
        "insert_teleportation: circuit has no boost/project lambda; pass gadget_lambda");
  return best;
}

inline std::map<std::string, std::vector<int>> select_cuts(const CircuitSpec& spec,
                                                           TeleportPolicy policy) {
  std::map<std::string, std::vector<int>> cuts;
  for (const auto& q : spec.qubits) {
    std::vector<int> cq;
    if (policy == TeleportPolicy::AfterEveryCoupling) {
      for (std::size_t oi = 0; oi < q.ops.size(); ++oi)
        if (q.ops[oi].kind == OpKind::CoupledTarget) cq.push_back(static_cast<int>(oi));
    } else {
      std::vector<int> parts;
      for (std::size_t oi = 0; oi < q.ops.size(); ++oi)
        if (q.ops[oi].is_coupling()) parts.push_back(static_cast<int>(oi));
      for (std::size_t k = 0; k + 1 < parts.size(); ++k) cq.push_back(parts[k]);
    }
    if (!cq.empty()) cuts[q.id] = std::move(cq);
  }
  return cuts;
}

}  // namespace detail

inline CircuitSpec insert_teleportation(const CircuitSpec& spec, TeleportPolicy policy,
                                        std::optional<double> gadget_lambda = std::nullopt) {
  const double lam = gadget_lambda ? *gadget_lambda : detail::default_gadget_lambda(spec);
  return detail::splice_teleportation(spec, detail::select_cuts(spec, policy), lam);
}

// Explicit-cut form: cut each listed wire directly after the given op indices.
inline CircuitSpec insert_teleportation(const CircuitSpec& spec,
                                        const std::map<std::string, std::vector<int>>& cuts,
                                        std::optional<double> gadget_lambda = std::nullopt) {
  const double lam = gadget_lambda ? *gadget_lambda : detail::default_gadget_lambda(spec);
  return detail::splice_teleportation(spec, cuts, lam);
}

// Four-qubit CNOT chain with a teleportation gadget on *both* sides of every
// coupling, the fully-protected layout: 10 wire pieces + 6 ancillas.
inline CircuitSpec fig2_circuit(double lambda, int rows_between = 0) {
  CircuitSpec chain = chain_circuit(4, rows_between, lambda);
  std::map<std::string, std::vector<int>> cuts;
  for (const auto& q : chain.qubits) {
    std::vector<int> cq;
    for (std::size_t oi = 0; oi < q.ops.size(); ++oi)
      if (q.ops[oi].is_coupling()) cq.push_back(static_cast<int>(oi));
    if (!cq.empty()) cuts[q.id] = std::move(cq);
  }
  return detail::splice_teleportation(chain, cuts, lambda);
}

}  // namespace gsqc
