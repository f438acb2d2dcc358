#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsqc/circuit.hpp"

namespace gsqc {

enum class Terminal { Boost, Project };

inline RowOp terminal_op(Terminal t, double lambda) {
  return t == Terminal::Boost ? RowOp::boost(lambda) : RowOp::project(0, lambda);
}

// Single column, n_rows rows: identity wire with an optional terminal row
// (boost / projection); nullopt keeps the wire free all the way down.
inline CircuitSpec single_qubit_circuit(int n_rows, std::optional<RowOp> terminal,
                                        BoundaryCondition b = {{0.0, 0.0, -1.0}, 10.0}) {
  if (n_rows < 2) throw std::invalid_argument("single_qubit_circuit: need at least 2 rows");
  QubitSpec q;
  q.id = "q";
  q.boundary = b;
  const int fill = n_rows - 1 - (terminal ? 1 : 0);
  for (int i = 0; i < fill; ++i) q.ops.push_back(RowOp::unitary(gate("I")));
  if (terminal) q.ops.push_back(*terminal);
  CircuitSpec spec;
  spec.qubits.push_back(std::move(q));
  return spec;
}

// Two columns joined by one two-qubit gate (default CNOT), each ending in a
// boost or a projection.  Control starts in |+> (a = -x), target in |1>
// (a = +z); the coupling sits at row rows-2 on both columns.
inline CircuitSpec two_qubit_circuit(int rows, double lambda, Terminal ctl = Terminal::Boost,
                                     Terminal tgt = Terminal::Boost, GateMatrix g = gate("X")) {
  if (rows < 3) throw std::invalid_argument("two_qubit_circuit: need at least 3 rows");
  const int jc = rows - 2;  // coupling row on both columns
  QubitSpec qc, qt;
  qc.id = "ctl";
  qc.boundary = {{-1.0, 0.0, 0.0}, 10.0};
  qt.id = "tgt";
  qt.boundary = {{0.0, 0.0, 1.0}, 10.0};
  for (int i = 0; i < rows - 3; ++i) {
    qc.ops.push_back(RowOp::unitary(gate("I")));
    qt.ops.push_back(RowOp::unitary(gate("I")));
  }
  qc.ops.push_back(RowOp::coupled_control("tgt", jc));
  qt.ops.push_back(RowOp::coupled_target(std::move(g), "ctl", jc));
  qc.ops.push_back(terminal_op(ctl, lambda));
  qt.ops.push_back(terminal_op(tgt, lambda));
  CircuitSpec spec;
  spec.qubits.push_back(std::move(qc));
  spec.qubits.push_back(std::move(qt));
  return spec;
}

// Linear CNOT chain q0 -> q1 -> ... -> q{N-1}; rows_between identity rows
// before each coupling participation, boost terminal everywhere.  q0 starts
// in |+>, the rest in |1>.
inline CircuitSpec chain_circuit(int N, int rows_between, double lambda) {
  if (N < 2) throw std::invalid_argument("chain_circuit: need at least 2 qubits");
  if (rows_between < 0) throw std::invalid_argument("chain_circuit: rows_between must be >= 0");
  CircuitSpec spec;
  auto qid = [](int i) { return "q" + std::to_string(i); };
  for (int i = 0; i < N; ++i) {
    QubitSpec q;
    q.id = qid(i);
    q.boundary = i == 0 ? BoundaryCondition{{-1.0, 0.0, 0.0}, 10.0}
                        : BoundaryCondition{{0.0, 0.0, 1.0}, 10.0};
    if (i > 0) {
      for (int r = 0; r < rows_between; ++r) q.ops.push_back(RowOp::unitary(gate("I")));
      q.ops.push_back(RowOp::coupled_target(gate("X"), qid(i - 1), -1));
    }
    if (i < N - 1) {
      for (int r = 0; r < rows_between; ++r) q.ops.push_back(RowOp::unitary(gate("I")));
      q.ops.push_back(RowOp::coupled_control(qid(i + 1), -1));
    }
    q.ops.push_back(RowOp::boost(lambda));
    spec.qubits.push_back(std::move(q));
  }
  // resolve partner rows: the CC of qubit i pairs with the CT of qubit i+1
  for (int i = 0; i + 1 < N; ++i) {
    auto& qa = spec.qubits[static_cast<std::size_t>(i)];
    auto& qb = spec.qubits[static_cast<std::size_t>(i + 1)];
    int ca = -1, cb = -1;
    for (std::size_t oi = 0; oi < qa.ops.size(); ++oi)
      if (qa.ops[oi].kind == OpKind::CoupledControl) ca = static_cast<int>(oi);
    for (std::size_t oi = 0; oi < qb.ops.size(); ++oi)
      if (qb.ops[oi].kind == OpKind::CoupledTarget) cb = static_cast<int>(oi);
    qa.ops[static_cast<std::size_t>(ca)].partner_row = cb + 1;
    qb.ops[static_cast<std::size_t>(cb)].partner_row = ca + 1;
  }
  return spec;
}

// Inverse quantum Fourier transform on N wires, phase-daggered scan order:
// for each wire i, Hadamard then controlled-Rk^dag fan-out to the wires
// below; every wire ends in a boost.  Controlled phases are symmetric, so the
// control/target split only fixes which column carries the gate matrix.
inline CircuitSpec qft_circuit(int N, double lambda) {
  if (N < 1) throw std::invalid_argument("qft_circuit: need at least 1 qubit");
  CircuitSpec spec;
  auto qid = [](int i) { return "q" + std::to_string(i + 1); };
  spec.qubits.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    spec.qubits[static_cast<std::size_t>(i)].id = qid(i);
    spec.qubits[static_cast<std::size_t>(i)].boundary = {{0.0, 0.0, -1.0}, 10.0};
  }
  // emit in event order so partner rows can be fixed up immediately
  for (int i = 0; i < N; ++i) {
    auto& qi = spec.qubits[static_cast<std::size_t>(i)];
    qi.ops.push_back(RowOp::unitary(gate("H")));
    for (int j = i + 1; j < N; ++j) {
      auto& qj = spec.qubits[static_cast<std::size_t>(j)];
      const int k = j - i + 1;
      qi.ops.push_back(RowOp::coupled_control(qid(j), static_cast<int>(qj.ops.size()) + 1));
      qj.ops.push_back(RowOp::coupled_target(gate("Rk_dag", k), qid(i),
                                             static_cast<int>(qi.ops.size())));
    }
  }
  for (auto& q : spec.qubits) q.ops.push_back(RowOp::boost(lambda));
  return spec;
}

}  // namespace gsqc
