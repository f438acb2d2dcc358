#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsqc/gates.hpp"

namespace gsqc {

// Boundary term h0 = E (I + a.sigma) on a qubit's row 0.  The row-0 state is
// pinned (softly, E is finite) to the zero eigenvector of I + a.sigma, which
// exists exactly when |a| = 1.
struct BoundaryCondition {
  std::array<double, 3> a{0.0, 0.0, -1.0};
  double E = 10.0;  // in units of eps

  double norm_sq() const { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }
};

enum class OpKind { Unitary, Boost, Project, CoupledControl, CoupledTarget };

inline const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::Unitary: return "unitary";
    case OpKind::Boost: return "boost";
    case OpKind::Project: return "project";
    case OpKind::CoupledControl: return "coupled_control";
    case OpKind::CoupledTarget: return "coupled_target";
  }
  return "?";
}

// One row Hamiltonian of a qubit column.  Op at index j of QubitSpec::ops
// connects rows j and j+1; "its row" is j+1 (the downstream row).
struct RowOp {
  OpKind kind = OpKind::Unitary;
  GateMatrix g;             // Unitary, CoupledTarget
  double lambda = 1.0;      // Boost, Project
  int dot = 0;              // Project target dot (0 or 1)
  std::string partner;      // CoupledControl / CoupledTarget: partner qubit id
  int partner_row = -1;     // row index on the partner qubit

  static RowOp unitary(GateMatrix gm) {
    RowOp op;
    op.kind = OpKind::Unitary;
    op.g = std::move(gm);
    return op;
  }
  static RowOp boost(double lambda) {
    RowOp op;
    op.kind = OpKind::Boost;
    op.lambda = lambda;
    return op;
  }
  static RowOp project(int dot, double lambda) {
    RowOp op;
    op.kind = OpKind::Project;
    op.dot = dot;
    op.lambda = lambda;
    return op;
  }
  static RowOp coupled_control(std::string partner, int partner_row) {
    RowOp op;
    op.kind = OpKind::CoupledControl;
    op.partner = std::move(partner);
    op.partner_row = partner_row;
    return op;
  }
  static RowOp coupled_target(GateMatrix gm, std::string partner, int partner_row) {
    RowOp op;
    op.kind = OpKind::CoupledTarget;
    op.g = std::move(gm);
    op.partner = std::move(partner);
    op.partner_row = partner_row;
    return op;
  }

  bool is_coupling() const {
    return kind == OpKind::CoupledControl || kind == OpKind::CoupledTarget;
  }
};

struct QubitSpec {
  std::string id;
  BoundaryCondition boundary;
  std::vector<RowOp> ops;

  int rows() const { return static_cast<int>(ops.size()) + 1; }
};

struct CircuitSpec {
  double epsilon = 1.0;  // report-time unit; matrix entries are stored in units of eps
  std::vector<QubitSpec> qubits;

  int index_of(std::string_view id) const {
    for (std::size_t i = 0; i < qubits.size(); ++i)
      if (qubits[i].id == id) return static_cast<int>(i);
    return -1;
  }
  const QubitSpec* find(std::string_view id) const {
    int i = index_of(id);
    return i < 0 ? nullptr : &qubits[static_cast<std::size_t>(i)];
  }
};

// ---------------------------------------------------------------------------
// boundary_state: zero eigenvector of (I + a.sigma), closed form.
// Phase fixed so the first nonzero component is real positive.

inline std::array<Complex, 2> boundary_state(const BoundaryCondition& b) {
  const double ax = b.a[0], ay = b.a[1], az = b.a[2];
  // rows of M = I + a.sigma:  [1+az, ax-i ay; ax+i ay, 1-az]
  // candidate null vectors from each row equation; pick the better conditioned.
  std::array<Complex, 2> v1{Complex{-ax, ay}, Complex{1.0 + az, 0.0}};
  std::array<Complex, 2> v2{Complex{1.0 - az, 0.0}, Complex{-ax, -ay}};
  auto nrm = [](const std::array<Complex, 2>& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  };
  std::array<Complex, 2> v = (nrm(v1) >= nrm(v2)) ? v1 : v2;
  const double n = nrm(v);
  v[0] /= n;
  v[1] /= n;
  // phase fix
  Complex lead = (std::abs(v[0]) > 1e-12) ? v[0] : v[1];
  Complex phase = std::abs(lead) / lead;
  v[0] *= phase;
  v[1] *= phase;
  return v;
}

inline double boundary_state_residual(const BoundaryCondition& b, const std::array<Complex, 2>& v) {
  const double ax = b.a[0], ay = b.a[1], az = b.a[2];
  Complex r0 = (1.0 + az) * v[0] + Complex{ax, -ay} * v[1];
  Complex r1 = Complex{ax, ay} * v[0] + (1.0 - az) * v[1];
  return std::sqrt(std::norm(r0) + std::norm(r1));
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;
  std::string message;
  bool warning = false;
};

struct ValidationReport {
  std::vector<Violation> items;

  bool ok() const {
    for (const auto& v : items)
      if (!v.warning) return false;
    return true;
  }
  int error_count() const {
    int n = 0;
    for (const auto& v : items) n += v.warning ? 0 : 1;
    return n;
  }
  std::string str() const {
    std::ostringstream os;
    for (const auto& v : items)
      os << (v.warning ? "warning " : "error ") << v.code << ": " << v.message << "\n";
    return os.str();
  }
};

// Build order of the Eq.-(5)-style product construction.  Non-coupling ops
// depend only on their own upstream rows; a coupling is applied as one joint
// step once the control qubit sits just above its coupling row and the target
// qubit just above its target row.  A deadlock here means the coupling graph
// is cyclic in the row ordering.
struct ScheduleStep {
  int qubit;  // for couplings: the control side
  int op;
};

struct Schedule {
  std::vector<ScheduleStep> steps;
  bool complete = false;
};

inline Schedule coupling_schedule(const CircuitSpec& spec) {
  const int nq = static_cast<int>(spec.qubits.size());
  std::vector<int> done(static_cast<std::size_t>(nq), 0);  // ops applied per qubit
  Schedule sched;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int q = 0; q < nq; ++q) {
      const auto& ops = spec.qubits[static_cast<std::size_t>(q)].ops;
      while (done[static_cast<std::size_t>(q)] < static_cast<int>(ops.size())) {
        const int oi = done[static_cast<std::size_t>(q)];
        const RowOp& op = ops[static_cast<std::size_t>(oi)];
        if (op.kind == OpKind::CoupledTarget) break;  // consumed by the partner's control step
        if (op.kind == OpKind::CoupledControl) {
          const int b = spec.index_of(op.partner);
          if (b < 0) break;  // validation reports this separately
          if (done[static_cast<std::size_t>(b)] != op.partner_row - 1) break;
          sched.steps.push_back({q, oi});
          ++done[static_cast<std::size_t>(q)];
          ++done[static_cast<std::size_t>(b)];
          progress = true;
          continue;
        }
        sched.steps.push_back({q, oi});
        ++done[static_cast<std::size_t>(q)];
        progress = true;
      }
    }
  }
  sched.complete = true;
  for (int q = 0; q < nq; ++q)
    if (done[static_cast<std::size_t>(q)] != static_cast<int>(spec.qubits[static_cast<std::size_t>(q)].ops.size()))
      sched.complete = false;
  return sched;
}

inline ValidationReport validate_circuit(const CircuitSpec& spec) {
  ValidationReport rep;
  auto err = [&rep](std::string code, std::string msg) {
    rep.items.push_back({std::move(code), std::move(msg), false});
  };
  auto warn = [&rep](std::string code, std::string msg) {
    rep.items.push_back({std::move(code), std::move(msg), true});
  };

  std::set<std::string> seen;
  for (const auto& q : spec.qubits) {
    if (!seen.insert(q.id).second) err("duplicate-id", "qubit id '" + q.id + "' appears twice");
    if (q.ops.empty()) err("empty-qubit", "qubit '" + q.id + "' has no rows beyond the boundary row");
    if (std::abs(q.boundary.norm_sq() - 1.0) > 1e-12)
      err("boundary-norm",
          "qubit '" + q.id + "': |a| != 1 (|a|^2 = " + strf("%.12g", q.boundary.norm_sq()) + ")");
    if (!(q.boundary.E > 0.0)) err("boundary-strength", "qubit '" + q.id + "': E must be > 0");

    for (std::size_t oi = 0; oi < q.ops.size(); ++oi) {
      const RowOp& op = q.ops[oi];
      const std::string where = "qubit '" + q.id + "' row " + std::to_string(oi + 1);
      switch (op.kind) {
        case OpKind::Unitary:
        case OpKind::CoupledTarget:
          if (op.g.unitarity_residual() > 1e-12)
            err("gate-unitarity", where + ": gate is not unitary (residual " +
                                      strf("%.3g", op.g.unitarity_residual()) + ")");
          break;
        case OpKind::Boost:
          if (op.lambda < 1.0) err("lambda-range", where + ": boost lambda must be >= 1");
          break;
        case OpKind::Project:
          if (op.lambda < 1.0) err("lambda-range", where + ": project lambda must be >= 1");
          if (op.dot != 0 && op.dot != 1) err("project-dot", where + ": dot must be 0 or 1");
          if (oi + 1 != q.ops.size())
            warn("project-not-last", where + ": projection before the final row leaves the "
                                             "discarded component undefined downstream");
          if (oi == 0 && (op.dot == 0 || op.dot == 1)) {
            auto bs = boundary_state(q.boundary);
            if (std::abs(bs[static_cast<std::size_t>(op.dot)]) < 1e-8)
              warn("project-orthogonal", where + ": boundary state is orthogonal to the projection dot");
          }
          break;
        case OpKind::CoupledControl:
          break;
      }
      if (op.is_coupling()) {
        const QubitSpec* p = spec.find(op.partner);
        if (p == nullptr) {
          err("dangling-coupling", where + ": coupling names nonexistent qubit '" + op.partner + "'");
          continue;
        }
        if (op.partner_row < 1 || op.partner_row >= p->rows()) {
          err("dangling-coupling", where + ": partner row " + std::to_string(op.partner_row) +
                                       " outside qubit '" + op.partner + "'");
          continue;
        }
        const RowOp& back = p->ops[static_cast<std::size_t>(op.partner_row - 1)];
        const OpKind want =
            op.kind == OpKind::CoupledControl ? OpKind::CoupledTarget : OpKind::CoupledControl;
        if (back.kind != want || back.partner != q.id ||
            back.partner_row != static_cast<int>(oi) + 1)
          err("coupling-mismatch", where + ": partner (" + op.partner + ", row " +
                                       std::to_string(op.partner_row) + ") does not name it back");
      }
    }
  }

  // each (qubit, row) endpoint may be referenced by at most one coupling
  std::set<std::pair<std::string, int>> endpoints;
  for (const auto& q : spec.qubits)
    for (const auto& op : q.ops)
      if (op.is_coupling()) {
        if (!endpoints.insert({op.partner, op.partner_row}).second)
          err("coupling-reuse", "qubit '" + op.partner + "' row " +
                                    std::to_string(op.partner_row) +
                                    " is claimed by two couplings");
      }

  if (rep.ok() && !coupling_schedule(spec).complete)
    err("coupling-cycle", "coupling graph has no valid row-order schedule");
  return rep;
}

// ---------------------------------------------------------------------------

// Replace every Boost/Project amplification with a new lambda.  Used by the
// CLI to re-parameterize presets for sweeps.
inline CircuitSpec with_lambda(CircuitSpec spec, double lambda) {
  for (auto& q : spec.qubits)
    for (auto& op : q.ops)
      if (op.kind == OpKind::Boost || op.kind == OpKind::Project) op.lambda = lambda;
  return spec;
}

// Provenance hash over the full circuit content (structure + numeric fields).
inline std::uint64_t circuit_hash(const CircuitSpec& spec) {
  Fnv1a f;
  f.f64(spec.epsilon);
  f.u64(spec.qubits.size());
  for (const auto& q : spec.qubits) {
    f.str(q.id);
    for (double c : q.boundary.a) f.f64(c);
    f.f64(q.boundary.E);
    f.u64(q.ops.size());
    for (const auto& op : q.ops) {
      f.u64(static_cast<std::uint64_t>(op.kind));
      switch (op.kind) {
        case OpKind::Unitary:
        case OpKind::CoupledTarget:
          for (const auto& c : op.g.m) {
            f.f64(c.real());
            f.f64(c.imag());
          }
          break;
        case OpKind::Boost:
          f.f64(op.lambda);
          break;
        case OpKind::Project:
          f.f64(op.lambda);
          f.i64(op.dot);
          break;
        case OpKind::CoupledControl:
          break;
      }
      if (op.is_coupling()) {
        f.str(op.partner);
        f.i64(op.partner_row);
      }
    }
  }
  return f.h;
}

}  // namespace gsqc
