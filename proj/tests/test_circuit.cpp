#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace gsqc;
using Catch::Approx;

namespace {

bool has_code(const ValidationReport& r, const std::string& code, bool warning = false) {
  for (const auto& v : r.items)
    if (v.code == code && v.warning == warning) return true;
  return false;
}

}  // namespace

TEST_CASE("boundary ground states for the axis cases", "[circuit]") {
  auto v = boundary_state({{0, 0, -1}, 10.0});
  CHECK(std::abs(v[0] - Complex{1, 0}) < 1e-14);
  CHECK(std::abs(v[1]) < 1e-14);

  v = boundary_state({{0, 0, 1}, 10.0});
  CHECK(std::abs(v[0]) < 1e-14);
  CHECK(std::abs(v[1] - Complex{1, 0}) < 1e-14);

  const double s = 1.0 / std::sqrt(2.0);
  v = boundary_state({{-1, 0, 0}, 10.0});
  CHECK(std::abs(v[0] - Complex{s, 0}) < 1e-14);
  CHECK(std::abs(v[1] - Complex{s, 0}) < 1e-14);

  v = boundary_state({{1, 0, 0}, 10.0});
  CHECK(std::abs(v[0] - Complex{s, 0}) < 1e-14);
  CHECK(std::abs(v[1] - Complex{-s, 0}) < 1e-14);

  v = boundary_state({{0, 1, 0}, 10.0});
  CHECK(std::abs(v[0] - Complex{s, 0}) < 1e-14);
  CHECK(std::abs(v[1] - Complex{0, -s}) < 1e-14);
}

TEST_CASE("boundary ground states for random directions", "[circuit]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const BoundaryCondition b = test_helpers::random_boundary(rng);
    const auto v = boundary_state(b);
    const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    CHECK(norm == Approx(1.0).epsilon(1e-12));
    CHECK(boundary_state_residual(b, v) < 1e-12);
    // phase convention: first nonzero component is real positive
    const Complex lead = std::abs(v[0]) > 1e-12 ? v[0] : v[1];
    CHECK(lead.imag() == Approx(0.0).margin(1e-12));
    CHECK(lead.real() > 0.0);
  }
}

TEST_CASE("reference circuits validate cleanly", "[circuit]") {
  for (const auto& rc : test_helpers::reference_circuits()) {
    INFO(rc.name);
    const ValidationReport rep = validate_circuit(rc.spec);
    CHECK(rep.error_count() == 0);
    CHECK(rep.ok());
  }
}

TEST_CASE("structural validation errors are reported with codes", "[circuit]") {
  CircuitSpec base = two_qubit_circuit(4, 10.0);

  SECTION("duplicate qubit id") {
    CircuitSpec s = base;
    s.qubits[1].id = s.qubits[0].id;
    CHECK(has_code(validate_circuit(s), "duplicate-id"));
  }
  SECTION("empty qubit") {
    CircuitSpec s = base;
    s.qubits.push_back({"loose", {{0, 0, -1}, 10.0}, {}});
    CHECK(has_code(validate_circuit(s), "empty-qubit"));
  }
  SECTION("boundary direction must be unit length") {
    CircuitSpec s = base;
    s.qubits[0].boundary.a = {0.5, 0.0, 0.0};
    CHECK(has_code(validate_circuit(s), "boundary-norm"));
  }
  SECTION("boundary strength must be positive") {
    CircuitSpec s = base;
    s.qubits[0].boundary.E = 0.0;
    CHECK(has_code(validate_circuit(s), "boundary-strength"));
  }
  SECTION("non-unitary gate") {
    CircuitSpec s = base;
    s.qubits[0].ops[0] = RowOp::unitary(raw_gate({Complex{2, 0}, {}, {}, Complex{1, 0}}));
    CHECK(has_code(validate_circuit(s), "gate-unitarity"));
  }
  SECTION("lambda must be positive") {
    CircuitSpec s = base;
    s.qubits[0].ops.back() = RowOp::boost(0.0);
    CHECK(has_code(validate_circuit(s), "lambda-range"));
  }
  SECTION("project dot must be 0 or 1") {
    CircuitSpec s = base;
    s.qubits[0].ops.back() = RowOp::project(2, 10.0);
    CHECK(has_code(validate_circuit(s), "project-dot"));
  }
}

TEST_CASE("coupling wiring errors", "[circuit]") {
  SECTION("dangling partner id") {
    CircuitSpec s = two_qubit_circuit(4, 10.0);
    s.qubits[0].ops[1].partner = "nobody";
    const ValidationReport rep = validate_circuit(s);
    CHECK(has_code(rep, "dangling-coupling"));
    CHECK(rep.str().find("nobody") != std::string::npos);
  }
  SECTION("partner rows must point at each other") {
    CircuitSpec s = two_qubit_circuit(4, 10.0);
    s.qubits[0].ops[1].partner_row = 1;  // target's unitary row, not its CT row
    CHECK(has_code(validate_circuit(s), "coupling-mismatch"));
  }
  SECTION("a target row cannot serve two controls") {
    CircuitSpec s = two_qubit_circuit(4, 10.0);
    // clone the control op so two controls claim the same target row
    auto& ops = s.qubits[0].ops;
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (ops[i].kind == OpKind::CoupledControl) {
        ops.insert(ops.begin() + static_cast<std::ptrdiff_t>(i), ops[i]);
        break;
      }
    CHECK(has_code(validate_circuit(s), "coupling-reuse"));
  }
  SECTION("cyclic coupling order deadlocks") {
    CircuitSpec s;
    s.qubits.push_back({"a", {{0, 0, -1}, 10.0}, {}});
    s.qubits.push_back({"b", {{0, 0, -1}, 10.0}, {}});
    s.qubits[0].ops = {RowOp::coupled_control("b", 2), RowOp::coupled_target(gate("X"), "b", 1)};
    s.qubits[1].ops = {RowOp::coupled_control("a", 2), RowOp::coupled_target(gate("X"), "a", 1)};
    const ValidationReport rep = validate_circuit(s);
    CHECK(has_code(rep, "coupling-cycle"));
    CHECK_FALSE(coupling_schedule(s).complete);
  }
}

TEST_CASE("projection warnings", "[circuit]") {
  SECTION("project before the final row") {
    CircuitSpec s = single_qubit_circuit(4, std::nullopt);
    s.qubits[0].ops[0] = RowOp::project(0, 10.0);
    const ValidationReport rep = validate_circuit(s);
    CHECK(rep.ok());  // warnings only
    CHECK(has_code(rep, "project-not-last", true));
  }
  SECTION("projection orthogonal to the boundary state") {
    CircuitSpec s;
    s.qubits.push_back({"q", {{0, 0, -1}, 10.0}, {RowOp::project(1, 10.0)}});
    const ValidationReport rep = validate_circuit(s);
    CHECK(rep.ok());
    CHECK(has_code(rep, "project-orthogonal", true));
  }
}

TEST_CASE("coupling schedule visits every op once", "[circuit]") {
  const CircuitSpec s = chain_circuit(3, 0, 10.0);
  const Schedule sched = coupling_schedule(s);
  REQUIRE(sched.complete);
  int total_ops = 0, couplings = 0;
  for (const auto& q : s.qubits) {
    total_ops += static_cast<int>(q.ops.size());
    for (const auto& op : q.ops)
      if (op.kind == OpKind::CoupledControl) ++couplings;
  }
  CHECK(static_cast<int>(sched.steps.size()) == total_ops - couplings);
}

TEST_CASE("with_lambda rewrites every boost and project", "[circuit]") {
  CircuitSpec s = insert_teleportation(chain_circuit(2, 0, 5.0), TeleportPolicy::AfterEveryCoupling);
  const CircuitSpec t = with_lambda(s, 17.0);
  int seen = 0;
  for (const auto& q : t.qubits)
    for (const auto& op : q.ops)
      if (op.kind == OpKind::Boost || op.kind == OpKind::Project) {
        CHECK(op.lambda == 17.0);
        ++seen;
      }
  CHECK(seen == 4);  // two wire terminals + two gadget projections
  CHECK(circuit_hash(t) != circuit_hash(s));
}

TEST_CASE("circuit hash is content-sensitive and copy-stable", "[circuit]") {
  const CircuitSpec a = two_qubit_circuit(4, 10.0);
  CircuitSpec b = a;
  CHECK(circuit_hash(a) == circuit_hash(b));
  b.qubits[1].boundary.E = 11.0;
  CHECK(circuit_hash(a) != circuit_hash(b));
  CircuitSpec c = a;
  c.epsilon = 2.0;
  CHECK(circuit_hash(a) != circuit_hash(c));
}
