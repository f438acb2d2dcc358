#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace gsqc;
using test_helpers::kRt10;

namespace {

const QubitSpec& find_q(const CircuitSpec& s, const std::string& id) {
  const QubitSpec* q = s.find(id);
  REQUIRE(q != nullptr);
  return *q;
}

}  // namespace

TEST_CASE("single-qubit wire layout", "[generators]") {
  const CircuitSpec s = single_qubit_circuit(6, terminal_op(Terminal::Boost, 10.0));
  REQUIRE(s.qubits.size() == 1);
  const QubitSpec& q = s.qubits[0];
  CHECK(q.id == "q");
  CHECK(q.rows() == 6);
  REQUIRE(q.ops.size() == 5);
  for (int i = 0; i < 4; ++i) {
    CHECK(q.ops[static_cast<std::size_t>(i)].kind == OpKind::Unitary);
    CHECK(q.ops[static_cast<std::size_t>(i)].g.name == "I");
  }
  CHECK(q.ops[4].kind == OpKind::Boost);
  CHECK(q.ops[4].lambda == 10.0);
  CHECK(q.boundary.a == std::array<double, 3>{0.0, 0.0, -1.0});
  CHECK(q.boundary.E == 10.0);

  const CircuitSpec f = single_qubit_circuit(6, std::nullopt);
  CHECK(f.qubits[0].ops.size() == 5);
  CHECK(f.qubits[0].ops.back().g.name == "I");

  const CircuitSpec p = single_qubit_circuit(4, terminal_op(Terminal::Project, 7.0));
  CHECK(p.qubits[0].ops.back().kind == OpKind::Project);
  CHECK(p.qubits[0].ops.back().dot == 0);
  CHECK(p.qubits[0].ops.back().lambda == 7.0);

  CHECK_THROWS_AS(single_qubit_circuit(1, std::nullopt), std::invalid_argument);
}

TEST_CASE("two-qubit coupling layout", "[generators]") {
  const CircuitSpec s = two_qubit_circuit(4, 10.0);
  REQUIRE(s.qubits.size() == 2);
  const QubitSpec& c = find_q(s, "ctl");
  const QubitSpec& t = find_q(s, "tgt");
  CHECK(c.boundary.a == std::array<double, 3>{-1.0, 0.0, 0.0});
  CHECK(t.boundary.a == std::array<double, 3>{0.0, 0.0, 1.0});
  REQUIRE(c.ops.size() == 3);
  REQUIRE(t.ops.size() == 3);
  CHECK(c.ops[0].g.name == "I");
  CHECK(c.ops[1].kind == OpKind::CoupledControl);
  CHECK(c.ops[1].partner == "tgt");
  CHECK(c.ops[1].partner_row == 2);
  CHECK(c.ops[2].kind == OpKind::Boost);
  CHECK(t.ops[1].kind == OpKind::CoupledTarget);
  CHECK(t.ops[1].g.name == "X");
  CHECK(t.ops[1].partner == "ctl");
  CHECK(t.ops[1].partner_row == 2);
  CHECK(validate_circuit(s).ok());

  // minimal 3-row variant and custom gate
  const CircuitSpec m = two_qubit_circuit(3, 5.0, Terminal::Project, Terminal::Boost, gate("H"));
  CHECK(find_q(m, "ctl").ops[0].kind == OpKind::CoupledControl);
  CHECK(find_q(m, "ctl").ops[1].kind == OpKind::Project);
  CHECK(find_q(m, "tgt").ops[0].g.name == "H");
  CHECK(validate_circuit(m).ok());

  CHECK_THROWS_AS(two_qubit_circuit(2, 10.0), std::invalid_argument);
}

TEST_CASE("chain layout and wiring", "[generators]") {
  const CircuitSpec s = chain_circuit(3, 1, kRt10);
  REQUIRE(s.qubits.size() == 3);
  const QubitSpec& q0 = find_q(s, "q0");
  const QubitSpec& q1 = find_q(s, "q1");
  const QubitSpec& q2 = find_q(s, "q2");
  CHECK(q0.boundary.a == std::array<double, 3>{-1.0, 0.0, 0.0});
  CHECK(q1.boundary.a == std::array<double, 3>{0.0, 0.0, 1.0});
  CHECK(q2.boundary.a == std::array<double, 3>{0.0, 0.0, 1.0});
  CHECK(q0.rows() == 4);   // I, CC, B
  CHECK(q1.rows() == 6);   // I, CT, I, CC, B
  CHECK(q2.rows() == 4);   // I, CT, B
  CHECK(q0.ops[1].partner == "q1");
  CHECK(q0.ops[1].partner_row == 2);
  CHECK(q1.ops[1].partner == "q0");
  CHECK(q1.ops[1].partner_row == 2);
  CHECK(q1.ops[3].partner == "q2");
  CHECK(q1.ops[3].partner_row == 2);
  CHECK(q2.ops[1].g.name == "X");
  CHECK(validate_circuit(s).ok());
  CHECK(build_basis(s).dimension == 768);

  CHECK(build_basis(chain_circuit(4, 0, kRt10)).dimension == 2304);
  CHECK_THROWS_AS(chain_circuit(1, 0, 10.0), std::invalid_argument);
}

TEST_CASE("qft circuit matches the hand-built layouts", "[generators]") {
  const CircuitSpec s = qft_circuit(2, kRt10);
  REQUIRE(s.qubits.size() == 2);
  const QubitSpec& q1 = find_q(s, "q1");
  const QubitSpec& q2 = find_q(s, "q2");
  REQUIRE(q1.ops.size() == 3);
  REQUIRE(q2.ops.size() == 3);
  CHECK(q1.ops[0].g.name == "H");
  CHECK(q1.ops[1].kind == OpKind::CoupledControl);
  CHECK(q1.ops[1].partner == "q2");
  CHECK(q1.ops[1].partner_row == 1);
  CHECK(q1.ops[2].kind == OpKind::Boost);
  CHECK(q2.ops[0].kind == OpKind::CoupledTarget);
  CHECK(q2.ops[0].g.name == "Rk_dag");
  CHECK(q2.ops[0].g.k == 2);
  CHECK(q2.ops[0].partner_row == 2);
  CHECK(q2.ops[1].g.name == "H");
  CHECK(validate_circuit(s).ok());
  CHECK(build_basis(s).dimension == 64);

  const CircuitSpec s3 = qft_circuit(3, kRt10);
  REQUIRE(s3.qubits.size() == 3);
  CHECK(find_q(s3, "q1").ops.size() == 4);  // H, CC, CC, B
  CHECK(find_q(s3, "q2").ops.size() == 4);  // CT(R2), H, CC, B
  CHECK(find_q(s3, "q3").ops.size() == 4);  // CT(R3), CT(R2), H... plus B
  CHECK(find_q(s3, "q3").ops[0].g.k == 3);
  CHECK(find_q(s3, "q3").ops[1].g.k == 2);
  CHECK(validate_circuit(s3).ok());
  CHECK(coupling_schedule(s3).complete);
}

TEST_CASE("teleportation gadget wiring on a single wire", "[generators]") {
  const CircuitSpec s =
      insert_teleportation(single_qubit_circuit(3, terminal_op(Terminal::Boost, kRt10)),
                           std::map<std::string, std::vector<int>>{{"q", {0}}});
  REQUIRE(s.qubits.size() == 3);
  const QubitSpec& a = find_q(s, "q.a");
  const QubitSpec& m = find_q(s, "q.m1");
  const QubitSpec& b = find_q(s, "q.b");

  // piece A: original [I] then the gadget tail CC, H, P0
  REQUIRE(a.ops.size() == 4);
  CHECK(a.ops[0].g.name == "I");
  CHECK(a.ops[1].kind == OpKind::CoupledControl);
  CHECK(a.ops[1].partner == "q.m1");
  CHECK(a.ops[1].partner_row == 3);
  CHECK(a.ops[2].g.name == "H");
  CHECK(a.ops[3].kind == OpKind::Project);
  CHECK(a.ops[3].dot == 0);
  CHECK(a.ops[3].lambda == Catch::Approx(kRt10));

  // ancilla: H, CC -> piece B row 1, CT(X) <- piece A's CC row, P0
  REQUIRE(m.ops.size() == 4);
  CHECK(m.ops[0].g.name == "H");
  CHECK(m.ops[1].kind == OpKind::CoupledControl);
  CHECK(m.ops[1].partner == "q.b");
  CHECK(m.ops[1].partner_row == 1);
  CHECK(m.ops[2].kind == OpKind::CoupledTarget);
  CHECK(m.ops[2].g.name == "X");
  CHECK(m.ops[2].partner == "q.a");
  CHECK(m.ops[2].partner_row == 2);
  CHECK(m.boundary.a == std::array<double, 3>{0.0, 0.0, -1.0});

  // piece B: re-materializing CT then the surviving Boost
  REQUIRE(b.ops.size() == 2);
  CHECK(b.ops[0].kind == OpKind::CoupledTarget);
  CHECK(b.ops[0].partner == "q.m1");
  CHECK(b.ops[0].partner_row == 2);
  CHECK(b.ops[1].kind == OpKind::Boost);
  CHECK(b.boundary.a == std::array<double, 3>{0.0, 0.0, -1.0});

  CHECK(validate_circuit(s).ok());
  CHECK(build_basis(s).dimension == 486);
}

TEST_CASE("teleportation policies pick the right cuts", "[generators]") {
  const CircuitSpec chain = chain_circuit(3, 0, kRt10);

  SECTION("after-every-coupling cuts target wires after each CT") {
    const CircuitSpec s = insert_teleportation(chain, TeleportPolicy::AfterEveryCoupling);
    // q0 uncut; q1 and q2 cut once each: 3 wires -> 5 pieces + 2 ancillas
    CHECK(s.qubits.size() == 7);
    CHECK(s.find("q0") != nullptr);
    CHECK(s.find("q1.a") != nullptr);
    CHECK(s.find("q1.m1") != nullptr);
    CHECK(s.find("q1.b") != nullptr);
    CHECK(s.find("q2.a") != nullptr);
    CHECK(validate_circuit(s).ok());
    CHECK(build_basis(s).dimension == 1889568);
    // surviving cross-qubit coupling rewired to the pieces
    const QubitSpec& q0 = find_q(s, "q0");
    CHECK(q0.ops[0].kind == OpKind::CoupledControl);
    CHECK(q0.ops[0].partner == "q1.a");
    const QubitSpec& q1b = find_q(s, "q1.b");
    bool has_cc_to_q2a = false;
    for (const auto& op : q1b.ops)
      if (op.kind == OpKind::CoupledControl && op.partner == "q2.a") has_cc_to_q2a = true;
    CHECK(has_cc_to_q2a);
  }

  SECTION("between-couplings cuts only wires with consecutive couplings") {
    const CircuitSpec s = insert_teleportation(chain, TeleportPolicy::BetweenCouplings);
    // only q1 participates in two couplings
    CHECK(s.qubits.size() == 5);
    CHECK(s.find("q0") != nullptr);
    CHECK(s.find("q1.a") != nullptr);
    CHECK(s.find("q1.b") != nullptr);
    CHECK(s.find("q2") != nullptr);
    CHECK(validate_circuit(s).ok());
    CHECK(build_basis(s).dimension == 23328);
  }
}

TEST_CASE("gadget lambda defaults to the largest amplification", "[generators]") {
  CircuitSpec plain = single_qubit_circuit(4, std::nullopt);
  const std::map<std::string, std::vector<int>> cuts{{"q", {0}}};
  CHECK_THROWS_AS(insert_teleportation(plain, cuts), std::invalid_argument);
  const CircuitSpec s = insert_teleportation(plain, cuts, 5.0);
  CHECK(find_q(s, "q.a").ops.back().lambda == 5.0);

  // with a boost present its lambda is picked up
  const CircuitSpec t = insert_teleportation(
      single_qubit_circuit(4, terminal_op(Terminal::Boost, 12.0)), cuts);
  CHECK(find_q(t, "q.m1").ops.back().lambda == 12.0);
}

TEST_CASE("cuts that leave an empty segment are rejected", "[generators]") {
  const CircuitSpec wire = single_qubit_circuit(3, terminal_op(Terminal::Boost, 10.0));
  CHECK_THROWS_AS(
      insert_teleportation(wire, std::map<std::string, std::vector<int>>{{"q", {1}}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      insert_teleportation(wire, std::map<std::string, std::vector<int>>{{"q", {0, 0}}}),
      std::invalid_argument);
}

TEST_CASE("fully protected four-qubit chain", "[generators]") {
  const CircuitSpec s = fig2_circuit(kRt10);
  int pieces = 0, ancillas = 0;
  for (const auto& q : s.qubits)
    (q.id.find(".m") != std::string::npos ? ancillas : pieces) += 1;
  CHECK(pieces == 10);
  CHECK(ancillas == 6);
  CHECK(validate_circuit(s).ok());
  CHECK(coupling_schedule(s).complete);
  CHECK(build_basis(s).dimension > 1000000000000LL);  // far beyond desk scale
}

TEST_CASE("generated circuits round-trip through the schedule", "[generators]") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 25; ++i) {
    const CircuitSpec s = test_helpers::random_circuit(rng);
    INFO("iteration " << i);
    CHECK(validate_circuit(s).ok());
    CHECK(coupling_schedule(s).complete);
  }
}
