#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace gsqc;

TEST_CASE("dense eigenpairs come out ascending", "[eigensolve]") {
  const CircuitSpec s = two_qubit_circuit(4, 10.0);
  const SparseHermitian H = assemble_hamiltonian(s, build_basis(s), 1);
  const auto pairs = dense_lowest(H, 6);
  REQUIRE(pairs.size() == 6);
  for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].value <= pairs[i].value);
  CHECK(std::abs(pairs[0].value) < 1e-12);
  const auto all = dense_eigenvalues(H);
  REQUIRE(all.size() == 64);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    CHECK(std::abs(all[i] - pairs[i].value) < 1e-12);
  CHECK_THROWS_AS(dense_lowest(H, 3, 32), std::invalid_argument);
  CHECK_THROWS_AS(dense_eigenvalues(H, 32), std::invalid_argument);
}

TEST_CASE("default tolerance scales with dimension", "[eigensolve]") {
  CHECK(default_tol(100) == Catch::Approx(1e-10).epsilon(1e-12));
  CHECK(default_tol(1 << 20) == 1e-9);  // capped
}

TEST_CASE("Lanczos finds the zero mode without help", "[eigensolve]") {
  const CircuitSpec s = two_qubit_circuit(4, 10.0);
  const SparseHermitian H = assemble_hamiltonian(s, build_basis(s), 1);
  EigenOptions o;
  o.k = 3;
  o.workers = 1;
  const KrylovResult kr = krylov_lowest(H, o);
  REQUIRE(kr.converged);
  REQUIRE(kr.values.size() >= 3);
  CHECK(std::abs(kr.values[0]) < 1e-10);
  CHECK(kr.matvecs > 0);
  for (double r : kr.residuals) CHECK(r < 1e-8);
  // eigengap sanity against the dense oracle
  const auto dense = dense_eigenvalues(H);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(kr.values[i] - dense[i]) < 1e-9);
}

TEST_CASE("deflating the analytic ground state exposes E1", "[eigensolve]") {
  const CircuitSpec s = two_qubit_circuit(4, 10.0);
  const BasisMap b = build_basis(s);
  const SparseHermitian H = assemble_hamiltonian(s, b, 1);
  StateVector psi = ground_state(s, b);
  psi.normalize();
  EigenOptions o;
  o.k = 2;
  o.workers = 1;
  const KrylovResult kr = krylov_lowest(H, o, {psi.amp});
  REQUIRE(kr.converged);
  const auto dense = dense_eigenvalues(H);
  CHECK(std::abs(kr.values[0] - dense[1]) < 1e-10);
  CHECK(std::abs(kr.values[1] - dense[2]) < 1e-9);
}

TEST_CASE("spectral_gap dense and Krylov paths agree on the presets", "[eigensolve]") {
  for (const auto& rc : test_helpers::reference_circuits()) {
    if (rc.dimension > 3000) continue;
    INFO(rc.name);
    EigenOptions dense;
    dense.dense_threshold = 4096;
    dense.workers = 1;
    EigenOptions krylov;
    krylov.dense_threshold = 1;
    krylov.workers = 1;
    const GapResult gd = spectral_gap(rc.spec, dense);
    const GapResult gk = spectral_gap(rc.spec, krylov);
    CHECK(gd.method == "dense");
    CHECK(gk.method == "krylov");
    CHECK_FALSE(gd.deflated);
    CHECK(gk.deflated);
    CHECK(gd.converged);
    CHECK(gk.converged);
    CHECK(gd.dimension == rc.dimension);
    CHECK(std::abs(gd.E1 - gk.E1) < 1e-8);
    CHECK(std::abs(gd.gap - gk.gap) < 1e-8);
    CHECK(std::abs(gd.E0) < 1e-10);
    CHECK(std::abs(gk.E0) < 1e-10);
    CHECK(gd.circuit_hash == gk.circuit_hash);
  }
}

TEST_CASE("spectral_gap matches on random circuits", "[eigensolve]") {
  std::mt19937_64 rng(20260825);
  for (int i = 0; i < 20; ++i) {
    const CircuitSpec s = test_helpers::random_circuit(rng);
    INFO("random circuit " << i << ", dim " << build_basis(s).dimension);
    EigenOptions dense;
    dense.dense_threshold = 4096;
    dense.workers = 1;
    EigenOptions krylov;
    krylov.dense_threshold = 1;
    krylov.workers = 1;
    const GapResult gd = spectral_gap(s, dense);
    const GapResult gk = spectral_gap(s, krylov);
    CHECK(std::abs(gd.E1 - gk.E1) < 1e-8);
  }
}

TEST_CASE("shift-invert reaches the same interior eigenvalues", "[eigensolve]") {
  for (const char* name : {"paper-2qubit", "chain-3"}) {
    const auto refs = test_helpers::reference_circuits();
    const auto rc = std::find_if(refs.begin(), refs.end(),
                                 [&](const auto& r) { return r.name == name; });
    REQUIRE(rc != refs.end());
    EigenOptions dense;
    dense.dense_threshold = 4096;
    dense.workers = 1;
    EigenOptions si;
    si.dense_threshold = 1;
    si.shift_invert = true;
    si.workers = 1;
    const GapResult gd = spectral_gap(rc->spec, dense);
    const GapResult gs = spectral_gap(rc->spec, si);
    CHECK(gs.method == "krylov+shift-invert");
    CHECK(gs.converged);
    CHECK(std::abs(gd.E1 - gs.E1) < 1e-8);
  }
}

TEST_CASE("starved iteration budgets report non-convergence", "[eigensolve]") {
  const CircuitSpec s = chain_circuit(3, 1, test_helpers::kRt10);
  const SparseHermitian H = assemble_hamiltonian(s, build_basis(s), 1);
  EigenOptions o;
  o.k = 2;
  o.max_iter = 1;
  o.max_basis = 8;
  o.workers = 1;
  const KrylovResult kr = krylov_lowest(H, o);
  CHECK_FALSE(kr.converged);
  CHECK_FALSE(kr.values.empty());  // partial Ritz values still reported
  CHECK_FALSE(kr.message.empty());
  // the partial result flows through spectral_gap with converged = false
  EigenOptions go = o;
  go.dense_threshold = 1;
  const GapResult g = spectral_gap(s, go);
  CHECK_FALSE(g.converged);
}

TEST_CASE("solves are deterministic in seed and worker count", "[eigensolve]") {
  const CircuitSpec s = chain_circuit(3, 1, test_helpers::kRt10);
  const SparseHermitian H = assemble_hamiltonian(s, build_basis(s), 1);
  EigenOptions o;
  o.k = 2;
  o.workers = 1;
  const KrylovResult a = krylov_lowest(H, o);
  const KrylovResult b = krylov_lowest(H, o);
  EigenOptions o4 = o;
  o4.workers = 4;
  const KrylovResult c = krylov_lowest(H, o4);
  REQUIRE(a.converged);
  CHECK(a.values == b.values);
  CHECK(a.matvecs == b.matvecs);
  CHECK(a.values == c.values);
}

TEST_CASE("invalid circuits are rejected before solving", "[eigensolve]") {
  CircuitSpec s = two_qubit_circuit(4, 10.0);
  s.qubits[0].ops[1].partner = "nope";  // dangle the coupling
  CHECK_THROWS_AS(spectral_gap(s), std::invalid_argument);
}
