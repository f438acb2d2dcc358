#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gsqc/gsqc.hpp"

namespace test_helpers {

inline constexpr double kRt10 = 3.1622776601683795;

// Paper abscissa: 1, sqrt(10), 10, sqrt(1000), 100.
inline std::vector<double> paper_lams() { return gsqc::paper_lambda_list(); }

// Random 2x2 unitary from Euler-like angles.
inline gsqc::GateMatrix random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
  const double th = 0.5 * u(rng), a = u(rng), b = u(rng), g = u(rng);
  using C = gsqc::Complex;
  const C e = std::polar(1.0, a);
  return gsqc::raw_gate({e * std::polar(std::cos(th), b), e * std::polar(std::sin(th), g),
                         e * -std::polar(std::sin(th), -g), e * std::polar(std::cos(th), -b)});
}

inline gsqc::BoundaryCondition random_boundary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::array<double, 3> a{n(rng), n(rng), n(rng)};
  double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  if (norm < 1e-3) {
    a = {0.0, 0.0, -1.0};
    norm = 1.0;
  }
  gsqc::BoundaryCondition b;
  b.a = {a[0] / norm, a[1] / norm, a[2] / norm};
  b.E = std::uniform_real_distribution<double>(5.0, 15.0)(rng);
  return b;
}

// Valid random circuit drawn from the generator families with randomized
// gates, terminals, lambdas, and boundaries. Dimensions stay small.
inline gsqc::CircuitSpec random_circuit(std::mt19937_64& rng) {
  using namespace gsqc;
  std::uniform_real_distribution<double> lamd(1.0, 30.0);
  std::uniform_int_distribution<int> pick(0, 3);
  const double lam = lamd(rng);
  CircuitSpec spec;
  switch (pick(rng)) {
    case 0: {
      std::uniform_int_distribution<int> rows(2, 6);
      std::uniform_int_distribution<int> term(0, 2);
      const int t = term(rng);
      spec = single_qubit_circuit(
          rows(rng), t == 0 ? std::optional<RowOp>{}
                            : std::optional<RowOp>{terminal_op(
                                  t == 1 ? Terminal::Boost : Terminal::Project, lam)});
      break;
    }
    case 1: {
      std::uniform_int_distribution<int> rows(3, 5);
      std::uniform_int_distribution<int> term(0, 1);
      spec = two_qubit_circuit(rows(rng), lam,
                               term(rng) ? Terminal::Project : Terminal::Boost,
                               term(rng) ? Terminal::Project : Terminal::Boost,
                               random_unitary(rng));
      break;
    }
    case 2: {
      std::uniform_int_distribution<int> n(2, 3);
      std::uniform_int_distribution<int> rb(0, 1);
      spec = chain_circuit(n(rng), rb(rng), lam);
      break;
    }
    default:
      spec = qft_circuit(2, lam);
      break;
  }
  // replace identity rows with random unitaries, randomize boundaries
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& q : spec.qubits) {
    if (coin(rng)) q.boundary = random_boundary(rng);
    for (auto& op : q.ops)
      if (op.kind == OpKind::Unitary && op.g.name == "I" && coin(rng))
        op.g = random_unitary(rng);
  }
  return spec;
}

struct ReferenceCircuit {
  std::string name;
  gsqc::CircuitSpec spec;
  long long dimension;  // frozen expected basis size
};

// The preset family, constructed directly (the CLI ships the same circuits as
// JSON files; test_cli checks the files match these generators byte for byte).
inline std::vector<ReferenceCircuit> reference_circuits() {
  using namespace gsqc;
  std::vector<ReferenceCircuit> v;
  v.push_back({"paper-1qubit-boost", single_qubit_circuit(6, terminal_op(Terminal::Boost, 10.0)), 12});
  v.push_back({"paper-1qubit-free", single_qubit_circuit(6, std::nullopt), 12});
  v.push_back({"paper-1qubit-project", single_qubit_circuit(6, terminal_op(Terminal::Project, 10.0)), 11});
  v.push_back({"paper-2qubit", two_qubit_circuit(4, 10.0), 64});
  v.push_back({"paper-2qubit-mixed",
               two_qubit_circuit(4, 10.0, Terminal::Project, Terminal::Boost), 56});
  v.push_back({"paper-2qubit-project",
               two_qubit_circuit(4, 10.0, Terminal::Project, Terminal::Project), 49});
  v.push_back({"chain-3", chain_circuit(3, 1, kRt10), 768});
  v.push_back({"chain-4", chain_circuit(4, 0, kRt10), 2304});
  v.push_back({"teleport-wire",
               insert_teleportation(single_qubit_circuit(3, terminal_op(Terminal::Boost, kRt10)),
                                    std::map<std::string, std::vector<int>>{{"q", {0}}}),
               486});
  v.push_back({"chain-2-teleport",
               insert_teleportation(chain_circuit(2, 0, kRt10), TeleportPolicy::AfterEveryCoupling),
               2916});
  v.push_back({"chain-3-teleport",
               insert_teleportation(chain_circuit(3, 0, kRt10), TeleportPolicy::AfterEveryCoupling),
               1889568});
  v.push_back({"chain-3-between",
               insert_teleportation(chain_circuit(3, 0, kRt10), TeleportPolicy::BetweenCouplings),
               23328});
  v.push_back({"qft-2", qft_circuit(2, kRt10), 64});
  return v;
}

// Run the CLI binary; returns exit status, fills output (stdout+stderr).
inline int run_cli(const std::string& args, std::string* output) {
  const std::string cmd = std::string(GSQC_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return -1;
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int rc = pclose(p);
  if (output) *output = out;
  return WEXITSTATUS(rc);
}

inline std::string slurp(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return "<missing>";
  std::string s;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, n);
  std::fclose(f);
  return s;
}

}  // namespace test_helpers
