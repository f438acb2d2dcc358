// gsqc: validate circuits, compute gaps and ground states, run sweeps,
// print resource estimates, and re-check the published gap tables.
//
// Exit codes: 0 success, 1 validation failure, 2 bad input/usage,
// 3 solver non-convergence (or annotated sweep failures).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsqc/gsqc.hpp"

namespace fs = std::filesystem;
using namespace gsqc;

namespace {

// ---------------------------------------------------------------------------
// presets

struct PresetDef {
  std::string name;
  std::string note;
  CircuitSpec (*make)();
};

const double kRt10 = 3.1622776601683795;  // sqrt(10)

const std::vector<PresetDef>& preset_table() {
  static const std::vector<PresetDef> t = {
      {"paper-1qubit-boost", "6-row qubit, Boost terminal, lambda=10 (dim 12)",
       [] { return single_qubit_circuit(6, terminal_op(Terminal::Boost, 10.0)); }},
      {"paper-1qubit-free", "6-row free qubit, no terminal (dim 12)",
       [] { return single_qubit_circuit(6, std::nullopt); }},
      {"paper-1qubit-project", "6-row qubit, Project|0> terminal, lambda=10 (dim 11)",
       [] { return single_qubit_circuit(6, terminal_op(Terminal::Project, 10.0)); }},
      {"paper-2qubit", "two 4-row qubits, CNOT coupling, Boost terminals, lambda=10 (dim 64)",
       [] { return two_qubit_circuit(4, 10.0); }},
      {"paper-2qubit-mixed", "CNOT pair, control Project + target Boost, lambda=10 (dim 56)",
       [] { return two_qubit_circuit(4, 10.0, Terminal::Project, Terminal::Boost); }},
      {"paper-2qubit-project", "CNOT pair, both Project, lambda=10 (dim 49)",
       [] { return two_qubit_circuit(4, 10.0, Terminal::Project, Terminal::Project); }},
      {"chain-3", "3-qubit CNOT chain, 1 idle row between couplings, lambda=sqrt(10) (dim 768)",
       [] { return chain_circuit(3, 1, kRt10); }},
      {"chain-4", "4-qubit CNOT chain, minimal rows, lambda=sqrt(10) (dim 2304)",
       [] { return chain_circuit(4, 0, kRt10); }},
      {"teleport-wire", "single wire cut by one teleportation gadget, lambda=sqrt(10) (dim 486)",
       [] {
         return insert_teleportation(single_qubit_circuit(3, terminal_op(Terminal::Boost, kRt10)),
                                     std::map<std::string, std::vector<int>>{{"q", {0}}});
       }},
      {"chain-2-teleport", "2-qubit chain, gadget after its coupling, lambda=sqrt(10) (dim 2916)",
       [] {
         return insert_teleportation(chain_circuit(2, 0, kRt10),
                                     TeleportPolicy::AfterEveryCoupling);
       }},
      {"chain-3-teleport", "3-qubit chain, gadget after every coupling (dim 1889568)",
       [] {
         return insert_teleportation(chain_circuit(3, 0, kRt10),
                                     TeleportPolicy::AfterEveryCoupling);
       }},
      {"chain-3-between", "3-qubit chain, gadgets between coupling pairs (dim 23328)",
       [] {
         return insert_teleportation(chain_circuit(3, 0, kRt10),
                                     TeleportPolicy::BetweenCouplings);
       }},
      {"qft-2", "2-qubit quantum Fourier transform, lambda=sqrt(10) (dim 64)",
       [] { return qft_circuit(2, kRt10); }},
  };
  return t;
}

std::string preset_dir() {
  if (const char* e = std::getenv("GSQC_PRESET_DIR"); e && *e) return e;
#ifdef GSQC_PRESET_DIR_DEFAULT
  return GSQC_PRESET_DIR_DEFAULT;
#else
  return "presets";
#endif
}

CircuitSpec load_input(const std::string& circuit, const std::string& preset) {
  if (circuit.empty() == preset.empty())
    throw std::invalid_argument("exactly one of --circuit and --preset is required");
  std::string path = circuit;
  if (!preset.empty()) {
    path = preset_dir() + "/" + preset + ".json";
    if (!fs::exists(path)) {
      std::string names;
      for (const auto& p : preset_table()) names += "\n  " + p.name;
      throw std::invalid_argument("unknown preset '" + preset + "' (no " + path +
                                  "); available:" + names);
    }
  }
  return load_circuit(path);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
}

EigenOptions options_from(int k, double tol, std::int64_t dense_threshold, std::uint64_t seed,
                          int workers, bool shift_invert) {
  EigenOptions o;
  o.k = k;
  o.tol = tol;
  o.dense_threshold = dense_threshold;
  o.seed = seed;
  o.workers = workers;
  o.shift_invert = shift_invert;
  return o;
}

void print_gap(const GapResult& g) {
  std::cout << strf("circuit hash : %s\n", hash_hex(g.circuit_hash).c_str());
  std::cout << strf("dimension    : %lld\n", static_cast<long long>(g.dimension));
  std::cout << strf("method       : %s\n", g.method.c_str());
  std::cout << strf("E0           : %.6e\n", g.E0);
  std::cout << strf("gap (E1-E0)  : %.9e\n", g.gap);
  std::cout << strf("E2-E0        : %.9e\n", g.E2 - g.E0);
  std::cout << strf("psi0 residual: %.3e\n", g.psi0_residual);
  double worst = 0.0;
  for (double r : g.residuals) worst = std::max(worst, r);
  std::cout << strf("max residual : %.3e\n", worst);
  if (g.e1_cluster > 1) std::cout << strf("E1 cluster   : %d states\n", g.e1_cluster);
  std::cout << strf("converged    : %s\n", g.converged ? "yes" : "NO");
  std::cout << strf("seconds      : %.3g\n", g.seconds);
}

// ---------------------------------------------------------------------------
// sweep families

struct Family {
  std::string id;
  std::function<CircuitSpec(double)> make;
};

Family make_family(const std::string& name, int n, int rows, int rows_between, bool teleport,
                   const std::string& policy) {
  auto pol = policy == "between-couplings" ? TeleportPolicy::BetweenCouplings
                                           : TeleportPolicy::AfterEveryCoupling;
  if (policy != "after-every-coupling" && policy != "between-couplings")
    throw std::invalid_argument("unknown teleport policy '" + policy + "'");
  Family f;
  f.id = name;
  if (name == "single-boost") {
    f.make = [rows](double lam) { return single_qubit_circuit(rows, terminal_op(Terminal::Boost, lam)); };
  } else if (name == "single-project") {
    f.make = [rows](double lam) { return single_qubit_circuit(rows, terminal_op(Terminal::Project, lam)); };
  } else if (name == "two-qubit") {
    f.make = [rows](double lam) { return two_qubit_circuit(rows, lam); };
  } else if (name == "two-qubit-mixed") {
    f.make = [rows](double lam) {
      return two_qubit_circuit(rows, lam, Terminal::Project, Terminal::Boost);
    };
  } else if (name == "chain") {
    f.make = [n, rows_between, teleport, pol](double lam) {
      CircuitSpec s = chain_circuit(n, rows_between, lam);
      return teleport ? insert_teleportation(s, pol) : s;
    };
  } else if (name == "qft") {
    f.make = [n, teleport, pol](double lam) {
      CircuitSpec s = qft_circuit(n, lam);
      return teleport ? insert_teleportation(s, pol) : s;
    };
  } else {
    throw std::invalid_argument(
        "unknown family '" + name +
        "' (single-boost, single-project, two-qubit, two-qubit-mixed, chain, qft)");
  }
  if (teleport) f.id += policy == "between-couplings" ? "+between" : "+teleport";
  return f;
}

// ---------------------------------------------------------------------------
// paper-repro rows

struct ReproRow {
  std::string label;
  double lambda;
  double expected;
};

int run_paper_repro(double tolerance, bool skip_slow, std::int64_t slow_dim) {
  const std::vector<double> lams = paper_lambda_list();
  const std::vector<double> one = {0.0782, 0.0174, 1.94e-3, 1.96e-4, 1.96e-5};
  const std::vector<double> two = {0.0574, 2.43e-3, 3.05e-5, 3.12e-7, 3.13e-9};
  int failures = 0, ran = 0;
  std::cout << strf("%-28s %10s %13s %13s %9s  %s\n", "circuit", "lambda", "expected",
                    "measured", "rel.dev", "status");
  for (int table = 0; table < 2; ++table) {
    for (std::size_t i = 0; i < lams.size(); ++i) {
      const double lam = lams[i];
      const double expect = table == 0 ? one[i] : two[i];
      const std::string label = table == 0 ? "single-qubit boost" : "two-qubit cnot";
      CircuitSpec spec = table == 0
                             ? single_qubit_circuit(6, terminal_op(Terminal::Boost, lam))
                             : two_qubit_circuit(4, lam);
      const std::int64_t dim = build_basis(spec).dimension;
      if (skip_slow && dim > slow_dim) {
        std::cout << strf("%-28s %10.4g %13.4e %13s %9s  skipped (dim %lld)\n", label.c_str(),
                          lam, expect, "-", "-", static_cast<long long>(dim));
        continue;
      }
      GapResult g = spectral_gap(spec);
      const double dev = std::abs(g.gap - expect) / expect;
      const bool pass = dev <= tolerance;
      if (!pass) ++failures;
      ++ran;
      std::cout << strf("%-28s %10.4g %13.4e %13.6e %9.2e  %s\n", label.c_str(), lam, expect,
                        g.gap, dev, pass ? "pass" : "FAIL");
    }
  }
  std::cout << strf("%d/%d rows within %.3g relative tolerance\n", ran - failures, ran, tolerance);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground-state quantum computer circuit toolkit"};
  app.require_subcommand(1);

  // common option storage
  std::string circuit, preset, out;
  std::vector<double> lambdas;
  int opt_k = 3, workers = 0;
  double tol = 0.0;
  std::int64_t dense_threshold = 2048;
  std::uint64_t seed = 12345;
  bool shift_invert = false;

  auto add_input = [&](CLI::App* c) {
    c->add_option("--circuit", circuit, "circuit JSON file");
    c->add_option("--preset", preset, "named preset from the preset directory");
  };
  auto add_eigen = [&](CLI::App* c) {
    c->add_option("--k", opt_k, "number of excited eigenvalues")->capture_default_str();
    c->add_option("--tol", tol, "residual tolerance (0 = automatic)");
    c->add_option("--dense-threshold", dense_threshold, "dense solver below this dimension")
        ->capture_default_str();
    c->add_option("--seed", seed, "Krylov start-vector seed")->capture_default_str();
    c->add_flag("--shift-invert", shift_invert, "use shift-invert Krylov");
    c->add_option("--workers", workers, "matvec worker threads (0 = auto, env GSQC_WORKERS)");
  };

  auto* c_validate = app.add_subcommand("validate", "check a circuit file, print a report");
  add_input(c_validate);

  auto* c_gap = app.add_subcommand("gap", "compute E0, E1, E2 and the spectral gap");
  add_input(c_gap);
  add_eigen(c_gap);
  bool dump_matrix = false;
  c_gap->add_option("--lambda", lambdas, "override boost/project lambda (single value)");
  c_gap->add_option("--out", out, "directory for gap.json + gap.time.json");
  c_gap->add_flag("--dump-matrix", dump_matrix, "also write matrix.txt (coordinate format)");

  auto* c_ground = app.add_subcommand("groundstate", "analytic ground state, profiles, success");
  add_input(c_ground);
  c_ground->add_option("--lambda", lambdas, "override boost/project lambda (single value)");
  c_ground->add_option("--workers", workers, "matvec worker threads");
  c_ground->add_option("--out", out, "directory for state.json");

  auto* c_sweep = app.add_subcommand("sweep", "gap vs lambda for a circuit family + exponent fit");
  std::string family = "single-boost", policy = "after-every-coupling";
  int fam_n = 3, fam_rows = 6, rows_between = 0;
  bool teleport = false;
  std::vector<double> window;
  c_sweep->add_option("--family", family,
                      "single-boost | single-project | two-qubit | two-qubit-mixed | chain | qft")
      ->capture_default_str();
  c_sweep->add_option("--n", fam_n, "qubit count (chain/qft families)")->capture_default_str();
  c_sweep->add_option("--rows", fam_rows, "rows per qubit (single/two-qubit families)")
      ->capture_default_str();
  c_sweep->add_option("--rows-between", rows_between, "idle rows between chain couplings")
      ->capture_default_str();
  c_sweep->add_flag("--teleport", teleport, "insert teleportation gadgets");
  c_sweep->add_option("--teleport-policy", policy, "after-every-coupling | between-couplings")
      ->capture_default_str();
  c_sweep->add_option("--lambda", lambdas, "lambda list (default 1, sqrt10, 10, sqrt1000, 100)");
  c_sweep->add_option("--window", window, "fit window LO HI (default sqrt(10)*rows/2, inf)")
      ->expected(2);
  add_eigen(c_sweep);
  c_sweep->add_option("--out", out, "directory for sweep.json/sweep.tsv/plot.tsv");

  auto* c_estimate = app.add_subcommand("estimate", "closed-form resource estimate");
  int est_n = 0, est_k = 2, est_c = 8;
  double est_d = 0.0, est_f = 1.0;
  c_estimate->add_option("--n", est_n, "problem size in bits")->required();
  c_estimate->add_option("--kexp", est_k, "control-op exponent (N^k controlled gates)")
      ->capture_default_str();
  c_estimate->add_option("--d", est_d, "tuning constant D (default: C)");
  c_estimate->add_option("--f", est_f, "qubit-count prefactor F")->capture_default_str();
  c_estimate->add_option("--c", est_c, "rows per qubit (<= 8)")->capture_default_str();
  c_estimate->add_option("--out", out, "directory for estimate.json");

  auto* c_repro = app.add_subcommand("paper-repro", "re-check the published gap tables");
  double repro_tol = 0.02;
  bool skip_slow = false;
  c_repro->add_option("--tolerance", repro_tol, "relative tolerance")->capture_default_str();
  c_repro->add_flag("--skip-slow", skip_slow, "skip rows with dimension > 4096");

  auto* c_emit = app.add_subcommand("emit-preset", "write preset circuit files (maintenance)");
  std::string emit_name, emit_dir = ".";
  bool emit_all = false, emit_list = false;
  c_emit->add_option("--name", emit_name, "preset to emit");
  c_emit->add_flag("--all", emit_all, "emit every preset");
  c_emit->add_flag("--list", emit_list, "list preset names");
  c_emit->add_option("--dir", emit_dir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_validate->parsed()) {
      CircuitSpec spec;
      try {
        spec = load_input(circuit, preset);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      ValidationReport rep = validate_circuit(spec);
      std::cout << rep.str();
      if (rep.ok()) {
        std::int64_t dim = build_basis(spec).dimension;
        std::cout << strf("valid: %zu qubit(s), dimension %lld\n", spec.qubits.size(),
                          static_cast<long long>(dim));
      }
      return rep.ok() ? 0 : 1;
    }

    if (c_gap->parsed() || c_ground->parsed()) {
      CircuitSpec spec;
      try {
        spec = load_input(circuit, preset);
        if (!lambdas.empty()) {
          if (lambdas.size() != 1)
            throw std::invalid_argument("this command takes a single --lambda; use sweep");
          spec = with_lambda(spec, lambdas[0]);
        }
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }

      if (c_gap->parsed()) {
        EigenOptions eo = options_from(opt_k, tol, dense_threshold, seed, workers, shift_invert);
        GapResult g;
        try {
          g = spectral_gap(spec, eo);
        } catch (const std::exception& e) {
          std::cerr << "error: " << e.what() << "\n";
          return 3;
        }
        print_gap(g);
        if (!out.empty()) {
          fs::create_directories(out);
          write_file(fs::path(out) / "gap.json", dump_json(gap_report(g, eo)));
          write_file(fs::path(out) / "gap.time.json", dump_json(timing_sidecar(g.seconds)));
        }
        if (dump_matrix) {
          BasisMap basis = build_basis(spec);
          SparseHermitian H = assemble_hamiltonian(spec, basis, workers);
          fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
          fs::create_directories(dir);
          std::ofstream ms(dir / "matrix.txt", std::ios::binary);
          H.write_coordinate(ms);
        }
        return g.converged ? 0 : 3;
      }

      // groundstate
      ValidationReport rep = validate_circuit(spec);
      if (!rep.ok()) {
        std::cerr << rep.str();
        return 1;
      }
      BasisMap basis = build_basis(spec);
      StateVector psi = ground_state(spec, basis);
      psi.normalize();
      SparseHermitian H = assemble_hamiltonian(spec, basis, workers);
      const double res = residual_norm(H, psi, workers);
      std::cout << strf("dimension    : %lld\n", static_cast<long long>(basis.dimension));
      std::cout << strf("psi0 residual: %.3e\n", res);
      std::cout << strf("E0 (Rayleigh): %.3e\n", rayleigh_quotient(H, psi, workers));
      json profiles = json::array();
      for (const auto& q : spec.qubits) {
        RowProfile rp = row_profile(psi, basis, spec, q.id);
        profiles.push_back(profile_json(rp));
        std::cout << strf("%-8s rows:", q.id.c_str());
        for (double p : rp.probability) std::cout << strf(" %.4f", p);
        std::cout << "\n";
      }
      const double succ = final_row_success_probability(psi, basis, spec);
      std::cout << strf("P(all electrons on final rows) = %.6f\n", succ);
      if (!out.empty()) {
        fs::create_directories(out);
        json j = state_report(spec, basis, psi);
        j["residual"] = res;
        j["profiles"] = std::move(profiles);
        j["final_row_success"] = succ;
        write_file(fs::path(out) / "state.json", dump_json(j));
      }
      return 0;
    }

    if (c_sweep->parsed()) {
      Family fam;
      std::vector<double> lams = lambdas.empty() ? paper_lambda_list() : lambdas;
      try {
        fam = make_family(family, fam_n, fam_rows, rows_between, teleport, policy);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      EigenOptions eo = options_from(opt_k, tol, dense_threshold, seed, workers, shift_invert);
      SweepTable table = lambda_sweep(fam.id, fam.make, lams, eo);
      std::cout << sweep_tsv(table);
      double lo = window.empty() ? default_fit_lo(fam.make(lams.front()))
                                 : window[0];
      double hi = window.empty() ? std::numeric_limits<double>::infinity() : window[1];
      bool fitted = false;
      ExponentFit fit;
      try {
        fit = fit_exponent(table, lo, hi);
        fitted = true;
        std::cout << strf("fit window [%.4g, %.4g]: slope %.4f +/- %.4f (%d points)\n", lo, hi,
                          fit.slope, fit.stderr_slope, fit.points);
      } catch (const std::exception& e) {
        std::cout << "fit: " << e.what() << "\n";
      }
      if (!out.empty()) {
        fs::create_directories(out);
        json j = sweep_report(table, eo);
        if (fitted) j["fit"] = fit_json(fit, lo, hi, SweepColumn::Gap);
        write_file(fs::path(out) / "sweep.json", dump_json(j));
        write_file(fs::path(out) / "sweep.tsv", sweep_tsv(table));
        write_file(fs::path(out) / "plot.tsv", plot_tsv(table, fitted ? &fit : nullptr));
        write_file(fs::path(out) / "sweep.time.json", dump_json(sweep_timing_sidecar(table)));
      }
      for (const auto& p : table.points)
        if (!p.ok) return 3;
      return 0;
    }

    if (c_estimate->parsed()) {
      ResourceEstimate r;
      try {
        r = resource_estimate(est_n, est_k, est_d > 0.0 ? est_d : static_cast<double>(est_c),
                              est_f, est_c);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      std::cout << strf("N=%d k=%d D=%g F=%g C=%d\n", r.N, r.k, r.D, r.F, r.C);
      std::cout << strf("lambda       : %.6g        (%s)\n", r.lambda, r.lambda_law().c_str());
      std::cout << strf("qubits       : %.6g        (qubits ~ F * N^k)\n", r.qubits);
      std::cout << strf("gap / eps    : %.6e  (%s)\n", r.gap_scale, r.gap_law().c_str());
      std::cout << strf("P(success)   : %.6f      (%s)\n", r.success, r.success_law().c_str());
      std::cout << strf("time scale   : %.6e  (%s)\n", r.time_scale, r.time_law().c_str());
      if (!out.empty()) {
        fs::create_directories(out);
        write_file(fs::path(out) / "estimate.json", dump_json(estimate_report(r)));
      }
      return 0;
    }

    if (c_repro->parsed()) return run_paper_repro(repro_tol, skip_slow, 4096);

    if (c_emit->parsed()) {
      if (emit_list) {
        for (const auto& p : preset_table())
          std::cout << strf("%-22s %s\n", p.name.c_str(), p.note.c_str());
        return 0;
      }
      fs::create_directories(emit_dir);
      int emitted = 0;
      for (const auto& p : preset_table()) {
        if (!emit_all && p.name != emit_name) continue;
        write_file(fs::path(emit_dir) / (p.name + ".json"), circuit_to_string(p.make()));
        ++emitted;
      }
      if (emitted == 0) {
        std::cerr << "error: unknown preset '" << emit_name << "' (try --list)\n";
        return 2;
      }
      std::cout << strf("wrote %d preset file(s) to %s\n", emitted, emit_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
