#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsqc/analysis.hpp"
#include "gsqc/basis.hpp"
#include "gsqc/circuit.hpp"
#include "gsqc/common.hpp"
#include "gsqc/eigensolve.hpp"
#include "gsqc/ground_state.hpp"
#include "gsqc/resource.hpp"

// Report emitters. Every machine-readable report is deterministic for a fixed
// run configuration; wall times go to a separate sidecar so reruns produce
// byte-identical report files.

namespace gsqc {

using json = nlohmann::ordered_json;

inline std::string hash_hex(std::uint64_t h) {
  return strf("%016llx", static_cast<unsigned long long>(h));
}

inline json options_json(const EigenOptions& o) {
  json j;
  j["k"] = o.k;
  j["tol"] = o.tol;
  j["max_iter"] = o.max_iter;
  j["max_basis"] = o.max_basis;
  j["seed"] = o.seed;
  j["dense_threshold"] = o.dense_threshold;
  j["shift_invert"] = o.shift_invert;
  return j;
}

inline json gap_report(const GapResult& g, const EigenOptions& opts) {
  json j;
  j["report"] = "gap";
  j["circuit_hash"] = hash_hex(g.circuit_hash);
  j["dimension"] = g.dimension;
  j["method"] = g.method;
  j["converged"] = g.converged;
  j["E0"] = g.E0;
  j["E1"] = g.E1;
  j["E2"] = g.E2;
  j["gap"] = g.gap;
  j["e2_minus_e0"] = g.E2 - g.E0;
  j["solver_e0"] = g.solver_e0;
  j["e1_cluster"] = g.e1_cluster;
  j["ground_state_residual"] = g.psi0_residual;
  j["excited_residuals"] = g.residuals;
  j["deflated"] = g.deflated;
  j["tol"] = g.tol;
  j["options"] = options_json(opts);
  return j;
}

inline json timing_sidecar(double seconds) {
  json j;
  j["seconds"] = seconds;
  return j;
}

inline json sweep_report(const SweepTable& t, const EigenOptions& opts) {
  json j;
  j["report"] = "sweep";
  j["family"] = t.family;
  j["options"] = options_json(opts);
  json pts = json::array();
  for (const auto& p : t.points) {
    json q;
    q["lambda"] = p.lambda;
    q["ok"] = p.ok;
    if (p.ok || p.error.empty()) {
      q["gap"] = p.gap;
      q["e2_minus_e0"] = p.e2e0;
      q["residual"] = p.residual;
      q["dimension"] = p.dimension;
    }
    if (!p.error.empty()) q["error"] = p.error;
    pts.push_back(std::move(q));
  }
  j["points"] = std::move(pts);
  return j;
}

inline json fit_json(const ExponentFit& f, double lo, double hi, SweepColumn col) {
  json j;
  j["column"] = col == SweepColumn::Gap ? "gap" : "e2_minus_e0";
  j["slope"] = f.slope;
  j["stderr"] = f.stderr_slope;
  j["intercept"] = f.intercept;
  j["points"] = f.points;
  j["window"] = json::array({lo, hi});
  return j;
}

inline json sweep_timing_sidecar(const SweepTable& t) {
  json j;
  json secs = json::array();
  for (const auto& p : t.points) secs.push_back(p.seconds);
  j["seconds"] = std::move(secs);
  return j;
}

// Six-column table; the seconds column carries wall time, so this file is the
// one output exempt from the byte-identical rerun guarantee.
inline std::string sweep_tsv(const SweepTable& t) {
  std::string s = "# family\t" + t.family + "\n";
  s += "# lambda\tgap\te2_minus_e0\tresidual\tdimension\tseconds\n";
  for (const auto& p : t.points) {
    if (p.ok) {
      s += strf("%.12g\t%.12g\t%.12g\t%.12g\t%lld\t%.3g\n", p.lambda, p.gap, p.e2e0, p.residual,
                static_cast<long long>(p.dimension), p.seconds);
    } else {
      s += strf("%.12g\tfailed\t-\t-\t-\t-\t# %s\n", p.lambda, p.error.c_str());
    }
  }
  return s;
}

// Data-only plot file: log10 columns plus the fitted line's parameters.
inline std::string plot_tsv(const SweepTable& t, const ExponentFit* fit,
                            SweepColumn col = SweepColumn::Gap) {
  std::string s = "# plot\tlog10(lambda) vs log10(" +
                  std::string(col == SweepColumn::Gap ? "gap" : "e2_minus_e0") + ")\n";
  if (fit) {
    const double l10 = std::log(10.0);
    s += strf("# fit\tslope=%.12g\tstderr=%.12g\tintercept10=%.12g\n", fit->slope,
              fit->stderr_slope, fit->intercept / l10);
  }
  s += "# x\ty\n";
  for (const auto& p : t.points) {
    const double y = col == SweepColumn::Gap ? p.gap : p.e2e0;
    if (!p.ok || !(y > 0.0)) continue;
    s += strf("%.12g\t%.12g\n", std::log10(p.lambda), std::log10(y));
  }
  return s;
}

// State dump with a site legend so external tools can decode basis ordinals
// (qubit 0 is the fastest digit). Full amplitudes up to full_limit, otherwise
// the top_k largest by magnitude.
inline json state_report(const CircuitSpec& spec, const BasisMap& basis, const StateVector& psi,
                         std::int64_t full_limit = 4096, int top_k = 64) {
  json j;
  j["report"] = "state";
  j["circuit_hash"] = hash_hex(circuit_hash(spec));
  j["dimension"] = basis.dimension;
  j["log2_scale"] = psi.log2_scale;
  json legend = json::array();
  for (std::size_t q = 0; q < basis.sites.size(); ++q) {
    json ql;
    ql["qubit"] = spec.qubits[q].id;
    json sites = json::array();
    for (const Site& s : basis.sites[q]) sites.push_back(json::array({s.row, s.dot}));
    ql["sites"] = std::move(sites);
    legend.push_back(std::move(ql));
  }
  j["legend"] = std::move(legend);
  json pruned = json::array();
  for (const auto& p : basis.pruned) pruned.push_back(json::array({p.qubit, p.row, p.dot}));
  j["pruned_sites"] = std::move(pruned);
  if (basis.dimension <= full_limit) {
    json amps = json::array();
    for (const Complex& a : psi.amp) amps.push_back(json::array({a.real(), a.imag()}));
    j["amplitudes"] = std::move(amps);
  } else {
    std::vector<std::int64_t> idx(psi.amp.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int64_t>(i);
    const int keep = std::min<std::int64_t>(top_k, basis.dimension);
    std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                      [&](std::int64_t a, std::int64_t b) {
                        const double na = std::norm(psi.amp[static_cast<std::size_t>(a)]);
                        const double nb = std::norm(psi.amp[static_cast<std::size_t>(b)]);
                        return na != nb ? na > nb : a < b;
                      });
    json amps = json::array();
    for (int i = 0; i < keep; ++i) {
      const Complex& a = psi.amp[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      amps.push_back(json::array({idx[static_cast<std::size_t>(i)], a.real(), a.imag()}));
    }
    j["top_amplitudes"] = std::move(amps);
  }
  return j;
}

inline json profile_json(const RowProfile& rp) {
  json j;
  j["qubit"] = rp.qubit;
  j["row_probability"] = rp.probability;
  json doms = json::array();
  for (const auto& v : rp.dominant_state)
    doms.push_back(json::array({v[0].real(), v[0].imag(), v[1].real(), v[1].imag()}));
  j["dominant_dot_state"] = std::move(doms);
  return j;
}

inline json estimate_report(const ResourceEstimate& r) {
  json j;
  j["report"] = "estimate";
  j["N"] = r.N;
  j["k"] = r.k;
  j["D"] = r.D;
  j["F"] = r.F;
  j["C"] = r.C;
  j["lambda"] = r.lambda;
  j["qubits"] = r.qubits;
  j["gap_scale"] = r.gap_scale;
  j["success_probability"] = r.success;
  j["time_scale"] = r.time_scale;
  j["laws"] = json::array({r.gap_law(), r.lambda_law(), r.success_law(), r.time_law()});
  return j;
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace gsqc
