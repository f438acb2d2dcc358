#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gsqc/common.hpp"

namespace gsqc {

// Closed-form cost model for a teleportation-equipped circuit on N problem
// bits with N^k controlled operations (QFT: k=2). With the gadgets in place
// the gap obeys Delta ~ eps/lambda^8 regardless of circuit depth, and
// lambda = sqrt(D)*N^{k/2} suffices, so Delta ~ eps/(D^4*N^{4k}).
struct ResourceEstimate {
  // inputs
  int N = 0;         // problem size (bits)
  int k = 2;         // control-op exponent: N^k controlled gates
  double D = 0.0;    // tuning constant (lambda^2 per unit load)
  double F = 1.0;    // qubit-count prefactor
  int C = 8;         // rows per qubit, at most 8

  // derived
  double lambda = 0.0;        // required boost strength, sqrt(D)*N^{k/2}
  double qubits = 0.0;        // total qubit count, F*N^k
  double gap_scale = 0.0;     // Delta/eps = 1/(D^4*N^{4k})
  double success = 0.0;       // P = exp(-F*C/D)
  double time_scale = 0.0;    // adiabatic runtime ~ Delta^{-2} = D^8*N^{8k}

  std::string gap_law() const {
    return k == 2 ? std::string("Delta ~ eps / (D^4 * N^8)")
                  : strf("Delta ~ eps / (D^4 * N^%d)", 4 * k);
  }
  std::string lambda_law() const {
    return k == 2 ? std::string("lambda ~ sqrt(D) * N")
                  : strf("lambda ~ sqrt(D) * N^(%d/2)", k);
  }
  std::string success_law() const { return "P ~ exp(-F*C/D)"; }
  std::string time_law() const {
    return k == 2 ? std::string("time ~ D^8 * N^16")
                  : strf("time ~ D^8 * N^%d", 8 * k);
  }
};

inline ResourceEstimate resource_estimate(int N, int k, double D, double F = 1.0, int C = 8) {
  if (N <= 0) throw std::invalid_argument("resource_estimate: N must be positive");
  if (k <= 0) throw std::invalid_argument("resource_estimate: k must be positive");
  if (!(D > 0.0)) throw std::invalid_argument("resource_estimate: D must be positive");
  if (!(F > 0.0)) throw std::invalid_argument("resource_estimate: F must be positive");
  if (C <= 0) throw std::invalid_argument("resource_estimate: C must be positive");
  if (C > 8) throw std::invalid_argument("resource_estimate: C must be at most 8 rows");
  ResourceEstimate r;
  r.N = N;
  r.k = k;
  r.D = D;
  r.F = F;
  r.C = C;
  const double nk = std::pow(static_cast<double>(N), static_cast<double>(k));
  r.lambda = std::sqrt(D * nk);
  r.qubits = F * nk;
  r.gap_scale = 1.0 / (std::pow(D, 4.0) * std::pow(nk, 4.0));
  r.success = std::exp(-F * C / D);
  r.time_scale = 1.0 / (r.gap_scale * r.gap_scale);
  return r;
}

}  // namespace gsqc
