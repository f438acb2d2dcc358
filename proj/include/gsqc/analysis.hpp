#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsqc/basis.hpp"
#include "gsqc/circuit.hpp"
#include "gsqc/eigensolve.hpp"
#include "gsqc/ground_state.hpp"

namespace gsqc {

// Marginal of one qubit: probability per row plus the dominant dot-state of
// each row (leading eigenvector of the row's 2x2 reduced density block).
struct RowProfile {
  std::string qubit;
  std::vector<double> probability;                     // per row, sums to 1
  std::vector<std::array<Complex, 2>> dominant_state;  // per row, normalized
};

inline RowProfile row_profile(const StateVector& psi, const BasisMap& basis,
                              const CircuitSpec& spec, const std::string& qubit) {
  const int q = spec.index_of(qubit);
  if (q < 0) throw std::invalid_argument("row_profile: unknown qubit '" + qubit + "'");
  const QubitSpec& qs = spec.qubits[static_cast<std::size_t>(q)];
  const int rows = qs.rows();
  RowProfile rp;
  rp.qubit = qubit;
  rp.probability.assign(static_cast<std::size_t>(rows), 0.0);
  rp.dominant_state.assign(static_cast<std::size_t>(rows), {Complex{}, Complex{}});

  const std::int64_t strd = basis.stride[static_cast<std::size_t>(q)];
  const std::int64_t radix = basis.radix[static_cast<std::size_t>(q)];
  // rho[row] = 2x2 reduced block; rho01 needs the amplitude at the same
  // configuration with only this qubit's dot flipped
  std::vector<std::array<double, 2>> diag(static_cast<std::size_t>(rows), {0.0, 0.0});
  std::vector<Complex> off(static_cast<std::size_t>(rows), Complex{});
  const auto& lut = basis.site_lookup[static_cast<std::size_t>(q)];
  for (std::int64_t i = 0; i < basis.dimension; ++i) {
    const int loc = static_cast<int>((i / strd) % radix);
    const Site s = basis.sites[static_cast<std::size_t>(q)][static_cast<std::size_t>(loc)];
    const double p = std::norm(psi.amp[static_cast<std::size_t>(i)]);
    diag[static_cast<std::size_t>(s.row)][static_cast<std::size_t>(s.dot)] += p;
    if (s.dot == 0) {
      const int loc1 = lut[static_cast<std::size_t>(s.row * 2 + 1)];
      if (loc1 >= 0) {
        const std::int64_t i1 = i + static_cast<std::int64_t>(loc1 - loc) * strd;
        off[static_cast<std::size_t>(s.row)] +=
            psi.amp[static_cast<std::size_t>(i)] * std::conj(psi.amp[static_cast<std::size_t>(i1)]);
      }
    }
  }
  double total = 0.0;
  for (int r = 0; r < rows; ++r)
    total += diag[static_cast<std::size_t>(r)][0] + diag[static_cast<std::size_t>(r)][1];
  if (total <= 0.0) throw std::invalid_argument("row_profile: zero-norm state");
  for (int r = 0; r < rows; ++r) {
    const double p0 = diag[static_cast<std::size_t>(r)][0], p1 = diag[static_cast<std::size_t>(r)][1];
    rp.probability[static_cast<std::size_t>(r)] = (p0 + p1) / total;
    // leading eigenvector of [[p0, c], [conj(c), p1]]
    const Complex c = off[static_cast<std::size_t>(r)];
    std::array<Complex, 2> v{Complex{1.0, 0.0}, Complex{}};
    if (p0 + p1 > 0.0) {
      const double tr = p0 + p1;
      const double det = p0 * p1 - std::norm(c);
      const double lam = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
      // (rho - lam) v = 0
      std::array<Complex, 2> cand1{c, Complex{lam - p0, 0.0}};
      std::array<Complex, 2> cand2{Complex{lam - p1, 0.0}, std::conj(c)};
      const double n1 = std::sqrt(std::norm(cand1[0]) + std::norm(cand1[1]));
      const double n2 = std::sqrt(std::norm(cand2[0]) + std::norm(cand2[1]));
      std::array<Complex, 2> pick = n1 >= n2 ? cand1 : cand2;
      const double n = n1 >= n2 ? n1 : n2;
      if (n > 0.0) {
        pick[0] /= n;
        pick[1] /= n;
        const Complex lead = std::abs(pick[0]) > 1e-12 ? pick[0] : pick[1];
        const Complex phase = std::abs(lead) / lead;
        v = {pick[0] * phase, pick[1] * phase};
      }
    }
    rp.dominant_state[static_cast<std::size_t>(r)] = v;
  }
  return rp;
}

// Eq. (8)'s 1/x: sqrt of the probability that the qubit's electron sits
// strictly above cut_row.
inline double upstream_weight(const StateVector& psi, const BasisMap& basis,
                              const CircuitSpec& spec, const std::string& qubit, int cut_row) {
  const int q = spec.index_of(qubit);
  if (q < 0) throw std::invalid_argument("upstream_weight: unknown qubit '" + qubit + "'");
  const int rows = spec.qubits[static_cast<std::size_t>(q)].rows();
  if (cut_row < 0 || cut_row >= rows)
    throw std::invalid_argument("upstream_weight: cut_row outside qubit");
  const std::int64_t strd = basis.stride[static_cast<std::size_t>(q)];
  const std::int64_t radix = basis.radix[static_cast<std::size_t>(q)];
  double up = 0.0, total = 0.0;
  for (std::int64_t i = 0; i < basis.dimension; ++i) {
    const Site s = basis.sites[static_cast<std::size_t>(q)][static_cast<std::size_t>((i / strd) % radix)];
    const double p = std::norm(psi.amp[static_cast<std::size_t>(i)]);
    total += p;
    if (s.row < cut_row) up += p;
  }
  return total > 0.0 ? std::sqrt(up / total) : 0.0;
}

// Probability that every qubit's electron sits on its final row.
inline double final_row_success_probability(const StateVector& psi, const BasisMap& basis,
                                            const CircuitSpec& spec) {
  double hit = 0.0, total = 0.0;
  const int nq = static_cast<int>(spec.qubits.size());
  for (std::int64_t i = 0; i < basis.dimension; ++i) {
    const double p = std::norm(psi.amp[static_cast<std::size_t>(i)]);
    total += p;
    bool all_final = true;
    for (int q = 0; q < nq && all_final; ++q)
      all_final = basis.site_of(i, q).row == spec.qubits[static_cast<std::size_t>(q)].rows() - 1;
    if (all_final) hit += p;
  }
  return total > 0.0 ? hit / total : 0.0;
}

// Closed form for a single boost qubit of n rows (exact for the product
// ground state): lambda^2 / (lambda^2 + n - 1).
inline double boost_success_probability(int n_rows, double lambda) {
  return lambda * lambda / (lambda * lambda + n_rows - 1);
}

// ---------------------------------------------------------------------------
// sweeps and exponent fits

struct SweepPoint {
  double lambda = 0.0;
  double gap = 0.0;
  double e2e0 = 0.0;
  double residual = 0.0;  // analytic ground-state residual
  std::int64_t dimension = 0;
  double seconds = 0.0;
  bool ok = false;
  std::string error;  // non-empty when the solve failed
};

struct SweepTable {
  std::string family;
  std::vector<SweepPoint> points;
};

inline SweepTable lambda_sweep(const std::string& family,
                               const std::function<CircuitSpec(double)>& make,
                               const std::vector<double>& lambdas, const EigenOptions& opts = {}) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("lambda_sweep: lambda list must be strictly increasing");
  SweepTable t;
  t.family = family;
  for (double lam : lambdas) {
    SweepPoint p;
    p.lambda = lam;
    try {
      const GapResult g = spectral_gap(make(lam), opts);
      p.gap = g.gap;
      p.e2e0 = g.E2 - g.E0;
      p.residual = g.psi0_residual;
      p.dimension = g.dimension;
      p.seconds = g.seconds;
      p.ok = g.converged;
      if (!g.converged) p.error = "solver did not converge";
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    t.points.push_back(std::move(p));
  }
  return t;
}

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;  // log-space
  double stderr_slope = 0.0;
  int points = 0;
};

// The asymptotic laws need n << lambda; by default fit only from
// sqrt(10) * (longest qubit) / 2 upward.
inline double default_fit_lo(const CircuitSpec& spec) {
  int max_rows = 0;
  for (const auto& q : spec.qubits) max_rows = std::max(max_rows, q.rows());
  return std::sqrt(10.0) * max_rows / 2.0;
}

enum class SweepColumn { Gap, E2E0 };

inline ExponentFit fit_exponent(const SweepTable& t, double lam_lo = 0.0,
                                double lam_hi = std::numeric_limits<double>::infinity(),
                                SweepColumn col = SweepColumn::Gap) {
  std::vector<double> xs, ys;
  for (const auto& p : t.points) {
    if (!p.ok || p.lambda < lam_lo || p.lambda > lam_hi) continue;
    const double y = col == SweepColumn::Gap ? p.gap : p.e2e0;
    if (!(y > 0.0)) continue;
    xs.push_back(std::log(p.lambda));
    ys.push_back(std::log(y));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw std::invalid_argument("fit_exponent: need at least 3 points in window");
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += xs[static_cast<std::size_t>(i)];
    sy += ys[static_cast<std::size_t>(i)];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = xs[static_cast<std::size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[static_cast<std::size_t>(i)] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: degenerate lambda window");
  ExponentFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[static_cast<std::size_t>(i)] -
                     (f.intercept + f.slope * xs[static_cast<std::size_t>(i)]);
    ss += r * r;
  }
  f.stderr_slope = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return f;
}

// The paper's standard abscissa list.
inline std::vector<double> paper_lambda_list() {
  return {1.0, std::sqrt(10.0), 10.0, std::sqrt(1000.0), 100.0};
}

}  // namespace gsqc
