#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gsqc/basis.hpp"
#include "gsqc/circuit.hpp"
#include "gsqc/hamiltonian.hpp"

namespace gsqc {

// Amplitudes plus a power-of-two scale carried separately, so deep circuits
// at large lambda cannot overflow (true amplitude = amp * 2^log2_scale).
struct StateVector {
  std::vector<Complex> amp;
  double log2_scale = 0.0;

  double norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
  }
  void normalize() {
    const double n = norm();
    if (n == 0.0) throw std::runtime_error("state: cannot normalize the zero vector");
    for (auto& a : amp) a /= n;
    log2_scale = 0.0;
  }
};

namespace detail {

struct Move {  // out += w * shift(from -> to) applied to psi
  int n_legs = 0;
  std::array<TermLeg, 2> legs{};
  Complex w{};
};

inline void apply_factor(std::vector<Complex>& psi, const BasisMap& basis,
                         const std::vector<Move>& moves) {
  std::vector<Complex> out = psi;
  for (const Move& m : moves) {
    std::array<std::int64_t, 2> from_l{}, strd{};
    std::array<std::int64_t, 2> radix{};
    std::int64_t delta = 0;
    for (int l = 0; l < m.n_legs; ++l) {
      const TermLeg& leg = m.legs[static_cast<std::size_t>(l)];
      from_l[static_cast<std::size_t>(l)] = basis.local_index(leg.qubit, leg.from.row, leg.from.dot);
      const int to = basis.local_index(leg.qubit, leg.to.row, leg.to.dot);
      strd[static_cast<std::size_t>(l)] = basis.stride[static_cast<std::size_t>(leg.qubit)];
      radix[static_cast<std::size_t>(l)] = basis.radix[static_cast<std::size_t>(leg.qubit)];
      delta += (to - from_l[static_cast<std::size_t>(l)]) * strd[static_cast<std::size_t>(l)];
    }
    for (std::int64_t i = 0; i < basis.dimension; ++i) {
      bool match = true;
      for (int l = 0; l < m.n_legs; ++l)
        if ((i / strd[static_cast<std::size_t>(l)]) % radix[static_cast<std::size_t>(l)] !=
            from_l[static_cast<std::size_t>(l)]) {
          match = false;
          break;
        }
      if (match) out[static_cast<std::size_t>(i + delta)] += m.w * psi[static_cast<std::size_t>(i)];
    }
  }
  psi.swap(out);
}

// weight of qubit q sitting exactly at (row, dot), over total weight at row
inline double dot_fraction(const std::vector<Complex>& psi, const BasisMap& basis, int q, int row,
                           int dot) {
  double wdot = 0.0, wrow = 0.0;
  const std::int64_t strd = basis.stride[static_cast<std::size_t>(q)];
  const std::int64_t radix = basis.radix[static_cast<std::size_t>(q)];
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(psi.size()); ++i) {
    const Site s = basis.sites[static_cast<std::size_t>(q)][static_cast<std::size_t>((i / strd) % radix)];
    if (s.row != row) continue;
    const double p = std::norm(psi[static_cast<std::size_t>(i)]);
    wrow += p;
    if (s.dot == dot) wdot += p;
  }
  return wrow == 0.0 ? 0.0 : wdot / wrow;
}

}  // namespace detail

// Analytic zero-energy ground state: the boundary product state pushed down
// row by row with the factors (1 + C^+ U C), (1 + lambda C^+ C), coupling
// factor (1 + A0 + A1 + A0 B_I + A1 B_U); couplings fire when both columns
// have advanced to just above their coupling rows (same worklist order as
// coupling_schedule).  Unnormalized.
//
// checked = true verifies each Project row keeps support (the construction is
// only meaningful while "<xi|gamma> is appreciable"); violations throw.
inline StateVector ground_state(const CircuitSpec& spec, const BasisMap& basis,
                                bool checked = true) {
  const int nq = static_cast<int>(spec.qubits.size());
  StateVector st;
  st.amp.assign(static_cast<std::size_t>(basis.dimension), Complex{});

  // product of boundary states over row-0 sites
  {
    std::vector<std::array<Complex, 2>> b0(static_cast<std::size_t>(nq));
    for (int q = 0; q < nq; ++q) b0[static_cast<std::size_t>(q)] = boundary_state(spec.qubits[static_cast<std::size_t>(q)].boundary);
    std::vector<int> dots(static_cast<std::size_t>(nq), 0);
    for (;;) {
      Complex a{1.0, 0.0};
      bool ok = true;
      std::int64_t idx = 0;
      for (int q = 0; q < nq && ok; ++q) {
        const int d = dots[static_cast<std::size_t>(q)];
        const Complex c = b0[static_cast<std::size_t>(q)][static_cast<std::size_t>(d)];
        if (c == Complex{}) {
          ok = false;
          break;
        }
        a *= c;
        // row-0 dots can be pruned only when the boundary never populates them
        const auto& lut = basis.site_lookup[static_cast<std::size_t>(q)];
        const int loc = lut[static_cast<std::size_t>(d)];
        if (loc < 0) {
          ok = false;
          break;
        }
        idx += static_cast<std::int64_t>(loc) * basis.stride[static_cast<std::size_t>(q)];
      }
      if (ok) st.amp[static_cast<std::size_t>(idx)] += a;
      int q = 0;
      for (; q < nq; ++q) {
        if (++dots[static_cast<std::size_t>(q)] < 2) break;
        dots[static_cast<std::size_t>(q)] = 0;
      }
      if (q == nq) break;
    }
  }

  auto rescale = [&st] {
    double mx = 0.0;
    for (const auto& a : st.amp) mx = std::max(mx, std::abs(a.real()) + std::abs(a.imag()));
    if (mx > std::ldexp(1.0, 500)) {
      int e = 0;
      std::frexp(mx, &e);
      const double s = std::ldexp(1.0, -e);
      for (auto& a : st.amp) a *= s;
      st.log2_scale += e;
    }
  };

  std::vector<int> done(static_cast<std::size_t>(nq), 0);
  int total = 0, applied = 0;
  for (const auto& q : spec.qubits) total += static_cast<int>(q.ops.size());
  while (applied < total) {
    bool progress = false;
    for (int qi = 0; qi < nq; ++qi) {
      const auto& ops = spec.qubits[static_cast<std::size_t>(qi)].ops;
      while (done[static_cast<std::size_t>(qi)] < static_cast<int>(ops.size())) {
        const int oi = done[static_cast<std::size_t>(qi)];
        const RowOp& op = ops[static_cast<std::size_t>(oi)];
        const int j = oi + 1;
        std::vector<detail::Move> moves;
        if (op.kind == OpKind::Unitary) {
          for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
              if (op.g(s, t) != Complex{})
                moves.push_back({1, {TermLeg{qi, {j - 1, t}, {j, s}}}, op.g(s, t)});
        } else if (op.kind == OpKind::Boost) {
          for (int s = 0; s < 2; ++s)
            moves.push_back({1, {TermLeg{qi, {j - 1, s}, {j, s}}}, Complex{op.lambda, 0.0}});
        } else if (op.kind == OpKind::Project) {
          if (checked && detail::dot_fraction(st.amp, basis, qi, j - 1, op.dot) < 1e-16)
            throw std::runtime_error("ground_state: project row " + std::to_string(j) +
                                     " of qubit '" + spec.qubits[static_cast<std::size_t>(qi)].id +
                                     "' meets a state orthogonal to its dot");
          moves.push_back({1, {TermLeg{qi, {j - 1, op.dot}, {j, op.dot}}}, Complex{op.lambda, 0.0}});
        } else if (op.kind == OpKind::CoupledTarget) {
          break;  // driven from the control side
        } else {  // CoupledControl
          const int b = spec.index_of(op.partner);
          if (b < 0) throw std::invalid_argument("ground_state: dangling coupling");
          if (done[static_cast<std::size_t>(b)] != op.partner_row - 1) break;
          const RowOp& ct = spec.qubits[static_cast<std::size_t>(b)].ops[static_cast<std::size_t>(op.partner_row - 1)];
          const int jb = op.partner_row;
          for (int s = 0; s < 2; ++s) {
            moves.push_back({1, {TermLeg{qi, {j - 1, s}, {j, s}}}, Complex{1.0, 0.0}});
            const GateMatrix M = (s == 0) ? gate("I") : ct.g;
            for (int u = 0; u < 2; ++u)
              for (int w = 0; w < 2; ++w)
                if (M(u, w) != Complex{})
                  moves.push_back({2,
                                   {TermLeg{qi, {j - 1, s}, {j, s}},
                                    TermLeg{b, {jb - 1, w}, {jb, u}}},
                                   M(u, w)});
          }
          detail::apply_factor(st.amp, basis, moves);
          rescale();
          ++done[static_cast<std::size_t>(b)];
          ++done[static_cast<std::size_t>(qi)];
          applied += 2;
          progress = true;
          continue;
        }
        detail::apply_factor(st.amp, basis, moves);
        rescale();
        ++done[static_cast<std::size_t>(qi)];
        ++applied;
        progress = true;
      }
    }
    if (!progress) throw std::runtime_error("ground_state: coupling schedule is stuck (cycle)");
  }
  return st;
}

inline double residual_norm(const SparseHermitian& H, const StateVector& psi, int workers = 0) {
  std::vector<Complex> y(static_cast<std::size_t>(H.dim));
  matvec(H, psi.amp.data(), y.data(), workers);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num += std::norm(y[i]);
    den += std::norm(psi.amp[i]);
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

inline double rayleigh_quotient(const SparseHermitian& H, const StateVector& psi, int workers = 0) {
  std::vector<Complex> y(static_cast<std::size_t>(H.dim));
  matvec(H, psi.amp.data(), y.data(), workers);
  Complex num{};
  double den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num += std::conj(psi.amp[i]) * y[i];
    den += std::norm(psi.amp[i]);
  }
  return den == 0.0 ? 0.0 : num.real() / den;
}

}  // namespace gsqc
