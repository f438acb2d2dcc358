#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gsqc/common.hpp"

namespace gsqc {

// 2x2 unitary acting on the {|0>,|1>} dot pair of a row.  `name`/`k` keep the
// symbolic identity when the matrix came from the gate library, so circuit
// files can round-trip losslessly; explicit matrices are tagged "raw" and
// serialize entry-by-entry.
struct GateMatrix {
  std::array<Complex, 4> m{};  // row-major
  std::string name;            // "I", "X", "H", "Rk", "Rk_dag", "raw"
  int k = 0;                   // phase index for Rk / Rk_dag

  Complex operator()(int r, int c) const { return m[2 * r + c]; }
  Complex& operator()(int r, int c) { return m[2 * r + c]; }

  GateMatrix adjoint() const {
    GateMatrix g;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g(r, c) = std::conj((*this)(c, r));
    return g;
  }

  friend GateMatrix operator*(const GateMatrix& a, const GateMatrix& b) {
    GateMatrix g;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
    return g;
  }

  // max |(G†G - I)_{rc}|
  double unitarity_residual() const {
    GateMatrix p = adjoint() * (*this);
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        Complex want = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        worst = std::max(worst, std::abs(p(r, c) - want));
      }
    return worst;
  }

  bool same_entries(const GateMatrix& o, double tol = 0.0) const {
    for (int i = 0; i < 4; ++i)
      if (std::abs(m[i] - o.m[i]) > tol) return false;
    return true;
  }
};

// Gate library: I, X, H, Rk = diag(1, e^{+2*pi*i/2^k}), Rk_dag = diag(1, e^{-2*pi*i/2^k}).
inline GateMatrix gate(std::string_view name, int k = 0) {
  GateMatrix g;
  g.name = std::string(name);
  if (name == "I") {
    g.m = {Complex{1}, {}, {}, Complex{1}};
  } else if (name == "X") {
    g.m = {Complex{0}, Complex{1}, Complex{1}, Complex{0}};
  } else if (name == "H") {
    const double s = 1.0 / std::sqrt(2.0);
    g.m = {Complex{s}, Complex{s}, Complex{s}, Complex{-s}};
  } else if (name == "Rk" || name == "Rk_dag") {
    if (k < 1) throw std::invalid_argument("gate " + std::string(name) + " requires k >= 1");
    const double sign = (name == "Rk") ? 1.0 : -1.0;
    const double phi = sign * 2.0 * std::numbers::pi / static_cast<double>(1ull << k);
    g.m = {Complex{1}, {}, {}, std::polar(1.0, phi)};
    g.k = k;
  } else {
    throw std::invalid_argument("unknown gate name: " + std::string(name));
  }
  return g;
}

inline GateMatrix raw_gate(std::array<Complex, 4> entries) {
  GateMatrix g;
  g.name = "raw";
  g.m = entries;
  return g;
}

}  // namespace gsqc
