#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "gsqc/basis.hpp"
#include "gsqc/circuit.hpp"

namespace gsqc {

// One matrix-element template: value * |to_1 to_2><from_1 from_2| on the leg
// qubits, identity on the rest.  Hermiticity comes from emitting conjugate
// partners explicitly, as in Eq. (1)'s "+ h.c.".
struct TermLeg {
  int qubit = 0;
  Site from, to;
};

struct Term {
  int n_legs = 0;
  std::array<TermLeg, 2> legs{};
  Complex value{};
  const char* source = "";  // boundary | unitary | boost | project | coupling
  int src_qubit = 0;        // qubit whose op emitted the term (coupling: target side)
  int src_op = -1;          // op index; -1 for boundary
};

namespace detail {

inline void push_term(std::vector<Term>& out, Complex v, const char* src, int sq, int so,
                      TermLeg l0, std::optional<TermLeg> l1 = std::nullopt) {
  if (v == Complex{}) return;
  Term t;
  t.value = v;
  t.source = src;
  t.src_qubit = sq;
  t.src_op = so;
  t.legs[0] = l0;
  t.n_legs = 1;
  if (l1) {
    t.legs[1] = *l1;
    t.n_legs = 2;
  }
  out.push_back(t);
}

}  // namespace detail

// eps * [ n_{j-1} + n_j - (C_j^+ U C_{j-1} + h.c.) ], Eq. (1)
inline void unitary_terms(std::vector<Term>& out, int qi, int j, const GateMatrix& U,
                          const char* src, int sq, int so) {
  for (int s = 0; s < 2; ++s) {
    detail::push_term(out, 1.0, src, sq, so, {qi, {j - 1, s}, {j - 1, s}});
    detail::push_term(out, 1.0, src, sq, so, {qi, {j, s}, {j, s}});
  }
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      detail::push_term(out, -U(s, t), src, sq, so, {qi, {j - 1, t}, {j, s}});
      detail::push_term(out, -std::conj(U(s, t)), src, sq, so, {qi, {j, s}, {j - 1, t}});
    }
}

// eps * [ n_{j-1} + n_j/lambda^2 - (hop + h.c.)/lambda ], Eq. (2)
inline void boost_terms(std::vector<Term>& out, int qi, int j, double lam) {
  for (int s = 0; s < 2; ++s) {
    detail::push_term(out, 1.0, "boost", qi, j - 1, {qi, {j - 1, s}, {j - 1, s}});
    detail::push_term(out, 1.0 / (lam * lam), "boost", qi, j - 1, {qi, {j, s}, {j, s}});
    detail::push_term(out, -1.0 / lam, "boost", qi, j - 1, {qi, {j - 1, s}, {j, s}});
    detail::push_term(out, -1.0 / lam, "boost", qi, j - 1, {qi, {j, s}, {j - 1, s}});
  }
}

// Eq. (3): the boost restricted to dot gamma
inline void project_terms(std::vector<Term>& out, int qi, int j, int g, double lam) {
  detail::push_term(out, 1.0, "project", qi, j - 1, {qi, {j - 1, g}, {j - 1, g}});
  detail::push_term(out, 1.0 / (lam * lam), "project", qi, j - 1, {qi, {j, g}, {j, g}});
  detail::push_term(out, -1.0 / lam, "project", qi, j - 1, {qi, {j - 1, g}, {j, g}});
  detail::push_term(out, -1.0 / lam, "project", qi, j - 1, {qi, {j, g}, {j - 1, g}});
}

// Eq. (4) with h_beta(U) substituted for the controlled gate:
//   n_{a,ja-1} n_{b,jb}  +  h_a(I) n_{b,jb-1}  +  n_{a,ja,0} h_b(I)  +  n_{a,ja,1} h_b(U)
inline void coupling_terms(std::vector<Term>& out, int aqi, int ja, int bqi, int jb,
                           const GateMatrix& U, int sq, int so) {
  const char* src = "coupling";
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      detail::push_term(out, 1.0, src, sq, so, {aqi, {ja - 1, s}, {ja - 1, s}},
                        TermLeg{bqi, {jb, t}, {jb, t}});
  std::vector<Term> ha;
  unitary_terms(ha, aqi, ja, gate("I"), src, sq, so);
  for (const Term& t : ha)
    for (int d = 0; d < 2; ++d)
      detail::push_term(out, t.value, src, sq, so, t.legs[0], TermLeg{bqi, {jb - 1, d}, {jb - 1, d}});
  for (int ad = 0; ad < 2; ++ad) {
    std::vector<Term> hb;
    unitary_terms(hb, bqi, jb, ad == 0 ? gate("I") : U, src, sq, so);
    for (const Term& t : hb)
      detail::push_term(out, t.value, src, sq, so, t.legs[0], TermLeg{aqi, {ja, ad}, {ja, ad}});
  }
}

// E (I + a.sigma) on row 0
inline void boundary_terms(std::vector<Term>& out, int qi, const BoundaryCondition& b) {
  const double ax = b.a[0], ay = b.a[1], az = b.a[2];
  const Complex M[2][2] = {{Complex{1.0 + az, 0.0}, Complex{ax, -ay}},
                           {Complex{ax, ay}, Complex{1.0 - az, 0.0}}};
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      detail::push_term(out, b.E * M[s][t], "boundary", qi, -1, {qi, {0, t}, {0, s}});
}

inline std::vector<Term> all_terms(const CircuitSpec& spec) {
  std::vector<Term> out;
  for (int qi = 0; qi < static_cast<int>(spec.qubits.size()); ++qi) {
    const QubitSpec& q = spec.qubits[static_cast<std::size_t>(qi)];
    boundary_terms(out, qi, q.boundary);
    for (int oi = 0; oi < static_cast<int>(q.ops.size()); ++oi) {
      const RowOp& op = q.ops[static_cast<std::size_t>(oi)];
      const int j = oi + 1;
      switch (op.kind) {
        case OpKind::Unitary:
          unitary_terms(out, qi, j, op.g, "unitary", qi, oi);
          break;
        case OpKind::Boost:
          boost_terms(out, qi, j, op.lambda);
          break;
        case OpKind::Project:
          project_terms(out, qi, j, op.dot, op.lambda);
          break;
        case OpKind::CoupledTarget: {
          const int a = spec.index_of(op.partner);
          if (a < 0) throw std::invalid_argument("all_terms: dangling coupling");
          coupling_terms(out, a, op.partner_row, qi, j, op.g, qi, oi);
          break;
        }
        case OpKind::CoupledControl:
          break;  // emitted from the target side, which holds the gate
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSR assembly

struct SparseHermitian {
  std::int64_t dim = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<Complex> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col.size()); }

  double max_imag() const {
    double m = 0.0;
    for (const auto& v : val) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  Complex at(std::int64_t i, std::int64_t j) const {
    const auto b = col.begin() + row_ptr[static_cast<std::size_t>(i)];
    const auto e = col.begin() + row_ptr[static_cast<std::size_t>(i) + 1];
    auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
    if (it == e || *it != static_cast<std::int32_t>(j)) return {};
    return val[static_cast<std::size_t>(it - col.begin())];
  }

  double hermiticity_residual() const {
    double m = 0.0;
    for (std::int64_t i = 0; i < dim; ++i)
      for (std::int64_t p = row_ptr[static_cast<std::size_t>(i)];
           p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
        m = std::max(m, std::abs(val[static_cast<std::size_t>(p)] -
                                 std::conj(at(col[static_cast<std::size_t>(p)], i))));
    return m;
  }

  void write_coordinate(std::ostream& os) const {
    for (std::int64_t i = 0; i < dim; ++i)
      for (std::int64_t p = row_ptr[static_cast<std::size_t>(i)];
           p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
        const Complex& v = val[static_cast<std::size_t>(p)];
        // + 0.0 folds IEEE negative zeros from conjugated terms into plain 0
        os << strf("%lld %d %.17g %.17g\n", static_cast<long long>(i),
                   col[static_cast<std::size_t>(p)], v.real() + 0.0, v.imag() + 0.0);
      }
  }
};

namespace detail {

struct Contribution {
  std::int64_t col_delta = 0;
  Complex v{};
};

// Per-row gather tables: a term contributes to row i when i's digits match the
// term's to-side legs; the column is i + sum((from - to) * stride).
struct GatherTables {
  std::vector<std::vector<std::vector<Contribution>>> one;  // [qubit][to_local]
  struct PairTable {
    int qa = 0, qb = 0;  // qa < qb
    std::vector<std::vector<Contribution>> cell;  // [la * radix_b + lb]
  };
  std::vector<PairTable> two;
};

inline GatherTables build_tables(const std::vector<Term>& terms, const BasisMap& basis) {
  GatherTables g;
  const int nq = basis.n_qubits();
  g.one.resize(static_cast<std::size_t>(nq));
  for (int q = 0; q < nq; ++q)
    g.one[static_cast<std::size_t>(q)].resize(static_cast<std::size_t>(basis.radix[static_cast<std::size_t>(q)]));
  std::map<std::pair<int, int>, std::size_t> pair_index;

  for (const Term& t : terms) {
    if (t.n_legs == 1) {
      const TermLeg& l = t.legs[0];
      const int lf = basis.local_index(l.qubit, l.from.row, l.from.dot);
      const int lt = basis.local_index(l.qubit, l.to.row, l.to.dot);
      const std::int64_t delta = (lf - lt) * basis.stride[static_cast<std::size_t>(l.qubit)];
      g.one[static_cast<std::size_t>(l.qubit)][static_cast<std::size_t>(lt)].push_back({delta, t.value});
    } else {
      TermLeg a = t.legs[0], b = t.legs[1];
      if (a.qubit == b.qubit) throw std::logic_error("assemble: two legs on one qubit");
      if (a.qubit > b.qubit) std::swap(a, b);
      const auto key = std::make_pair(a.qubit, b.qubit);
      auto it = pair_index.find(key);
      if (it == pair_index.end()) {
        it = pair_index.emplace(key, g.two.size()).first;
        GatherTables::PairTable pt;
        pt.qa = a.qubit;
        pt.qb = b.qubit;
        pt.cell.resize(static_cast<std::size_t>(basis.radix[static_cast<std::size_t>(a.qubit)]) *
                       static_cast<std::size_t>(basis.radix[static_cast<std::size_t>(b.qubit)]));
        g.two.push_back(std::move(pt));
      }
      auto& pt = g.two[it->second];
      const int laf = basis.local_index(a.qubit, a.from.row, a.from.dot);
      const int lat = basis.local_index(a.qubit, a.to.row, a.to.dot);
      const int lbf = basis.local_index(b.qubit, b.from.row, b.from.dot);
      const int lbt = basis.local_index(b.qubit, b.to.row, b.to.dot);
      const std::int64_t delta = (laf - lat) * basis.stride[static_cast<std::size_t>(a.qubit)] +
                                 (lbf - lbt) * basis.stride[static_cast<std::size_t>(b.qubit)];
      const std::size_t cell =
          static_cast<std::size_t>(lat) * static_cast<std::size_t>(basis.radix[static_cast<std::size_t>(b.qubit)]) +
          static_cast<std::size_t>(lbt);
      pt.cell[cell].push_back({delta, t.value});
    }
  }
  return g;
}

template <class F>
inline void parallel_blocks(std::int64_t n, int workers, F&& body) {
  if (workers <= 1 || n < 4096) {
    body(0, static_cast<std::int64_t>(0), n);
    return;
  }
  const int W = workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(W));
  for (int w = 0; w < W; ++w) {
    const std::int64_t lo = n * w / W;
    const std::int64_t hi = n * (w + 1) / W;
    pool.emplace_back([&body, w, lo, hi] { body(w, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline SparseHermitian assemble_hamiltonian(const CircuitSpec& spec, const BasisMap& basis,
                                            int workers = 0) {
  if (basis.dimension > std::numeric_limits<std::int32_t>::max())
    throw std::overflow_error("assemble: dimension exceeds int32 column index range");
  if (workers <= 0) workers = default_workers();
  const auto terms = all_terms(spec);
  const auto tables = detail::build_tables(terms, basis);
  const std::int64_t dim = basis.dimension;
  const int nq = basis.n_qubits();

  SparseHermitian H;
  H.dim = dim;
  H.row_ptr.assign(static_cast<std::size_t>(dim) + 1, 0);

  struct Block {
    std::vector<std::int32_t> col;
    std::vector<Complex> val;
    std::int64_t lo = 0, hi = 0;
  };
  const int W = static_cast<int>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(workers, std::max<std::int64_t>(1, dim / 4096))));
  std::vector<Block> blocks(static_cast<std::size_t>(W));

  detail::parallel_blocks(dim, W, [&](int w, std::int64_t lo, std::int64_t hi) {
    Block& blk = blocks[static_cast<std::size_t>(w)];
    blk.lo = lo;
    blk.hi = hi;
    std::vector<int> dig(static_cast<std::size_t>(nq));
    for (int q = 0; q < nq; ++q) dig[static_cast<std::size_t>(q)] = basis.digit(lo, q);
    std::vector<std::pair<std::int64_t, Complex>> row;
    row.reserve(64);
    for (std::int64_t i = lo; i < hi; ++i) {
      row.clear();
      for (int q = 0; q < nq; ++q)
        for (const auto& c :
             tables.one[static_cast<std::size_t>(q)][static_cast<std::size_t>(dig[static_cast<std::size_t>(q)])])
          row.emplace_back(i + c.col_delta, c.v);
      for (const auto& pt : tables.two) {
        const std::size_t cell =
            static_cast<std::size_t>(dig[static_cast<std::size_t>(pt.qa)]) *
                static_cast<std::size_t>(basis.radix[static_cast<std::size_t>(pt.qb)]) +
            static_cast<std::size_t>(dig[static_cast<std::size_t>(pt.qb)]);
        for (const auto& c : pt.cell[cell]) row.emplace_back(i + c.col_delta, c.v);
      }
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t k = 0; k < row.size();) {
        Complex acc = row[k].second;
        std::size_t k2 = k + 1;
        while (k2 < row.size() && row[k2].first == row[k].first) acc += row[k2++].second;
        if (acc != Complex{}) {
          blk.col.push_back(static_cast<std::int32_t>(row[k].first));
          blk.val.push_back(acc);
        }
        k = k2;
      }
      H.row_ptr[static_cast<std::size_t>(i) + 1] =
          static_cast<std::int64_t>(blk.col.size());  // block-local for now
      // odometer step
      for (int q = 0; q < nq; ++q) {
        if (++dig[static_cast<std::size_t>(q)] < basis.radix[static_cast<std::size_t>(q)]) break;
        dig[static_cast<std::size_t>(q)] = 0;
      }
    }
  });

  std::int64_t total = 0;
  for (const auto& blk : blocks) total += static_cast<std::int64_t>(blk.col.size());
  H.col.resize(static_cast<std::size_t>(total));
  H.val.resize(static_cast<std::size_t>(total));
  std::int64_t base = 0;
  for (auto& blk : blocks) {
    std::copy(blk.col.begin(), blk.col.end(), H.col.begin() + base);
    std::copy(blk.val.begin(), blk.val.end(), H.val.begin() + base);
    for (std::int64_t i = blk.lo; i < blk.hi; ++i) H.row_ptr[static_cast<std::size_t>(i) + 1] += base;
    base += static_cast<std::int64_t>(blk.col.size());
    blk.col.clear();
    blk.col.shrink_to_fit();
    blk.val.clear();
    blk.val.shrink_to_fit();
  }
  return H;
}

// y = H x ; deterministic for any worker count (rows are independent)
inline void matvec(const SparseHermitian& H, const Complex* x, Complex* y, int workers = 0) {
  if (workers <= 0) workers = default_workers();
  detail::parallel_blocks(H.dim, workers, [&](int, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      Complex acc{};
      for (std::int64_t p = H.row_ptr[static_cast<std::size_t>(i)];
           p < H.row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
        acc += H.val[static_cast<std::size_t>(p)] * x[H.col[static_cast<std::size_t>(p)]];
      y[i] = acc;
    }
  });
}

// Real-symmetric view for circuits whose assembled matrix is purely real
// (boost/project/CNOT/Hadamard circuits): same sparsity, double values.
struct SparseReal {
  std::int64_t dim = 0;
  const std::vector<std::int64_t>* row_ptr = nullptr;
  const std::vector<std::int32_t>* col = nullptr;
  std::vector<double> val;

  static std::optional<SparseReal> from(const SparseHermitian& H) {
    if (H.max_imag() != 0.0) return std::nullopt;
    SparseReal R;
    R.dim = H.dim;
    R.row_ptr = &H.row_ptr;
    R.col = &H.col;
    R.val.resize(H.val.size());
    for (std::size_t i = 0; i < H.val.size(); ++i) R.val[i] = H.val[i].real();
    return R;
  }
};

inline void matvec(const SparseReal& H, const double* x, double* y, int workers = 0) {
  if (workers <= 0) workers = default_workers();
  detail::parallel_blocks(H.dim, workers, [&](int, std::int64_t lo, std::int64_t hi) {
    const auto& rp = *H.row_ptr;
    const auto& cl = *H.col;
    for (std::int64_t i = lo; i < hi; ++i) {
      double acc = 0.0;
      for (std::int64_t p = rp[static_cast<std::size_t>(i)]; p < rp[static_cast<std::size_t>(i) + 1]; ++p)
        acc += H.val[static_cast<std::size_t>(p)] * x[cl[static_cast<std::size_t>(p)]];
      y[i] = acc;
    }
  });
}

// Apply a subset of terms directly (slow path for frustration-freeness tests).
inline void apply_terms(const std::vector<Term>& terms, const BasisMap& basis, const Complex* x,
                        Complex* y) {
  std::fill(y, y + basis.dimension, Complex{});
  for (const Term& t : terms) {
    std::array<std::int64_t, 2> from_l{}, to_l{}, strd{};
    std::array<int, 2> qs{};
    for (int l = 0; l < t.n_legs; ++l) {
      const TermLeg& leg = t.legs[static_cast<std::size_t>(l)];
      qs[static_cast<std::size_t>(l)] = leg.qubit;
      from_l[static_cast<std::size_t>(l)] = basis.local_index(leg.qubit, leg.from.row, leg.from.dot);
      to_l[static_cast<std::size_t>(l)] = basis.local_index(leg.qubit, leg.to.row, leg.to.dot);
      strd[static_cast<std::size_t>(l)] = basis.stride[static_cast<std::size_t>(leg.qubit)];
    }
    for (std::int64_t i = 0; i < basis.dimension; ++i) {
      bool match = true;
      std::int64_t j = i;
      for (int l = 0; l < t.n_legs; ++l) {
        if (basis.digit(i, qs[static_cast<std::size_t>(l)]) != from_l[static_cast<std::size_t>(l)]) {
          match = false;
          break;
        }
        j += (to_l[static_cast<std::size_t>(l)] - from_l[static_cast<std::size_t>(l)]) *
             strd[static_cast<std::size_t>(l)];
      }
      if (match) y[j] += t.value * x[i];
    }
  }
}

}  // namespace gsqc
