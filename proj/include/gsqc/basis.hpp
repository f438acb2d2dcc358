#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsqc/circuit.hpp"

namespace gsqc {

struct Site {
  int row = 0;
  int dot = 0;
  bool operator==(const Site&) const = default;
};

struct PrunedSite {
  std::string qubit;
  int row = 0;
  int dot = 0;
};

// One electron per qubit, each on one dot of its column: the configuration
// space is the mixed-radix product of per-qubit site lists, qubit 0 the
// fastest-varying digit.
struct BasisMap {
  std::vector<std::vector<Site>> sites;       // per qubit, (row, dot) lex order
  std::vector<std::vector<int>> site_lookup;  // per qubit: row*2+dot -> local index or -1
  std::vector<int> radix;
  std::vector<std::int64_t> stride;
  std::int64_t dimension = 0;
  std::vector<PrunedSite> pruned;

  int n_qubits() const { return static_cast<int>(radix.size()); }

  int local_index(int q, int row, int dot) const {
    const auto& lut = site_lookup[static_cast<std::size_t>(q)];
    const int key = row * 2 + dot;
    const int loc = (key >= 0 && key < static_cast<int>(lut.size())) ? lut[static_cast<std::size_t>(key)] : -1;
    if (loc < 0)
      throw std::out_of_range("basis: site (row " + std::to_string(row) + ", dot " +
                              std::to_string(dot) + ") not present on qubit " + std::to_string(q));
    return loc;
  }

  std::int64_t index_of(const std::vector<int>& locals) const {
    if (static_cast<int>(locals.size()) != n_qubits())
      throw std::out_of_range("basis: config length != qubit count");
    std::int64_t idx = 0;
    for (int q = 0; q < n_qubits(); ++q) {
      const int l = locals[static_cast<std::size_t>(q)];
      if (l < 0 || l >= radix[static_cast<std::size_t>(q)])
        throw std::out_of_range("basis: local site index out of range");
      idx += stride[static_cast<std::size_t>(q)] * l;
    }
    return idx;
  }

  int digit(std::int64_t ordinal, int q) const {
    return static_cast<int>((ordinal / stride[static_cast<std::size_t>(q)]) %
                            radix[static_cast<std::size_t>(q)]);
  }

  std::vector<int> decode(std::int64_t ordinal) const {
    if (ordinal < 0 || ordinal >= dimension) throw std::out_of_range("basis: ordinal out of range");
    std::vector<int> locals(static_cast<std::size_t>(n_qubits()));
    for (int q = 0; q < n_qubits(); ++q) locals[static_cast<std::size_t>(q)] = digit(ordinal, q);
    return locals;
  }

  Site site_of(std::int64_t ordinal, int q) const {
    return sites[static_cast<std::size_t>(q)][static_cast<std::size_t>(digit(ordinal, q))];
  }
};

namespace detail {

// Which (row, dot) sites of qubit q carry at least one Hamiltonian entry.
// Everything except Project touches both dots of both rows it connects; the
// boundary touches the dots its 2x2 matrix addresses.
inline std::vector<bool> touched_sites(const CircuitSpec& spec, int qi) {
  const QubitSpec& q = spec.qubits[static_cast<std::size_t>(qi)];
  std::vector<bool> t(static_cast<std::size_t>(q.rows() * 2), false);
  auto mark_row = [&t](int row) {
    t[static_cast<std::size_t>(row * 2)] = true;
    t[static_cast<std::size_t>(row * 2 + 1)] = true;
  };
  // boundary E(I + a.sigma) on row 0
  const double ax = q.boundary.a[0], ay = q.boundary.a[1], az = q.boundary.a[2];
  const bool offdiag = (ax != 0.0 || ay != 0.0);
  if (offdiag || 1.0 + az != 0.0) t[0] = true;
  if (offdiag || 1.0 - az != 0.0) t[1] = true;
  for (std::size_t oi = 0; oi < q.ops.size(); ++oi) {
    const RowOp& op = q.ops[oi];
    const int j = static_cast<int>(oi) + 1;
    if (op.kind == OpKind::Project) {
      t[static_cast<std::size_t>((j - 1) * 2 + op.dot)] = true;
      t[static_cast<std::size_t>(j * 2 + op.dot)] = true;
    } else {
      mark_row(j - 1);  // coupling terms include n and h pieces on both rows
      mark_row(j);
    }
  }
  return t;
}

}  // namespace detail

inline BasisMap build_basis(const CircuitSpec& spec, bool prune = true) {
  BasisMap b;
  const int nq = static_cast<int>(spec.qubits.size());
  b.sites.resize(static_cast<std::size_t>(nq));
  b.site_lookup.resize(static_cast<std::size_t>(nq));
  b.radix.resize(static_cast<std::size_t>(nq));
  b.stride.resize(static_cast<std::size_t>(nq));
  std::int64_t dim = 1;
  for (int qi = 0; qi < nq; ++qi) {
    const QubitSpec& q = spec.qubits[static_cast<std::size_t>(qi)];
    std::vector<bool> keep(static_cast<std::size_t>(q.rows() * 2), true);
    if (prune) {
      keep = detail::touched_sites(spec, qi);
      for (int r = 0; r < q.rows(); ++r)
        for (int d = 0; d < 2; ++d)
          if (!keep[static_cast<std::size_t>(r * 2 + d)]) b.pruned.push_back({q.id, r, d});
    }
    auto& sl = b.sites[static_cast<std::size_t>(qi)];
    auto& lut = b.site_lookup[static_cast<std::size_t>(qi)];
    lut.assign(static_cast<std::size_t>(q.rows() * 2), -1);
    for (int r = 0; r < q.rows(); ++r)
      for (int d = 0; d < 2; ++d)
        if (keep[static_cast<std::size_t>(r * 2 + d)]) {
          lut[static_cast<std::size_t>(r * 2 + d)] = static_cast<int>(sl.size());
          sl.push_back({r, d});
        }
    b.radix[static_cast<std::size_t>(qi)] = static_cast<int>(sl.size());
    b.stride[static_cast<std::size_t>(qi)] = dim;
    if (sl.empty()) throw std::runtime_error("basis: qubit '" + q.id + "' has no sites");
    if (dim > std::numeric_limits<std::int64_t>::max() / static_cast<std::int64_t>(sl.size()))
      throw std::overflow_error("basis: dimension overflows int64");
    dim *= static_cast<std::int64_t>(sl.size());
  }
  b.dimension = dim;
  return b;
}

}  // namespace gsqc
