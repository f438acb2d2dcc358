#pragma once

#include <algorithm>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

namespace gsqc {

using Complex = std::complex<double>;

// Worker count: GSQC_WORKERS env wins, else available parallelism (capped:
// assembly and matvec are memory-bound and gain nothing past a few threads).
inline int default_workers() {
  if (const char* e = std::getenv("GSQC_WORKERS")) {
    const int n = std::atoi(e);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

// printf-style formatting into std::string (std::format is not available on
// the baseline toolchain).
inline std::string strf(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
inline std::string strf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  char buf[512];
  int n = std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  if (n < 0) return {};
  if (static_cast<std::size_t>(n) < sizeof buf) return std::string(buf, n);
  std::string s(static_cast<std::size_t>(n), '\0');
  va_start(ap, fmt);
  std::vsnprintf(s.data(), static_cast<std::size_t>(n) + 1, fmt, ap);
  va_end(ap);
  return s;
}

// FNV-1a accumulator; used for provenance hashes in reports.  Stable across
// runs and platforms for the same logical content.
struct Fnv1a {
  std::uint64_t h = 1469598103934665603ull;

  void bytes(const void* p, std::size_t n) {
    auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) { h ^= (v >> (8 * i)) & 0xff; h *= 1099511628211ull; }
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) {
    std::uint64_t u;
    static_assert(sizeof u == sizeof v);
    __builtin_memcpy(&u, &v, sizeof u);
    u64(u);
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
};

}  // namespace gsqc
