// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace entroscope {

/// Input failed a precondition or type invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace tol {
// Base eigendecomposition tolerance; everything downstream derives from it.
inline constexpr double eigh_rel = 1e-10;
// Hermiticity check, relative to the largest entry magnitude.
inline constexpr double hermitian_rel = 1e-12;
// Eigenvalues of a positive operator may undershoot zero by this much
// (relative to the trace) before validation fails.
inline constexpr double psd_rel = 1e-10;
// Relative weight of A outside supp(B) that flips H(A||B) to +infinity.
inline constexpr double support_rel = 1e-9;
// Ensemble average reconstruction (Frobenius).
inline constexpr double ensemble_abs = 1e-9;
// Ensemble blocks below this trace are dropped and weights renormalized.
inline constexpr double drop_trace = 1e-12;
}  // namespace tol

inline double infinity() { return std::numeric_limits<double>::infinity(); }

/// SplitMix64: the single named counter-based generator used everywhere.
/// The state advances by a fixed increment and each output is a hash of the
/// counter, so streams can be derived by seeding alone; there is no global
/// state anywhere in the library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (pair cached). Avoids the
  /// platform-dependent std::normal_distribution.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex Gaussian with independent N(0,1) real and imaginary parts.
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  /// Derives an independent stream from (seed, tags...). Used so that e.g.
  /// restart i of an optimizer run draws from a stream that depends only on
  /// (seed, i), never on which thread executes it.
  static SplitMix64 derive(std::uint64_t seed, std::uint64_t tag_a,
                           std::uint64_t tag_b = 0, std::uint64_t tag_c = 0) {
    SplitMix64 g(seed);
    std::uint64_t s = g.next_u64();
    s ^= 0x2545f4914f6cdd1dULL * (tag_a + 1);
    SplitMix64 g2(s);
    s = g2.next_u64();
    s ^= 0x9e3779b97f4a7c15ULL * (tag_b + 1);
    SplitMix64 g3(s);
    s = g3.next_u64();
    s ^= 0xda942042e4dd58b5ULL * (tag_c + 1);
    return SplitMix64(s);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Worker count from ENTROSCOPE_THREADS (0 or unset = auto).
inline int thread_budget() {
  const char* env = std::getenv("ENTROSCOPE_THREADS");
  long n = 0;
  if (env != nullptr) {
    char* end = nullptr;
    n = std::strtol(env, &end, 10);
    if (end == env || n < 0) n = 0;
  }
  if (n == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<long>(hw);
  }
  return static_cast<int>(n);
}

/// Runs fn(i) for i in [0, count). Work is split across at most
/// thread_budget() threads; fn must write only to its own slot so results
/// are identical regardless of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace entroscope
