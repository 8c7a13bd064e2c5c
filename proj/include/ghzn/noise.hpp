// Contrast-reducing channels and reproducible Poisson counting noise.

#pragma once

#include "ghzn/qcore.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace ghzn {

/// Fringe visibility (contrast), 0 <= V <= 1.
class VisibilityModel {
 public:
  static constexpr double kDefault = 0.6395;

  VisibilityModel() = default;
  explicit VisibilityModel(double v) : v_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("visibility must lie in [0, 1]");
    }
  }

  double value() const { return v_; }

 private:
  double v_ = kDefault;
};

/// Dephasing of the three-fold coherences that carry the GHZ correlations.
///
/// Applied as the Pauli channel rho -> (1+V)/2 rho + (1-V)/2 Z3 rho Z3 with
/// Z3 = Z (x) Z (x) Z. Every off-diagonal entry between basis states that
/// differ in an odd number of labels is scaled by V, in particular the
/// |000><111| block; the rest is untouched. Because each xy-plane triple
/// product connects only states differing in all three labels, every triple
/// correlation (and hence the Mermin value) scales by exactly V.
inline DensityMatrix ghz_dephase(const DensityMatrix& rho, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("ghz_dephase: visibility must lie in [0, 1]");
  }
  Mat8 out = rho.matrix();
  for (int r = 0; r < kDim; ++r) {
    for (int c = 0; c < kDim; ++c) {
      if (std::popcount(static_cast<unsigned>(r ^ c)) % 2 == 1) out(r, c) *= v;
    }
  }
  return DensityMatrix(out);
}

inline DensityMatrix ghz_dephase(const DensityMatrix& rho, const VisibilityModel& v) {
  return ghz_dephase(rho, v.value());
}

/// (1 - lambda) rho + lambda I/8.
inline DensityMatrix depolarize(const DensityMatrix& rho, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("depolarize: lambda must lie in [0, 1]");
  }
  Mat8 out = (1.0 - lambda) * rho.matrix();
  out.diagonal().array() += lambda / 8.0;
  return DensityMatrix(out);
}

/// Seedable random stream. The identity of a stream is (seed, stream_id);
/// the generator is a 64-bit Mersenne Twister initialised through
/// std::seed_seq over the four 32-bit halves of seed and stream_id.
/// Concurrent tasks must each own a stream with a distinct stream_id.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return draws_; }

  std::mt19937_64& engine() { return engine_; }

  /// Poisson variate with the given mean.
  std::uint64_t poisson(double mean) {
    if (!std::isfinite(mean) || mean < 0.0) {
      throw std::invalid_argument("poisson: mean must be finite and non-negative");
    }
    ++draws_;
    if (mean == 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return static_cast<std::uint64_t>(dist(engine_));
  }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

inline std::uint64_t poisson_counts(double expected, RngStream& rng) { return rng.poisson(expected); }

}  // namespace ghzn
