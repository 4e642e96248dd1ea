// Deterministic instance generation for the property suites: seeded SPD
// matrices with controlled spectra, weight vectors, and positive linear
// maps.
//
// Randomness is counter-based so every draw is a pure function of
// (seed, stream, counter): raw 64-bit words come from SplitMix64 applied to
// a mix of the three, uniforms take the top 53 bits, and Gaussians use the
// Box-Muller transform. Streams make the generator splittable: substreams
// never overlap and results do not depend on evaluation order.

#pragma once

#include <cstdint>
#include <vector>

#include "spdmean/two_means.hpp"

namespace spdmean::testkit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  /// Independent substream; draws from it are decoupled from this one.
  Rng split(std::uint64_t substream) const;

  std::uint64_t next_u64();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double gaussian();                       // standard normal
  int uniform_int(int lo, int hi);         // inclusive bounds

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Specification of a random SPD matrix: eigenvalues drawn from
/// [scale/cond_max, scale] and a basis from the QR factorization of a
/// seeded Gaussian matrix.
struct SpdGenSpec {
  int dim = 2;
  double cond_max = 1.0;  // eigenvalue-ratio cap, >= 1
  double scale = 1.0;     // largest admissible eigenvalue
  std::uint64_t seed = 0;
};

SpdMatrix random_spd(const SpdGenSpec& spec);

/// Convenience draw from an existing stream.
SpdMatrix random_spd(int dim, double cond_max, double scale, Rng& rng);

/// Strictly positive weights summing to 1 (normalized exponentials with a
/// 1e-6 floor).
WeightVector random_weights(int n, std::uint64_t seed);
WeightVector random_weights(int n, Rng& rng);

/// Random symmetric matrix with Gaussian entries, normalized to unit
/// Frobenius norm (or returned as-is when norm_one is false).
Matrix random_symmetric(int dim, Rng& rng, bool norm_one = true);

/// Random invertible matrix (Gaussian entries, redrawn while the
/// invertibility test fails).
Matrix random_invertible(int dim, Rng& rng);

/// Positive linear map: compression VᵀAV by a full-column-rank V, pinching
/// to a block partition, or trace-scaling A ↦ (c·tr A/dim)·I.
struct PositiveMapSpec {
  enum class Kind { Compression, Pinching, TraceScale };
  Kind kind = Kind::TraceScale;
  Matrix compression_v;                        // dim×k, full column rank
  std::vector<std::vector<int>> pinch_blocks;  // partition of {0,…,dim−1}
  double trace_scale = 1.0;                    // c > 0

  static PositiveMapSpec compression(Matrix v);
  static PositiveMapSpec pinching(std::vector<std::vector<int>> blocks);
  static PositiveMapSpec trace_scaling(double c);
};

SpdMatrix apply_positive_map(const PositiveMapSpec& spec, const SpdMatrix& a);

/// A randomly chosen positive map compatible with dimension `dim`.
PositiveMapSpec random_positive_map(int dim, Rng& rng);

}  // namespace spdmean::testkit
