#include "spdmean/testkit.hpp"

#include <cmath>
#include <numeric>

#include "spdmean/errors.hpp"

namespace spdmean::testkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::split(std::uint64_t substream) const {
  return Rng(seed_, splitmix64(stream_ ^ splitmix64(substream + 0x632be59bd9b4e019ULL)));
}

std::uint64_t Rng::next_u64() {
  return splitmix64(splitmix64(seed_) ^ splitmix64(stream_) ^ splitmix64(counter_++));
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

// Orthogonal factor of a Gaussian matrix by modified Gram-Schmidt, with the
// sign convention that makes R's diagonal positive.
Matrix random_orthogonal(int dim, Rng& rng) {
  for (;;) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = rng.gaussian();
    bool ok = true;
    for (int j = 0; j < dim && ok; ++j) {
      for (int k = 0; k < j; ++k) {
        double dot = 0.0;
        for (int i = 0; i < dim; ++i) dot += g(i, k) * g(i, j);
        for (int i = 0; i < dim; ++i) g(i, j) -= dot * g(i, k);
      }
      double norm = 0.0;
      for (int i = 0; i < dim; ++i) norm += g(i, j) * g(i, j);
      norm = std::sqrt(norm);
      if (norm < 1e-8) {
        ok = false;  // numerically dependent column; redraw
        break;
      }
      for (int i = 0; i < dim; ++i) g(i, j) /= norm;
    }
    if (ok) return g;
  }
}

}  // namespace

SpdMatrix random_spd(const SpdGenSpec& spec) {
  Rng rng(spec.seed, 0x5bd1e995u);
  return random_spd(spec.dim, spec.cond_max, spec.scale, rng);
}

SpdMatrix random_spd(int dim, double cond_max, double scale, Rng& rng) {
  if (dim < 1) throw ParameterOutOfRange("random_spd: dim must be >= 1");
  if (!(cond_max >= 1.0)) throw ParameterOutOfRange("random_spd: cond_max must be >= 1");
  if (!(scale > 0.0)) throw ParameterOutOfRange("random_spd: scale must be positive");
  std::vector<double> eigs(dim);
  for (double& l : eigs) l = rng.uniform(scale / cond_max, scale);
  const Matrix q = random_orthogonal(dim, rng);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += q(i, k) * eigs[k] * q(j, k);
      m(i, j) = s;
      m(j, i) = s;
    }
  return SpdMatrix(m);
}

WeightVector random_weights(int n, std::uint64_t seed) {
  Rng rng(seed, 0xc2b2ae35u);
  return random_weights(n, rng);
}

WeightVector random_weights(int n, Rng& rng) {
  if (n < 1) throw ParameterOutOfRange("random_weights: n must be >= 1");
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    x = -std::log(u);
    sum += x;
  }
  // Floor sits slightly above 1e-6 so entries stay above 1e-6 even after
  // the constructor renormalizes.
  for (double& x : w) x = std::max(x / sum, 1.1e-6);
  return WeightVector(std::move(w));
}

Matrix random_symmetric(int dim, Rng& rng, bool norm_one) {
  Matrix x(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = rng.gaussian();
      x(i, j) = v;
      x(j, i) = v;
    }
  if (norm_one) {
    const double n = x.frobenius_norm();
    if (n > 0.0) x *= 1.0 / n;
  }
  return x;
}

Matrix random_invertible(int dim, Rng& rng) {
  for (;;) {
    Matrix s(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) s(i, j) = rng.gaussian();
    double hadamard = 1.0;
    for (int i = 0; i < dim; ++i) {
      double r = 0.0;
      for (int j = 0; j < dim; ++j) r += s(i, j) * s(i, j);
      hadamard *= std::sqrt(r);
    }
    if (std::abs(determinant(s)) > 1e-6 * hadamard) return s;
  }
}

PositiveMapSpec PositiveMapSpec::compression(Matrix v) {
  PositiveMapSpec spec;
  spec.kind = Kind::Compression;
  spec.compression_v = std::move(v);
  return spec;
}

PositiveMapSpec PositiveMapSpec::pinching(std::vector<std::vector<int>> blocks) {
  PositiveMapSpec spec;
  spec.kind = Kind::Pinching;
  spec.pinch_blocks = std::move(blocks);
  return spec;
}

PositiveMapSpec PositiveMapSpec::trace_scaling(double c) {
  if (!(c > 0.0)) throw ParameterOutOfRange("PositiveMapSpec: trace scale must be positive");
  PositiveMapSpec spec;
  spec.kind = Kind::TraceScale;
  spec.trace_scale = c;
  return spec;
}

SpdMatrix apply_positive_map(const PositiveMapSpec& spec, const SpdMatrix& a) {
  switch (spec.kind) {
    case PositiveMapSpec::Kind::Compression: {
      const Matrix& v = spec.compression_v;
      if (v.rows() != a.dim()) throw DimensionMismatch("apply_positive_map: compression");
      if (v.cols() < 1 || v.cols() > v.rows())
        throw RankDeficient("apply_positive_map: V must be dim×k with 1 <= k <= dim");
      // Full column rank iff VᵀV is positive definite.
      if (!cholesky((v.transposed() * v).symmetrized()))
        throw RankDeficient("apply_positive_map: V is rank deficient");
      return SpdMatrix(v.transposed() * a.matrix() * v);
    }
    case PositiveMapSpec::Kind::Pinching: {
      std::vector<int> seen(a.dim(), 0);
      for (const auto& block : spec.pinch_blocks)
        for (int i : block) {
          if (i < 0 || i >= a.dim() || seen[i]++)
            throw DimensionMismatch("apply_positive_map: blocks must partition the index set");
        }
      for (int count : seen)
        if (count != 1)
          throw DimensionMismatch("apply_positive_map: blocks must partition the index set");
      Matrix out(a.dim(), a.dim());
      for (const auto& block : spec.pinch_blocks)
        for (int i : block)
          for (int j : block) out(i, j) = a(i, j);
      return SpdMatrix(out);
    }
    case PositiveMapSpec::Kind::TraceScale: {
      return SpdMatrix(Matrix::identity(a.dim()) * (spec.trace_scale * a.trace() / a.dim()));
    }
  }
  throw ParameterOutOfRange("apply_positive_map: unknown kind");
}

PositiveMapSpec random_positive_map(int dim, Rng& rng) {
  switch (rng.uniform_int(0, 2)) {
    case 0: {
      const int k = rng.uniform_int(1, dim);
      Matrix v(dim, k);
      for (;;) {
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < k; ++j) v(i, j) = rng.gaussian();
        if (cholesky((v.transposed() * v).symmetrized())) break;
      }
      return PositiveMapSpec::compression(std::move(v));
    }
    case 1: {
      // Random partition into contiguous blocks.
      std::vector<std::vector<int>> blocks;
      int start = 0;
      while (start < dim) {
        const int len = rng.uniform_int(1, dim - start);
        std::vector<int> block(len);
        std::iota(block.begin(), block.end(), start);
        blocks.push_back(std::move(block));
        start += len;
      }
      return PositiveMapSpec::pinching(std::move(blocks));
    }
    default:
      return PositiveMapSpec::trace_scaling(rng.uniform(0.5, 2.0));
  }
}

}  // namespace spdmean::testkit
