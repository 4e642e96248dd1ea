#include "spdmean/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "spdmean/barycenter.hpp"
#include "spdmean/metrics.hpp"
#include "spdmean/problem_io.hpp"
#include "spdmean/solvers.hpp"
#include "spdmean/testkit.hpp"

namespace spdmean::verify {

using testkit::Rng;

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::min(n, 16));
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

// ---------------------------------------------------------------------------
// Instance generation

struct Ensemble {
  int dim_min = 1, dim_max = 8;
  int n_min = 1, n_max = 6;
  double cond_max = 1e4;  // per-matrix condition cap; draws are log-uniform
  double scale_min = 0.5, scale_max = 2.0;
};

SpdMatrix draw_spd(Rng& rng, int dim, double cond_max, double scale_min, double scale_max) {
  const double cond = std::exp(rng.uniform(0.0, std::log(std::max(cond_max, 1.0))));
  return testkit::random_spd(dim, cond, rng.uniform(scale_min, scale_max), rng);
}

SpdMatrix draw_spd(Rng& rng, const Ensemble& e, int dim) {
  return draw_spd(rng, dim, e.cond_max, e.scale_min, e.scale_max);
}

MatrixTuple draw_tuple(Rng& rng, const Ensemble& e) {
  const int dim = rng.uniform_int(e.dim_min, e.dim_max);
  const int n = rng.uniform_int(e.n_min, e.n_max);
  std::vector<SpdMatrix> mats;
  mats.reserve(n);
  for (int i = 0; i < n; ++i) mats.push_back(draw_spd(rng, e, dim));
  return MatrixTuple(std::move(mats), testkit::random_weights(n, rng));
}

// Gaussian invertible matrix redrawn until both it and its inverse are tame,
// so congruence round-trips stay well inside the checked tolerances.
Matrix draw_transform(Rng& rng, int dim) {
  for (;;) {
    Matrix s = testkit::random_invertible(dim, rng);
    const Matrix sinv = [&] {
      // Inverse via the SPD machinery: S⁻¹ = (SᵀS)⁻¹Sᵀ.
      const SpdMatrix gram(s.transposed() * s);
      return inverse_from_cholesky(gram.cholesky_factor()) * s.transposed();
    }();
    if (s.frobenius_norm() * sinv.frobenius_norm() <= 50.0 * dim) return s;
  }
}

double loewner_violation(const SpdMatrix& lo, const SpdMatrix& hi) {
  return std::max(0.0, -sym_eig(hi.matrix() - lo.matrix()).min_eigenvalue());
}

double rel_frobenius(const Matrix& a, const Matrix& b) {
  const double scale = std::max(1e-300, b.frobenius_norm());
  return (a - b).frobenius_norm() / scale;
}

// Scalar oracle for the defining equation of the mean: bisection on
// h(x) = [Σ wᵢ/((1−t)x + t aᵢ)]⁻¹ − x over the harmonic–arithmetic bracket.
double scalar_g_bisect(double t, const std::vector<double>& a, const std::vector<double>& w) {
  const auto f = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] / ((1.0 - t) * x + t * a[i]);
    return 1.0 / s;
  };
  double lo = 0.0, hi = 0.0;
  double hsum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    hi += w[i] * a[i];
    hsum += w[i] / a[i];
  }
  lo = 1.0 / hsum;
  lo *= 1.0 - 1e-12;
  hi *= 1.0 + 1e-12;
  for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Check framework

struct CheckDef {
  std::string name;
  std::string suite;
  int default_count;
  double threshold;
  // Computes the violation for one instance; may use note (shared).
  std::function<double(Rng&, std::string* note, std::mutex* note_mu)> instance;
};

CheckResult run_check(const CheckDef& def, const SuiteOptions& opts, std::uint64_t stream) {
  const int count = opts.count > 0 ? opts.count : def.default_count;
  CheckResult res;
  res.name = def.name;
  res.instances = count;
  res.threshold = def.threshold;
  std::vector<double> violations(count, 0.0);
  std::string note;
  std::mutex note_mu;
  try {
    parallel_for(count, [&](int i) {
      Rng rng = Rng(opts.seed, stream).split(static_cast<std::uint64_t>(i) + 1);
      violations[i] = def.instance(rng, &note, &note_mu);
    });
  } catch (const std::exception& e) {
    res.max_violation = std::numeric_limits<double>::infinity();
    res.pass = false;
    res.note = std::string("error: ") + e.what();
    return res;
  }
  res.max_violation = *std::max_element(violations.begin(), violations.end());
  res.pass = res.max_violation <= def.threshold;
  res.note = note;
  return res;
}

// Notes hold "key=count" tokens; kept sorted so the final report text does
// not depend on thread scheduling.
void add_note_count(std::string* note, std::mutex* mu, const char* key) {
  std::lock_guard<std::mutex> lock(*mu);
  std::map<std::string, long> counts;
  std::istringstream in(*note);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) counts[tok.substr(0, eq)] = std::stol(tok.substr(eq + 1));
  }
  ++counts[key];
  std::ostringstream out;
  for (const auto& [k, v] : counts) out << k << '=' << v << ' ';
  *note = out.str();
}

const std::vector<double> kTeeGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

// ---------------------------------------------------------------------------
// Registry

std::vector<CheckDef> build_registry() {
  std::vector<CheckDef> defs;
  auto add = [&](std::string name, std::string suite, int count, double thr,
                 std::function<double(Rng&, std::string*, std::mutex*)> fn) {
    defs.push_back({std::move(name), std::move(suite), count, thr, std::move(fn)});
  };

  // ---- Thompson metric lemmas -------------------------------------------
  const Ensemble metric_ens{.dim_min = 1, .dim_max = 8, .n_min = 1, .n_max = 1, .cond_max = 1e3};
  const Ensemble stein_ens{.dim_min = 1, .dim_max = 8, .n_min = 1, .n_max = 1, .cond_max = 1e2};

  add("thompson.invariance", "thompson", 200, 1e-9, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(metric_ens.dim_min, metric_ens.dim_max);
    const SpdMatrix a = draw_spd(rng, metric_ens, dim);
    const SpdMatrix b = draw_spd(rng, metric_ens, dim);
    const Matrix s = draw_transform(rng, dim);
    const double d = thompson(a, b);
    const double d_inv = thompson(mat_inv(a), mat_inv(b));
    const double d_cong = thompson(congruence(s, a), congruence(s, b));
    return std::max(std::abs(d - d_inv), std::abs(d - d_cong));
  });

  add("thompson.geodesic_segment", "thompson", 200, 1e-9, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(metric_ens.dim_min, metric_ens.dim_max);
    const SpdMatrix a = draw_spd(rng, metric_ens, dim);
    const SpdMatrix b = draw_spd(rng, metric_ens, dim);
    const double s = rng.uniform(), t = rng.uniform();
    const double lhs = thompson(geo_mean(a, b, s), geo_mean(a, b, t));
    return std::abs(lhs - std::abs(s - t) * thompson(a, b));
  });

  add("thompson.geodesic_convexity", "thompson", 200, 1e-10,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(metric_ens.dim_min, metric_ens.dim_max);
        const SpdMatrix a = draw_spd(rng, metric_ens, dim);
        const SpdMatrix b = draw_spd(rng, metric_ens, dim);
        const SpdMatrix c = draw_spd(rng, metric_ens, dim);
        const SpdMatrix d = draw_spd(rng, metric_ens, dim);
        const double t = rng.uniform();
        const double lhs = thompson(geo_mean(a, b, t), geo_mean(c, d, t));
        return std::max(0.0, lhs - ((1.0 - t) * thompson(a, c) + t * thompson(b, d)));
      });

  add("thompson.sum_nonexpansive", "thompson", 200, 1e-10,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(metric_ens.dim_min, metric_ens.dim_max);
        const int n = rng.uniform_int(1, 5);
        Matrix sa(dim, dim), sb(dim, dim);
        double dmax = 0.0;
        for (int i = 0; i < n; ++i) {
          const SpdMatrix a = draw_spd(rng, metric_ens, dim);
          const SpdMatrix b = draw_spd(rng, metric_ens, dim);
          sa += a.matrix();
          sb += b.matrix();
          dmax = std::max(dmax, thompson(a, b));
        }
        return std::max(0.0, thompson(SpdMatrix(sa), SpdMatrix(sb)) - dmax);
      });

  add("thompson.additive_contraction", "thompson", 200, 1e-10,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(metric_ens.dim_min, metric_ens.dim_max);
        const SpdMatrix a = draw_spd(rng, metric_ens, dim);
        const SpdMatrix x = draw_spd(rng, metric_ens, dim);
        const SpdMatrix y = draw_spd(rng, metric_ens, dim);
        const double alpha = std::max(spectral_norm(x), spectral_norm(y));
        const double beta = min_eigenvalue(a);
        const double lhs = thompson(SpdMatrix(a.matrix() + x.matrix()),
                                    SpdMatrix(a.matrix() + y.matrix()));
        return std::max(0.0, lhs - alpha / (alpha + beta) * thompson(x, y));
      });

  add("thompson.mixed_convexity", "thompson", 200, 1e-10,
      [=](Rng& rng, std::string*, std::mutex*) {
        // Both convexity bounds that follow from the geodesic lemmas via the
        // triangle inequality: the |s−t| correction pairs with d(C,D) under
        // s-weights and with d(A,B) under t-weights.
        const int dim = rng.uniform_int(metric_ens.dim_min, metric_ens.dim_max);
        const SpdMatrix a = draw_spd(rng, metric_ens, dim);
        const SpdMatrix b = draw_spd(rng, metric_ens, dim);
        const SpdMatrix c = draw_spd(rng, metric_ens, dim);
        const SpdMatrix d = draw_spd(rng, metric_ens, dim);
        const double s = rng.uniform(), t = rng.uniform();
        const double lhs = thompson(geo_mean(a, b, s), geo_mean(c, d, t));
        const double via_cd = (1.0 - s) * thompson(a, c) + s * thompson(b, d) +
                              std::abs(s - t) * thompson(c, d);
        const double via_ab = (1.0 - t) * thompson(a, c) + t * thompson(b, d) +
                              std::abs(s - t) * thompson(a, b);
        return std::max(0.0, std::max(lhs - via_cd, lhs - via_ab));
      });

  add("stein.triangle", "thompson", 1000, 1e-10, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(stein_ens.dim_min, stein_ens.dim_max);
    const SpdMatrix a = draw_spd(rng, stein_ens, dim);
    const SpdMatrix b = draw_spd(rng, stein_ens, dim);
    const SpdMatrix c = draw_spd(rng, stein_ens, dim);
    return std::max(0.0, stein_metric(a, c) - stein_metric(a, b) - stein_metric(b, c));
  });

  add("stein.geodesic_contraction", "thompson", 200, 1e-10,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(stein_ens.dim_min, stein_ens.dim_max);
        const SpdMatrix a = draw_spd(rng, stein_ens, dim);
        const SpdMatrix b = draw_spd(rng, stein_ens, dim);
        const SpdMatrix c = draw_spd(rng, stein_ens, dim);
        double worst = 0.0;
        for (double t : {0.25, 0.5, 0.75}) {
          const double lhs = stein_metric(geo_mean(a, b, t), geo_mean(a, c, t));
          worst = std::max(worst, lhs - std::sqrt(t) * stein_metric(b, c));
        }
        return std::max(0.0, worst);
      });

  add("stein.invariance", "thompson", 200, 1e-9, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(stein_ens.dim_min, stein_ens.dim_max);
    const SpdMatrix a = draw_spd(rng, stein_ens, dim);
    const SpdMatrix b = draw_spd(rng, stein_ens, dim);
    const Matrix s = draw_transform(rng, dim);
    const double d = stein_metric(a, b);
    return std::max(std::abs(d - stein_metric(congruence(s, a), congruence(s, b))),
                    std::abs(d - stein_metric(mat_inv(a), mat_inv(b))));
  });

  // ---- Foundations: spd core, testkit, two-variable means ----------------
  add("spd.log_exp_roundtrip", "properties", 500, 1e-8, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e6, 0.5, 2.0);
    return rel_frobenius(mat_exp(mat_log(a)).matrix(), a.matrix());
  });

  add("spd.power_identities", "properties", 200, 1e-9, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
    const double p = rng.uniform(-1.0, 1.0), q = rng.uniform(-1.0, 1.0);
    double worst = rel_frobenius(mat_pow(a, p + q).matrix(),
                                 (mat_pow(a, p).matrix() * mat_pow(a, q).matrix()).symmetrized());
    worst = std::max(worst, rel_frobenius(mat_pow(SpdMatrix(a.matrix() * 1.0), 1.0).matrix(),
                                          a.matrix()));
    worst = std::max(worst,
                     (mat_pow(a, 0.0).matrix() - Matrix::identity(dim)).frobenius_norm());
    return worst;
  });

  add("spd.congruence_roundtrip", "properties", 200, 1e-9, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e3, 0.5, 2.0);
    const Matrix s = draw_transform(rng, dim);
    const SpdMatrix gram(s.transposed() * s);
    const Matrix sinv = inverse_from_cholesky(gram.cholesky_factor()) * s.transposed();
    return rel_frobenius(congruence(s, congruence(sinv, a)).matrix(), a.matrix());
  });

  add("spd.loewner_order", "properties", 200, 1e-10, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e3, 0.5, 2.0);
    if (!loewner_leq(a, a, 0.0)) return 1.0;  // reflexivity with zero tolerance
    const double tol = 1e-10 * spectral_norm(a);
    const Matrix bump = testkit::random_symmetric(dim, rng) * (0.25 * tol);
    const SpdMatrix b(a.matrix() + bump);
    if (!loewner_leq(a, b, tol) || !loewner_leq(b, a, tol)) return 1.0;
    // Both directions hold, so the pair must be equal up to the tolerance.
    return std::max(0.0, sym_eig(b.matrix() - a.matrix()).max_eigenvalue() - tol);
  });

  add("testkit.generator_contract", "properties", 300, 1e-8,
      [](Rng& rng, std::string*, std::mutex*) {
        testkit::SpdGenSpec spec;
        spec.dim = rng.uniform_int(1, 8);
        spec.cond_max = std::exp(rng.uniform(0.0, std::log(1e4)));
        spec.scale = rng.uniform(0.5, 2.0);
        spec.seed = rng.next_u64();
        const SpdMatrix a = testkit::random_spd(spec);
        const SpdMatrix b = testkit::random_spd(spec);
        double worst = (a.matrix() - b.matrix()).max_abs() == 0.0 ? 0.0 : 1.0;
        const auto eig = sym_eig(a);
        const double lo = spec.scale / spec.cond_max;
        worst = std::max(worst, std::max(0.0, eig.max_eigenvalue() - spec.scale * (1.0 + 1e-10)));
        worst = std::max(worst, std::max(0.0, lo * (1.0 - 1e-10) - eig.min_eigenvalue()));
        return worst;
      });

  add("testkit.positive_map_monotone", "properties", 200, 1e-10,
      [](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 8);
        const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
        const SpdMatrix b(a.matrix() + draw_spd(rng, dim, 10.0, 0.1, 1.0).matrix());
        const auto phi = testkit::random_positive_map(dim, rng);
        return loewner_violation(testkit::apply_positive_map(phi, a),
                                 testkit::apply_positive_map(phi, b));
      });

  add("means.riccati", "properties", 200, 1e-9, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e3, 0.5, 2.0);
    const SpdMatrix b = draw_spd(rng, dim, 1e3, 0.5, 2.0);
    const SpdMatrix x = geo_mean(a, b, 0.5);
    const Matrix lhs = x.matrix() * inverse_from_cholesky(a.cholesky_factor()) * x.matrix();
    return rel_frobenius(lhs.symmetrized(), b.matrix());
  });

  add("means.geodesic_self_dual", "properties", 200, 1e-9,
      [](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 8);
        const SpdMatrix a = draw_spd(rng, dim, 1e3, 0.5, 2.0);
        const SpdMatrix b = draw_spd(rng, dim, 1e3, 0.5, 2.0);
        const double t = rng.uniform();
        return rel_frobenius(mat_inv(geo_mean(a, b, t)).matrix(),
                             geo_mean(mat_inv(a), mat_inv(b), t).matrix());
      });

  add("means.arithmetic_harmonic_order", "properties", 200, 1e-10,
      [](Rng& rng, std::string*, std::mutex*) {
        const MatrixTuple t = draw_tuple(rng, Ensemble{});
        return loewner_violation(harmonic_mean(t), arithmetic_mean(t));
      });

  add("means.norm_interpolation", "properties", 200, 1e-10,
      [](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 8);
        const SpdMatrix a = draw_spd(rng, dim, 1e3, 0.5, 2.0);
        const SpdMatrix b = draw_spd(rng, dim, 1e3, 0.5, 2.0);
        const double t = rng.uniform();
        const double lhs = spectral_norm(geo_mean(a, b, t));
        return std::max(0.0, lhs - std::pow(spectral_norm(a), 1.0 - t) *
                                       std::pow(spectral_norm(b), t));
      });

  // ---- Fixed-point mean: Ando-Li-Mathias style properties -----------------
  const Ensemble g_ens{.dim_min = 1, .dim_max = 8, .n_min = 2, .n_max = 6, .cond_max = 1e4};

  auto random_t = [](Rng& rng) { return kTeeGrid[rng.uniform_int(0, 8)]; };  // (0,1) interior

  add("g.idempotency", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const int n = rng.uniform_int(1, 6);
    const SpdMatrix a = draw_spd(rng, g_ens, dim);
    const MatrixTuple t(std::vector<SpdMatrix>(n, a), testkit::random_weights(n, rng));
    return thompson(g_mean(random_t(rng), t).solution, a);
  });

  add("g.homogeneity", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    const double tee = random_t(rng);
    const SpdMatrix g = g_mean(tee, t).solution;
    double worst = 0.0;
    for (double alpha : {0.5, 2.0, 10.0}) {
      const SpdMatrix scaled = g_mean(tee, t.scaled(alpha)).solution;
      worst = std::max(worst, thompson(scaled, SpdMatrix(g.matrix() * alpha)));
    }
    return worst;
  });

  add("g.permutation_invariance", "properties", 100, 1e-8,
      [=](Rng& rng, std::string*, std::mutex*) {
        const MatrixTuple t = draw_tuple(rng, g_ens);
        std::vector<int> perm(t.size());
        for (int i = 0; i < t.size(); ++i) perm[i] = i;
        for (int i = t.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
        const double tee = random_t(rng);
        return thompson(g_mean(tee, t).solution, g_mean(tee, t.permuted(perm)).solution);
      });

  add("g.monotone_arguments", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    std::vector<SpdMatrix> bigger;
    bigger.reserve(t.size());
    for (int i = 0; i < t.size(); ++i)
      bigger.emplace_back(t.matrix(i).matrix() + draw_spd(rng, t.dim(), 10.0, 0.05, 0.5).matrix());
    const MatrixTuple tb(std::move(bigger), t.weights());
    const double tee = random_t(rng);
    return loewner_violation(g_mean(tee, t).solution, g_mean(tee, tb).solution);
  });

  add("g.nonexpansive", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple ta = draw_tuple(rng, g_ens);
    std::vector<SpdMatrix> other;
    other.reserve(ta.size());
    for (int i = 0; i < ta.size(); ++i) other.push_back(draw_spd(rng, g_ens, ta.dim()));
    const MatrixTuple tb(std::move(other), ta.weights());
    double dmax = 0.0;
    for (int i = 0; i < ta.size(); ++i) dmax = std::max(dmax, thompson(ta.matrix(i), tb.matrix(i)));
    const double tee = random_t(rng);
    return std::max(0.0,
                    thompson(g_mean(tee, ta).solution, g_mean(tee, tb).solution) - dmax);
  });

  add("g.congruence_invariance", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    const Matrix s = draw_transform(rng, t.dim());
    const double tee = random_t(rng);
    return thompson(g_mean(tee, t.congruenced(s)).solution,
                    congruence(s, g_mean(tee, t).solution));
  });

  add("g.self_duality", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    const double tee = random_t(rng);
    return thompson(g_mean(1.0 - tee, t.inverted()).solution,
                    mat_inv(g_mean(tee, t).solution));
  });

  add("g.arithmetic_harmonic_sandwich", "properties", 100, 1e-8,
      [=](Rng& rng, std::string*, std::mutex*) {
        const MatrixTuple t = draw_tuple(rng, g_ens);
        const SpdMatrix g = g_mean(random_t(rng), t).solution;
        return std::max(loewner_violation(harmonic_mean(t), g),
                        loewner_violation(g, arithmetic_mean(t)));
      });

  add("g.operator_norm_bound", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    double worst = 0.0;
    for (double tee : {0.25, 0.5, 0.75, 1.0}) {
      double rhs = 0.0;
      for (int i = 0; i < t.size(); ++i)
        rhs += t.weights()[i] * std::pow(spectral_norm(t.matrix(i)), tee);
      rhs = std::pow(rhs, 1.0 / tee);
      worst = std::max(worst,
                       spectral_norm(g_mean(1.0 - tee, t).solution) - rhs);
    }
    return std::max(0.0, worst);
  });

  add("g.positive_map_order", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    const auto phi = testkit::random_positive_map(t.dim(), rng);
    std::vector<SpdMatrix> mapped;
    mapped.reserve(t.size());
    for (int i = 0; i < t.size(); ++i)
      mapped.push_back(testkit::apply_positive_map(phi, t.matrix(i)));
    const MatrixTuple tm(std::move(mapped), t.weights());
    const double tee = random_t(rng);
    return loewner_violation(testkit::apply_positive_map(phi, g_mean(tee, t).solution),
                             g_mean(tee, tm).solution);
  });

  add("g.two_point_geometric", "properties", 200, 1e-8, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(2, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e4, 0.5, 2.0);
    const SpdMatrix b = draw_spd(rng, dim, 1e4, 0.5, 2.0);
    const MatrixTuple pair({a, b}, WeightVector::uniform(2));
    return thompson(g_mean(0.5, pair).solution, geo_mean(a, b, 0.5));
  });

  add("g.scalar_oracle", "properties", 200, 1e-12, [](Rng& rng, std::string*, std::mutex*) {
    const int n = rng.uniform_int(1, 6);
    std::vector<double> a(n);
    for (double& x : a) x = rng.uniform(0.2, 4.0);
    const WeightVector w = testkit::random_weights(n, rng);
    std::vector<SpdMatrix> mats;
    mats.reserve(n);
    for (double x : a) mats.push_back(SpdMatrix::diagonal({x}));
    const MatrixTuple t(std::move(mats), w);
    SolverOptions opts;
    opts.tol = 2.5e-15;
    opts.max_iter = 200000;
    double worst = 0.0;
    for (double tee : kTeeGrid) {
      const double solved = g_mean(tee, t, opts).solution(0, 0);
      worst = std::max(worst, std::abs(solved - scalar_g_bisect(tee, a, w.values())));
    }
    return worst;
  });

  add("g.resolvent_certificate", "properties", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    const double tee = kTeeGrid[rng.uniform_int(0, 9)];  // includes t = 1
    const SolveReport report = g_mean(tee, t);
    if (!(report.contraction_estimate < 1.0)) return 1.0;
    SolverOptions defaults;
    if (!report.direct &&
        report.fixed_point_residual >
            10.0 * defaults.tol * report.solution.frobenius_norm())
      return 1.0;
    return resolvent_residual(report.solution, tee, t);
  });

  add("g.contraction_bound", "properties", 200, 1e-10, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    const SpdMatrix x = draw_spd(rng, g_ens, t.dim());
    const SpdMatrix y = draw_spd(rng, g_ens, t.dim());
    const double tee = rng.uniform(0.05, 0.95);
    const auto [lhs, bound] = contraction_check(tee, t, x, y);
    return std::max(0.0, lhs - bound);
  });

  add("g.closed_form_two", "properties", 100, 1e-8, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    // Weights and t with t strictly between w1 and w2 (either order).
    double w1 = rng.uniform(0.15, 0.85);
    double w2 = 1.0 - w1;
    const double lo = std::min(w1, w2), hi = std::max(w1, w2);
    const double tee = rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
    if (std::abs(tee - w1) < 1e-3 || std::abs(w2 - tee) < 1e-3) return 0.0;  // degenerate draw
    const SpdMatrix a = draw_spd(rng, dim, 1e3, 0.5, 2.0);
    const SpdMatrix b(a.matrix() * ((tee - w1) / (w2 - tee)));
    const SpdMatrix closed = closed_form_two(tee, w1, w2, a, b);
    const MatrixTuple t({a, b}, WeightVector({w1, w2}));
    return thompson(closed, g_mean(tee, t).solution);
  });

  // ---- Ordering in the parameter ------------------------------------------
  add("g.monotone_in_t", "ordering", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    std::vector<SpdMatrix> means;
    means.reserve(kTeeGrid.size());
    for (double tee : kTeeGrid) means.push_back(g_mean(tee, t).solution);
    double worst = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i)
      for (std::size_t j = i + 1; j < means.size(); ++j)
        worst = std::max(worst, loewner_violation(means[j], means[i]));  // G_t ≤ G_s for s ≤ t
    return worst;
  });

  add("g.limit_to_arithmetic", "ordering", 50, 0.0, [](Rng& rng, std::string*, std::mutex*) {
    // Normalized well-conditioned instances: eigenvalues in [1/4, 1].
    const int dim = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(2, 5);
    std::vector<SpdMatrix> mats;
    mats.reserve(n);
    for (int i = 0; i < n; ++i) mats.push_back(testkit::random_spd(dim, 4.0, 1.0, rng));
    const MatrixTuple t(std::move(mats), testkit::random_weights(n, rng));
    const SpdMatrix arith = arithmetic_mean(t);
    SolverOptions opts;
    opts.tol = 1e-10;
    opts.max_iter = 5000000;
    double prev = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    double last = 0.0;
    for (double tee : {1e-1, 1e-2, 1e-3, 1e-4}) {
      last = thompson(g_mean(tee, t, opts).solution, arith);
      worst = std::max(worst, last - prev);  // must decrease strictly as t drops
      prev = last;
    }
    return std::max(worst, last - 1e-3);  // and end below 1e-3 at t = 1e-4
  });

  add("g.power_mean_lower", "ordering", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    double worst = 0.0;
    for (double tee : {0.25, 0.5, 0.75, 1.0})
      worst = std::max(worst, loewner_violation(power_mean(-tee, t).solution,
                                                g_mean(tee, t).solution));
    return worst;
  });

  add("g.power_mean_upper", "ordering", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    double worst = 0.0;
    for (double tee : {0.25, 0.5, 0.75, 1.0})
      worst = std::max(worst, loewner_violation(g_mean(1.0 - tee, t).solution,
                                                power_mean(tee, t).solution));
    return worst;
  });

  add("cartan.below_arithmetic", "ordering", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    return loewner_violation(cartan_mean(t).solution, arithmetic_mean(t));
  });

  add("power.interpolation_chain", "ordering", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    std::vector<SpdMatrix> chain;
    chain.push_back(power_mean(-1.0, t).solution);
    chain.push_back(power_mean(-0.75, t).solution);
    chain.push_back(power_mean(-0.25, t).solution);
    chain.push_back(cartan_mean(t).solution);
    chain.push_back(power_mean(0.25, t).solution);
    chain.push_back(power_mean(0.75, t).solution);
    chain.push_back(power_mean(1.0, t).solution);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      worst = std::max(worst, loewner_violation(chain[i], chain[i + 1]));
    return worst;
  });

  // ---- Spectral bounds and the Lie-Trotter limit ---------------------------
  add("g.spectral_lower_bound", "bounds", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    double lambda_min = min_eigenvalue(t.matrix(0));
    for (int i = 1; i < t.size(); ++i)
      lambda_min = std::min(lambda_min, min_eigenvalue(t.matrix(i)));
    double worst = 0.0;
    for (double tee : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Matrix sum(t.dim(), t.dim());
      for (int i = 0; i < t.size(); ++i)
        sum += mat_pow(t.matrix(i), -tee).matrix() * t.weights()[i];
      const SpdMatrix bound(
          inverse_from_cholesky(SpdMatrix(sum).cholesky_factor()) *
          std::pow(lambda_min, 1.0 - tee));
      worst = std::max(worst, loewner_violation(bound, g_mean(tee, t).solution));
    }
    return worst;
  });

  add("g.spectral_upper_bound", "bounds", 100, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const MatrixTuple t = draw_tuple(rng, g_ens);
    double lambda_max = spectral_norm(t.matrix(0));
    for (int i = 1; i < t.size(); ++i)
      lambda_max = std::max(lambda_max, spectral_norm(t.matrix(i)));
    double worst = 0.0;
    for (double tee : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Matrix sum(t.dim(), t.dim());
      for (int i = 0; i < t.size(); ++i)
        sum += mat_pow(t.matrix(i), tee).matrix() * t.weights()[i];
      const SpdMatrix bound(sum * std::pow(lambda_max, 1.0 - tee));
      worst = std::max(worst, loewner_violation(g_mean(1.0 - tee, t).solution, bound));
    }
    return worst;
  });

  add("g.conditional_bounds", "bounds", 100, 1e-8,
      [=](Rng& rng, std::string* note, std::mutex* mu) {
        // Half the draws sit above the identity, half below, so both branches
        // of the corollary get exercised; the hypothesis is still re-checked.
        const int dim = rng.uniform_int(1, 8);
        const int n = rng.uniform_int(2, 6);
        const bool above = rng.uniform() < 0.5;
        std::vector<SpdMatrix> mats;
        mats.reserve(n);
        for (int i = 0; i < n; ++i)
          mats.push_back(above ? testkit::random_spd(dim, 4.0, rng.uniform(1.0, 4.0), rng)
                               : testkit::random_spd(dim, 4.0, rng.uniform(0.25, 1.0), rng));
        const MatrixTuple t(std::move(mats), testkit::random_weights(n, rng));
        const double tee = kTeeGrid[rng.uniform_int(0, 8)];
        const SpdMatrix g = g_mean(tee, t).solution;
        const SpdMatrix eye = SpdMatrix::identity(dim);
        double worst = 0.0;
        if (loewner_leq(eye, g, 1e-12)) {
          Matrix sum(dim, dim);
          for (int i = 0; i < t.size(); ++i)
            sum += mat_pow(t.matrix(i), -tee).matrix() * t.weights()[i];
          worst = std::max(worst, loewner_violation(
                               SpdMatrix(inverse_from_cholesky(SpdMatrix(sum).cholesky_factor())),
                               g));
          add_note_count(note, mu, "above_identity");
        }
        if (loewner_leq(g, eye, 1e-12)) {
          Matrix sum(dim, dim);
          for (int i = 0; i < t.size(); ++i)
            sum += mat_pow(t.matrix(i), 1.0 - tee).matrix() * t.weights()[i];
          worst = std::max(worst, loewner_violation(g, SpdMatrix(sum)));
          add_note_count(note, mu, "below_identity");
        }
        return worst;
      });

  add("g.lie_trotter_trend", "bounds", 50, 0.0, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(2, 6);
    // Redraw until the pair is genuinely non-commuting: near-commuting draws
    // make the limit distances vanish into solver noise and the "strictly
    // decreasing" reading meaningless.
    for (;;) {
      const SpdMatrix a = testkit::random_spd(dim, 4.0, 1.0, rng);
      const SpdMatrix b = testkit::random_spd(dim, 4.0, 1.0, rng);
      const Matrix comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
      if (comm.frobenius_norm() <
          0.01 * a.matrix().frobenius_norm() * b.matrix().frobenius_norm())
        continue;
      const MatrixTuple t({a, b}, WeightVector::uniform(2));
      const auto distances = lie_trotter_limit(t, 0.5, {1e-1, 1e-2, 1e-3});
      double worst = 0.0;
      for (std::size_t i = 0; i + 1 < distances.size(); ++i)
        worst = std::max(worst, distances[i + 1].second - distances[i].second);
      return std::max(worst, distances.back().second - 1e-3);
    }
  });

  add("g.lie_trotter_commuting", "bounds", 50, 1e-8, [](Rng& rng, std::string*, std::mutex*) {
    // The exact-zero collapse needs the two-point uniform mean at t = 1/2,
    // where G is the metric geometric mean: for commuting pairs every
    // G(A^p,B^p)^{1/p} then equals the log-Euclidean mean at finite p
    // already. (With n >= 3 or non-uniform weights the distance is merely
    // O(p), not zero.)
    const int dim = rng.uniform_int(2, 6);
    const Matrix q = sym_eig(testkit::random_spd(dim, 10.0, 1.0, rng)).basis;
    auto commuting_draw = [&]() {
      std::vector<double> eigs(dim);
      for (double& l : eigs) l = rng.uniform(0.25, 2.0);
      Matrix m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c <= r; ++c) {
          double s = 0.0;
          for (int k = 0; k < dim; ++k) s += q(r, k) * eigs[k] * q(c, k);
          m(r, c) = s;
          m(c, r) = s;
        }
      return SpdMatrix(m);
    };
    const MatrixTuple t({commuting_draw(), commuting_draw()}, WeightVector::uniform(2));
    double worst = 0.0;
    for (const auto& [p, dist] : lie_trotter_limit(t, 0.5, {1e-1, 1e-2, 1e-3}))
      worst = std::max(worst, dist);
    return worst;
  });

  // ---- Divergence and barycenter layer ------------------------------------
  const std::vector<double> alpha_grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  const std::vector<double> alpha_interior{-0.9, -0.5, 0.0, 0.5, 0.9};

  add("div.zero_iff_equal", "divergence", 200, 1e-10, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
    const SpdMatrix b(a.matrix() + draw_spd(rng, dim, 10.0, 0.05, 0.5).matrix());
    double worst = 0.0;
    for (double al : alpha_grid) {
      worst = std::max(worst, logdet_div(Alpha(al), a, a).value);
      if (!(logdet_div(Alpha(al), a, b).value > 1e-12)) worst = std::max(worst, 1.0);
    }
    return worst;
  });

  add("div.qdiv_first_derivative", "divergence", 100, 1e-6,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 6);
        const SpdMatrix a = testkit::random_spd(dim, 4.0, 2.0, rng);
        const Matrix x = testkit::random_symmetric(dim, rng) * 0.5;
        const double h = 1e-4 * (1.0 + a.frobenius_norm());
        const auto probes =
            qdiv_check(Alpha(alpha_interior[rng.uniform_int(0, 4)]), a, {x}, h);
        return std::abs(probes[0].first_derivative);
      });

  add("div.qdiv_second_nonneg", "divergence", 100, 1e-8,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 6);
        const SpdMatrix a = testkit::random_spd(dim, 4.0, 2.0, rng);
        const Matrix x = testkit::random_symmetric(dim, rng) * 0.5;
        const double h = 1e-4 * (1.0 + a.frobenius_norm());
        const auto probes =
            qdiv_check(Alpha(alpha_interior[rng.uniform_int(0, 4)]), a, {x}, h);
        return std::max(0.0, -probes[0].second_difference);
      });

  add("div.qdiv_second_matches_analytic", "divergence", 100, 1e-2,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 6);
        const SpdMatrix a = testkit::random_spd(dim, 4.0, 2.0, rng);
        const Matrix x = testkit::random_symmetric(dim, rng) * 0.5;
        const double h = 1e-4 * (1.0 + a.frobenius_norm());
        const auto probes =
            qdiv_check(Alpha(alpha_interior[rng.uniform_int(0, 4)]), a, {x}, h);
        return std::abs(probes[0].second_difference - probes[0].analytic_second) /
               (1.0 + probes[0].analytic_second);
      });

  add("div.congruence_invariance", "divergence", 200, 1e-9,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 8);
        const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
        const SpdMatrix b = draw_spd(rng, dim, 1e2, 0.5, 2.0);
        const Matrix s = draw_transform(rng, dim);
        const Alpha al(alpha_grid[rng.uniform_int(0, 4)]);
        return std::abs(logdet_div(al, congruence(s, a), congruence(s, b)).value -
                        logdet_div(al, a, b).value);
      });

  add("div.inversion_swap", "divergence", 200, 1e-10, [=](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
    const SpdMatrix b = draw_spd(rng, dim, 1e2, 0.5, 2.0);
    const Alpha al(alpha_grid[rng.uniform_int(0, 4)]);
    return std::abs(logdet_div(al, mat_inv(a), mat_inv(b)).value -
                    logdet_div(al, b, a).value);
  });

  add("div.power_subhomogeneity", "divergence", 200, 1e-10,
      [=](Rng& rng, std::string*, std::mutex*) {
        const int dim = rng.uniform_int(1, 8);
        const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
        const SpdMatrix b = draw_spd(rng, dim, 1e2, 0.5, 2.0);
        const Alpha al(alpha_grid[rng.uniform_int(0, 4)]);
        const double d = logdet_div(al, a, b).value;
        double worst = 0.0;
        for (double tee : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})
          worst = std::max(worst, logdet_div(al, mat_pow(a, tee), mat_pow(b, tee)).value -
                                      tee * d);
        return worst;
      });

  add("div.endpoint_continuity", "divergence", 100, 1e-4, [](Rng& rng, std::string*, std::mutex*) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = draw_spd(rng, dim, 10.0, 0.5, 2.0);
    const SpdMatrix b = draw_spd(rng, dim, 10.0, 0.5, 2.0);
    const double eps = 1e-6;
    return std::max(std::abs(logdet_div(Alpha(1.0 - eps), a, b).value -
                             logdet_div(Alpha(1.0), a, b).value),
                    std::abs(logdet_div(Alpha(-(1.0 - eps)), a, b).value -
                             logdet_div(Alpha(-1.0), a, b).value));
  });

  auto draw_problem = [alpha_interior](Rng& rng, int n_min, int n_max) {
    const int dim = rng.uniform_int(1, 6);
    const int n = rng.uniform_int(n_min, n_max);
    std::vector<SpdMatrix> mats;
    mats.reserve(n);
    for (int i = 0; i < n; ++i) mats.push_back(draw_spd(rng, dim, 1e2, 0.5, 2.0));
    return BarycenterProblem(Alpha(alpha_interior[rng.uniform_int(0, 4)]), std::move(mats));
  };

  add("bary.gradient_at_right_mean", "divergence", 100, 1e-8,
      [=](Rng& rng, std::string*, std::mutex*) {
        const BarycenterProblem p = draw_problem(rng, 1, 6);
        const SpdMatrix x = right_mean(p).solution;
        return phi_gradient(p, x).frobenius_norm() / p.size();
      });

  add("bary.local_optimality", "divergence", 50, 1e-11, [=](Rng& rng, std::string*, std::mutex*) {
    const BarycenterProblem p = draw_problem(rng, 2, 6);
    const SpdMatrix x = right_mean(p).solution;
    const double base = phi_value(p, x);
    const double h = 1e-3 * min_eigenvalue(x);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Matrix dir = testkit::random_symmetric(p.dim(), rng);
      worst = std::max(worst, base - phi_value(p, SpdMatrix(x.matrix() + dir * h)));
    }
    return worst;
  });

  add("bary.gradient_matches_fd", "divergence", 50, 1e-5, [=](Rng& rng, std::string*, std::mutex*) {
    const BarycenterProblem p = draw_problem(rng, 2, 6);
    const SpdMatrix x = draw_spd(rng, p.dim(), 1e2, 0.5, 2.0);
    const Matrix dir = testkit::random_symmetric(p.dim(), rng);
    const double h = 1e-5 * (1.0 + min_eigenvalue(x));
    const double fd = (phi_value(p, SpdMatrix(x.matrix() + dir * h)) -
                       phi_value(p, SpdMatrix(x.matrix() - dir * h))) /
                      (2.0 * h);
    const Matrix grad = phi_gradient(p, x);
    double inner = 0.0;
    for (int i = 0; i < p.dim(); ++i)
      for (int j = 0; j < p.dim(); ++j) inner += grad(i, j) * dir(i, j);
    return std::abs(inner - fd) / (1.0 + std::abs(fd));
  });

  add("bary.bridge_identity", "divergence", 50, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const BarycenterProblem p = draw_problem(rng, 1, 6);
    const SolveReport via_bary = right_mean(p);
    const double tee = 0.5 * (1.0 - p.alpha().value());
    const SolveReport via_g = g_mean(tee, p.tuple());
    // Same code path — the two solutions must agree bitwise.
    if ((via_bary.solution.matrix() - via_g.solution.matrix()).max_abs() != 0.0) return 1.0;
    return resolvent_residual(via_bary.solution, tee, p.tuple());
  });

  add("bary.multistart_agreement", "divergence", 20, 1e-8, [=](Rng& rng, std::string*, std::mutex*) {
    const BarycenterProblem p = draw_problem(rng, 2, 6);
    std::vector<SpdMatrix> solutions;
    for (int k = 0; k < 5; ++k) {
      SolverOptions opts;
      opts.init = SolverOptions::Init::Custom;
      opts.custom_init = draw_spd(rng, p.dim(), 1e2, 0.5, 2.0);
      solutions.push_back(right_mean(p, opts).solution);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < solutions.size(); ++i)
      for (std::size_t j = i + 1; j < solutions.size(); ++j)
        worst = std::max(worst, thompson(solutions[i], solutions[j]));
    return worst;
  });

  return defs;
}

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs = build_registry();
  return defs;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"thompson", "properties", "ordering", "bounds", "divergence", "all"};
}

bool is_suite_name(const std::string& name) {
  const auto names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<CheckResult> run_suite(const std::string& suite, const SuiteOptions& opts) {
  if (!is_suite_name(suite)) throw ParameterOutOfRange("unknown verify suite '" + suite + "'");
  std::vector<CheckResult> results;
  const auto& defs = registry();
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (suite != "all" && defs[i].suite != suite) continue;
    results.push_back(run_check(defs[i], opts, 1000 + i));
  }
  return results;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  std::size_t width = 4;
  for (const auto& r : results) width = std::max(width, r.name.size());
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name;
    out << std::string(width - r.name.size() + 2, ' ');
    char buf[128];
    std::snprintf(buf, sizeof buf, "instances=%-5d max_violation=%-12.3e threshold=%.1e",
                  r.instances, r.max_violation, r.threshold);
    out << buf;
    if (!r.note.empty()) out << "  [" << r.note << "]";
    out << "\n";
  }
  return out.str();
}

std::string write_report(const std::string& suite, const SuiteOptions& opts,
                         const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "suite: " << suite << "\n";
  out << "seed: " << opts.seed << "\n";
  out << "count: " << opts.count << "\n";
  out << "result: " << (all_pass(results) ? "pass" : "fail") << "\n";
  for (const auto& r : results) {
    out << "check: " << r.name << ' ' << r.instances << ' ' << io::format_double(r.max_violation)
        << ' ' << io::format_double(r.threshold) << ' ' << (r.pass ? "pass" : "fail");
    if (!r.note.empty()) out << ' ' << r.note;
    out << "\n";
  }
  return out.str();
}

std::vector<CheckResult> parse_report(const std::string& text) {
  std::vector<CheckResult> results;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("check: ", 0) != 0) continue;
    std::istringstream fields(line.substr(7));
    CheckResult r;
    std::string pass;
    if (!(fields >> r.name >> r.instances >> r.max_violation >> r.threshold >> pass))
      throw ParseError("malformed check line: " + line);
    r.pass = pass == "pass";
    std::string rest;
    std::getline(fields, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    r.note = rest;
    results.push_back(std::move(r));
  }
  return results;
}

// ---------------------------------------------------------------------------
// Conjecture explorers

namespace {

std::string format_matrix_inline(const Matrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += io::format_double(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace

std::string explore_g_vs_cartan(const ExploreOptions& opts,
                                const std::optional<MatrixTuple>& fixed_instance) {
  const std::vector<double> ts = opts.t_values.empty()
                                     ? std::vector<double>{0.25, 0.5, 0.75}
                                     : opts.t_values;
  std::ostringstream out;
  out << "conjecture: g-vs-cartan\n";
  out << "question: is G_t >= Cartan for t <= 1/2 and G_t <= Cartan for t >= 1/2?\n";
  out << "loewner tolerance: 1e-10; equality tolerance (Thompson): 1e-8\n\n";

  struct Tally {
    int geq = 0, leq = 0, equal = 0, incomparable = 0;
    std::string counterexample;
  };

  auto classify = [&](const MatrixTuple& tuple, double t, Tally& tally, const char* label) {
    const SpdMatrix g = g_mean(t, tuple).solution;
    const SpdMatrix cartan = cartan_mean(tuple).solution;
    const bool eq = thompson(g, cartan) <= 1e-8;
    const bool geq = loewner_violation(cartan, g) <= 1e-10;
    const bool leq = loewner_violation(g, cartan) <= 1e-10;
    if (eq)
      ++tally.equal;
    else if (geq)
      ++tally.geq;
    else if (leq)
      ++tally.leq;
    else
      ++tally.incomparable;
    const bool conjectured_holds = eq || (t <= 0.5 && geq) || (t >= 0.5 && leq);
    if (!conjectured_holds && tally.counterexample.empty()) {
      std::ostringstream ce;
      ce << "  counterexample (" << label << "):\n";
      for (int i = 0; i < tuple.size(); ++i)
        ce << "    A" << i + 1 << " = " << format_matrix_inline(tuple.matrix(i).matrix()) << "\n";
      ce << "    G_t    = " << format_matrix_inline(g.matrix()) << "\n";
      ce << "    Cartan = " << format_matrix_inline(cartan.matrix()) << "\n";
      tally.counterexample = ce.str();
    }
  };

  for (double t : ts) {
    Tally tally;
    if (fixed_instance) classify(*fixed_instance, t, tally, "given instance");
    std::vector<Tally> slots(std::max(opts.count, 0));
    parallel_for(static_cast<int>(slots.size()), [&](int i) {
      Rng rng = Rng(opts.seed, 77).split(static_cast<std::uint64_t>(i) + 1);
      Ensemble e;
      e.n_min = 2;
      classify(draw_tuple(rng, e), t, slots[i], "random instance");
    });
    for (const auto& s : slots) {
      tally.geq += s.geq;
      tally.leq += s.leq;
      tally.equal += s.equal;
      tally.incomparable += s.incomparable;
      if (tally.counterexample.empty() && !s.counterexample.empty())
        tally.counterexample = s.counterexample;
    }
    const int total = tally.geq + tally.leq + tally.equal + tally.incomparable;
    out << "t = " << t << ": instances=" << total << "  G>=Cartan: " << tally.geq
        << "  G<=Cartan: " << tally.leq << "  equal: " << tally.equal
        << "  incomparable: " << tally.incomparable << "\n";
    if (!tally.counterexample.empty()) out << tally.counterexample;
    out << "\n";
  }
  out << "finding: evidence only; no direction is asserted.\n";
  return out.str();
}

std::string explore_log_majorization(const ExploreOptions& opts,
                                     const std::optional<MatrixTuple>& fixed_pair) {
  const std::vector<double> ts =
      opts.t_values.empty() ? std::vector<double>{0.5, 0.75, 1.0} : opts.t_values;
  const std::vector<double> p_grid{1.0, 1e-1, 1e-2, 1e-3};
  std::ostringstream out;
  out << "conjecture: log-majorization\n";
  out << "question: does G_t((1/2,1/2); A^p, B^p)^{1/p} increase to the log-Euclidean mean\n";
  out << "          in weak log-majorization as p -> 0, for t in [1/2, 1]?\n\n";

  // Prefix sums of descending log-eigenvalues.
  auto log_prefix = [](const SpdMatrix& m) {
    auto eig = sym_eig(m);
    std::vector<double> sums(eig.eigenvalues.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < sums.size(); ++k) {
      acc += std::log(eig.eigenvalues[k]);
      sums[k] = acc;
    }
    return sums;
  };

  struct Row {
    double max_violation = 0.0;  // positive = weak log-majorization broken
    double max_gap = 0.0;        // distance below the log-Euclidean prefix sums
  };

  for (double t : ts) {
    out << "t = " << t << "\n";
    std::vector<std::vector<Row>> rows(std::max(opts.count, 0) + (fixed_pair ? 1 : 0));
    auto run_pair = [&](const MatrixTuple& pair, std::vector<Row>& slot) {
      Matrix log_sum(pair.dim(), pair.dim());
      for (int i = 0; i < pair.size(); ++i)
        log_sum += mat_log(pair.matrix(i)) * pair.weights()[i];
      const auto le_sums = log_prefix(mat_exp(log_sum));
      slot.resize(p_grid.size());
      for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        const double p = p_grid[pi];
        const SpdMatrix m =
            mat_pow(g_mean(t, pair.powered(p)).solution, 1.0 / p);
        const auto m_sums = log_prefix(m);
        Row row;
        for (std::size_t k = 0; k < m_sums.size(); ++k) {
          row.max_violation = std::max(row.max_violation, m_sums[k] - le_sums[k]);
          row.max_gap = std::max(row.max_gap, le_sums[k] - m_sums[k]);
        }
        slot[pi] = row;
      }
    };
    int idx = 0;
    if (fixed_pair) run_pair(*fixed_pair, rows[idx++]);
    parallel_for(std::max(opts.count, 0), [&](int i) {
      Rng rng = Rng(opts.seed, 78).split(static_cast<std::uint64_t>(i) + 1);
      const int dim = rng.uniform_int(2, 6);
      const SpdMatrix a = draw_spd(rng, dim, 1e2, 0.5, 2.0);
      const SpdMatrix b = draw_spd(rng, dim, 1e2, 0.5, 2.0);
      run_pair(MatrixTuple({a, b}, WeightVector::uniform(2)), rows[idx + i]);
    });
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
      double worst_violation = 0.0, mean_gap = 0.0;
      for (const auto& slot : rows) {
        worst_violation = std::max(worst_violation, slot[pi].max_violation);
        mean_gap += slot[pi].max_gap;
      }
      mean_gap /= std::max<std::size_t>(rows.size(), 1);
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "  p=%-8.0e max wlog violation=%-12.3e mean gap below LE=%-12.3e\n", p_grid[pi],
                    worst_violation, mean_gap);
      out << buf;
    }
    int monotone = 0;
    for (const auto& slot : rows) {
      bool mono = true;
      for (std::size_t pi = 0; pi + 1 < slot.size(); ++pi)
        if (slot[pi + 1].max_gap > slot[pi].max_gap + 1e-12) mono = false;
      if (mono) ++monotone;
    }
    out << "  instances with gap shrinking monotonically as p drops: " << monotone << "/"
        << rows.size() << "\n\n";
  }
  out << "finding: evidence only; no claim is asserted.\n";
  return out.str();
}

}  // namespace spdmean::verify
