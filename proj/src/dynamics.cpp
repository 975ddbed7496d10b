#include "caplab/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

#include "caplab/resultant.hpp"

namespace caplab {

CompiledMap::CompiledMap(const PolynomialMap<Complex>& F) : N_(F.dimension()), d_(F.degree()) {
  for (int i = 0; i < N_; ++i)
    for (const auto& [m, c] : F[i].terms()) terms_.push_back({i, m.degree(), m.exponents(), c});
}

void CompiledMap::apply(const Point& z, Point& out) const {
  out.setZero(N_);
  for (const auto& t : terms_) {
    Complex v = t.coeff;
    for (int i = 0; i < N_; ++i)
      for (int k = 0; k < t.exps[static_cast<std::size_t>(i)]; ++k) v *= z(i);
    out(t.component) += v;
  }
}

void CompiledMap::apply_log_scaled(double L, const Point& u, Point& out) const {
  out.setZero(N_);
  for (const auto& t : terms_) {
    Complex v = t.coeff;
    if (t.degree < d_) {
      const double damp = std::exp(static_cast<double>(t.degree - d_) * L);
      if (damp == 0.0) continue;
      v *= damp;
    }
    for (int i = 0; i < N_; ++i)
      for (int k = 0; k < t.exps[static_cast<std::size_t>(i)]; ++k) v *= u(i);
    out(t.component) += v;
  }
}

namespace {

// Smallest r >= 1 with (m/2) r^d - C (r^{d-1} + 1) >= factor * r.
double radius_with_growth(double sphere_min, double C, int d, double factor) {
  const double m = 0.5 * sphere_min;
  auto ok = [&](double r) { return m * std::pow(r, d) - C * (std::pow(r, d - 1) + 1.0) >= factor * r; };
  double hi = 1.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e150) throw std::runtime_error("escape radius: no finite radius found");
  }
  if (hi == 1.0) return 1.0;
  double lo = hi / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

EscapeParameters escape_parameters(const PolynomialMap<Complex>& F, int iteration_cap, int sphere_samples,
                                   std::uint64_t seed) {
  if (F.degree() < 2) throw std::invalid_argument("escape_parameters: degree must be at least 2");
  const auto F_h = leading_part(F);
  EscapeParameters p;
  p.iteration_cap = iteration_cap;
  p.sphere_min = min_leading_norm_on_sphere(F_h, sphere_samples, seed);
  p.sphere_max = max_leading_norm_on_sphere(F_h, sphere_samples, seed);
  p.lower_order = lower_order_bound(F);
  if (!(p.sphere_min > 1e-12)) throw NonRegularMap("escape_parameters: sphere minimum of ||F_h|| is not positive");
  p.escape_radius = radius_with_growth(p.sphere_min, p.lower_order, F.degree(), 2.0);
  p.bounded_radius = radius_with_growth(p.sphere_min, p.lower_order, F.degree(), 1.0);
  return p;
}

namespace {

// Sum of d^{-(j+1)} log||w_j|| along the normalized orbit of (L, u); returns
// lim d^{-j} L_j - L.
double log_tail(const CompiledMap& F, double L, Point u, double tolerance) {
  const double d = F.degree();
  Point w(F.dimension());
  double acc = 0.0;
  double weight = 1.0 / d;
  for (int j = 0; j < 4000; ++j) {
    F.apply_log_scaled(L, u, w);
    const double nw = w.norm();
    if (!(nw > 0.0) || !std::isfinite(nw)) throw std::runtime_error("escape_rate: orbit hit a zero of F_h");
    const double inc = std::log(nw);
    acc += weight * inc;
    // L_{j+1} = d L_j + log||w||; acc tracks sum weight * inc with weight = d^{-(j+1)}.
    L = d * L + inc;
    u = w / nw;
    if (weight * (std::abs(inc) + 1.0) < tolerance) break;
    weight /= d;
  }
  return acc;
}

}  // namespace

EscapeResult escape_rate(const CompiledMap& F, const Point& z, const EscapeParameters& params) {
  if (F.degree() < 2) throw std::invalid_argument("escape_rate: degree must be at least 2");
  if (z.size() != F.dimension()) throw std::invalid_argument("escape_rate: dimension mismatch");
  const double d = F.degree();
  Point cur = z, next(F.dimension());
  double scale = 1.0;  // d^{-k}
  for (int k = 0; k <= params.iteration_cap; ++k) {
    const double nz = cur.norm();
    if (nz > params.escape_radius) {
      const double L = std::log(nz);
      return {scale * (L + log_tail(F, L, cur / nz, params.tolerance)), true, k};
    }
    if (k == params.iteration_cap) break;
    F.apply(cur, next);
    std::swap(cur, next);
    scale /= d;
  }
  return {0.0, false, params.iteration_cap};
}

EscapeResult escape_rate(const PolynomialMap<Complex>& F, const Point& z, const EscapeParameters& params) {
  return escape_rate(CompiledMap(F), z, params);
}

double homogeneous_green(const CompiledMap& F_h, const Point& u, double tolerance) {
  const double nu = u.norm();
  if (!(nu > 0)) throw std::invalid_argument("homogeneous_green: zero vector");
  return std::log(nu) + log_tail(F_h, 0.0, u / nu, tolerance);
}

bool julia_member(const CompiledMap& F, const Point& z, double escape_radius, int cap) {
  Point cur = z, next(F.dimension());
  for (int k = 0; k <= cap; ++k) {
    if (!(cur.norm() <= escape_radius)) return false;
    if (k == cap) break;
    F.apply(cur, next);
    std::swap(cur, next);
  }
  return true;
}

SetOracle filled_julia_oracle(const PolynomialMap<Complex>& F, const EscapeParameters& params) {
  if (F.degree() < 2) throw std::invalid_argument("filled_julia_oracle: degree must be at least 2");
  const auto map = std::make_shared<const CompiledMap>(F);
  SetOracle K;
  K.dimension = F.dimension();
  K.bounding_radius = params.bounded_radius;
  K.description = "filled_julia(R_esc=" + std::to_string(params.escape_radius) +
                  ",cap=" + std::to_string(params.iteration_cap) + ")";
  K.contains = [map, R = params.escape_radius, cap = params.iteration_cap](const Point& z) {
    return julia_member(*map, z, R, cap);
  };
  K.sample = [contains = K.contains, N = F.dimension(), box = params.bounded_radius](Rng& rng) -> std::optional<Point> {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Point z(N);
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
      for (int i = 0; i < N; ++i) z(i) = std::polar(box * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
      if (z.norm() <= box && contains(z)) return z;
    }
    return std::nullopt;
  };
  return K;
}

double julia_diam_prediction(double res_abs, int N, int d) {
  if (!(res_abs > 0)) throw NonRegularMap("julia_diam_prediction: Res vanishes");
  if (d < 2) throw std::invalid_argument("julia_diam_prediction: degree must be at least 2");
  return std::pow(res_abs, -1.0 / (N * std::pow(d, N - 1) * (d - 1)));
}

double julia_diam_prediction(const PolynomialMap<Rational>& F) {
  const Rational res = regular_resultant(leading_part(F));
  return julia_diam_prediction(std::abs(res.convert_to<double>()), F.dimension(), F.degree());
}

double julia_diam_prediction(const PolynomialMap<Complex>& F) {
  const auto res = resultant_numeric(leading_part(F));
  return julia_diam_prediction(std::abs(res.value), F.dimension(), F.degree());
}

// ---------------------------------------------------------------------------

std::vector<Point> projective_preimages(const PolynomialMap<Complex>& F_h, const Point& q) {
  if (F_h.dimension() != 2 || !F_h.is_homogeneous())
    throw std::invalid_argument("projective_preimages: need a homogeneous map on C^2");
  const int d = F_h.degree();
  // h(x, y) = q_2 F_1(x, y) - q_1 F_2(x, y) = sum_k h_k x^k y^{d-k}
  std::vector<Complex> h(static_cast<std::size_t>(d + 1), 0.0);
  for (const auto& [m, c] : F_h[0].terms()) h[static_cast<std::size_t>(m[0])] += q(1) * c;
  for (const auto& [m, c] : F_h[1].terms()) h[static_cast<std::size_t>(m[0])] -= q(0) * c;

  double hmax = 0;
  for (const auto& c : h) hmax = std::max(hmax, std::abs(c));
  if (!(hmax > 0)) throw std::runtime_error("projective_preimages: exceptional point");
  const double tiny = 1e-14 * hmax;
  int lo = 0, hi = d;
  while (std::abs(h[static_cast<std::size_t>(lo)]) <= tiny) ++lo;
  while (std::abs(h[static_cast<std::size_t>(hi)]) <= tiny) --hi;

  std::vector<Point> out;
  auto push = [&](Complex x, Complex y) {
    Point p(2);
    p << x, y;
    out.push_back(p / p.norm());
  };
  for (int k = 0; k < lo; ++k) push(0.0, 1.0);      // x = 0
  for (int k = hi; k < d; ++k) push(1.0, 0.0);      // y = 0 (infinity in the x-chart)
  const int deg = hi - lo;
  if (deg > 0) {
    // Companion matrix of sum_{k=lo}^{hi} h_k x^{k-lo}, monic after dividing by h_hi.
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -h[static_cast<std::size_t>(lo + i)] / h[static_cast<std::size_t>(hi)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("projective_preimages: root finding failed");
    for (Eigen::Index i = 0; i < deg; ++i) {
      const Complex x = es.eigenvalues()(i);
      if (std::abs(x) <= 1.0) push(x, 1.0);
      else push(1.0, 1.0 / x);
    }
  }
  return out;
}

std::vector<Point> brolin_sample(const PolynomialMap<Complex>& F_h, int depth, int count, std::uint64_t seed) {
  if (F_h.dimension() != 2) throw std::invalid_argument("brolin_sample: N must be 2");
  if (!F_h.is_homogeneous()) throw std::invalid_argument("brolin_sample: map must be homogeneous");
  if (F_h.degree() < 2) throw std::invalid_argument("brolin_sample: degree must be at least 2");
  if (depth < 0 || count < 1) throw std::invalid_argument("brolin_sample: need depth >= 0, count >= 1");

  Rng rng(seed);
  std::normal_distribution<double> g;
  auto generic_point = [&] {
    Point p(2);
    p << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    return Point(p / p.norm());
  };
  if (depth == 0) return {generic_point()};

  for (int restart = 0; restart < 16; ++restart) {
    try {
      std::vector<Point> out;
      out.reserve(static_cast<std::size_t>(count));
      Point q = generic_point();
      for (int step = 0; step < depth + count; ++step) {
        const auto pre = projective_preimages(F_h, q);
        std::uniform_int_distribution<std::size_t> pick(0, pre.size() - 1);
        q = pre[pick(rng)];
        if (step >= depth) out.push_back(q);
      }
      return out;
    } catch (const std::runtime_error&) {
      // exceptional point hit; restart from a fresh generic seed
    }
  }
  throw std::runtime_error("brolin_sample: repeated failures at exceptional points");
}

double bb_rhs(double res_abs, int d) {
  if (!(res_abs > 0)) throw NonRegularMap("bb_rhs: Res vanishes");
  return std::log(res_abs) / (d * (d - 1.0)) - 0.5;
}

BBReport bb_check(const PolynomialMap<Complex>& F_h, double res_abs, int samples, int depth, std::uint64_t seed,
                  int threads) {
  if (F_h.dimension() != 2 || !F_h.is_homogeneous()) throw std::invalid_argument("bb_check: need homogeneous F on C^2");
  if (samples < 1) throw std::invalid_argument("bb_check: samples must be positive");
  const CompiledMap map(F_h);

  constexpr int kChunks = 16;
  std::vector<double> sphere_sum(kChunks, 0.0), current_sum(kChunks, 0.0);
  std::vector<int> chunk_size(kChunks, samples / kChunks);
  for (int c = 0; c < samples % kChunks; ++c) ++chunk_size[static_cast<std::size_t>(c)];

  auto run_chunk = [&](int c) {
    const auto uc = static_cast<std::size_t>(c);
    const int count = chunk_size[uc];
    if (count == 0) return;
    Rng rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(c)));
    std::normal_distribution<double> g;
    double s = 0;
    for (int k = 0; k < count; ++k) {
      Point u(2);
      u << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      s += homogeneous_green(map, u / u.norm());
    }
    sphere_sum[uc] = s;
    double t = 0;
    for (const auto& q : brolin_sample(F_h, depth, count, derive_seed(seed, 2 * static_cast<std::uint64_t>(c) + 1)))
      t += homogeneous_green(map, q);
    current_sum[uc] = t;
  };

  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, kChunks);
  if (threads == 1) {
    for (int c = 0; c < kChunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int c = t; c < kChunks; c += threads) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  // depth = 0 yields one seed point per chunk rather than `count` samples.
  double sphere_total = 0, current_total = 0;
  int current_count = 0;
  for (int c = 0; c < kChunks; ++c) {
    sphere_total += sphere_sum[static_cast<std::size_t>(c)];
    current_total += current_sum[static_cast<std::size_t>(c)];
    if (chunk_size[static_cast<std::size_t>(c)] > 0) current_count += depth == 0 ? 1 : chunk_size[static_cast<std::size_t>(c)];
  }

  BBReport rep;
  rep.samples = samples;
  rep.depth = depth;
  rep.seed = seed;
  rep.res_abs = res_abs;
  rep.sphere_mean = sphere_total / samples;
  rep.current_mean = current_total / current_count;
  rep.lhs = rep.sphere_mean + rep.current_mean;
  rep.rhs = bb_rhs(res_abs, F_h.degree());
  rep.gap = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace caplab
