#include "caplab/fekete.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "caplab/resultant.hpp"

namespace caplab {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

int default_thread_count() {
  if (const char* env = std::getenv("CAPLAB_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, std::numbers::sqrt2 / 2);
  return {g(rng), g(rng)};
}

Complex uniform_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, t);
}

}  // namespace

std::optional<Point> SetOracle::propose_near(const Point& z, double step, Rng& rng) const {
  if (perturb) return perturb(z, step, rng);
  // Halve the step a few times before giving up.
  for (int attempt = 0; attempt < 4; ++attempt, step *= 0.5) {
    Point w = z;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) += step * gaussian_complex(rng);
    if (contains(w)) return w;
  }
  return std::nullopt;
}

SetOracle polydisc_oracle(std::vector<double> radii) {
  if (radii.empty()) throw std::invalid_argument("polydisc_oracle: no radii");
  for (double r : radii)
    if (!(r > 0)) throw std::invalid_argument("polydisc_oracle: radii must be positive");
  SetOracle E;
  E.dimension = static_cast<int>(radii.size());
  double s = 0;
  for (double r : radii) s += r * r;
  E.bounding_radius = std::sqrt(s);
  std::ostringstream os;
  os << "polydisc(";
  for (std::size_t i = 0; i < radii.size(); ++i) os << (i ? "," : "") << radii[i];
  os << ")";
  E.description = os.str();
  E.contains = [radii](const Point& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i)
      if (std::abs(z(i)) > radii[static_cast<std::size_t>(i)]) return false;
    return true;
  };
  E.sample = [radii](Rng& rng) -> std::optional<Point> {
    Point z(static_cast<Eigen::Index>(radii.size()));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = uniform_disc(rng, radii[static_cast<std::size_t>(i)]);
    return z;
  };
  E.perturb = [radii](const Point& z, double step, Rng& rng) -> std::optional<Point> {
    Point w = z;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w(i) += step * gaussian_complex(rng);
      const double r = radii[static_cast<std::size_t>(i)];
      if (std::abs(w(i)) > r) w(i) *= r / std::abs(w(i));
    }
    return w;
  };
  return E;
}

SetOracle ball_oracle(int N, double radius) {
  if (N <= 0 || !(radius > 0)) throw std::invalid_argument("ball_oracle: bad parameters");
  SetOracle E;
  E.dimension = N;
  E.bounding_radius = radius;
  E.description = "ball(N=" + std::to_string(N) + ",r=" + std::to_string(radius) + ")";
  E.contains = [radius](const Point& z) { return z.norm() <= radius; };
  E.sample = [N, radius](Rng& rng) -> std::optional<Point> {
    Point z(N);
    for (int i = 0; i < N; ++i) z(i) = gaussian_complex(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Radial law of the uniform measure on the ball in R^{2N}.
    const double r = radius * std::pow(u(rng), 1.0 / (2.0 * N));
    return Point(z * (r / z.norm()));
  };
  E.perturb = [N, radius](const Point& z, double step, Rng& rng) -> std::optional<Point> {
    Point w = z;
    for (int i = 0; i < N; ++i) w(i) += step * gaussian_complex(rng);
    const double nw = w.norm();
    if (nw > radius) w *= radius / nw;
    return w;
  };
  return E;
}

SetOracle interval_oracle(double a, double b, int grid) {
  if (!(b > a) || grid < 1) throw std::invalid_argument("interval_oracle: need a < b and grid >= 1");
  SetOracle E;
  E.dimension = 1;
  E.bounding_radius = std::max(std::abs(a), std::abs(b));
  E.description = "interval(" + std::to_string(a) + "," + std::to_string(b) + ")";
  E.contains = [a, b](const Point& z) { return z(0).imag() == 0.0 && z(0).real() >= a && z(0).real() <= b; };
  E.sample = [a, b, grid](Rng& rng) -> std::optional<Point> {
    std::uniform_int_distribution<int> k(0, grid);
    Point z(1);
    z(0) = a + (b - a) * static_cast<double>(k(rng)) / grid;
    return z;
  };
  E.perturb = [a, b](const Point& z, double step, Rng& rng) -> std::optional<Point> {
    std::normal_distribution<double> g;
    Point w(1);
    w(0) = std::clamp(z(0).real() + step * g(rng), a, b);
    return w;
  };
  return E;
}

SetOracle points_oracle(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("points_oracle: empty point set");
  SetOracle E;
  E.dimension = static_cast<int>(points.front().size());
  double R = 0;
  for (const auto& p : points) {
    if (p.size() != E.dimension) throw std::invalid_argument("points_oracle: mixed dimensions");
    R = std::max(R, p.norm());
  }
  E.bounding_radius = std::max(R, 1e-300);
  E.description = "points(" + std::to_string(points.size()) + ")";
  E.contains = [points](const Point& z) {
    return std::any_of(points.begin(), points.end(), [&](const Point& p) { return (p - z).norm() <= 1e-12; });
  };
  E.sample = [points](Rng& rng) -> std::optional<Point> {
    std::uniform_int_distribution<std::size_t> k(0, points.size() - 1);
    return points[k(rng)];
  };
  E.perturb = [sampler = E.sample](const Point&, double, Rng& rng) { return sampler(rng); };
  return E;
}

// ---------------------------------------------------------------------------

ScaledBasis::ScaledBasis(int N_, int n_, Eigen::VectorXd s)
    : N(N_), n(n_), monomials(monomials_up_to_degree(N_, n_)), scales(std::move(s)) {
  if (scales.size() != N) throw std::invalid_argument("ScaledBasis: scale vector has wrong length");
  const double per_coordinate = static_cast<double>(vandermonde_degree(N, n)) / N;
  log_correction = per_coordinate * scales.array().log().sum();
}

Eigen::RowVectorXcd ScaledBasis::row(const Point& z) const {
  // powers(i, k) = (z_i / s_i)^k
  Eigen::MatrixXcd powers(N, n + 1);
  for (int i = 0; i < N; ++i) {
    const Complex w = z(i) / scales(i);
    powers(i, 0) = 1.0;
    for (int k = 1; k <= n; ++k) powers(i, k) = powers(i, k - 1) * w;
  }
  Eigen::RowVectorXcd out(size());
  for (Eigen::Index c = 0; c < size(); ++c) {
    const Monomial& m = monomials[static_cast<std::size_t>(c)];
    Complex v = 1.0;
    for (int i = 0; i < N; ++i) v *= powers(i, m[i]);
    out(c) = v;
  }
  return out;
}

Eigen::MatrixXcd ScaledBasis::matrix(const Eigen::MatrixXcd& points) const {
  Eigen::MatrixXcd A(points.rows(), size());
  for (Eigen::Index r = 0; r < points.rows(); ++r) A.row(r) = row(points.row(r).transpose());
  return A;
}

Eigen::VectorXd coordinate_scales(const Eigen::MatrixXcd& points) {
  Eigen::VectorXd s(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double m = points.rows() ? points.col(i).cwiseAbs().maxCoeff() : 0.0;
    s(i) = m > 0 ? m : 1.0;
  }
  return s;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logabsdet_scaled(const Eigen::MatrixXcd& A) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
  const auto& R = qr.matrixQR();
  const double lead = std::abs(R(0, 0));
  if (lead == 0.0) return kNegInf;
  const double tiny = lead * std::numeric_limits<double>::epsilon() * static_cast<double>(A.rows());
  double acc = 0;
  for (Eigen::Index k = 0; k < R.rows(); ++k) {
    const double v = std::abs(R(k, k));
    if (v <= tiny) return kNegInf;
    acc += std::log(v);
  }
  return acc;
}

}  // namespace

double vandermonde_logabsdet(const Eigen::MatrixXcd& points, int N, int n) {
  const auto M = static_cast<Eigen::Index>(count_monomials(N, n));
  if (points.rows() != M || points.cols() != N)
    throw std::invalid_argument("vandermonde_logabsdet: expected " + std::to_string(M) + " points in C^" +
                                std::to_string(N));
  const ScaledBasis basis(N, n, coordinate_scales(points));
  const double scaled = logabsdet_scaled(basis.matrix(points));
  return scaled == kNegInf ? kNegInf : scaled + basis.log_correction;
}

double FeketeConfiguration::dn() const {
  const auto D = vandermonde_degree(N, n);
  if (D == 0) return 1.0;  // n = 0: empty product
  return std::exp(log_abs_det / static_cast<double>(D));
}

// ---------------------------------------------------------------------------

FeketeConfiguration greedy_leja(const SetOracle& E, int n, int candidate_count, std::uint64_t seed) {
  const int N = E.dimension;
  const auto M = static_cast<Eigen::Index>(count_monomials(N, n));
  if (candidate_count < M)
    throw std::invalid_argument("greedy_leja: candidate_count " + std::to_string(candidate_count) + " < M(n) = " +
                                std::to_string(M));

  Rng rng(seed);
  constexpr int kAttempts = 3;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Eigen::MatrixXcd pool(candidate_count, N);
    Eigen::Index filled = 0;
    long failures = 0;
    while (filled < candidate_count) {
      if (auto z = E.sample(rng)) {
        pool.row(filled++) = z->transpose();
      } else if (++failures > 20L * candidate_count) {
        throw DegenerateOracle("greedy_leja: sampler for " + E.description + " exhausted its retry budget");
      }
    }

    const ScaledBasis basis(N, n, coordinate_scales(pool));
    const Eigen::MatrixXcd At = basis.matrix(pool).transpose();  // M x K
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(At);
    const auto& idx = qr.colsPermutation().indices();

    FeketeConfiguration cfg;
    cfg.N = N;
    cfg.n = n;
    cfg.points.resize(M, N);
    for (Eigen::Index k = 0; k < M; ++k) cfg.points.row(k) = pool.row(idx(k));
    cfg.log_abs_det = vandermonde_logabsdet(cfg.points, N, n);
    if (std::isfinite(cfg.log_abs_det)) return cfg;
  }
  throw DegenerateOracle("greedy_leja: no nondegenerate configuration for " + E.description + " at n = " +
                         std::to_string(n));
}

namespace {

struct ExchangeState {
  Eigen::MatrixXcd points;
  double log_abs_det;
};

ExchangeState exchange_run(const FeketeConfiguration& start, const SetOracle& E, int rounds, std::uint64_t seed) {
  const int N = start.N;
  const int n = start.n;
  ExchangeState st{start.points, start.log_abs_det};
  if (rounds <= 0 || !std::isfinite(start.log_abs_det) || st.points.rows() < 1) return st;

  Rng rng(seed);
  const ScaledBasis basis(N, n, coordinate_scales(st.points));
  Eigen::MatrixXcd V = basis.matrix(st.points);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
  const Eigen::Index M = V.rows();

  const double R = basis.scales.maxCoeff();
  double step = 0.1 * R;
  int stall = 0;
  std::uniform_int_distribution<Eigen::Index> pick(0, M - 1);

  // Returns true if the candidate replaced a point.
  auto try_candidate = [&](const Point& z) {
    const Eigen::RowVectorXcd row = basis.row(z);
    const Eigen::VectorXcd w = lu.transpose().solve(row.transpose());
    Eigen::Index j = 0;
    const double gain = w.cwiseAbs().maxCoeff(&j);
    if (!(gain > 1.0 + 1e-10) || !std::isfinite(gain)) return false;
    st.points.row(j) = z.transpose();
    V.row(j) = row;
    lu.compute(V);
    return true;
  };

  for (int round = 0; round < rounds; ++round) {
    if (auto z = E.sample(rng)) try_candidate(*z);

    const Point base = st.points.row(pick(rng)).transpose();
    bool improved = false;
    if (auto z = E.propose_near(base, step, rng)) improved = try_candidate(*z);
    if (improved) {
      step = std::min(step * 1.5, R);
      stall = 0;
    } else if (++stall >= 25) {
      step = std::max(step * 0.5, 1e-9 * R);
      stall = 0;
    }
  }
  st.log_abs_det = vandermonde_logabsdet(st.points, N, n);
  return st;
}

}  // namespace

FeketeConfiguration exchange_optimize(const FeketeConfiguration& config, const SetOracle& E, int rounds, int restarts,
                                      std::uint64_t seed, int threads) {
  if (rounds <= 0 || restarts <= 0) return config;
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, restarts);

  std::vector<ExchangeState> results(static_cast<std::size_t>(restarts));
  auto worker = [&](int t) {
    for (int r = t; r < restarts; r += threads)
      results[static_cast<std::size_t>(r)] =
          exchange_run(config, E, rounds, derive_seed(seed, static_cast<std::uint64_t>(r)));
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  FeketeConfiguration best = config;
  for (const auto& res : results) {
    if (res.log_abs_det > best.log_abs_det) {
      best.points = res.points;
      best.log_abs_det = res.log_abs_det;
    }
  }
  return best;
}

FeketeConfiguration dn_estimate(const SetOracle& E, int n, const FeketeBudget& budget, std::uint64_t seed) {
  const int M = static_cast<int>(count_monomials(E.dimension, n));
  const auto start = greedy_leja(E, n, std::max(budget.candidate_count, M), derive_seed(seed, 0));
  return exchange_optimize(start, E, budget.rounds, budget.restarts, derive_seed(seed, 1), budget.threads);
}

DiamSequence diam_sequence(const SetOracle& E, int n_max, const FeketeBudget& budget, std::uint64_t seed) {
  if (n_max < 1) throw std::invalid_argument("diam_sequence: n_max must be >= 1");
  DiamSequence seq;
  for (int n = 1; n <= n_max; ++n) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(n));
    const auto cfg = dn_estimate(E, n, budget, s);
    seq.seeds.push_back(s);
    seq.rows.push_back({n, count_monomials(E.dimension, n), vandermonde_degree(E.dimension, n), cfg.log_abs_det,
                        cfg.dn()});
  }
  seq.final_dn = seq.rows.back().dn;
  const std::size_t tail = std::min<std::size_t>(3, seq.rows.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = seq.rows.size() - tail; k < seq.rows.size(); ++k) {
    lo = std::min(lo, seq.rows[k].dn);
    hi = std::max(hi, seq.rows[k].dn);
  }
  seq.spread = hi - lo;
  return seq;
}

std::string to_csv(const DiamSequence& seq) {
  std::ostringstream os;
  os.precision(17);
  os << "n,M,D,log_abs_det,d_n\n";
  for (const auto& r : seq.rows) os << r.n << ',' << r.M << ',' << r.D << ',' << r.log_abs_det << ',' << r.dn << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

double growth_radius(double sphere_min, const std::vector<double>& lower_profile, int d, double target) {
  if (!(sphere_min > 0)) throw std::invalid_argument("growth_radius: sphere minimum must be positive");
  const double m = 0.9 * sphere_min;
  auto g = [&](double r) {
    double v = m * std::pow(r, d);
    for (std::size_t k = 0; k < lower_profile.size(); ++k) v -= lower_profile[k] * std::pow(r, static_cast<double>(k));
    return v;
  };
  double hi = 1.0;
  while (!(g(hi) > target)) {
    hi *= 2.0;
    if (hi > 1e150) throw std::runtime_error("growth_radius: no finite radius found");
  }
  double lo = hi / 2.0;
  if (hi == 1.0) return 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > target) hi = mid;
    else lo = mid;
  }
  return hi;
}

SetOracle preimage_oracle(const PolynomialMap<Complex>& F, const SetOracle& E, const PreimageOptions& options) {
  if (F.dimension() != E.dimension) throw std::invalid_argument("preimage_oracle: dimension mismatch");
  if (F == pure_power_map<Complex>(F.dimension(), 1)) return E;  // identity: F^{-1}E = E
  const auto F_h = leading_part(F);

  double coeff_max = 0;
  for (const auto& c : F_h.components())
    for (const auto& [m, v] : c.terms()) coeff_max = std::max(coeff_max, std::abs(v));
  const auto res = resultant_numeric(F_h);
  const double res_scale =
      std::pow(coeff_max, static_cast<double>(F.dimension()) * std::pow(F.degree(), F.dimension() - 1));
  if (std::abs(res.value) <= 1e-12 * res_scale) throw NonRegularMap("preimage_oracle: Res(F_h) vanishes");

  const double m = min_leading_norm_on_sphere(F_h, options.sphere_samples, options.sphere_seed);
  if (!(m > 1e-12)) throw NonRegularMap("preimage_oracle: sphere minimum of ||F_h|| is not positive");
  const double R = growth_radius(m, lower_order_profile(F), F.degree(), E.bounding_radius);

  auto image = [F](const Point& z) {
    const auto w = F(std::span<const Complex>(z.data(), static_cast<std::size_t>(z.size())));
    return Point(Eigen::Map<const Eigen::VectorXcd>(w.data(), static_cast<Eigen::Index>(w.size())));
  };

  SetOracle P;
  P.dimension = E.dimension;
  P.bounding_radius = R;
  P.description = "preimage(" + E.description + ")";
  P.contains = [image, inner = E.contains](const Point& z) { return inner(image(z)); };
  P.sample = [contains = P.contains, R, N = E.dimension, cap = options.rejection_cap](Rng& rng) -> std::optional<Point> {
    Point z(N);
    for (int attempt = 0; attempt < cap; ++attempt) {
      for (int i = 0; i < N; ++i) z(i) = uniform_disc(rng, R);
      if (contains(z)) return z;
    }
    return std::nullopt;
  };
  return P;
}

PullbackReport pullback_check(const PolynomialMap<Complex>& F, double res_abs, const SetOracle& E, int n_max,
                              const FeketeBudget& budget, std::uint64_t seed) {
  if (!(res_abs > 0)) throw NonRegularMap("pullback_check: |Res(F_h)| must be positive");
  const int N = F.dimension();
  const int d = F.degree();

  PullbackReport rep;
  rep.res_abs = res_abs;
  rep.sequence_E = diam_sequence(E, n_max, budget, seed);
  rep.sequence_preimage = diam_sequence(preimage_oracle(F, E), n_max, budget, seed);
  rep.sequence_leading = diam_sequence(preimage_oracle(leading_part(F), E), n_max, budget, seed);

  rep.dn_E = rep.sequence_E.final_dn;
  rep.lhs = rep.sequence_preimage.final_dn;
  rep.lhs_leading = rep.sequence_leading.final_dn;
  rep.rhs = std::pow(res_abs, -1.0 / (N * std::pow(d, N))) * std::pow(rep.dn_E, 1.0 / d);
  rep.log_gap = std::abs(std::log(rep.lhs / rep.rhs));
  rep.leading_log_gap = std::abs(std::log(rep.lhs) - std::log(rep.lhs_leading));
  return rep;
}

}  // namespace caplab
