#include "caplab/polycore.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace caplab {

namespace {

// binomial(a, b) with overflow detection.
std::uint64_t binomial_checked(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= b; ++i) {
    r = r * (a - b + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial(" + std::to_string(a) + ", " + std::to_string(b) + "): instance too large");
  }
  return static_cast<std::uint64_t>(r);
}

void check_args(int N, int n) {
  if (N <= 0) throw std::invalid_argument("dimension N must be positive");
  if (n < 0) throw std::invalid_argument("degree n must be nonnegative");
}

void fill_degree(int N, int remaining, int pos, std::vector<int>& e, std::vector<Monomial>& out) {
  if (pos == N - 1) {
    e[static_cast<std::size_t>(pos)] = remaining;
    out.emplace_back(e);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    e[static_cast<std::size_t>(pos)] = k;
    fill_degree(N, remaining - k, pos + 1, e, out);
  }
}

std::vector<Complex> random_sphere_point(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> z(static_cast<std::size_t>(N));
  double s = 0;
  for (auto& c : z) {
    c = {g(rng), g(rng)};
    s += std::norm(c);
  }
  s = std::sqrt(s);
  for (auto& c : z) c /= s;
  return z;
}

double map_norm(const PolynomialMap<Complex>& F, const std::vector<Complex>& z) {
  const auto w = F(z);
  return norm2(w);
}

}  // namespace

std::uint64_t count_monomials(int N, int n) {
  check_args(N, n);
  return binomial_checked(static_cast<std::uint64_t>(N + n), static_cast<std::uint64_t>(N));
}

std::uint64_t vandermonde_degree(int N, int n) {
  check_args(N, n);
  const std::uint64_t b = binomial_checked(static_cast<std::uint64_t>(N + n), static_cast<std::uint64_t>(N + 1));
  if (b > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(N))
    throw std::overflow_error("vandermonde_degree: instance too large");
  return b * static_cast<std::uint64_t>(N);
}

std::vector<Monomial> monomials_of_degree(int N, int degree) {
  check_args(N, degree);
  std::vector<Monomial> out;
  std::vector<int> e(static_cast<std::size_t>(N), 0);
  fill_degree(N, degree, 0, e, out);
  return out;
}

std::vector<Monomial> monomials_up_to_degree(int N, int n) {
  check_args(N, n);
  std::vector<Monomial> out;
  out.reserve(count_monomials(N, n));
  for (int k = 0; k <= n; ++k) {
    auto layer = monomials_of_degree(N, k);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

double norm2(std::span<const Complex> z) {
  double s = 0;
  for (const auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

double min_leading_norm_on_sphere(const PolynomialMap<Complex>& F_h, int samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("min_leading_norm_on_sphere: samples must be positive");
  const int N = F_h.dimension();
  std::mt19937_64 rng(seed);

  // Keep a handful of the best starting points for the polish stage.
  constexpr std::size_t kKeep = 8;
  std::vector<std::pair<double, std::vector<Complex>>> best;
  for (int s = 0; s < samples; ++s) {
    auto z = random_sphere_point(N, rng);
    const double v = map_norm(F_h, z);
    if (best.size() < kKeep || v < best.back().first) {
      best.emplace_back(v, std::move(z));
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (best.size() > kKeep) best.pop_back();
    }
  }

  std::normal_distribution<double> g;
  double result = best.front().first;
  for (auto& [value, z] : best) {
    double step = 0.1;
    int stalls = 0;
    while (step > 1e-9 && stalls < 2000) {
      std::vector<Complex> trial(z);
      double s = 0;
      for (auto& c : trial) {
        c += step * Complex(g(rng), g(rng));
        s += std::norm(c);
      }
      s = std::sqrt(s);
      for (auto& c : trial) c /= s;
      const double v = map_norm(F_h, trial);
      if (v < value) {
        value = v;
        z = std::move(trial);
        stalls = 0;
      } else if (++stalls % 40 == 0) {
        step *= 0.5;
      }
    }
    result = std::min(result, value);
  }
  return result;
}

double max_leading_norm_on_sphere(const PolynomialMap<Complex>& F_h, int samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("max_leading_norm_on_sphere: samples must be positive");
  std::mt19937_64 rng(seed);
  double result = 0;
  for (int s = 0; s < samples; ++s) result = std::max(result, map_norm(F_h, random_sphere_point(F_h.dimension(), rng)));
  return result;
}

double lower_order_bound(const PolynomialMap<Complex>& F) {
  double total = 0;
  for (const auto& comp : F.components()) {
    double s = 0;
    for (const auto& [m, c] : comp.terms())
      if (m.degree() < F.degree()) s += std::abs(c);
    total += s * s;
  }
  return std::sqrt(total);
}

std::vector<double> lower_order_profile(const PolynomialMap<Complex>& F) {
  const int d = F.degree();
  std::vector<double> total(static_cast<std::size_t>(d), 0.0);
  for (const auto& comp : F.components()) {
    std::vector<double> s(static_cast<std::size_t>(d), 0.0);
    for (const auto& [m, c] : comp.terms())
      if (m.degree() < d) s[static_cast<std::size_t>(m.degree())] += std::abs(c);
    for (int k = 0; k < d; ++k) total[static_cast<std::size_t>(k)] += s[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)];
  }
  for (auto& t : total) t = std::sqrt(t);
  return total;
}

}  // namespace caplab
