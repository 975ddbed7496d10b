#include "caplab/resultant.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace caplab {

MacaulayLayout macaulay_layout(int N, int d, std::vector<int> priority) {
  if (N <= 0 || d <= 0) throw std::invalid_argument("macaulay_layout: N and d must be positive");
  if (priority.empty()) {
    priority.resize(static_cast<std::size_t>(N));
    std::iota(priority.begin(), priority.end(), 0);
  }
  MacaulayLayout L;
  L.N = N;
  L.degree = d;
  L.critical_degree = N * (d - 1) + 1;
  L.priority = std::move(priority);
  L.monomials = monomials_of_degree(N, L.critical_degree);
  for (std::size_t r = 0; r < L.monomials.size(); ++r) {
    const Monomial& m = L.monomials[r];
    int owner = -1;
    int divisible = 0;
    for (int i : L.priority) {
      if (m[i] >= d) {
        ++divisible;
        if (owner < 0) owner = i;
      }
    }
    if (divisible > 1) L.denominator_index.push_back(static_cast<int>(r));
    L.owner.push_back(owner);
    L.shift.push_back(m.divided_by(Monomial::variable(N, owner, d)));
  }
  return L;
}

std::vector<std::vector<int>> variable_priorities(int N) {
  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

double condition_number(const Eigen::MatrixXcd& A) {
  if (A.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

Complex lu_determinant(const Eigen::MatrixXcd& A) {
  if (A.rows() == 0) return {1.0, 0.0};
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
}

constexpr double kIllConditioned = 1e10;

}  // namespace

NumericResultant resultant_numeric(const PolynomialMap<Complex>& F_h) {
  if (!F_h.is_homogeneous()) throw std::invalid_argument("resultant_numeric: map is not homogeneous");

  std::optional<MacaulayInstance<Complex>> best;
  double best_den_cond = std::numeric_limits<double>::infinity();
  for (const auto& priority : variable_priorities(F_h.dimension())) {
    auto inst = macaulay_instance(F_h, priority);
    const double c = condition_number(inst.denominator);
    if (c < best_den_cond) {
      best_den_cond = c;
      best = std::move(inst);
    }
    if (c < 1e3) break;
  }
  if (!best || !(best_den_cond < 1.0 / std::numeric_limits<double>::epsilon()))
    throw std::runtime_error("resultant_numeric: Macaulay denominator singular for every variable priority");

  NumericResultant out;
  out.value = lu_determinant(best->numerator) / lu_determinant(best->denominator);
  const double num_cond = condition_number(best->numerator);
  out.condition = std::max(num_cond, best_den_cond);
  out.ill_conditioned = !(out.condition < kIllConditioned);
  out.priority = best->layout.priority;
  return out;
}

Rational regular_resultant(const PolynomialMap<Rational>& F_h) {
  Rational r = resultant_exact(F_h);
  if (r == 0) throw NonRegularMap("map is not regular: Res(F_h) = 0");
  return r;
}

UltrametricValue padic_abs_resultant(const PolynomialMap<Rational>& F_h, std::uint64_t p) {
  return padic_abs(regular_resultant(F_h), p);
}

// ---------------------------------------------------------------------------

namespace {

using IntPoly = SparsePolynomial<Integer>;

struct DeterminantExpander {
  const std::vector<std::vector<IntPoly>>& rows;
  std::size_t max_terms;
  int dim;
  std::size_t largest = 0;
  std::vector<std::unordered_map<std::uint32_t, IntPoly>> memo;

  // Determinant of rows [r, n) restricted to the columns in `mask`.
  const IntPoly& minor(std::size_t r, std::uint32_t mask) {
    auto& level = memo[r];
    if (auto it = level.find(mask); it != level.end()) return it->second;
    IntPoly acc(dim);
    if (r == rows.size()) {
      acc = IntPoly::constant(dim, Integer(1));
    } else {
      int sign = 1;
      for (std::size_t c = 0; c < rows.size(); ++c) {
        if (!(mask & (1u << c))) continue;
        const IntPoly& entry = rows[r][c];
        if (!entry.is_zero()) {
          const IntPoly& sub = minor(r + 1, mask & ~(1u << c));
          if (!sub.is_zero()) {
            IntPoly term = entry * sub;
            if (sign < 0) acc -= term;
            else acc += term;
          }
        }
        sign = -sign;
      }
    }
    largest = std::max(largest, acc.term_count());
    if (acc.term_count() > max_terms)
      throw SymbolicBudgetExceeded("symbolic determinant: intermediate with " + std::to_string(acc.term_count()) +
                                       " terms exceeds budget",
                                   largest);
    return level.emplace(mask, std::move(acc)).first->second;
  }
};

// Polynomial in x,y,z whose coefficients are polynomials in the symbolic variables.
using FormCoeffs = std::map<Monomial, IntPoly, GrlexLess>;

void add_to(FormCoeffs& f, const Monomial& m, const IntPoly& c) {
  auto [it, inserted] = f.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (it->second.is_zero()) f.erase(it);
}

FormCoeffs multiply(const FormCoeffs& a, const FormCoeffs& b) {
  FormCoeffs out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_to(out, ma * mb, ca * cb);
  return out;
}

FormCoeffs subtract(FormCoeffs a, const FormCoeffs& b) {
  for (const auto& [m, c] : b) add_to(a, m, -c);
  return a;
}

FormCoeffs add(FormCoeffs a, const FormCoeffs& b) {
  for (const auto& [m, c] : b) add_to(a, m, c);
  return a;
}

FormCoeffs differentiate(const FormCoeffs& f, int var) {
  FormCoeffs out;
  for (const auto& [m, c] : f) {
    if (m[var] == 0) continue;
    std::vector<int> e = m.exponents();
    const int k = e[static_cast<std::size_t>(var)]--;
    add_to(out, Monomial(std::move(e)), c * Integer(k));
  }
  return out;
}

}  // namespace

SparsePolynomial<Integer> symbolic_determinant(const std::vector<std::vector<SparsePolynomial<Integer>>>& rows,
                                               std::size_t max_terms) {
  if (rows.empty()) throw std::invalid_argument("symbolic_determinant: empty matrix");
  if (rows.size() > 31) throw std::invalid_argument("symbolic_determinant: matrix too large");
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw std::invalid_argument("symbolic_determinant: matrix is not square");
  DeterminantExpander ex{rows, max_terms, rows[0][0].dimension(), 0, {}};
  ex.memo.resize(rows.size() + 1);
  const std::uint32_t full = (rows.size() == 32) ? ~0u : ((1u << rows.size()) - 1u);
  return ex.minor(0, full);
}

namespace {

constexpr int kGenericVars = 18;

// a_{i,k}: coefficient of the k-th degree-2 monomial (graded lex) in F_i.
IntPoly generic_coefficient(int i, int k) {
  IntPoly v(kGenericVars);
  v.add_term(Monomial::variable(kGenericVars, 6 * i + k), Integer(1));
  return v;
}

std::vector<Integer> pure_power_specialization() {
  // z_{i+1}^2 sits at graded-lex positions 0, 3, 5 among the degree-2 monomials.
  std::vector<Integer> values(kGenericVars, Integer(0));
  const int pos[] = {0, 3, 5};
  for (int i = 0; i < 3; ++i) values[static_cast<std::size_t>(6 * i + pos[i])] = 1;
  return values;
}

std::vector<std::string> generic_variable_names() {
  const char* names[] = {"x^2", "xy", "xz", "y^2", "yz", "z^2"};
  std::vector<std::string> out;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 6; ++k) out.push_back("a" + std::to_string(i + 1) + "[" + names[k] + "]");
  return out;
}

}  // namespace

SymbolicResultant resultant_generic_quadratic_ternary(const SymbolicResultantOptions& options) {
  const auto quad = monomials_of_degree(3, 2);
  std::map<Monomial, int, GrlexLess> quad_index;
  for (std::size_t k = 0; k < quad.size(); ++k) quad_index.emplace(quad[k], static_cast<int>(k));

  IntPoly numerator(kGenericVars), denominator(kGenericVars);
  bool found = false;
  for (const auto& priority : variable_priorities(3)) {
    const MacaulayLayout L = macaulay_layout(3, 2, priority);
    const std::size_t n = L.monomials.size();
    std::map<Monomial, std::size_t, GrlexLess> position;
    for (std::size_t k = 0; k < n; ++k) position.emplace(L.monomials[k], k);

    std::vector<std::vector<IntPoly>> rows(n, std::vector<IntPoly>(n, IntPoly(kGenericVars)));
    for (std::size_t r = 0; r < n; ++r)
      for (const auto& q : quad) rows[r][position.at(q * L.shift[r])] = generic_coefficient(L.owner[r], quad_index.at(q));

    std::vector<std::vector<IntPoly>> minor;
    for (int i : L.denominator_index) {
      std::vector<IntPoly> row;
      for (int j : L.denominator_index) row.push_back(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      minor.push_back(std::move(row));
    }
    denominator = symbolic_determinant(minor, options.max_terms);
    if (denominator.is_zero()) continue;
    numerator = symbolic_determinant(rows, options.max_terms);
    found = true;
    break;
  }
  if (!found) throw std::logic_error("generic resultant: Macaulay denominator vanished identically");

  SymbolicResultant out;
  out.variable_names = generic_variable_names();
  out.polynomial = exact_divide(std::move(numerator), denominator);
  out.term_count = out.polynomial.term_count();
  out.total_degree = out.polynomial.total_degree();
  out.homogeneous = out.polynomial.is_homogeneous();
  return out;
}

SparsePolynomial<Integer> sylvester_quadric_resultant(const SymbolicResultantOptions& options) {
  const auto quad = monomials_of_degree(3, 2);
  std::vector<FormCoeffs> F(3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 6; ++k) F[static_cast<std::size_t>(i)].emplace(quad[static_cast<std::size_t>(k)], generic_coefficient(i, k));

  FormCoeffs J_entries[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) J_entries[i][j] = differentiate(F[static_cast<std::size_t>(i)], j);
  auto cof = [&](int a, int b, int c, int d) {
    return subtract(multiply(J_entries[1][a], J_entries[2][b]), multiply(J_entries[1][c], J_entries[2][d]));
  };
  FormCoeffs J = multiply(J_entries[0][0], cof(1, 2, 2, 1));
  J = subtract(J, multiply(J_entries[0][1], cof(0, 2, 2, 0)));
  J = add(J, multiply(J_entries[0][2], cof(0, 1, 1, 0)));

  std::vector<FormCoeffs> row_forms = F;
  for (int v = 0; v < 3; ++v) row_forms.push_back(differentiate(J, v));

  std::vector<std::vector<IntPoly>> matrix;
  for (const auto& form : row_forms) {
    std::vector<IntPoly> row;
    for (const auto& m : quad) {
      auto it = form.find(m);
      row.push_back(it == form.end() ? IntPoly(kGenericVars) : it->second);
    }
    matrix.push_back(std::move(row));
  }

  const IntPoly det = symbolic_determinant(matrix, options.max_terms);
  const Integer normalizer = specialize(det, pure_power_specialization());
  if (normalizer == 0) throw std::logic_error("sylvester resultant: normalizer vanished");
  IntPoly res(kGenericVars);
  for (const auto& [m, c] : det.terms()) {
    if (c % normalizer != 0) throw std::logic_error("sylvester resultant: coefficient not divisible by normalizer");
    res.add_term(m, c / normalizer);
  }
  return res;
}

std::string serialize_terms(const SparsePolynomial<Integer>& p) {
  std::ostringstream os;
  for (const auto& [m, c] : p.terms()) {
    os << c.str() << " [";
    for (int i = 0; i < m.dimension(); ++i) os << (i ? " " : "") << m[i];
    os << "]\n";
  }
  return os.str();
}

Integer specialize(const SparsePolynomial<Integer>& p, const std::vector<Integer>& values) {
  return evaluate<Integer, Integer>(p, std::span<const Integer>(values));
}

}  // namespace caplab
