#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/errors.hpp"
#include "factpat/ff.hpp"
#include "factpat/patterns.hpp"
#include "factpat/poly.hpp"

namespace factpat {

using PointVector = std::vector<FieldElement>;
using Matrix = std::vector<std::vector<FieldElement>>;

/// Pi_0..Pi_r at x, read off prod (1 + x_j t).
inline std::vector<FieldElement> elem_sym_all(const FieldCtx& F, const PointVector& x) {
  std::vector<FieldElement> e(x.size() + 1, F.zero());
  e[0] = F.one();
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t i = j + 1; i >= 1; --i) e[i] = F.add(e[i], F.mul(x[j], e[i - 1]));
  return e;
}

inline FieldElement elem_sym(const FieldCtx& F, const PointVector& x, std::size_t i) {
  if (i > x.size()) throw DomainError("elem_sym: index exceeds number of variables");
  return elem_sym_all(F, x)[i];
}

/// H_0..H_n at x by the prefix recurrence H_i(x_1..x_j) = H_i(x_1..x_(j-1)) + x_j H_(i-1)(x_1..x_j).
inline std::vector<FieldElement> complete_hom_all(const FieldCtx& F, const PointVector& x, std::size_t n) {
  std::vector<FieldElement> h(n + 1, F.zero());
  h[0] = F.one();
  for (const auto& xj : x)
    for (std::size_t i = 1; i <= n; ++i) h[i] = F.add(h[i], F.mul(xj, h[i - 1]));
  return h;
}

inline FieldElement complete_hom(const FieldCtx& F, const PointVector& x, std::size_t i) {
  return complete_hom_all(F, x, i)[i];
}

/// Determinant by Gaussian elimination.
inline FieldElement determinant(const FieldCtx& F, Matrix m) {
  const std::size_t n = m.size();
  FieldElement det = F.one();
  for (std::size_t c = 0; c < n; ++c) {
    if (m[c].size() != n) throw DomainError("determinant: matrix is not square");
    std::size_t piv = c;
    while (piv < n && m[piv][c].value == 0) ++piv;
    if (piv == n) return F.zero();
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = F.neg(det);
    }
    det = F.mul(det, m[c][c]);
    const FieldElement inv = F.inv(m[c][c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c].value == 0) continue;
      const FieldElement f = F.mul(m[r][c], inv);
      for (std::size_t k = c; k < n; ++k) m[r][k] = F.sub(m[r][k], F.mul(f, m[c][k]));
    }
  }
  return det;
}

/// n x n lower Hessenberg Toeplitz matrix: entry (i, j) = a[i - j] for i >= j,
/// `super` on the superdiagonal, zero above. a[0] is the diagonal band, a[n-1] the corner.
inline Matrix toeplitz_hessenberg_matrix(const FieldCtx& F, const std::vector<FieldElement>& a, FieldElement super) {
  const std::size_t n = a.size();
  Matrix m(n, std::vector<FieldElement>(n, F.zero()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m[i][j] = a[i - j];
    if (i + 1 < n) m[i][i + 1] = super;
  }
  return m;
}

/// det of toeplitz_hessenberg_matrix(a, super) via D_n = sum_i (-super)^(i-1) a_i D_(n-i).
inline FieldElement toeplitz_hessenberg_det(const FieldCtx& F, const std::vector<FieldElement>& a, FieldElement super) {
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("toeplitz_hessenberg_det: empty band vector");
  std::vector<FieldElement> d(n + 1, F.zero());
  d[0] = F.one();
  const FieldElement ms = F.neg(super);
  for (std::size_t m = 1; m <= n; ++m) {
    FieldElement acc = F.zero(), sign = F.one();
    for (std::size_t i = 1; i <= m; ++i) {
      acc = F.add(acc, F.mul(sign, F.mul(a[i - 1], d[m - i])));
      sign = F.mul(sign, ms);
    }
    d[m] = acc;
  }
  return d[n];
}

/// Superdiagonal 1.
inline FieldElement toeplitz_hessenberg_det(const FieldCtx& F, const std::vector<FieldElement>& a) {
  return toeplitz_hessenberg_det(F, a, F.one());
}

/// Multinomial (Trudi) expansion of the superdiagonal-1 determinant:
/// sum over t_1 + 2 t_2 + ... + n t_n = n of (-1)^(n - sum t) (sum t)! / prod t_i! * prod a_i^t_i.
inline FieldElement trudi_expansion(const FieldCtx& F, const std::vector<FieldElement>& a) {
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("trudi_expansion: empty band vector");
  FieldElement total = F.zero();
  std::vector<unsigned> t(n + 1, 0);
  auto leaf = [&]() {
    unsigned s = 0;
    BigInt denom = 1;
    FieldElement mon = F.one();
    for (std::size_t i = 1; i <= n; ++i) {
      s += t[i];
      denom *= factorial(t[i]);
      if (t[i] != 0) mon = F.mul(mon, F.pow(a[i - 1], std::uint64_t{t[i]}));
    }
    const BigInt coef = factorial(s) / denom;
    FieldElement c = F.from_int(static_cast<long long>(static_cast<std::uint64_t>(coef % BigInt(F.p()))));
    if ((n - s) % 2 == 1) c = F.neg(c);
    total = F.add(total, F.mul(c, mon));
  };
  auto rec = [&](auto&& self, std::size_t i, std::size_t rest) -> void {
    if (i == 0) {
      if (rest == 0) leaf();
      return;
    }
    for (std::size_t ti = 0; ti * i <= rest; ++ti) {
      t[i] = static_cast<unsigned>(ti);
      self(self, i - 1, rest - ti * i);
    }
    t[i] = 0;
  };
  rec(rec, n, n);
  return total;
}

/// det T_i = H_i, with T_i the i x i Toeplitz-Hessenberg matrix with bands (-1)^(j+1) Pi_j and -1 above.
inline bool trudi_check(const FieldCtx& F, const PointVector& x, std::size_t i) {
  if (i < 1 || i > x.size()) throw DomainError("trudi_check: index out of range");
  const auto e = elem_sym_all(F, x);
  std::vector<FieldElement> a(i);
  for (std::size_t j = 1; j <= i; ++j) a[j - 1] = (j % 2 == 1) ? e[j] : F.neg(e[j]);
  return toeplitz_hessenberg_det(F, a, F.neg(F.one())) == complete_hom(F, x, i);
}

/// sum_{i=0}^{k} (-1)^i H_i Pi_(k-i) = 0.
inline bool newton_check(const FieldCtx& F, const PointVector& x, std::size_t k) {
  if (k < 1) throw DomainError("newton_check: k must be positive");
  const auto e = elem_sym_all(F, x);
  const auto h = complete_hom_all(F, x, k);
  FieldElement s = F.zero();
  for (std::size_t i = 0; i <= k; ++i) {
    if (k - i >= e.size()) continue;  // Pi_j = 0 for j > r
    const FieldElement term = F.mul(h[i], e[k - i]);
    s = (i % 2 == 0) ? F.add(s, term) : F.sub(s, term);
  }
  return s.value == 0;
}

/// Jacobian of (Pi_1..Pi_r) in the factored form B_r * A_r: entry (i, j) is
/// (-1)^i dPi_i/dX_j, with dPi_i/dX_j = Pi_(i-1) - X_j Pi_(i-2) + ... + (-1)^(i-1) X_j^(i-1).
inline Matrix elem_sym_jacobian(const FieldCtx& F, const PointVector& x) {
  const std::size_t r = x.size();
  const auto e = elem_sym_all(F, x);
  Matrix J(r, std::vector<FieldElement>(r, F.zero()));
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 1; i <= r; ++i) {
      FieldElement d = F.zero(), xp = F.one();
      for (std::size_t t = 0; t < i; ++t) {
        const FieldElement term = F.mul(xp, e[i - 1 - t]);
        d = (t % 2 == 0) ? F.add(d, term) : F.sub(d, term);
        xp = F.mul(xp, x[j]);
      }
      J[i - 1][j] = (i % 2 == 0) ? d : F.neg(d);
    }
  }
  return J;
}

/// Delta_l = prod_{i<j, i,j != l} (x_j - x_i), l 1-based.
inline FieldElement vandermonde_without(const FieldCtx& F, const PointVector& x, std::size_t l) {
  FieldElement d = F.one();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (i + 1 != l && j + 1 != l) d = F.mul(d, F.sub(x[j], x[i]));
  return d;
}

/// det of the Jacobian with row r-k and column l removed, against (-1)^(r-k-1) Delta_l x_l^k.
inline bool minor_identity_check(const FieldCtx& F, const PointVector& x, std::size_t k, std::size_t l) {
  const std::size_t r = x.size();
  if (r < 2 || k > r - 1 || l < 1 || l > r) throw DomainError("minor_identity_check: index out of range");
  const Matrix J = elem_sym_jacobian(F, x);
  Matrix M;
  for (std::size_t i = 0; i < r; ++i) {
    if (i + 1 == r - k) continue;
    std::vector<FieldElement> row;
    for (std::size_t j = 0; j < r; ++j)
      if (j + 1 != l) row.push_back(J[i][j]);
    M.push_back(std::move(row));
  }
  FieldElement rhs = F.mul(vandermonde_without(F, x, l), k == 0 ? F.one() : F.pow(x[l - 1], std::uint64_t{k}));
  if ((r - k - 1) % 2 == 1) rhs = F.neg(rhs);
  return determinant(F, std::move(M)) == rhs;
}

/// Coefficient of T^j in prod (T - x_i) equals (-1)^(r-j) Pi_(r-j), expanded with poly mul.
inline bool coefficient_duality_check(const FieldCtx& F, const PointVector& x) {
  Poly f = Poly::one(F);
  for (const auto& xi : x) f = mul(F, f, Poly(F.id(), {F.neg(xi).value, 1}));
  const auto e = elem_sym_all(F, x);
  const std::size_t r = x.size();
  for (std::size_t j = 0; j <= r; ++j) {
    const FieldElement want = ((r - j) % 2 == 0) ? e[r - j] : F.neg(e[r - j]);
    if (f.coeff(j).value != want.value) return false;
  }
  return true;
}

/// Scaling band i by c^i multiplies the superdiagonal-1 determinant by c^n.
inline bool weighted_homogeneity_check(const FieldCtx& F, const std::vector<FieldElement>& a, FieldElement c) {
  std::vector<FieldElement> scaled(a.size());
  FieldElement ci = F.one();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ci = F.mul(ci, c);
    scaled[i] = F.mul(ci, a[i]);
  }
  return toeplitz_hessenberg_det(F, scaled) == F.mul(ci, toeplitz_hessenberg_det(F, a));
}

/// Chance that a nonzero polynomial of total degree `degree` vanishes at `trials`
/// independent uniform points of F_q^n (Schwartz-Zippel), as log2.
inline double false_accept_log2(std::uint64_t degree, std::uint64_t q, std::uint64_t trials) {
  if (degree == 0) return -INFINITY;
  return static_cast<double>(trials) * (std::log2(static_cast<double>(degree)) - std::log2(static_cast<double>(q)));
}

inline PointVector random_point(const FieldCtx& F, std::size_t r, Rng& rng) {
  PointVector x(r);
  for (auto& xi : x) xi = F.random_element(rng);
  return x;
}

}  // namespace factpat
