#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "factpat/factpat.hpp"

namespace oracle {

using namespace factpat;

/// j-th principal subresultant coefficient as a Sylvester-minor determinant, f rows first.
inline FieldElement sylvester_psc(const FieldCtx& F, const Poly& f, const Poly& g, int j) {
  const int n = f.degree(), m = g.degree();
  const int rows = n + m - 2 * j;
  if (rows == 0) return F.one();
  Matrix M(rows, std::vector<FieldElement>(rows, F.zero()));
  // columns are the coefficients of T^(n+m-j-1) down to T^(j+1), then the T^j column
  auto fill = [&](int row, const Poly& p, int shift) {
    for (int c = 0; c < rows; ++c) {
      const int power = (c == rows - 1) ? j : n + m - j - 1 - c;
      const int idx = power - shift;
      if (idx >= 0 && idx <= p.degree()) M[row][c] = p.coeff(static_cast<std::size_t>(idx));
    }
  };
  int row = 0;
  for (int i = m - j - 1; i >= 0; --i) fill(row++, f, i);
  for (int i = n - j - 1; i >= 0; --i) fill(row++, g, i);
  return determinant(F, M);
}

/// Cycle pattern counts over all permutations of {0..r-1}.
inline std::map<FactorizationPattern, std::uint64_t, PatternOrder> brute_cycle_counts(unsigned r) {
  std::map<FactorizationPattern, std::uint64_t, PatternOrder> out;
  std::vector<unsigned> perm(r);
  std::iota(perm.begin(), perm.end(), 0U);
  do {
    ++out[cycle_pattern(perm)];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Square-free test by gcd with the derivative.
inline bool squarefree_by_gcd(const FieldCtx& F, const Poly& f) {
  const Poly d = derivative(F, f);
  if (d.is_zero()) return false;
  return gcd(F, f, d).is_one();
}

}  // namespace oracle
