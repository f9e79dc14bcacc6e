#pragma once

#include <cstdint>
#include <vector>

#include "factpat/counters.hpp"
#include "factpat/errors.hpp"
#include "factpat/factor.hpp"
#include "factpat/ff.hpp"
#include "factpat/poly.hpp"

namespace factpat {

/// Monic irreducibles of each degree 1..max_degree, in index order.
struct IrreducibleTable {
  std::uint32_t field = 0;
  unsigned max_degree = 0;
  std::vector<std::vector<Poly>> by_degree;  // by_degree[d]; entry 0 unused

  [[nodiscard]] const std::vector<Poly>& of_degree(unsigned d) const { return by_degree.at(d); }
  /// Entries of degree 1..d.
  [[nodiscard]] std::uint64_t entries_up_to(unsigned d) const {
    std::uint64_t n = 0;
    for (unsigned i = 1; i <= d && i <= max_degree; ++i) n += by_degree[i].size();
    return n;
  }
};

/// sum_{d <= max_degree} q^d, saturating.
inline std::uint64_t sieve_cost(std::uint64_t q, unsigned max_degree) {
  unsigned __int128 total = 0, qd = 1;
  for (unsigned d = 1; d <= max_degree; ++d) {
    qd *= q;
    total += qd;
    if (total > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(total);
}

/// Sieve of Eratosthenes over monic polynomials: degree-d entries left unmarked by all
/// products g*h with g irreducible of degree <= d/2.
inline IrreducibleTable sieve_irreducibles(const FieldCtx& F, unsigned max_degree,
                                           std::uint64_t budget = 50'000'000) {
  if (max_degree < 1) throw DomainError("sieve needs max_degree >= 1");
  if (sieve_cost(F.q(), max_degree) > budget) throw BudgetExceeded("sieve exceeds its budget");
  SilentScope quiet;
  const std::uint64_t q = F.q();
  IrreducibleTable t;
  t.field = F.id();
  t.max_degree = max_degree;
  t.by_degree.resize(max_degree + 1);
  F.with_arith([&](const auto& ar) {
    std::vector<std::uint64_t> prod, h;
    for (unsigned d = 1; d <= max_degree; ++d) {
      std::uint64_t n = 1;
      for (unsigned i = 0; i < d; ++i) n *= q;
      std::vector<bool> composite(n, false);
      for (unsigned a = 1; 2 * a <= d; ++a) {
        const unsigned b = d - a;
        std::uint64_t nh = 1;
        for (unsigned i = 0; i < b; ++i) nh *= q;
        for (const Poly& g : t.by_degree[a]) {
          const auto& gc = g.raw_coeffs();
          h.assign(b + 1, 0);
          h[b] = 1;
          for (std::uint64_t j = 0; j < nh; ++j) {
            std::uint64_t x = j;
            for (unsigned i = 0; i < b; ++i) {
              h[i] = x % q;
              x /= q;
            }
            prod.assign(d + 1, 0);
            detail::mul_school(ar, gc.data(), gc.size(), h.data(), h.size(), prod.data());
            std::uint64_t idx = 0;
            for (unsigned i = d; i-- > 0;) idx = idx * q + prod[i];
            composite[idx] = true;
          }
        }
      }
      for (std::uint64_t idx = 0; idx < n; ++idx)
        if (!composite[idx]) t.by_degree[d].push_back(monic_from_index(F, d, idx));
    }
  });
  return t;
}

/// Factorization by repeated trial division: linear factors found by evaluation, then
/// every sieve entry of degree d with 2d <= deg of the remaining cofactor, in index order.
/// Independent of factor(). The table must reach floor(deg f / 2).
inline Factorization oracle_factor(const FieldCtx& F, const Poly& f, const IrreducibleTable& table) {
  detail::require_monic(F, f, "oracle_factor");
  if (table.field != F.id()) throw FieldMismatch();
  if (table.max_degree < static_cast<unsigned>(f.degree()) / 2)
    throw DomainError("oracle_factor: sieve too shallow for degree " + std::to_string(f.degree()));
  SilentScope quiet;
  Factorization fz{F.id(), {}};
  F.with_arith([&](const auto& ar) {
    std::vector<std::uint64_t> g = f.raw_coeffs(), r, quo;
    // remainder of g by monic h into r, quotient into quo
    auto divide = [&](const std::vector<std::uint64_t>& h) {
      r = g;
      quo.assign(g.size() - h.size() + 1, 0);
      detail::reduce_by(ar, r, h.data(), h.size(), 1, quo.data());
      return r.empty();
    };
    for (const Poly& lin : table.of_degree(1)) {
      if (g.size() < 2) break;
      const std::uint64_t root = ar.neg(lin.raw(0));
      unsigned e = 0;
      while (g.size() >= 2) {
        std::uint64_t acc = g.back();  // Horner
        for (std::size_t i = g.size() - 1; i-- > 0;) acc = ar.add(ar.mul(acc, root), g[i]);
        if (acc != 0) break;
        divide(lin.raw_coeffs());
        g = quo;
        ++e;
      }
      if (e) fz.factors.emplace_back(lin, e);
    }
    for (unsigned d = 2; 2 * d + 1 <= g.size() && d <= table.max_degree; ++d) {
      for (const Poly& h : table.of_degree(d)) {
        if (2 * d + 1 > g.size()) break;
        unsigned e = 0;
        while (g.size() >= h.raw_coeffs().size() && divide(h.raw_coeffs())) {
          g = quo;
          ++e;
        }
        if (e) fz.factors.emplace_back(h, e);
      }
    }
    if (g.size() >= 2) fz.factors.emplace_back(Poly(F.id(), g), 1U);
  });
  sort_canonical(fz);
  return fz;
}

}  // namespace factpat
