#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/counters.hpp"
#include "factpat/errors.hpp"
#include "factpat/ff.hpp"
#include "factpat/patterns.hpp"
#include "factpat/poly.hpp"
#include "factpat/rng.hpp"

namespace factpat {

/// f = prod f_i^e_i with distinct monic irreducible f_i in canonical order.
struct Factorization {
  std::uint32_t field = 0;
  std::vector<std::pair<Poly, unsigned>> factors;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Per-stage tallies: x1 ERF, x2 DDF, x3 EDF, x4 the division by the square-free
/// part plus the entire recursive factorization of the cofactor.
struct CostReport {
  CostTally x1, x2, x3, x4;
  unsigned r = 0;
  std::uint64_t q = 0;
  /// DDF main-loop iterations at the top level.
  std::uint64_t ddf_iterations = 0;

  [[nodiscard]] CostTally total() const { return x1 + x2 + x3 + x4; }

  /// Sums tallies; r and q are kept from the left operand.
  CostReport& operator+=(const CostReport& o) {
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    x4 += o.x4;
    ddf_iterations += o.ddf_iterations;
    if (r == 0) r = o.r;
    if (q == 0) q = o.q;
    return *this;
  }
  friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// A stage result plus the operations it performed.
template <class T>
struct Staged {
  T value;
  CostTally cost;
};

/// b(k) for k = 1..s: parts[k-1] is the product of the degree-k irreducible factors.
struct DdfOutput {
  std::vector<Poly> parts;
  unsigned s = 0;
};

inline void sort_canonical(std::vector<Poly>& v) { std::sort(v.begin(), v.end(), canonical_less); }

inline void sort_canonical(Factorization& fz) {
  std::sort(fz.factors.begin(), fz.factors.end(),
            [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
}

/// prod f_i^e_i.
inline Poly reconstruct(const FieldCtx& F, const Factorization& fz) {
  SilentScope quiet;
  Poly acc = Poly::one(F);
  for (const auto& [g, e] : fz.factors) acc = mul(F, acc, pow(F, g, e));
  return acc;
}

inline FactorizationPattern pattern_of(const Factorization& fz) {
  std::vector<unsigned> parts;
  for (const auto& [g, e] : fz.factors) parts.insert(parts.end(), e, static_cast<unsigned>(g.degree()));
  return FactorizationPattern::from_parts(parts);
}

/// "(c0,c1,...)^e * (...)^e" using the polynomial coefficient format.
inline std::string format(const FieldCtx& F, const Factorization& fz) {
  std::string s;
  for (const auto& [g, e] : fz.factors) {
    if (!s.empty()) s += " * ";
    s += "(" + format(F, g) + ")^" + std::to_string(e);
  }
  return s;
}

/// sum c_(pi) T^(pi) -> sum c_(pi)^(1/p) T^i. Every exponent of w must be a multiple of p.
inline Poly pth_root_poly(const FieldCtx& F, const Poly& w) {
  detail::check_poly(F, w);
  if (w.is_zero()) return w;
  const auto p = F.p();
  const auto d = static_cast<std::uint64_t>(w.degree());
  std::vector<std::uint64_t> v(d / p + 1, 0);
  for (std::uint64_t i = 0; i <= d; ++i) {
    const auto c = w.coeff(i);
    if (c.value == 0) continue;
    if (i % p != 0) throw DomainError("pth_root_poly: polynomial is not a p-th power");
    v[i / p] = F.pth_root(c).value;
  }
  return Poly(F.id(), std::move(v));
}

namespace detail {

inline void require_monic(const FieldCtx& F, const Poly& f, const char* what) {
  check_poly(F, f);
  if (f.degree() < 1) throw DomainError(std::string(what) + ": input must be nonconstant");
  if (!f.is_monic()) throw DomainError(std::string(what) + ": input must be monic");
}

inline Poly erf_rec(const FieldCtx& F, const Poly& f) {
  const Poly u = gcd(F, f, derivative(F, f));
  const Poly v = exact_div(F, f, u);
  // gcd(u, v^r) = gcd(u, v^r mod u); for constant u the residue is 0
  const Poly vr = u.degree() >= 1 ? powmod(F, v, static_cast<std::uint64_t>(f.degree()), u) : Poly(F.id());
  const Poly g2 = gcd(F, u, vr);
  const Poly w = g2.is_one() ? u : exact_div(F, u, g2);
  if (w.degree() < 1) return v;
  return mul(F, v, erf_rec(F, pth_root_poly(F, w)));
}

inline DdfOutput ddf_run(const FieldCtx& F, const Poly& a) {
  DdfOutput out;
  const Poly t = Poly::x(F);
  Poly h = t, g = a;
  while (!g.is_one()) {
    h = powmod(F, h, F.q(), g);
    Poly b = gcd(F, sub(F, h, t), g);
    g = exact_div(F, g, b);
    out.parts.push_back(std::move(b));
  }
  out.s = static_cast<unsigned>(out.parts.size());
  return out;
}

/// (q^k - 1) / 2, as a machine word when it fits.
template <class Fn>
decltype(auto) with_half_exponent(const FieldCtx& F, unsigned k, Fn&& fn) {
  unsigned __int128 qk = 1;
  bool fits = true;
  for (unsigned i = 0; i < k && fits; ++i) {
    qk *= F.q();
    if (qk >> 64) fits = false;
  }
  if (fits) return fn(static_cast<std::uint64_t>((qk - 1) / 2));
  const BigInt big = (big_pow(BigInt(F.q()), k) - 1) / 2;
  return fn(big);
}

inline Poly random_poly_exact_degree(const FieldCtx& F, unsigned d, Rng& rng) {
  std::vector<std::uint64_t> v(d + 1);
  for (unsigned i = 0; i < d; ++i) v[i] = F.random_element(rng).value;
  v[d] = F.random_nonzero(rng).value;
  return Poly(F.id(), std::move(v));
}

// One EDF round: the gcd d, or nullopt when it is trivial.
inline std::optional<Poly> edf_round(const FieldCtx& F, const Poly& c, unsigned k, Rng& rng) {
  const Poly h = random_poly_exact_degree(F, static_cast<unsigned>(c.degree() - 1), rng);
  const Poly g = with_half_exponent(F, k, [&](const auto& e) {
    return sub(F, powmod(F, h, e, c), Poly::one(F));
  });
  Poly d = gcd(F, g, c);
  if (d.degree() > 0 && d.degree() < c.degree()) return d;
  return std::nullopt;
}

inline void edf_rec(const FieldCtx& F, const Poly& c, unsigned k, Rng& rng, std::vector<Poly>& out) {
  if (c.degree() == static_cast<int>(k)) {
    out.push_back(c);
    return;
  }
  while (true) {
    if (auto d = edf_round(F, c, k, rng)) {
      const Poly rest = exact_div(F, c, *d);
      edf_rec(F, *d, k, rng, out);
      edf_rec(F, rest, k, rng, out);
      return;
    }
  }
}

inline void check_edf_args(const FieldCtx& F, const Poly& c, unsigned k) {
  require_monic(F, c, "edf");
  if (F.p() == 2) throw Unsupported("equal-degree factorization needs odd q");
  if (k == 0 || c.degree() % static_cast<int>(k) != 0) throw DomainError("edf: k must divide deg c");
}

}  // namespace detail

/// Square-free part of monic f (product of its distinct irreducible factors).
inline Staged<Poly> erf(const FieldCtx& F, const Poly& f) {
  detail::require_monic(F, f, "erf");
  Staged<Poly> res;
  {
    CounterScope scope(res.cost);
    res.value = detail::erf_rec(F, f);
  }
  counting::merge(res.cost);
  return res;
}

/// Distinct-degree factorization of monic square-free a. Runs exactly s iterations,
/// s the largest factor degree.
inline Staged<DdfOutput> ddf(const FieldCtx& F, const Poly& a) {
  detail::require_monic(F, a, "ddf");
  Staged<DdfOutput> res;
  {
    CounterScope scope(res.cost);
    res.value = detail::ddf_run(F, a);
  }
  counting::merge(res.cost);
  return res;
}

/// Splits c (all irreducible factors of degree k) into its factors, in canonical order.
inline Staged<std::vector<Poly>> edf(const FieldCtx& F, const Poly& c, unsigned k, Rng& rng) {
  detail::check_edf_args(F, c, k);
  Staged<std::vector<Poly>> res;
  {
    CounterScope scope(res.cost);
    detail::edf_rec(F, c, k, rng, res.value);
  }
  sort_canonical(res.value);
  counting::merge(res.cost);
  return res;
}

/// A single EDF round on c: the nontrivial gcd found, if any. Operations go to the active scope.
inline std::optional<Poly> edf_split_attempt(const FieldCtx& F, const Poly& c, unsigned k, Rng& rng) {
  detail::check_edf_args(F, c, k);
  if (c.degree() == static_cast<int>(k)) throw DomainError("edf_split_attempt: c is already irreducible");
  return detail::edf_round(F, c, k, rng);
}

namespace detail {

inline Factorization factor_rec(const FieldCtx& F, const Poly& f, Rng& rng, CostReport& rep) {
  rep.r = static_cast<unsigned>(f.degree());
  rep.q = F.q();
  Poly a;
  {
    CounterScope s(rep.x1);
    a = erf_rec(F, f);
  }
  DdfOutput dd;
  {
    CounterScope s(rep.x2);
    dd = ddf_run(F, a);
  }
  rep.ddf_iterations += dd.s;
  std::vector<Poly> irreducibles;
  {
    CounterScope s(rep.x3);
    for (unsigned k = 1; k <= dd.s; ++k) {
      const Poly& b = dd.parts[k - 1];
      if (b.degree() >= 1) edf_rec(F, b, k, rng, irreducibles);
    }
  }
  Factorization fz{F.id(), {}};
  for (auto& g : irreducibles) fz.factors.emplace_back(std::move(g), 1U);
  {
    CounterScope s(rep.x4);
    const Poly cof = exact_div(F, f, a);
    if (cof.degree() >= 1) {
      CostReport sub;
      const Factorization inner = factor_rec(F, cof, rng, sub);
      rep.x4 += sub.total();
      for (const auto& [g, e] : inner.factors) {
        auto it = std::find_if(fz.factors.begin(), fz.factors.end(), [&](const auto& x) { return x.first == g; });
        if (it == fz.factors.end())
          fz.factors.emplace_back(g, e);
        else
          it->second += e;
      }
    }
  }
  sort_canonical(fz);
  return fz;
}

}  // namespace detail

/// Complete factorization of monic f over F_q, q odd, with per-stage costs.
inline std::pair<Factorization, CostReport> factor(const FieldCtx& F, const Poly& f, Rng& rng) {
  detail::require_monic(F, f, "factor");
  if (F.p() == 2) throw Unsupported("factor needs odd q");
  CostReport rep;
  Factorization fz = detail::factor_rec(F, f, rng, rep);
  counting::merge(rep.total());
  return {std::move(fz), rep};
}

/// Rabin's test: T^(q^r) = T mod f and gcd(T^(q^(r/l)) - T, f) = 1 for every prime l | r.
inline bool is_irreducible(const FieldCtx& F, const Poly& f) {
  detail::require_monic(F, f, "is_irreducible");
  const auto r = static_cast<unsigned>(f.degree());
  if (r == 1) return true;
  const Poly t = Poly::x(F);
  std::vector<Poly> frob(r + 1);  // frob[i] = T^(q^i) mod f
  frob[0] = rem(F, t, f);
  for (unsigned i = 1; i <= r; ++i) frob[i] = powmod(F, frob[i - 1], F.q(), f);
  if (frob[r] != frob[0]) return false;
  unsigned n = r;
  for (unsigned l = 2; l <= n; ++l) {
    if (n % l != 0) continue;
    while (n % l == 0) n /= l;
    if (!gcd(F, sub(F, frob[r / l], t), f).is_one()) return false;
  }
  return true;
}

}  // namespace factpat
