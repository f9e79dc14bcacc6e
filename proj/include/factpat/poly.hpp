#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/counters.hpp"
#include "factpat/errors.hpp"
#include "factpat/ff.hpp"

namespace factpat {

/// Dense univariate polynomial over F_q. Coefficients are stored as raw packed
/// values in ascending degree; the zero polynomial has no coefficients.
class Poly {
 public:
  static constexpr int kZeroDegree = INT_MIN;

  Poly() = default;
  explicit Poly(std::uint32_t field) : field_(field) {}
  Poly(std::uint32_t field, std::vector<std::uint64_t> coeffs) : field_(field), c_(std::move(coeffs)) { trim(); }

  static Poly constant(FieldElement c) { return Poly(c.field, {c.value}); }
  static Poly monomial(FieldElement c, unsigned degree) {
    std::vector<std::uint64_t> v(degree + 1, 0);
    v[degree] = c.value;
    return Poly(c.field, std::move(v));
  }
  /// The indeterminate T.
  static Poly x(const FieldCtx& F) { return Poly(F.id(), {0, 1}); }
  static Poly one(const FieldCtx& F) { return Poly(F.id(), {1}); }

  [[nodiscard]] int degree() const noexcept { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
  [[nodiscard]] bool is_constant() const noexcept { return c_.size() <= 1; }
  [[nodiscard]] bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  [[nodiscard]] bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
  [[nodiscard]] std::uint32_t field() const noexcept { return field_; }

  [[nodiscard]] std::uint64_t raw(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  [[nodiscard]] FieldElement coeff(std::size_t i) const noexcept { return {raw(i), field_}; }
  [[nodiscard]] FieldElement lead() const {
    if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return {c_.back(), field_};
  }
  [[nodiscard]] const std::vector<std::uint64_t>& raw_coeffs() const noexcept { return c_; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::uint32_t field_ = 0;
  std::vector<std::uint64_t> c_;
};

/// Degree first, then coefficients compared from the top down; for monic polynomials of
/// one degree this is the order of monic_index.
inline bool canonical_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto& x = a.raw_coeffs();
  const auto& y = b.raw_coeffs();
  return std::lexicographical_compare(x.rbegin(), x.rend(), y.rbegin(), y.rend());
}

namespace detail {

inline constexpr std::size_t kKaratsubaThreshold = 32;

inline void check_poly(const FieldCtx& F, const Poly& f) {
  if (f.field() != F.id()) throw FieldMismatch();
}

// out[0 .. na+nb-1) += a * b. Returns multiplications performed.
template <class A>
std::uint64_t mul_school(const A& ar, const std::uint64_t* a, std::size_t na, const std::uint64_t* b,
                         std::size_t nb, std::uint64_t* out) {
  std::uint64_t mults = 0;
  for (std::size_t i = 0; i < na; ++i) {
    const std::uint64_t ai = a[i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < nb; ++j) out[i + j] = ar.add(out[i + j], ar.mul(ai, b[j]));
    mults += nb;
  }
  return mults;
}

template <class A>
std::uint64_t mul_kara(const A& ar, const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                       std::uint64_t* out) {
  if (na < kKaratsubaThreshold || nb < kKaratsubaThreshold) return mul_school(ar, a, na, b, nb, out);
  const std::size_t h = (std::max(na, nb) + 1) / 2;
  if (na <= h || nb <= h) return mul_school(ar, a, na, b, nb, out);
  std::uint64_t mults = 0;
  const std::size_t na1 = na - h, nb1 = nb - h;
  std::vector<std::uint64_t> z0(2 * h - 1, 0), z2(na1 + nb1 - 1, 0);
  mults += mul_kara(ar, a, h, b, h, z0.data());
  mults += mul_kara(ar, a + h, na1, b + h, nb1, z2.data());
  std::vector<std::uint64_t> sa(a, a + h), sb(b, b + h);
  for (std::size_t i = 0; i < na1; ++i) sa[i] = ar.add(sa[i], a[h + i]);
  for (std::size_t i = 0; i < nb1; ++i) sb[i] = ar.add(sb[i], b[h + i]);
  std::vector<std::uint64_t> z1(2 * h - 1, 0);
  mults += mul_kara(ar, sa.data(), h, sb.data(), h, z1.data());
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = ar.sub(z1[i], z0[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = ar.sub(z1[i], z2[i]);
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = ar.add(out[i], z0[i]);
  for (std::size_t i = 0; i < z1.size(); ++i) out[h + i] = ar.add(out[h + i], z1[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * h + i] = ar.add(out[2 * h + i], z2[i]);
  return mults;
}

inline void trim(std::vector<std::uint64_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// Reduces r modulo g (ng = deg g + 1 >= 1) in place; writes quotient digits into quo
// when non-null (size r.size() - ng + 1). Returns multiplications performed.
template <class A>
std::uint64_t reduce_by(const A& ar, std::vector<std::uint64_t>& r, const std::uint64_t* g, std::size_t ng,
                        std::uint64_t inv_lc, std::uint64_t* quo) {
  std::uint64_t mults = 0;
  const std::size_t dg = ng - 1;
  const bool monic = g[dg] == 1;
  for (std::size_t i = r.size(); i-- > dg;) {
    std::uint64_t c = r[i];
    if (c == 0) {
      if (quo) quo[i - dg] = 0;
      continue;
    }
    if (!monic) {
      c = ar.mul(c, inv_lc);
      ++mults;
    }
    if (quo) quo[i - dg] = c;
    for (std::size_t j = 0; j < dg; ++j) r[i - dg + j] = ar.sub(r[i - dg + j], ar.mul(c, g[j]));
    mults += dg;
    r[i] = 0;
  }
  if (r.size() > dg) r.resize(dg);
  trim(r);
  return mults;
}

}  // namespace detail

inline Poly add(const FieldCtx& F, const Poly& f, const Poly& g) {
  detail::check_poly(F, f);
  detail::check_poly(F, g);
  std::vector<std::uint64_t> v(std::max(f.raw_coeffs().size(), g.raw_coeffs().size()));
  F.with_arith([&](const auto& ar) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ar.add(f.raw(i), g.raw(i));
  });
  return Poly(F.id(), std::move(v));
}

inline Poly sub(const FieldCtx& F, const Poly& f, const Poly& g) {
  detail::check_poly(F, f);
  detail::check_poly(F, g);
  std::vector<std::uint64_t> v(std::max(f.raw_coeffs().size(), g.raw_coeffs().size()));
  F.with_arith([&](const auto& ar) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ar.sub(f.raw(i), g.raw(i));
  });
  return Poly(F.id(), std::move(v));
}

inline Poly neg(const FieldCtx& F, const Poly& f) { return sub(F, Poly(F.id()), f); }

/// c * f; counts deg f + 1 multiplications.
inline Poly scale(const FieldCtx& F, const Poly& f, FieldElement c) {
  detail::check_poly(F, f);
  F.check(c);
  std::vector<std::uint64_t> v = f.raw_coeffs();
  F.with_arith([&](const auto& ar) {
    for (auto& x : v) x = ar.mul(x, c.value);
  });
  counting::field_mults(v.size());
  return Poly(F.id(), std::move(v));
}

/// Product; schoolbook below the Karatsuba threshold.
inline Poly mul(const FieldCtx& F, const Poly& f, const Poly& g) {
  detail::check_poly(F, f);
  detail::check_poly(F, g);
  if (f.is_zero() || g.is_zero()) return Poly(F.id());
  const auto& a = f.raw_coeffs();
  const auto& b = g.raw_coeffs();
  std::vector<std::uint64_t> out(a.size() + b.size() - 1, 0);
  const std::uint64_t mults = F.with_arith(
      [&](const auto& ar) { return detail::mul_kara(ar, a.data(), a.size(), b.data(), b.size(), out.data()); });
  counting::field_mults(mults);
  return Poly(F.id(), std::move(out));
}

namespace detail {

// Remainder and quotient without touching divrem_calls.
inline std::pair<Poly, Poly> divrem_uncounted_call(const FieldCtx& F, const Poly& f, const Poly& g, bool want_quotient) {
  check_poly(F, f);
  check_poly(F, g);
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  std::vector<std::uint64_t> r = f.raw_coeffs();
  const auto& gc = g.raw_coeffs();
  if (r.size() < gc.size()) return {Poly(F.id()), f};
  std::uint64_t inv_lc = 1;
  if (gc.back() != 1) inv_lc = F.inv(g.lead()).value;
  std::vector<std::uint64_t> quo(want_quotient ? r.size() - gc.size() + 1 : 0);
  const std::uint64_t mults = F.with_arith([&](const auto& ar) {
    return reduce_by(ar, r, gc.data(), gc.size(), inv_lc, want_quotient ? quo.data() : nullptr);
  });
  counting::field_mults(mults);
  return {Poly(F.id(), std::move(quo)), Poly(F.id(), std::move(r))};
}

}  // namespace detail

/// (quotient, remainder) with f = quotient * g + remainder, deg remainder < deg g.
inline std::pair<Poly, Poly> divrem(const FieldCtx& F, const Poly& f, const Poly& g) {
  counting::divrem_call();
  return detail::divrem_uncounted_call(F, f, g, true);
}

inline Poly rem(const FieldCtx& F, const Poly& f, const Poly& g) {
  counting::divrem_call();
  return detail::divrem_uncounted_call(F, f, g, false).second;
}

/// f / g when g divides f; throws DomainError otherwise.
inline Poly exact_div(const FieldCtx& F, const Poly& f, const Poly& g) {
  auto [quo, r] = divrem(F, f, g);
  if (!r.is_zero()) throw DomainError("exact_div: divisor does not divide");
  return std::move(quo);
}

/// f scaled to leading coefficient 1 (zero stays zero).
inline Poly make_monic(const FieldCtx& F, const Poly& f) {
  detail::check_poly(F, f);
  if (f.is_zero() || f.is_monic()) return f;
  return scale(F, f, F.inv(f.lead()));
}

/// Monic gcd. Internal remainder steps count field operations but not divrem calls.
inline Poly gcd(const FieldCtx& F, const Poly& f, const Poly& g) {
  detail::check_poly(F, f);
  detail::check_poly(F, g);
  if (f.is_zero() && g.is_zero()) throw DomainError("gcd(0, 0) is undefined");
  counting::gcd_call();
  Poly a = f, b = g;
  while (!b.is_zero()) {
    Poly r = detail::divrem_uncounted_call(F, a, b, false).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

/// h^e mod g by left-to-right square-and-multiply; records floor(log2 e) + popcount(e) - 1
/// modular multiplications as powmod_mults.
template <class E>
Poly powmod(const FieldCtx& F, const Poly& h, const E& e, const Poly& g) {
  detail::check_poly(F, h);
  detail::check_poly(F, g);
  if (g.degree() < 1) throw DomainError("powmod: modulus must be nonconstant");
  const auto& gc = g.raw_coeffs();
  std::uint64_t inv_lc = 1;
  if (gc.back() != 1) inv_lc = F.inv(g.lead()).value;
  const unsigned len = bit_length(e);
  std::vector<std::uint64_t> result;
  const std::uint64_t mults = F.with_arith([&](const auto& ar) {
    std::uint64_t m = 0;
    std::vector<std::uint64_t> base = h.raw_coeffs();
    m += detail::reduce_by(ar, base, gc.data(), gc.size(), inv_lc, nullptr);
    if (len == 0) {
      result.assign(1, 1);
      return m;
    }
    std::vector<std::uint64_t> acc = base, prod;
    prod.reserve(2 * gc.size());
    auto mulmod = [&](const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
      if (x.empty() || y.empty()) {
        acc.clear();
        return;
      }
      prod.assign(x.size() + y.size() - 1, 0);
      m += detail::mul_kara(ar, x.data(), x.size(), y.data(), y.size(), prod.data());
      m += detail::reduce_by(ar, prod, gc.data(), gc.size(), inv_lc, nullptr);
      acc.swap(prod);
    };
    for (unsigned i = len - 1; i-- > 0;) {
      mulmod(acc, acc);
      if (test_bit(e, i)) mulmod(acc, base);
    }
    result = std::move(acc);
    return m;
  });
  counting::field_mults(mults);
  counting::powmod_mults(square_multiply_count(e));
  return Poly(F.id(), std::move(result));
}

/// Formal derivative.
inline Poly derivative(const FieldCtx& F, const Poly& f) {
  detail::check_poly(F, f);
  const auto& c = f.raw_coeffs();
  if (c.size() <= 1) return Poly(F.id());
  std::vector<std::uint64_t> v(c.size() - 1);
  F.with_arith([&](const auto& ar) {
    for (std::size_t i = 1; i < c.size(); ++i) v[i - 1] = ar.mul(ar.from_uint(i), c[i]);
  });
  return Poly(F.id(), std::move(v));
}

/// f(a) by Horner; counts deg f multiplications.
inline FieldElement evaluate(const FieldCtx& F, const Poly& f, FieldElement a) {
  detail::check_poly(F, f);
  F.check(a);
  const auto& c = f.raw_coeffs();
  if (c.empty()) return F.zero();
  const std::uint64_t v = F.with_arith([&](const auto& ar) {
    std::uint64_t acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = ar.add(ar.mul(acc, a.value), c[i]);
    return acc;
  });
  counting::field_mults(c.size() - 1);
  return {v, F.id()};
}

/// f^e without reduction.
inline Poly pow(const FieldCtx& F, const Poly& f, unsigned e) {
  Poly result = Poly::one(F), base = f;
  while (e != 0) {
    if (e & 1U) result = mul(F, result, base);
    e >>= 1;
    if (e != 0) base = mul(F, base, base);
  }
  return result;
}

/// Principal subresultant coefficient psc_j(f, g), normalized as the determinant of the
/// Sylvester-type submatrix with the rows of f first. Computed from the Euclidean
/// remainder sequence R0 = f, R1 = g, R(i+1) = R(i-1) mod R(i).
inline FieldElement principal_subresultant(const FieldCtx& F, const Poly& f, const Poly& g, int j) {
  detail::check_poly(F, f);
  detail::check_poly(F, g);
  if (f.is_zero() || g.is_zero()) throw DomainError("subresultant of the zero polynomial");
  const int n = f.degree(), m = g.degree();
  if (j < 0 || j > std::min(n, m)) throw DomainError("subresultant index out of range");
  if (n < m) {
    const FieldElement s = principal_subresultant(F, g, f, j);
    return ((n - j) * (m - j)) % 2 == 0 ? s : F.neg(s);
  }
  std::vector<Poly> seq{f, g};
  while (seq.back().degree() > j) {
    Poly r = detail::divrem_uncounted_call(F, seq[seq.size() - 2], seq.back(), false).second;
    if (r.is_zero()) break;
    seq.push_back(std::move(r));
  }
  const std::size_t i = seq.size() - 1;
  if (seq[i].degree() != j) return F.zero();
  auto deg = [&](std::size_t k) { return static_cast<unsigned>(seq[k].degree()); };
  FieldElement acc = F.one();
  bool negate = false;
  for (std::size_t k = 1; k < i; ++k) {
    if (((deg(k - 1) - deg(i)) * (deg(k) - deg(i))) % 2 == 1) negate = !negate;
    acc = F.mul(acc, F.pow(seq[k].lead(), std::uint64_t{deg(k - 1) - deg(k + 1)}));
  }
  if (deg(i - 1) != deg(i)) acc = F.mul(acc, F.pow(seq[i].lead(), std::uint64_t{deg(i - 1) - deg(i)}));
  return negate ? F.neg(acc) : acc;
}

/// Res(f, g) = psc_0(f, g).
inline FieldElement resultant(const FieldCtx& F, const Poly& f, const Poly& g) {
  return principal_subresultant(F, f, g, 0);
}

/// Res(f, f'); zero when f' vanishes identically.
inline FieldElement discriminant(const FieldCtx& F, const Poly& f) {
  detail::check_poly(F, f);
  if (f.degree() < 1) throw DomainError("discriminant of a constant");
  const Poly d = derivative(F, f);
  if (d.is_zero()) return F.zero();
  return resultant(F, f, d);
}

/// psc_1(f, f'): the first subresultant coefficient. Zero when deg f' < 1.
inline FieldElement subdiscriminant1(const FieldCtx& F, const Poly& f) {
  detail::check_poly(F, f);
  if (f.degree() < 2) throw DomainError("first subdiscriminant needs degree >= 2");
  const Poly d = derivative(F, f);
  if (d.degree() < 1) return F.zero();
  return principal_subresultant(F, f, d, 1);
}

/// Monic polynomial of degree d whose lower coefficients are the base-q digits of
/// `index` (a_0 least significant). Index order is the canonical enumeration order.
inline Poly monic_from_index(const FieldCtx& F, unsigned d, std::uint64_t index) {
  std::vector<std::uint64_t> v(d + 1, 0);
  for (unsigned i = 0; i < d; ++i) {
    v[i] = index % F.q();
    index /= F.q();
  }
  v[d] = 1;
  return Poly(F.id(), std::move(v));
}

/// Inverse of monic_from_index for monic f.
inline std::uint64_t monic_index(const FieldCtx& F, const Poly& f) {
  std::uint64_t idx = 0;
  for (int i = f.degree() - 1; i >= 0; --i) idx = idx * F.q() + f.raw(static_cast<std::size_t>(i));
  return idx;
}

/// Text form: comma-separated coefficients in ascending degree ("1,0,1" is T^2+1);
/// extension-field coefficients are ';'-separated coordinates. Zero prints as "0".
inline std::string format(const FieldCtx& F, const Poly& f) {
  detail::check_poly(F, f);
  if (f.is_zero()) return "0";
  std::string s;
  for (int i = 0; i <= f.degree(); ++i) {
    if (i) s += ',';
    s += F.format(f.coeff(static_cast<std::size_t>(i)));
  }
  return s;
}

inline Poly parse_poly(const FieldCtx& F, std::string_view text) {
  std::vector<std::uint64_t> v;
  std::size_t pos = 0;
  if (text.find_first_not_of(" \t") == std::string_view::npos) throw ParseError("empty polynomial");
  while (true) {
    const std::size_t end = text.find(',', pos);
    const auto tok = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    v.push_back(F.parse_element(tok).value);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return Poly(F.id(), std::move(v));
}

/// Human-readable form such as "T^2 + 3*T + 1" (prime fields) for diagnostics.
inline std::string pretty(const FieldCtx& F, const Poly& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (int i = f.degree(); i >= 0; --i) {
    const auto c = f.coeff(static_cast<std::size_t>(i));
    if (c.value == 0) continue;
    if (!s.empty()) s += " + ";
    const std::string cs = F.is_prime_field() ? F.format(c) : "(" + F.format(c) + ")";
    if (i == 0)
      s += cs;
    else
      s += (c.value == 1 ? "" : cs + "*") + std::string("T") + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return s;
}

}  // namespace factpat
