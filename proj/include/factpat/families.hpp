#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/errors.hpp"
#include "factpat/ff.hpp"
#include "factpat/poly.hpp"
#include "factpat/rng.hpp"
#include "factpat/symfun.hpp"

namespace factpat {

enum class FamilyKind { PrescribedLinear, TrinomialPlusOne, ToeplitzHessenberg, ExplicitFilter };

inline const char* kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::PrescribedLinear: return "prescribed";
    case FamilyKind::TrinomialPlusOne: return "trinomial";
    case FamilyKind::ToeplitzHessenberg: return "toephess";
    case FamilyKind::ExplicitFilter: return "filter";
  }
  return "?";
}

using MemberPredicate = std::function<bool(const FieldCtx&, const Poly&)>;

/// A family of monic polynomials of degree `degree` cut out by m constraints.
/// wt_degrees feed delta and D of the pattern bounds; plain_degrees feed delta_G.
struct FamilySpec {
  FamilyKind kind = FamilyKind::ExplicitFilter;
  unsigned degree = 0;
  unsigned m = 0;
  std::optional<unsigned> excluded_index;
  std::vector<unsigned> wt_degrees;
  std::vector<unsigned> plain_degrees;
  /// Hypotheses established for the built-in kinds; false for user filters.
  bool verified = false;
  std::string descriptor;
  std::vector<std::string> notes;

  std::map<unsigned, std::uint64_t> prescribed;  // position -> packed value
  unsigned s = 0;                                // trinomial: deg g <= s - 1
  unsigned band = 0;                             // toephess: G has r = band bands
  MemberPredicate predicate;                     // filter

  [[nodiscard]] BigInt delta() const {
    BigInt d = 1;
    for (auto w : wt_degrees) d *= w;
    return d;
  }
  [[nodiscard]] BigInt D() const {
    BigInt d = 0;
    for (auto w : wt_degrees) d += BigInt(w) - 1;
    return d;
  }
  [[nodiscard]] BigInt delta_G() const {
    BigInt d = 1;
    for (auto w : plain_degrees) d *= w;
    return d;
  }

  /// Coefficient positions enumerated directly, in digit order of member indices.
  [[nodiscard]] std::vector<unsigned> free_positions() const {
    std::vector<unsigned> pos;
    switch (kind) {
      case FamilyKind::PrescribedLinear:
        for (unsigned j = 0; j < degree; ++j)
          if (!prescribed.count(j)) pos.push_back(j);
        break;
      case FamilyKind::TrinomialPlusOne:
        for (unsigned j = 1; j <= s; ++j) pos.push_back(j);
        break;
      case FamilyKind::ToeplitzHessenberg:
        pos.push_back(0);
        for (unsigned j = 2; j < degree; ++j) pos.push_back(j);
        break;
      case FamilyKind::ExplicitFilter:
        for (unsigned j = 0; j < degree; ++j) pos.push_back(j);
        break;
    }
    return pos;
  }
};

/// a_j = v for each (j, v); positions must lie in 2..r-1.
inline FamilySpec family_prescribed_linear(unsigned r, const std::map<unsigned, std::uint64_t>& values) {
  if (values.empty()) throw DomainError("prescribed family needs at least one prescribed coefficient");
  if (values.size() >= r) throw DomainError("prescribed family needs m < r");
  FamilySpec f;
  f.kind = FamilyKind::PrescribedLinear;
  f.degree = r;
  f.m = static_cast<unsigned>(values.size());
  f.excluded_index = 0;
  f.verified = true;
  f.prescribed = values;
  f.descriptor = "prescribed:r=" + std::to_string(r);
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    const auto [j, v] = *it;
    if (j < 2 || j >= r) throw DomainError("prescribed position a" + std::to_string(j) + " outside 2..r-1");
    f.wt_degrees.push_back(r - j);
    f.plain_degrees.push_back(1);
    f.descriptor += ";a" + std::to_string(j) + "=" + std::to_string(v);
  }
  const unsigned n = values.begin()->first;
  if (n > r - f.m) f.notes.push_back("lowest prescribed position exceeds r - m");
  return f;
}

/// T^r + g(T) T + 1 with deg g <= s - 1, 3 <= s <= r - 2.
inline FamilySpec family_trinomial_plus_one(unsigned r, unsigned s) {
  if (s < 3 || s + 2 > r) throw DomainError("trinomial family needs 3 <= s <= r - 2");
  FamilySpec f;
  f.kind = FamilyKind::TrinomialPlusOne;
  f.degree = r;
  f.m = r - s;
  f.s = s;
  f.excluded_index = 1;
  f.verified = true;
  f.descriptor = "trinomial:r=" + std::to_string(r) + ";s=" + std::to_string(s);
  f.wt_degrees.push_back(r);
  for (unsigned w = r - s - 1; w >= 1; --w) f.wt_degrees.push_back(w);
  f.plain_degrees.assign(f.m, 1);
  return f;
}

/// T^(r+1) + a_r T^r + ... + a_0 with G(a_r, ..., a_1) = 0, G the r x r Toeplitz-Hessenberg
/// determinant with a_r on the diagonal, a_1 in the corner and 1 above; r even.
inline FamilySpec family_toeplitz_hessenberg(unsigned r) {
  if (r < 2 || r % 2 != 0) throw DomainError("Toeplitz-Hessenberg family needs even r >= 2");
  FamilySpec f;
  f.kind = FamilyKind::ToeplitzHessenberg;
  f.degree = r + 1;
  f.m = 1;
  f.band = r;
  f.excluded_index = 0;
  f.verified = true;
  f.descriptor = "toephess:r=" + std::to_string(r);
  f.wt_degrees = {r};
  f.plain_degrees = {r};
  return f;
}

/// User-supplied membership test. m, weighted and plain degrees are taken on trust;
/// m = 0 (no constraints) is the full set F_q[T]_r.
inline FamilySpec family_explicit_filter(unsigned r, MemberPredicate pred, unsigned m = 0,
                                         std::vector<unsigned> wt_degrees = {},
                                         std::vector<unsigned> plain_degrees = {}, std::string descriptor = {}) {
  if (r < 1) throw DomainError("filter family needs r >= 1");
  if (m >= r) throw DomainError("filter family needs m < r");
  if (wt_degrees.empty()) wt_degrees.assign(m, 1);
  if (plain_degrees.empty()) plain_degrees.assign(m, 1);
  if (wt_degrees.size() != m || plain_degrees.size() != m)
    throw DomainError("filter family needs one weighted and plain degree per constraint");
  FamilySpec f;
  f.kind = FamilyKind::ExplicitFilter;
  f.degree = r;
  f.m = m;
  f.predicate = pred ? std::move(pred) : MemberPredicate([](const FieldCtx&, const Poly&) { return true; });
  f.wt_degrees = std::move(wt_degrees);
  f.plain_degrees = std::move(plain_degrees);
  f.verified = m == 0;
  f.descriptor = descriptor.empty() ? "filter:r=" + std::to_string(r) + ";m=" + std::to_string(m) : descriptor;
  return f;
}

/// Value of G at the member's coefficients (zero exactly on members).
inline FieldElement toephess_constraint(const FieldCtx& F, unsigned r, const Poly& f) {
  std::vector<FieldElement> bands(r);
  for (unsigned i = 1; i <= r; ++i) bands[i - 1] = f.coeff(r + 1 - i);
  return toeplitz_hessenberg_det(F, bands);
}

/// Field-dependent hypotheses of the built-in kinds that fail for F; empty when all hold.
inline std::vector<std::string> hypothesis_failures(const FamilySpec& spec, const FieldCtx& F) {
  std::vector<std::string> out;
  const std::uint64_t p = F.p();
  auto divides = [p](std::uint64_t n) { return n % p == 0; };
  switch (spec.kind) {
    case FamilyKind::PrescribedLinear: {
      if (p <= 3) out.push_back("characteristic must exceed 3");
      const unsigned n = spec.prescribed.begin()->first;
      if (n > spec.degree - spec.m) out.push_back("lowest prescribed position exceeds r - m");
      if (n == 2 && divides(static_cast<std::uint64_t>(spec.degree) * (spec.degree - 1)))
        out.push_back("a2 is prescribed and the characteristic divides r(r-1)");
      break;
    }
    case FamilyKind::TrinomialPlusOne:
      if (p <= 3) out.push_back("characteristic must exceed 3");
      break;
    case FamilyKind::ToeplitzHessenberg: {
      if (p <= 3) out.push_back("characteristic must exceed 3");
      const unsigned r = spec.band;
      const BigInt c = BigInt(r - 1) * (r + 1) * (big_pow(BigInt(r - 1), r - 1) + big_pow(BigInt(r), r));
      if (c % p == 0) out.push_back("characteristic divides (r-1)(r+1)((r-1)^(r-1)+r^r)");
      break;
    }
    case FamilyKind::ExplicitFilter:
      if (spec.m > 0) out.push_back("user-supplied constraints are unverified");
      break;
  }
  return out;
}

/// Number of member indices: q^(#free positions). Throws BudgetExceeded beyond `budget`.
inline std::uint64_t index_count(const FamilySpec& spec, const FieldCtx& F, std::uint64_t budget = 100'000'000) {
  const auto nf = spec.free_positions().size();
  unsigned __int128 n = 1;
  for (std::size_t i = 0; i < nf; ++i) {
    n *= F.q();
    if (n > budget) throw BudgetExceeded("family enumeration exceeds the budget of " + std::to_string(budget));
  }
  return static_cast<std::uint64_t>(n);
}

/// Exact member count when it is determined by the parametrization: q^(r-m).
inline std::optional<BigInt> exact_size(const FamilySpec& spec, const FieldCtx& F) {
  if (spec.kind == FamilyKind::ExplicitFilter && spec.m > 0) return std::nullopt;
  return big_pow(BigInt(F.q()), spec.degree - spec.m);
}

namespace detail {

inline Poly assemble_member(const FamilySpec& spec, const FieldCtx& F, const std::vector<unsigned>& pos,
                            const std::vector<std::uint64_t>& digits) {
  std::vector<std::uint64_t> c(spec.degree + 1, 0);
  c[spec.degree] = 1;
  for (std::size_t i = 0; i < pos.size(); ++i) c[pos[i]] = digits[i];
  switch (spec.kind) {
    case FamilyKind::PrescribedLinear:
      for (const auto& [j, v] : spec.prescribed) c[j] = F.element(v).value;
      break;
    case FamilyKind::TrinomialPlusOne:
      c[0] = 1;
      break;
    case FamilyKind::ToeplitzHessenberg: {
      // G = (-1)^(r-1) A_1 + G|_(A_1=0)
      const unsigned r = spec.band;
      Poly partial(F.id(), c);
      const FieldElement g0 = toephess_constraint(F, r, partial);
      c[1] = (r % 2 == 0 ? g0 : F.neg(g0)).value;
      break;
    }
    case FamilyKind::ExplicitFilter:
      break;
  }
  return Poly(F.id(), std::move(c));
}

}  // namespace detail

/// Member for free-coordinate index `index` (base-q digits in free_positions order), or
/// nullopt when a filter rejects it.
inline std::optional<Poly> member_at(const FamilySpec& spec, const FieldCtx& F, std::uint64_t index) {
  const auto pos = spec.free_positions();
  std::vector<std::uint64_t> digits(pos.size());
  for (auto& d : digits) {
    d = index % F.q();
    index /= F.q();
  }
  Poly f = detail::assemble_member(spec, F, pos, digits);
  if (spec.kind == FamilyKind::ExplicitFilter && !spec.predicate(F, f)) return std::nullopt;
  return f;
}

/// Membership test from the defining constraints.
inline bool is_member(const FamilySpec& spec, const FieldCtx& F, const Poly& f) {
  if (f.field() != F.id()) throw FieldMismatch();
  if (f.degree() != static_cast<int>(spec.degree) || !f.is_monic()) return false;
  switch (spec.kind) {
    case FamilyKind::PrescribedLinear:
      for (const auto& [j, v] : spec.prescribed)
        if (f.raw(j) != v) return false;
      return true;
    case FamilyKind::TrinomialPlusOne:
      if (f.raw(0) != 1) return false;
      for (unsigned j = spec.s + 1; j < spec.degree; ++j)
        if (f.raw(j) != 0) return false;
      return true;
    case FamilyKind::ToeplitzHessenberg:
      return toephess_constraint(F, spec.band, f).value == 0;
    case FamilyKind::ExplicitFilter:
      return spec.predicate(F, f);
  }
  return false;
}

/// Calls fn(member) for every member in index order; returns the member count.
template <class Fn>
std::uint64_t enumerate_members(const FamilySpec& spec, const FieldCtx& F, Fn&& fn,
                                std::uint64_t budget = 100'000'000) {
  const std::uint64_t n = index_count(spec, F, budget);
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (auto f = member_at(spec, F, i)) {
      fn(*f);
      ++count;
    }
  }
  return count;
}

/// Uniform member: free coordinates drawn independently; filters use rejection.
inline Poly sample_member(const FamilySpec& spec, const FieldCtx& F, Rng& rng, std::uint64_t max_attempts = 1'000'000) {
  const auto pos = spec.free_positions();
  std::vector<std::uint64_t> digits(pos.size());
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (auto& d : digits) d = F.random_element(rng).value;
    Poly f = detail::assemble_member(spec, F, pos, digits);
    if (spec.kind != FamilyKind::ExplicitFilter || spec.predicate(F, f)) return f;
  }
  throw BudgetExceeded("sample_member: rejection cap exceeded");
}

/// Parses "prescribed:r=6;a5=0;a4=1", "trinomial:r=5;s=3", "toephess:r=4" or
/// "filter:r=R[;m=M][;wt=w1,w2][;deg=d1,d2][;aJ=V]...". Filter constraints aJ=V are
/// coefficient equalities; m defaults to their number.
inline FamilySpec parse_family(std::string_view desc) {
  const auto colon = desc.find(':');
  if (colon == std::string_view::npos) throw ParseError("family description needs 'kind:'");
  const std::string kind(desc.substr(0, colon));
  std::map<std::string, std::string> kv;
  std::map<unsigned, std::uint64_t> coeffs;
  std::string_view rest = desc.substr(colon + 1);
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto item = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("family parameter '" + std::string(item) + "' needs '='");
    const std::string key(item.substr(0, eq));
    const std::string val(item.substr(eq + 1));
    if (key.size() > 1 && key[0] == 'a') {
      coeffs[static_cast<unsigned>(FieldCtx::parse_uint(key.substr(1)))] = FieldCtx::parse_uint(val);
    } else {
      if (kv.count(key)) throw ParseError("duplicate family parameter '" + key + "'");
      kv[key] = val;
    }
  }
  auto need = [&](const std::string& key) -> unsigned {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("family '" + kind + "' needs parameter " + key);
    return static_cast<unsigned>(FieldCtx::parse_uint(it->second));
  };
  auto list = [&](const std::string& key) {
    std::vector<unsigned> v;
    const auto it = kv.find(key);
    if (it == kv.end()) return v;
    std::string_view s = it->second;
    while (!s.empty()) {
      const auto c = s.find(',');
      v.push_back(static_cast<unsigned>(FieldCtx::parse_uint(s.substr(0, c))));
      s = c == std::string_view::npos ? std::string_view{} : s.substr(c + 1);
    }
    return v;
  };
  auto only = [&](std::initializer_list<const char*> keys, bool allow_coeffs) {
    for (const auto& [k, v] : kv)
      if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; }))
        throw ParseError("unknown parameter '" + k + "' for family '" + kind + "'");
    if (!allow_coeffs && !coeffs.empty()) throw ParseError("family '" + kind + "' takes no coefficient constraints");
  };
  if (kind == "prescribed") {
    only({"r"}, true);
    return family_prescribed_linear(need("r"), coeffs);
  }
  if (kind == "trinomial") {
    only({"r", "s"}, false);
    return family_trinomial_plus_one(need("r"), need("s"));
  }
  if (kind == "toephess") {
    only({"r"}, false);
    return family_toeplitz_hessenberg(need("r"));
  }
  if (kind == "filter") {
    only({"r", "m", "wt", "deg"}, true);
    const unsigned r = need("r");
    for (const auto& [j, v] : coeffs)
      if (j >= r) throw ParseError("filter constraint a" + std::to_string(j) + " out of range");
    const unsigned m = kv.count("m") ? need("m") : static_cast<unsigned>(coeffs.size());
    auto wt = list("wt");
    if (wt.empty() && m == coeffs.size())
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) wt.push_back(r - it->first);
    const auto fixed = coeffs;
    MemberPredicate pred = [fixed](const FieldCtx&, const Poly& f) {
      return std::all_of(fixed.begin(), fixed.end(), [&](const auto& jv) { return f.raw(jv.first) == jv.second; });
    };
    return family_explicit_filter(r, std::move(pred), m, std::move(wt), list("deg"), std::string(desc));
  }
  throw ParseError("unknown family kind '" + kind + "'");
}

}  // namespace factpat
