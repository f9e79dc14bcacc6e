#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/counters.hpp"
#include "factpat/errors.hpp"
#include "factpat/rng.hpp"

namespace factpat {

/// Element of F_q. `value` packs the coordinates over F_p in base p with the
/// constant coordinate least significant, so 0..q-1 is the canonical order.
struct FieldElement {
  std::uint64_t value = 0;
  std::uint32_t field = 0;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

namespace detail {

inline std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) >> 64);
}

/// Prime field with p < 2^32; products fit in 64 bits, reduced by a precomputed reciprocal.
struct PrimeSmallArith {
  std::uint64_t p;
  std::uint64_t recip;  // floor((2^64 - 1) / p)

  std::uint64_t reduce(std::uint64_t x) const noexcept {
    std::uint64_t r = x - mulhi(x, recip) * p;
    while (r >= p) r -= p;
    return r;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + p - b; }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept { return reduce(a * b); }
  std::uint64_t inv(std::uint64_t a) const noexcept {
    // extended Euclid; a != 0
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
      const std::int64_t quo = r / nr;
      t = std::exchange(nt, t - quo * nt);
      r = std::exchange(nr, r - quo * nr);
    }
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
  }
  /// Image of the integer n (mod p).
  std::uint64_t from_uint(std::uint64_t n) const noexcept { return n % p; }
};

/// Prime field with 2^32 <= p < 2^64; 128-bit products.
struct PrimeLargeArith {
  std::uint64_t p;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;
    return (s < a || s >= p) ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + (p - b); }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }
  std::uint64_t inv(std::uint64_t a) const noexcept {
    __int128 t = 0, nt = 1;
    __int128 r = p, nr = a;
    while (nr != 0) {
      const __int128 quo = r / nr;
      t = std::exchange(nt, t - quo * nt);
      r = std::exchange(nr, r - quo * nr);
    }
    if (t < 0) t += p;
    return static_cast<std::uint64_t>(t);
  }
  std::uint64_t from_uint(std::uint64_t n) const noexcept { return n % p; }
};

/// F_p[x]/(modulus) with elements packed as base-p integers; p < 2^32 is implied by q < 2^64.
struct ExtensionArith {
  static constexpr unsigned kMaxDegree = 64;
  using Digits = std::array<std::uint64_t, 2 * kMaxDegree>;

  PrimeSmallArith base;
  unsigned k;
  const std::uint64_t* modulus;  // k + 1 ascending coefficients, monic
  std::uint64_t q;

  void split(std::uint64_t v, Digits& d) const noexcept {
    for (unsigned i = 0; i < k; ++i) {
      d[i] = v % base.p;
      v /= base.p;
    }
  }
  std::uint64_t join(const Digits& d) const noexcept {
    std::uint64_t v = 0;
    for (unsigned i = k; i-- > 0;) v = v * base.p + d[i];
    return v;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    Digits da, db;
    split(a, da);
    split(b, db);
    for (unsigned i = 0; i < k; ++i) da[i] = base.add(da[i], db[i]);
    return join(da);
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    Digits da, db;
    split(a, da);
    split(b, db);
    for (unsigned i = 0; i < k; ++i) da[i] = base.sub(da[i], db[i]);
    return join(da);
  }
  std::uint64_t neg(std::uint64_t a) const noexcept { return sub(0, a); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    if (a == 0 || b == 0) return 0;
    Digits da, db, prod{};
    split(a, da);
    split(b, db);
    for (unsigned i = 0; i < k; ++i) {
      if (da[i] == 0) continue;
      for (unsigned j = 0; j < k; ++j) prod[i + j] = base.add(prod[i + j], base.mul(da[i], db[j]));
    }
    for (unsigned i = 2 * k - 1; i-- > k;) {
      const std::uint64_t c = prod[i];
      if (c == 0) continue;
      for (unsigned j = 0; j < k; ++j) prod[i - k + j] = base.sub(prod[i - k + j], base.mul(c, modulus[j]));
    }
    return join(prod);
  }
  std::uint64_t inv(std::uint64_t a) const noexcept {
    // a^(q-2)
    std::uint64_t e = q - 2, result = 1, b = a;
    while (e != 0) {
      if (e & 1U) result = mul(result, b);
      b = mul(b, b);
      e >>= 1;
    }
    return result;
  }
  std::uint64_t from_uint(std::uint64_t n) const noexcept { return n % base.p; }
};

inline bool is_prime_u64(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  auto mulmod = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e != 0) {
      if (e & 1U) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s && composite; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint32_t next_field_id() noexcept {
  static std::atomic<std::uint32_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

/// Tag for constructing an extension field whose modulus the caller has already
/// proven irreducible. Use make_field() instead.
struct CheckedModulusTag {};

}  // namespace detail

/// The finite field F_q, q = p^k < 2^64. Immutable once built; share via shared_ptr.
class FieldCtx {
 public:
  /// Prime field F_p.
  static std::shared_ptr<const FieldCtx> make_prime(std::uint64_t p) {
    return std::make_shared<const FieldCtx>(detail::CheckedModulusTag{}, p, std::vector<std::uint64_t>{});
  }

  /// Not for direct use: the modulus must already be known irreducible.
  FieldCtx(detail::CheckedModulusTag, std::uint64_t p, std::vector<std::uint64_t> modulus)
      : p_(p), modulus_(std::move(modulus)), id_(detail::next_field_id()) {
    if (!detail::is_prime_u64(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
    if (modulus_.empty()) {
      k_ = 1;
    } else {
      if (modulus_.size() < 3) throw DomainError("extension modulus must have degree >= 2");
      k_ = static_cast<unsigned>(modulus_.size() - 1);
      if (modulus_.back() != 1) throw DomainError("extension modulus must be monic");
      for (auto c : modulus_)
        if (c >= p) throw DomainError("modulus coefficient out of range");
      if (k_ > detail::ExtensionArith::kMaxDegree) throw DomainError("extension degree too large");
    }
    q_ = 1;
    for (unsigned i = 0; i < k_; ++i) {
      if (q_ > std::numeric_limits<std::uint64_t>::max() / p_) throw DomainError("q = p^k does not fit in 64 bits");
      q_ *= p_;
    }
  }

  [[nodiscard]] std::uint64_t p() const noexcept { return p_; }
  [[nodiscard]] unsigned k() const noexcept { return k_; }
  [[nodiscard]] std::uint64_t q() const noexcept { return q_; }
  [[nodiscard]] std::uint32_t id() const noexcept { return id_; }
  [[nodiscard]] bool is_prime_field() const noexcept { return k_ == 1; }
  /// Ascending coefficients of the defining polynomial; empty for prime fields.
  [[nodiscard]] const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }

  /// Calls `fn` with the arithmetic backend for this field (prime-small, prime-large or extension).
  template <class Fn>
  decltype(auto) with_arith(Fn&& fn) const {
    if (k_ == 1) {
      if (p_ < (1ULL << 32)) return fn(detail::PrimeSmallArith{p_, ~0ULL / p_});
      return fn(detail::PrimeLargeArith{p_});
    }
    return fn(detail::ExtensionArith{detail::PrimeSmallArith{p_, ~0ULL / p_}, k_, modulus_.data(), q_});
  }

  [[nodiscard]] FieldElement zero() const noexcept { return {0, id_}; }
  [[nodiscard]] FieldElement one() const noexcept { return {1, id_}; }

  /// Element with packed value v; v < q required.
  [[nodiscard]] FieldElement element(std::uint64_t v) const {
    if (v >= q_) throw DomainError("element value out of range");
    return {v, id_};
  }
  /// Image of an integer in the prime subfield.
  [[nodiscard]] FieldElement from_int(long long n) const {
    const auto pp = static_cast<long long>(p_ > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())
                                               ? 0
                                               : p_);
    if (pp == 0) {  // p beyond the signed range: |n| < p always
      return {n >= 0 ? static_cast<std::uint64_t>(n) : p_ - static_cast<std::uint64_t>(-(n + 1)) - 1, id_};
    }
    long long r = n % pp;
    if (r < 0) r += pp;
    return {static_cast<std::uint64_t>(r), id_};
  }
  [[nodiscard]] FieldElement from_coords(std::span<const std::uint64_t> c) const {
    if (c.size() > k_) throw DomainError("too many coordinates for field");
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= p_) throw DomainError("coordinate out of range");
      v = v * p_ + c[i];
    }
    return {v, id_};
  }
  [[nodiscard]] std::vector<std::uint64_t> coords(FieldElement a) const {
    check(a);
    std::vector<std::uint64_t> c(k_);
    std::uint64_t v = a.value;
    for (unsigned i = 0; i < k_; ++i) {
      c[i] = k_ == 1 ? v : v % p_;
      if (k_ != 1) v /= p_;
    }
    return c;
  }

  [[nodiscard]] bool is_zero(FieldElement a) const {
    check(a);
    return a.value == 0;
  }

  [[nodiscard]] FieldElement add(FieldElement a, FieldElement b) const {
    check(a, b);
    return {with_arith([&](const auto& ar) { return ar.add(a.value, b.value); }), id_};
  }
  [[nodiscard]] FieldElement sub(FieldElement a, FieldElement b) const {
    check(a, b);
    return {with_arith([&](const auto& ar) { return ar.sub(a.value, b.value); }), id_};
  }
  [[nodiscard]] FieldElement neg(FieldElement a) const {
    check(a);
    return {with_arith([&](const auto& ar) { return ar.neg(a.value); }), id_};
  }
  /// Counted: one field multiplication.
  [[nodiscard]] FieldElement mul(FieldElement a, FieldElement b) const {
    check(a, b);
    counting::field_mults(1);
    return {with_arith([&](const auto& ar) { return ar.mul(a.value, b.value); }), id_};
  }
  /// Counted: one field inversion.
  [[nodiscard]] FieldElement inv(FieldElement a) const {
    check(a);
    if (a.value == 0) throw DomainError("inverse of zero");
    counting::field_invs(1);
    return {with_arith([&](const auto& ar) { return ar.inv(a.value); }), id_};
  }
  [[nodiscard]] FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

  /// Left-to-right square-and-multiply; records floor(log2 e) + popcount(e) - 1 multiplications.
  template <class E>
  [[nodiscard]] FieldElement pow(FieldElement a, const E& e) const {
    check(a);
    const unsigned len = bit_length(e);
    if (len == 0) {
      if (a.value == 0) throw DomainError("0^0 is undefined");
      return one();
    }
    const std::uint64_t v = with_arith([&](const auto& ar) {
      std::uint64_t r = a.value;
      for (unsigned i = len - 1; i-- > 0;) {
        r = ar.mul(r, r);
        if (test_bit(e, i)) r = ar.mul(r, a.value);
      }
      return r;
    });
    counting::field_mults(square_multiply_count(e));
    return {v, id_};
  }

  /// a^p.
  [[nodiscard]] FieldElement frobenius(FieldElement a) const { return pow(a, p_); }
  /// The unique r with r^p = a, computed as a^(q/p).
  [[nodiscard]] FieldElement pth_root(FieldElement a) const { return pow(a, q_ / p_); }

  /// All q elements in canonical order (0 first, constant coordinate varying fastest).
  [[nodiscard]] auto enumerate() const {
    return std::views::iota(std::uint64_t{0}, q_) |
           std::views::transform([id = id_](std::uint64_t v) { return FieldElement{v, id}; });
  }

  [[nodiscard]] FieldElement random_element(Rng& rng) const { return {uniform_below(rng, q_), id_}; }
  [[nodiscard]] FieldElement random_nonzero(Rng& rng) const { return {1 + uniform_below(rng, q_ - 1), id_}; }

  /// "p" or "p^k/c0,...,ck".
  [[nodiscard]] std::string describe() const {
    std::string s = std::to_string(p_);
    if (k_ > 1) {
      s += "^" + std::to_string(k_) + "/";
      for (std::size_t i = 0; i < modulus_.size(); ++i) s += (i ? "," : "") + std::to_string(modulus_[i]);
    }
    return s;
  }

  /// "3" for prime fields, "c0;c1;...;c(k-1)" for extensions.
  [[nodiscard]] std::string format(FieldElement a) const {
    if (k_ == 1) {
      check(a);
      return std::to_string(a.value);
    }
    std::string s;
    const auto c = coords(a);
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ";" : "") + std::to_string(c[i]);
    return s;
  }

  [[nodiscard]] FieldElement parse_element(std::string_view text) const {
    std::vector<std::uint64_t> c;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = text.find(';', pos);
      const std::string_view tok = text.substr(pos, end == std::string_view::npos ? end : end - pos);
      c.push_back(parse_uint(tok));
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    if (k_ == 1) {
      if (c.size() != 1) throw ParseError("prime-field element must be a single integer");
      if (c[0] >= p_) throw ParseError("element " + std::to_string(c[0]) + " out of range for F_" + std::to_string(p_));
      return {c[0], id_};
    }
    for (auto x : c)
      if (x >= p_) throw ParseError("coordinate out of range");
    return from_coords(c);
  }

  void check(FieldElement a) const {
    if (a.field != id_) throw FieldMismatch();
  }
  void check(FieldElement a, FieldElement b) const {
    if (a.field != id_ || b.field != id_) throw FieldMismatch();
  }

  static std::uint64_t parse_uint(std::string_view tok) {
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty()) throw ParseError("empty integer");
    std::uint64_t v = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') throw ParseError("invalid integer '" + std::string(tok) + "'");
      const auto d = static_cast<std::uint64_t>(ch - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) throw ParseError("integer overflow");
      v = v * 10 + d;
    }
    return v;
  }

 private:
  std::uint64_t p_;
  unsigned k_ = 1;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> modulus_;
  std::uint32_t id_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

}  // namespace factpat
