#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "factpat/errors.hpp"
#include "factpat/factor.hpp"
#include "factpat/ff.hpp"
#include "factpat/poly.hpp"

namespace factpat {

/// F_(p^k) defined by the given monic modulus (ascending coefficients), checked irreducible.
inline FieldPtr make_extension(std::uint64_t p, std::vector<std::uint64_t> modulus) {
  if (modulus.size() <= 2) {
    if (modulus.size() == 2 && modulus[1] == 1) return FieldCtx::make_prime(p);
    throw DomainError("extension modulus must have degree >= 1");
  }
  const auto base = FieldCtx::make_prime(p);
  if (modulus.back() != 1) throw DomainError("extension modulus must be monic");
  for (auto c : modulus)
    if (c >= p) throw DomainError("modulus coefficient out of range");
  {
    SilentScope quiet;
    if (!is_irreducible(*base, Poly(base->id(), modulus)))
      throw DomainError("extension modulus is reducible over F_" + std::to_string(p));
  }
  return std::make_shared<const FieldCtx>(detail::CheckedModulusTag{}, p, std::move(modulus));
}

/// F_(p^k) with the first monic irreducible of degree k in index order as modulus.
inline FieldPtr make_extension(std::uint64_t p, unsigned k) {
  if (k == 0) throw DomainError("extension degree must be positive");
  if (k == 1) return FieldCtx::make_prime(p);
  const auto base = FieldCtx::make_prime(p);
  SilentScope quiet;
  std::uint64_t count = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (count > UINT64_MAX / p) throw DomainError("q = p^k does not fit in 64 bits");
    count *= p;
  }
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const Poly m = monic_from_index(*base, k, idx);
    if (is_irreducible(*base, m))
      return std::make_shared<const FieldCtx>(detail::CheckedModulusTag{}, p, m.raw_coeffs());
  }
  throw DomainError("no irreducible modulus found");  // unreachable: one always exists
}

/// Parses "p", "p^k" or "p^k/c0,c1,...,ck".
inline FieldPtr make_field(std::string_view desc) {
  const auto slash = desc.find('/');
  const auto head = desc.substr(0, slash);
  const auto caret = head.find('^');
  const std::uint64_t p = FieldCtx::parse_uint(head.substr(0, caret));
  if (!detail::is_prime_u64(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  const std::uint64_t k = caret == std::string_view::npos ? 1 : FieldCtx::parse_uint(head.substr(caret + 1));
  if (k == 0 || k > 64) throw ParseError("bad extension degree in '" + std::string(desc) + "'");
  if (slash == std::string_view::npos) return make_extension(p, static_cast<unsigned>(k));
  std::vector<std::uint64_t> mod;
  auto rest = desc.substr(slash + 1);
  std::size_t pos = 0;
  while (true) {
    const auto end = rest.find(',', pos);
    mod.push_back(FieldCtx::parse_uint(rest.substr(pos, end == std::string_view::npos ? end : end - pos)));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  if (mod.size() != k + 1) throw ParseError("modulus must have k+1 coefficients");
  return make_extension(p, std::move(mod));
}

}  // namespace factpat
