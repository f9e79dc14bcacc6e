#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/errors.hpp"

namespace factpat {

/// lambda = 1^l1 2^l2 ... r^lr with sum i*li = r.
class FactorizationPattern {
 public:
  FactorizationPattern() = default;

  /// lambda[i-1] is the number of parts equal to i; trailing zeros are allowed.
  explicit FactorizationPattern(std::vector<unsigned> lambda) : lambda_(std::move(lambda)) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < lambda_.size(); ++i) r += (i + 1) * lambda_[i];
    if (r == 0) throw DomainError("pattern of degree 0");
    lambda_.resize(r, 0);
  }

  static FactorizationPattern from_parts(const std::vector<unsigned>& parts) {
    std::vector<unsigned> lambda;
    for (unsigned d : parts) {
      if (d == 0) throw DomainError("pattern part 0");
      if (lambda.size() < d) lambda.resize(d, 0);
      ++lambda[d - 1];
    }
    return FactorizationPattern(std::move(lambda));
  }

  [[nodiscard]] unsigned r() const noexcept { return static_cast<unsigned>(lambda_.size()); }
  /// lambda_i (0 outside 1..r).
  [[nodiscard]] unsigned count(unsigned i) const noexcept {
    return i >= 1 && i <= lambda_.size() ? lambda_[i - 1] : 0U;
  }
  [[nodiscard]] const std::vector<unsigned>& lambda() const noexcept { return lambda_; }

  /// Parts in nonincreasing order.
  [[nodiscard]] std::vector<unsigned> parts() const {
    std::vector<unsigned> p;
    for (std::size_t i = lambda_.size(); i-- > 0;) p.insert(p.end(), lambda_[i], static_cast<unsigned>(i + 1));
    return p;
  }
  [[nodiscard]] unsigned largest_part() const noexcept {
    for (std::size_t i = lambda_.size(); i-- > 0;)
      if (lambda_[i] != 0) return static_cast<unsigned>(i + 1);
    return 0;
  }
  /// lambda in {0,1}^r: all parts distinct.
  [[nodiscard]] bool distinct_parts() const noexcept {
    return std::all_of(lambda_.begin(), lambda_.end(), [](unsigned l) { return l <= 1; });
  }

  /// "1^a 2^b ..." with zero exponents omitted.
  [[nodiscard]] std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
      if (lambda_[i] == 0) continue;
      if (!s.empty()) s += ' ';
      s += std::to_string(i + 1) + "^" + std::to_string(lambda_[i]);
    }
    return s;
  }

  static FactorizationPattern parse(std::string_view text) {
    std::vector<unsigned> lambda;
    std::size_t pos = 0;
    auto number = [&](std::string_view tok) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string_view::npos)
        throw ParseError("bad pattern token '" + std::string(tok) + "'");
      return static_cast<unsigned>(std::stoul(std::string(tok)));
    };
    while (pos < text.size()) {
      if (text[pos] == ' ') {
        ++pos;
        continue;
      }
      std::size_t end = text.find(' ', pos);
      if (end == std::string_view::npos) end = text.size();
      const auto tok = text.substr(pos, end - pos);
      const auto caret = tok.find('^');
      if (caret == std::string_view::npos) throw ParseError("pattern token needs '^'");
      const unsigned i = number(tok.substr(0, caret)), e = number(tok.substr(caret + 1));
      if (i == 0) throw ParseError("pattern part 0");
      if (lambda.size() < i) lambda.resize(i, 0);
      lambda[i - 1] += e;
      pos = end;
    }
    return FactorizationPattern(std::move(lambda));
  }

  friend bool operator==(const FactorizationPattern&, const FactorizationPattern&) = default;

  /// Enumeration order: reverse-lexicographic on the nonincreasing part lists, so
  /// [3] precedes [2,1] precedes [1,1,1]. Returns true when a comes first.
  friend bool pattern_before(const FactorizationPattern& a, const FactorizationPattern& b) {
    if (a.r() != b.r()) return a.r() < b.r();
    return a.parts() > b.parts();
  }

 private:
  std::vector<unsigned> lambda_;
};

/// Strict weak order matching enumerate_patterns; usable as a map comparator.
struct PatternOrder {
  bool operator()(const FactorizationPattern& a, const FactorizationPattern& b) const { return pattern_before(a, b); }
};

/// All partitions of r in reverse-lexicographic order.
inline std::vector<FactorizationPattern> enumerate_patterns(unsigned r) {
  if (r == 0) throw DomainError("enumerate_patterns: r must be positive");
  std::vector<FactorizationPattern> out;
  std::vector<unsigned> parts;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned rest, unsigned cap) {
    if (rest == 0) {
      out.push_back(FactorizationPattern::from_parts(parts));
      return;
    }
    for (unsigned d = std::min(rest, cap); d >= 1; --d) {
      parts.push_back(d);
      rec(rest - d, d);
      parts.pop_back();
    }
  };
  rec(r, r);
  return out;
}

inline BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// w(lambda) = prod i^lambda_i * lambda_i!.
inline BigInt weight(const FactorizationPattern& p) {
  BigInt w = 1;
  for (unsigned i = 1; i <= p.r(); ++i) {
    const unsigned l = p.count(i);
    if (l == 0) continue;
    w *= big_pow(BigInt(i), l) * factorial(l);
  }
  return w;
}

/// T(lambda) = 1 / w(lambda): the share of S_r with that cycle pattern.
inline Ratio proportion(const FactorizationPattern& p) { return make_ratio(1, weight(p)); }

/// E_r: expected length of the longest cycle of a uniform permutation of S_r.
inline Ratio expected_longest_cycle(unsigned r) {
  Ratio e = 0;
  for (const auto& p : enumerate_patterns(r)) e += Ratio(p.largest_part()) * proportion(p);
  return e;
}

/// Probability that a uniform permutation of S_r has cycles of pairwise distinct lengths.
inline Ratio prob_distinct_lengths(unsigned r) {
  Ratio s = 0;
  for (const auto& p : enumerate_patterns(r))
    if (p.distinct_parts()) s += proportion(p);
  return s;
}

/// Probability of exactly j cycles of length k in S_r:
/// 1/(j! k^j) * sum_{i=0}^{floor(r/k) - j} (-1)^i / (i! k^i).
inline Ratio prob_j_cycles_of_length_k(unsigned r, unsigned j, unsigned k) {
  if (k < 1 || k > r) throw DomainError("cycle length out of range");
  if (static_cast<std::uint64_t>(j) * k > r) throw DomainError("cycle count out of range");
  Ratio s = 0;
  const unsigned top = r / k - j;
  for (unsigned i = 0; i <= top; ++i) {
    const Ratio term = make_ratio(1, factorial(i) * big_pow(BigInt(k), i));
    s += (i % 2 == 0) ? term : Ratio(-term);
  }
  return s / Ratio(factorial(j) * big_pow(BigInt(k), j));
}

/// Cycle pattern of a permutation of {0, ..., n-1} given in one-line notation.
inline FactorizationPattern cycle_pattern(const std::vector<unsigned>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<unsigned> parts;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    unsigned len = 0;
    for (std::size_t x = s; !seen[x]; x = perm[x]) {
      seen[x] = true;
      ++len;
    }
    parts.push_back(len);
  }
  return FactorizationPattern::from_parts(parts);
}

}  // namespace factpat
