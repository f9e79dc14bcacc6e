#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/errors.hpp"

namespace factpat {

inline constexpr double kGolomb = 0.62432945;               // xi, printed precision
inline constexpr double kExpNegGamma = 0.5614594835668851;  // e^(-gamma)

namespace detail {

inline Interval iv_add(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval iv_scale(const Interval& a, const Ratio& c) {
  return c >= 0 ? Interval{a.lo * c, a.hi * c} : Interval{a.hi * c, a.lo * c};
}
inline Interval iv_point(const Ratio& c) { return {c, c}; }
/// a / b for b > 0.
inline Interval iv_div_pos(const Interval& a, const Interval& b) {
  auto lo = a.lo >= 0 ? a.lo / b.hi : a.lo / b.lo;
  auto hi = a.hi >= 0 ? a.hi / b.lo : a.hi / b.hi;
  return {lo, hi};
}
inline Ratio q_power(std::uint64_t q, int e) {
  return e >= 0 ? Ratio(big_pow(BigInt(q), static_cast<unsigned>(e)))
                : Ratio(BigInt(1), big_pow(BigInt(q), static_cast<unsigned>(-e)));
}

inline void check_bound_args(unsigned r, unsigned m) {
  if (m >= r) throw DomainError("bound needs m < r");
}

// (delta(D-2)+2) sqrt(q) + 14 D^2 delta^2 + r^2 delta
inline Interval sq_bracket(std::uint64_t q, unsigned r, const BigInt& delta, const BigInt& D) {
  const Interval sq = root_interval(BigInt(q), 2);
  const Ratio lin = Ratio(delta * (D - 2) + 2);
  const Ratio rest = Ratio(14 * D * D * delta * delta + BigInt(r) * r * delta);
  return iv_add(iv_scale(sq, lin), iv_point(rest));
}

}  // namespace detail

/// T q^(r-m-1) ((delta(D-2)+2) q^(1/2) + 14 D^2 delta^2 + r^2 delta), enclosed in a rational interval.
inline Interval pattern_bound_sq(std::uint64_t q, unsigned r, unsigned m, const BigInt& delta, const BigInt& D,
                                 const Ratio& T) {
  detail::check_bound_args(r, m);
  const Ratio scale = T * detail::q_power(q, static_cast<int>(r - m) - 1);
  return detail::iv_scale(detail::sq_bracket(q, r, delta, D), scale);
}

/// pattern_bound_sq + q^(r-m-1) r^2 delta.
inline Interval pattern_bound_all(std::uint64_t q, unsigned r, unsigned m, const BigInt& delta, const BigInt& D,
                                  const Ratio& T) {
  const Interval sq = pattern_bound_sq(q, r, m, delta, D, T);
  const Ratio extra = detail::q_power(q, static_cast<int>(r - m) - 1) * Ratio(BigInt(r) * r * delta);
  return detail::iv_add(sq, detail::iv_point(extra));
}

/// Simplified form q^(r-m-1) (T (D delta q^(1/2) + 14 D^2 delta^2 + r^2 delta) + r^2 delta).
inline Interval pattern_bound_simplified(std::uint64_t q, unsigned r, unsigned m, const BigInt& delta,
                                         const BigInt& D, const Ratio& T) {
  detail::check_bound_args(r, m);
  const Interval sq = root_interval(BigInt(q), 2);
  const Interval inner = detail::iv_add(detail::iv_scale(sq, Ratio(D * delta)),
                                        detail::iv_point(Ratio(14 * D * D * delta * delta + BigInt(r) * r * delta)));
  const Ratio qp = detail::q_power(q, static_cast<int>(r - m) - 1);
  return detail::iv_add(detail::iv_scale(inner, T * qp), detail::iv_point(qp * Ratio(BigInt(r) * r * delta)));
}

/// |observed - main_term| <= error_bound, judged against the lower end of the bound's enclosure.
struct BoundReport {
  Ratio main_term;
  Interval error_bound;
  BigInt observed;
  bool holds = false;
  double slack = 0;  // error_bound - |observed - main_term|

  [[nodiscard]] double bound_value() const { return to_double(error_bound.hi); }
};

inline BoundReport check_bound(const Ratio& main_term, const Interval& bound, const BigInt& observed) {
  BoundReport b{main_term, bound, observed, false, 0};
  Ratio dev = Ratio(observed) - main_term;
  if (dev < 0) dev = -dev;
  b.holds = dev <= bound.lo;
  b.slack = to_double(bound.lo - dev);
  return b;
}

/// q > 15 delta_G^(13/3), decided exactly as q^3 > 15^3 delta_G^13.
inline bool size_hypothesis_met(std::uint64_t q, const BigInt& delta_G) {
  return big_pow(BigInt(q), 3) > BigInt(3375) * big_pow(delta_G, 13);
}

struct FamilySizeBounds {
  bool hypothesis_met = false;
  Interval lower;      // q^(r-m) (1 - 3 delta_G^(13/6) / q^(1/2))
  Interval inv_upper;  // q^(m-r) (1 + 15 delta_G^(13/6) / q^(1/2)), bounds 1/|A|
  Ratio half_lower;    // q^(r-m) / 2
};

inline FamilySizeBounds family_size_bounds(std::uint64_t q, unsigned r, unsigned m, const BigInt& delta_G) {
  detail::check_bound_args(r, m);
  FamilySizeBounds b;
  b.hypothesis_met = size_hypothesis_met(q, delta_G);
  const Interval dg = root_interval(big_pow(delta_G, 13), 6);
  const Interval ratio = detail::iv_div_pos(dg, root_interval(BigInt(q), 2));
  const Ratio qp = detail::q_power(q, static_cast<int>(r - m));
  b.lower = detail::iv_scale(detail::iv_add(detail::iv_point(1), detail::iv_scale(ratio, -3)), qp);
  b.inv_upper = detail::iv_scale(detail::iv_add(detail::iv_point(1), detail::iv_scale(ratio, 15)), 1 / qp);
  b.half_lower = qp / 2;
  return b;
}

struct SqProbabilityBound {
  bool hypothesis_met = false;
  Ratio value;  // 1 - 2 r^2 delta_G / q
};

inline SqProbabilityBound sq_probability_bound(std::uint64_t q, unsigned r, const BigInt& delta_G) {
  return {size_hypothesis_met(q, delta_G), Ratio(1) - Ratio(2 * BigInt(r) * r * delta_G, BigInt(q))};
}

/// e^(-gamma) (1 + 1/r): main terms of the DDF-completion estimate; not a certified bound.
inline double ddf_completion_reference(unsigned r) {
  if (r < 1) throw DomainError("ddf_completion_reference needs r >= 1");
  return kExpNegGamma * (1.0 + 1.0 / r);
}

/// nu(n): number of ones in binary.
inline unsigned nu(const BigInt& n) { return popcount(n); }
/// lambda(n) = floor(log2 n) + nu(n) - 1: multiplications for an n-th power by repeated squaring.
inline unsigned lambda_mults(const BigInt& n) {
  if (n < 1) throw DomainError("lambda needs n >= 1");
  return square_multiply_count(n);
}

struct CostModel {
  std::uint64_t q = 0;
  unsigned r = 0;
  double M = 0;  // r log r log log r (base 2)
  double U = 0;  // M(r) log r
  unsigned lambda_q = 0;
  unsigned nu_q = 0;
  std::vector<unsigned> mu;  // mu_k = lambda((q^k - 1)/2), k = 1..ceil(r/2)
  std::vector<Ratio> alpha;  // 1/2 - 1/(2 q^k)
  std::vector<Ratio> beta;   // 1/2 + 1/(2 q^k)
  double xi = kGolomb;
  double exp_neg_gamma = kExpNegGamma;
};

inline double mult_time(double r) { return r * std::log2(r) * std::log2(std::log2(r)); }

inline CostModel cost_model(std::uint64_t q, unsigned r) {
  if (r < 2) throw DomainError("cost_model needs r >= 2");
  CostModel c;
  c.q = q;
  c.r = r;
  c.M = mult_time(r);
  c.U = c.M * std::log2(static_cast<double>(r));
  c.lambda_q = lambda_mults(BigInt(q));
  c.nu_q = nu(BigInt(q));
  for (unsigned k = 1; k <= (r + 1) / 2; ++k) {
    const BigInt qk = big_pow(BigInt(q), k);
    if (q % 2 == 1) c.mu.push_back(lambda_mults((qk - 1) / 2));
    c.alpha.push_back(Ratio(1, 2) - Ratio(BigInt(1), 2 * qk));
    c.beta.push_back(Ratio(1, 2) + Ratio(BigInt(1), 2 * qk));
  }
  return c;
}

}  // namespace factpat
