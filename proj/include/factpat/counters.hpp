#pragma once

#include <cstdint>

namespace factpat {

/// Operation tallies recorded while a CounterScope is installed on the current thread.
struct CostTally {
  std::uint64_t field_mults = 0;
  std::uint64_t field_invs = 0;
  std::uint64_t gcd_calls = 0;
  std::uint64_t powmod_mults = 0;
  std::uint64_t divrem_calls = 0;

  /// Field multiplications plus inversions: the arithmetic-operation count.
  [[nodiscard]] std::uint64_t arithmetic() const noexcept { return field_mults + field_invs; }

  CostTally& operator+=(const CostTally& o) noexcept {
    field_mults += o.field_mults;
    field_invs += o.field_invs;
    gcd_calls += o.gcd_calls;
    powmod_mults += o.powmod_mults;
    divrem_calls += o.divrem_calls;
    return *this;
  }
  friend CostTally operator+(CostTally a, const CostTally& b) noexcept { return a += b; }
  friend bool operator==(const CostTally&, const CostTally&) = default;
};

namespace detail {
inline thread_local CostTally* active_tally = nullptr;
}  // namespace detail

/// Installs `sink` as the thread's active tally for the lifetime of the scope.
/// Scopes nest; only the innermost one records.
class CounterScope {
 public:
  explicit CounterScope(CostTally& sink) noexcept : previous_(detail::active_tally) {
    detail::active_tally = &sink;
  }
  ~CounterScope() { detail::active_tally = previous_; }
  CounterScope(const CounterScope&) = delete;
  CounterScope& operator=(const CounterScope&) = delete;

 private:
  CostTally* previous_;
};

/// Runs with no tally installed, so nested work is not recorded anywhere.
class SilentScope {
 public:
  SilentScope() noexcept : previous_(detail::active_tally) { detail::active_tally = nullptr; }
  ~SilentScope() { detail::active_tally = previous_; }
  SilentScope(const SilentScope&) = delete;
  SilentScope& operator=(const SilentScope&) = delete;

 private:
  CostTally* previous_;
};

namespace counting {
inline void field_mults(std::uint64_t n) noexcept {
  if (auto* t = detail::active_tally) t->field_mults += n;
}
inline void field_invs(std::uint64_t n) noexcept {
  if (auto* t = detail::active_tally) t->field_invs += n;
}
inline void gcd_call() noexcept {
  if (auto* t = detail::active_tally) ++t->gcd_calls;
}
inline void powmod_mults(std::uint64_t n) noexcept {
  if (auto* t = detail::active_tally) t->powmod_mults += n;
}
inline void divrem_call() noexcept {
  if (auto* t = detail::active_tally) ++t->divrem_calls;
}
/// Adds a tally captured in an inner scope to the currently active one.
inline void merge(const CostTally& inner) noexcept {
  if (auto* t = detail::active_tally) *t += inner;
}
}  // namespace counting

}  // namespace factpat
