#ifndef SFHEAP_POLICY_HPP
#define SFHEAP_POLICY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace sfheap {

// How decrease-key restructures the tree. Fixed per heap at creation.
enum class Policy : std::uint8_t {
  simple,            // cascading rank decrease with one mark bit
  heap_order,        // simple + cut only when heap order is violated
  increasing_rank,   // simple + stop when old rank >= parent rank
  passive_child,     // tri-state nodes, stop at passive children
  eager,             // marked == active
  naive_increasing,  // no marks, increasing-rank stop rule
  zero_rank,         // no marks, stop at rank 0
  randomized,        // no marks, stop on a coin flip
  non_cascading,     // decrement parent rank only
  classic,           // forest of trees with cascading cuts
};

inline constexpr std::array<Policy, 10> kAllPolicies = {
    Policy::simple,           Policy::heap_order, Policy::increasing_rank,
    Policy::passive_child,    Policy::eager,      Policy::naive_increasing,
    Policy::zero_rank,        Policy::randomized, Policy::non_cascading,
    Policy::classic};

constexpr std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::simple: return "simple";
    case Policy::heap_order: return "heap-order";
    case Policy::increasing_rank: return "increasing-rank";
    case Policy::passive_child: return "passive-child";
    case Policy::eager: return "eager";
    case Policy::naive_increasing: return "naive-increasing";
    case Policy::zero_rank: return "zero-rank";
    case Policy::randomized: return "randomized";
    case Policy::non_cascading: return "non-cascading";
    case Policy::classic: return "classic";
  }
  return "?";
}

constexpr std::optional<Policy> parse_policy(std::string_view s) {
  for (Policy p : kAllPolicies)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

// Policies whose nodes obey size >= F(rank + 2).
constexpr bool has_fibonacci_rank_bound(Policy p) {
  return p == Policy::simple || p == Policy::heap_order ||
         p == Policy::increasing_rank || p == Policy::passive_child ||
         p == Policy::classic;
}

// Policies whose nodes obey size >= 2^rank.
constexpr bool has_binary_rank_bound(Policy p) {
  return p == Policy::eager || p == Policy::naive_increasing ||
         p == Policy::zero_rank;
}

// Policies that use the unmarked/marked bit of the simple loop.
constexpr bool uses_mark_bit(Policy p) {
  return p == Policy::simple || p == Policy::heap_order ||
         p == Policy::increasing_rank || p == Policy::classic;
}

}  // namespace sfheap

#endif  // SFHEAP_POLICY_HPP
