#include "sfheap/instrument.hpp"

#include <array>

namespace sfheap {

namespace {

template <int First, int Second>
constexpr std::array<std::uint64_t, kFibMax + 1> recurrence_table() {
  std::array<std::uint64_t, kFibMax + 1> t{};
  t[0] = First;
  t[1] = Second;
  for (int k = 2; k <= kFibMax; ++k) t[k] = t[k - 1] + t[k - 2];
  return t;
}

constexpr auto kFib = recurrence_table<0, 1>();
constexpr auto kLucas = recurrence_table<2, 1>();

void require_index(int k, int hi, const char* what) {
  if (k < 0 || k > hi) raise(Errc::out_of_range, std::string(what) + ": index out of range");
}

}  // namespace

std::uint64_t fib(int k) {
  require_index(k, kFibMax, "fib");
  return kFib[static_cast<std::size_t>(k)];
}

std::uint64_t lucas(int k) {
  require_index(k, kFibMax, "lucas");
  return kLucas[static_cast<std::size_t>(k)];
}

// phi^k = (L_k + F_k sqrt 5) / 2, so F_{k+2} >= phi^k iff
// 2 F_{k+2} - L_k >= F_k sqrt 5, decided by squaring both non-negative sides.
bool fib_dominates_phi_power(int k) {
  require_index(k, kFibMax - 2, "fib_dominates_phi_power");
  using i128 = __int128;
  i128 lhs = 2 * static_cast<i128>(fib(k + 2)) - static_cast<i128>(lucas(k));
  if (lhs < 0) return false;
  i128 f = fib(k);
  return lhs * lhs >= 5 * f * f;
}

double log_phi(double n) { return std::log(n) / std::log(kPhi); }

std::string Verdict::summary(std::size_t limit) const {
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < limit; ++i) {
    const Violation& v = violations[i];
    os << "\n  [" << v.check << "]";
    if (v.node != kNil) os << " node " << v.node;
    os << ": " << v.detail;
  }
  return os.str();
}

}  // namespace sfheap
