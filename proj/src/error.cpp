#include "sfheap/error.hpp"

namespace sfheap {

const char* to_string(Errc e) noexcept {
  switch (e) {
    case Errc::bottom_key: return "bottom_key";
    case Errc::stale_node: return "stale_node";
    case Errc::stale_heap: return "stale_heap";
    case Errc::empty_heap: return "empty_heap";
    case Errc::key_increase: return "key_increase";
    case Errc::self_link: return "self_link";
    case Errc::not_a_root: return "not_a_root";
    case Errc::not_a_child: return "not_a_child";
    case Errc::already_in_heap: return "already_in_heap";
    case Errc::not_in_heap: return "not_in_heap";
    case Errc::self_meld: return "self_meld";
    case Errc::policy_mismatch: return "policy_mismatch";
    case Errc::out_of_range: return "out_of_range";
    case Errc::parse: return "parse";
    case Errc::check_failed: return "check_failed";
  }
  return "unknown";
}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sfheap
