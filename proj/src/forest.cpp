#include "sfheap/forest.hpp"

namespace sfheap {

const char* to_string(OpKind k) noexcept {
  switch (k) {
    case OpKind::make_heap: return "make_heap";
    case OpKind::make_item: return "make_item";
    case OpKind::insert: return "insert";
    case OpKind::meld: return "meld";
    case OpKind::find_min: return "find_min";
    case OpKind::delete_min: return "delete_min";
    case OpKind::decrease_key: return "decrease_key";
  }
  return "?";
}

template class Forest<std::int64_t, std::uint64_t>;

}  // namespace sfheap
