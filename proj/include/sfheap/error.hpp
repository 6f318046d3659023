#ifndef SFHEAP_ERROR_HPP
#define SFHEAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sfheap {

enum class Errc {
  bottom_key,       // the reserved bottom key passed where an ordinary key is required
  stale_node,       // NodeRef no longer refers to a live node
  stale_heap,       // HeapRef no longer refers to a live heap
  empty_heap,       // delete-min on an empty heap
  key_increase,     // decrease-key with a larger key
  self_link,        // link(x, x)
  not_a_root,       // link of a non-root
  not_a_child,      // cut of a root
  already_in_heap,  // insert of an item that is in a heap or not a singleton
  not_in_heap,      // decrease-key/delete of an item in no heap
  self_meld,        // meld(H, H)
  policy_mismatch,  // meld of heaps with different policies
  out_of_range,     // numeric argument outside its domain
  parse,            // malformed trace text
  check_failed,     // an invariant checker rejected a state
};

const char* to_string(Errc e) noexcept;

class Error : public std::logic_error {
 public:
  Error(Errc code, const std::string& what) : std::logic_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace sfheap

#endif  // SFHEAP_ERROR_HPP
