#include "csize/reference_sets.hpp"

#include <limits>

#include "csize/instrumentation.hpp"

namespace csize::detail {

namespace {
constexpr std::uintptr_t kMarkBit = 1;
bool is_marked(std::uintptr_t word) noexcept { return (word & kMarkBit) != 0; }
}  // namespace

template <NaiveSize Mode>
struct PlainCore<Mode>::Node {
  explicit Node(Key k) : key(k) {}
  const Key key;
  std::atomic<std::uintptr_t> next{0};
};

namespace {
template <class N>
N* to_node(std::uintptr_t word) noexcept {
  return reinterpret_cast<N*>(word & ~kMarkBit);
}
template <class N>
std::uintptr_t to_word(const N* node) noexcept {
  return reinterpret_cast<std::uintptr_t>(node);
}
}  // namespace

template <NaiveSize Mode>
PlainCore<Mode>::PlainCore(std::size_t buckets, const SetOptions& options)
    : domain_(std::make_unique<EpochDomain>(options.max_threads, options.reclamation)),
      registry_(options.max_threads) {
  if (buckets == 0) throw std::invalid_argument("PlainCore: bucket count must be positive");
  tail_ = new Node(std::numeric_limits<Key>::max());
  for (std::size_t b = 0; b < buckets; ++b) {
    auto* head = new Node(std::numeric_limits<Key>::min());
    head->next.store(to_word(tail_));
    heads_.push_back(head);
  }
}

template <NaiveSize Mode>
PlainCore<Mode>::~PlainCore() {
  for (Node* head : heads_) {
    Node* n = to_node<Node>(head->next.load());
    while (n != tail_) {
      Node* next = to_node<Node>(n->next.load());
      delete n;
      n = next;
    }
    delete head;
  }
  delete tail_;
}

template <NaiveSize Mode>
typename PlainCore<Mode>::Window PlainCore<Mode>::find(ThreadId caller, Node* head, Key key) {
retry:
  Node* pred = head;
  Node* curr = to_node<Node>(pred->next.load());
  while (true) {
    const auto succ = curr->next.load();
    if (is_marked(succ)) {
      auto expected = to_word(curr);
      if (!pred->next.compare_exchange_strong(expected, succ & ~kMarkBit)) goto retry;
      domain_->retire(caller, curr);
      curr = to_node<Node>(succ);
      continue;
    }
    if (curr->key >= key) return {pred, curr};
    pred = curr;
    curr = to_node<Node>(succ);
  }
}

template <NaiveSize Mode>
bool PlainCore<Mode>::insert(ThreadId caller, std::size_t bucket, Key key) {
  check_key(key);
  auto guard = domain_->pin(caller);
  std::unique_ptr<Node> fresh;
  while (true) {
    auto [pred, curr] = find(caller, heads_[bucket], key);
    if (curr->key == key) return false;
    if (!fresh) fresh = std::make_unique<Node>(key);
    fresh->next.store(to_word(curr));
    auto expected = to_word(curr);
    if (pred->next.compare_exchange_strong(expected, to_word(fresh.get()))) break;
  }
  fresh.release();
  instrument::yield_point(instrument::YieldPoint::InsertAfterLink);
  if constexpr (Mode == NaiveSize::SharedCounter) counter_.fetch_add(1);
  return true;
}

template <NaiveSize Mode>
bool PlainCore<Mode>::remove(ThreadId caller, std::size_t bucket, Key key) {
  check_key(key);
  auto guard = domain_->pin(caller);
  while (true) {
    auto [pred, curr] = find(caller, heads_[bucket], key);
    if (curr->key != key) return false;
    auto succ = curr->next.load();
    if (is_marked(succ)) continue;
    if (!curr->next.compare_exchange_strong(succ, succ | kMarkBit)) continue;

    auto expected = to_word(curr);
    if (pred->next.compare_exchange_strong(expected, succ)) {
      domain_->retire(caller, curr);
    } else {
      find(caller, heads_[bucket], key);
    }
    instrument::yield_point(instrument::YieldPoint::NaiveDeleteAfterUnlink);
    if constexpr (Mode == NaiveSize::SharedCounter) counter_.fetch_sub(1);
    return true;
  }
}

template <NaiveSize Mode>
bool PlainCore<Mode>::contains(ThreadId caller, std::size_t bucket, Key key) {
  check_key(key);
  auto guard = domain_->pin(caller);
  Node* curr = to_node<Node>(heads_[bucket]->next.load());
  while (curr->key < key) curr = to_node<Node>(curr->next.load());
  return curr->key == key && !is_marked(curr->next.load());
}

template <NaiveSize Mode>
std::int64_t PlainCore<Mode>::size(ThreadId caller) {
  if constexpr (Mode == NaiveSize::SharedCounter) {
    return counter_.load();
  } else {
    auto guard = domain_->pin(caller);
    std::int64_t count = 0;
    for (Node* head : heads_) {
      for (Node* n = to_node<Node>(head->next.load()); n != tail_; n = to_node<Node>(n->next.load())) {
        if (!is_marked(n->next.load())) ++count;
      }
    }
    return count;
  }
}

template class PlainCore<NaiveSize::SharedCounter>;
template class PlainCore<NaiveSize::Traversal>;

}  // namespace csize::detail
