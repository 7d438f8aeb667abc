#include <limits>
#include <sstream>

#include "csize/instrumentation.hpp"
#include "csize/list_set.hpp"

namespace csize::detail {

namespace {

using instrument::YieldPoint;

constexpr std::uintptr_t kMarkBit = 1;

bool is_marked(std::uintptr_t word) noexcept { return (word & kMarkBit) != 0; }

}  // namespace

struct TransformedCore::Node {
  Node(Key k, const UpdateInfo* info) : key(k), insert_info(info) {}
  ~Node() {
    delete insert_info.load();
    delete delete_info.load();
  }

  const Key key;
  // successor pointer; low bit set once the node is logically deleted
  std::atomic<std::uintptr_t> next{0};
  // null once the insertion is known to be reflected in the metadata
  std::atomic<const UpdateInfo*> insert_info;
  // written before the mark bit, immutable afterwards
  std::atomic<const UpdateInfo*> delete_info{nullptr};
};

namespace {

using Node = TransformedCore::Node;

Node* to_node(std::uintptr_t word) noexcept { return reinterpret_cast<Node*>(word & ~kMarkBit); }
std::uintptr_t to_word(const Node* node) noexcept { return reinterpret_cast<std::uintptr_t>(node); }

}  // namespace

TransformedCore::TransformedCore(std::size_t buckets, const SetOptions& options)
    : domain_(std::make_unique<EpochDomain>(options.max_threads, options.reclamation)),
      registry_(options.max_threads),
      calculator_(options.max_threads, *domain_, options.size) {
  if (buckets == 0) throw std::invalid_argument("TransformedCore: bucket count must be positive");
  tail_ = new Node(std::numeric_limits<Key>::max(), nullptr);
  heads_.reserve(buckets);
  for (std::size_t b = 0; b < buckets; ++b) {
    auto* head = new Node(std::numeric_limits<Key>::min(), nullptr);
    head->next.store(to_word(tail_));
    heads_.push_back(head);
  }
}

TransformedCore::~TransformedCore() {
  for (Node* head : heads_) {
    Node* n = to_node(head->next.load());
    while (n != tail_) {
      Node* next = to_node(n->next.load());
      delete n;
      n = next;
    }
    delete head;
  }
  delete tail_;
}

void TransformedCore::help_insert(ThreadId caller, Node* node) {
  const UpdateInfo* info = node->insert_info.load();
  if (info == nullptr) return;
  calculator_.update_metadata(*info, OpKind::Insert);
  if (node->insert_info.compare_exchange_strong(info, nullptr)) domain_->retire(caller, info);
}

void TransformedCore::help_delete(Node* node) {
  // The mark bit is only ever set after delete_info is published.
  calculator_.update_metadata(*node->delete_info.load(), OpKind::Delete);
}

void TransformedCore::mark(Node* node) {
  auto word = node->next.load();
  while (!is_marked(word) && !node->next.compare_exchange_weak(word, word | kMarkBit)) {
  }
}

void TransformedCore::unlink_check([[maybe_unused]] const Node* node) const {
  if constexpr (instrument::kEnabled) {
    const UpdateInfo* info = node->delete_info.load();
    if (info == nullptr || calculator_.counter(info->tid, OpKind::Delete) < info->counter) {
      instrument::stats().unlink_before_metadata.fetch_add(1);
    }
  }
}

TransformedCore::Window TransformedCore::find(ThreadId caller, Node* head, Key key) {
retry:
  Node* pred = head;
  Node* curr = to_node(pred->next.load());
  while (true) {
    const auto succ = curr->next.load();
    if (is_marked(succ)) {
      // Reflect the deletion in the metadata before anyone can stop seeing
      // the node.
      help_delete(curr);
      instrument::yield_point(YieldPoint::SearchBeforeUnlink);
      unlink_check(curr);
      auto expected = to_word(curr);
      if (!pred->next.compare_exchange_strong(expected, succ & ~kMarkBit)) goto retry;
      domain_->retire(caller, curr);
      curr = to_node(succ);
      continue;
    }
    if (curr->key >= key) return {pred, curr};
    pred = curr;
    curr = to_node(succ);
  }
}

bool TransformedCore::insert(ThreadId caller, std::size_t bucket, Key key) {
  check_key(key);
  auto guard = domain_->pin(caller);
  Node* head = heads_[bucket];

  std::unique_ptr<Node> fresh;
  const UpdateInfo* info = nullptr;
  while (true) {
    auto [pred, curr] = find(caller, head, key);
    if (curr->key == key) {
      help_insert(caller, curr);
      return false;
    }
    if (!fresh) {
      auto created = calculator_.create_update_info(caller, OpKind::Insert);
      info = created.get();
      fresh = std::make_unique<Node>(key, created.release());
    }
    fresh->next.store(to_word(curr));
    instrument::yield_point(YieldPoint::InsertBeforeLink);
    auto expected = to_word(curr);
    if (pred->next.compare_exchange_strong(expected, to_word(fresh.get()))) break;
  }

  Node* node = fresh.release();
  instrument::yield_point(YieldPoint::InsertAfterLink);
  calculator_.update_metadata(*info, OpKind::Insert);
  instrument::yield_point(YieldPoint::InsertAfterMetadata);
  if (node->insert_info.compare_exchange_strong(info, nullptr)) domain_->retire(caller, info);
  return true;
}

bool TransformedCore::remove(ThreadId caller, std::size_t bucket, Key key) {
  check_key(key);
  auto guard = domain_->pin(caller);
  Node* head = heads_[bucket];

  auto [pred, curr] = find(caller, head, key);
  if (curr->key != key) return false;

  help_insert(caller, curr);
  auto created = calculator_.create_update_info(caller, OpKind::Delete);
  instrument::yield_point(YieldPoint::DeleteBeforeClaim);

  // Whoever installs delete_info owns the deletion; losers help it finish and
  // report failure.
  const UpdateInfo* owner = nullptr;
  if (!curr->delete_info.compare_exchange_strong(owner, created.get())) {
    mark(curr);
    help_delete(curr);
    return false;
  }
  const UpdateInfo* info = created.release();

  mark(curr);
  instrument::yield_point(YieldPoint::DeleteAfterMark);
  calculator_.update_metadata(*info, OpKind::Delete);
  instrument::yield_point(YieldPoint::DeleteAfterMetadata);

  unlink_check(curr);
  auto expected = to_word(curr);
  if (pred->next.compare_exchange_strong(expected, curr->next.load() & ~kMarkBit)) {
    domain_->retire(caller, curr);
  } else {
    find(caller, head, key);
  }
  return true;
}

bool TransformedCore::contains(ThreadId caller, std::size_t bucket, Key key) {
  check_key(key);
  auto guard = domain_->pin(caller);

  Node* curr = to_node(heads_[bucket]->next.load());
  while (curr->key < key) curr = to_node(curr->next.load());
  instrument::yield_point(YieldPoint::ContainsAfterSearch);

  if (curr->key != key) return false;
  if (is_marked(curr->next.load())) {
    help_delete(curr);
    return false;
  }
  help_insert(caller, curr);
  return true;
}

std::optional<std::string> TransformedCore::validate(std::size_t (*bucket_of)(Key, std::size_t)) const {
  for (std::size_t b = 0; b < heads_.size(); ++b) {
    Key previous = heads_[b]->key;
    for (Node* n = to_node(heads_[b]->next.load()); n != tail_; n = to_node(n->next.load())) {
      std::ostringstream why;
      if (n->key <= previous) {
        why << "bucket " << b << ": key " << n->key << " follows " << previous;
        return why.str();
      }
      if (bucket_of(n->key, heads_.size()) != b) {
        why << "key " << n->key << " found in bucket " << b;
        return why.str();
      }
      if (is_marked(n->next.load()) && n->delete_info.load() == nullptr) {
        why << "marked node " << n->key << " without delete info";
        return why.str();
      }
      previous = n->key;
    }
  }
  return std::nullopt;
}

std::size_t TransformedCore::count_unmarked() const {
  std::size_t count = 0;
  for (Node* head : heads_) {
    for (Node* n = to_node(head->next.load()); n != tail_; n = to_node(n->next.load())) {
      if (!is_marked(n->next.load())) ++count;
    }
  }
  return count;
}

}  // namespace csize::detail
