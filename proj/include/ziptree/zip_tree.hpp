#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ziptree/errors.hpp"
#include "ziptree/rank.hpp"
#include "ziptree/shape.hpp"

namespace ziptree {

enum class Strategy {
    recursive,  ///< reference form; recursion depth equals the search depth
    iterative,  ///< top-down form; default
};

/// Cost counters of one update.
///
/// `link_writes` counts assignments to child links of nodes that were already
/// in the tree plus the single parent-or-root attachment; initialising the
/// links of a freshly inserted node is not counted.
struct UpdateStats {
    std::size_t nodes_visited = 0;  ///< search path length
    std::size_t path_nodes = 0;     ///< unzipped path, or both zipped spines in full
    std::size_t link_writes = 0;

    UpdateStats& operator+=(const UpdateStats& o) noexcept {
        nodes_visited += o.nodes_visited;
        path_nodes += o.path_nodes;
        link_writes += o.link_writes;
        return *this;
    }
};

template <class Key, class Value>
struct Node {
    Key key;
    Rank rank;
    Node* left = nullptr;
    Node* right = nullptr;
    Value value{};
};

struct Violation {
    enum class Kind {
        symmetric_order,
        left_rank,   ///< left child rank not strictly below its parent
        right_rank,  ///< right child rank above its parent
        duplicate_key,
        malformed_rank,
        count_mismatch,
    };
    Kind kind;
    std::string message;
};

[[nodiscard]] inline const char* to_string(Violation::Kind k) noexcept {
    switch (k) {
        case Violation::Kind::symmetric_order: return "symmetric-order";
        case Violation::Kind::left_rank: return "heap-order-left";
        case Violation::Kind::right_rank: return "heap-order-right";
        case Violation::Kind::duplicate_key: return "duplicate-key";
        case Violation::Kind::malformed_rank: return "malformed-rank";
        case Violation::Kind::count_mismatch: return "count-mismatch";
    }
    return "unknown";
}

namespace detail {

template <class Key>
std::string describe_key(const Key& key) {
    if constexpr (requires(std::ostream& os, const Key& k) { os << k; }) {
        std::ostringstream os;
        os << key;
        return os.str();
    } else {
        return "<key>";
    }
}

inline std::string describe_rank(const Rank& r) {
    std::string s = std::to_string(r.integer);
    if (r.bits > 0) s += "+" + std::to_string(r.numerator) + "/2^" + std::to_string(r.bits);
    return s;
}

template <class Key, class Compare>
bool keys_equal(const Key& a, const Key& b, const Compare& less) {
    return !less(a, b) && !less(b, a);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Path primitives. They relink existing nodes and never allocate or free.

/// Recursive zip of the paths topped by `x` (smaller keys, followed through
/// right links) and `y` (larger keys, followed through left links). On equal
/// ranks the x-side node goes on top.
template <class N>
N* zip(N* x, N* y, UpdateStats* stats = nullptr) {
    if (x == nullptr) return y;
    if (y == nullptr) return x;
    if (stats != nullptr) {
        ++stats->nodes_visited;
        ++stats->link_writes;
    }
    if (x->rank < y->rank) {
        y->left = zip(x, y->left, stats);
        return y;
    }
    x->right = zip(x->right, y, stats);
    return x;
}

/// Same result as zip(), computed top-down. Writes one link per run of
/// consecutive nodes taken from the same side.
template <class N>
N* zip_top_down(N* x, N* y, UpdateStats* stats = nullptr) {
    if (x == nullptr) return y;
    if (y == nullptr) return x;
    N* top = x->rank < y->rank ? y : x;
    N* prev = nullptr;
    while (x != nullptr && y != nullptr) {
        if (x->rank >= y->rank) {
            do {
                prev = x;
                x = x->right;
                if (stats != nullptr) ++stats->nodes_visited;
            } while (x != nullptr && x->rank >= y->rank);
            prev->right = y;
        } else {
            do {
                prev = y;
                y = y->left;
                if (stats != nullptr) ++stats->nodes_visited;
            } while (y != nullptr && x->rank < y->rank);
            prev->left = x;
        }
        if (stats != nullptr) ++stats->link_writes;
    }
    return top;
}

/// Splits the search path of a subtree into P (nodes where `goes_low` holds,
/// chained through right links) and Q (the rest, chained through left links).
/// `goes_low` must be monotone in key order.
template <class N, class Pred>
std::pair<N*, N*> unzip_by(N* subtree, Pred goes_low, std::size_t* path_nodes = nullptr) {
    N* low = nullptr;
    N* high = nullptr;
    N** low_tail = &low;
    N** high_tail = &high;
    for (N* cur = subtree; cur != nullptr;) {
        if (path_nodes != nullptr) ++*path_nodes;
        if (goes_low(cur->key)) {
            *low_tail = cur;
            low_tail = &cur->right;
            cur = cur->right;
        } else {
            *high_tail = cur;
            high_tail = &cur->left;
            cur = cur->left;
        }
    }
    *low_tail = nullptr;
    *high_tail = nullptr;
    return {low, high};
}

/// Unzip around a key that must not occur in the subtree (throws KeyPresent;
/// the subtree is left untouched in that case).
template <class N, class Key, class Compare = std::less<Key>>
std::pair<N*, N*> unzip(N* subtree, const Key& key, const Compare& less = Compare{}) {
    for (N* cur = subtree; cur != nullptr; cur = less(key, cur->key) ? cur->left : cur->right) {
        if (detail::keys_equal(cur->key, key, less))
            throw KeyPresent("unzip: key " + detail::describe_key(key) + " is present in the subtree");
    }
    return unzip_by(subtree, [&](const Key& k) { return less(k, key); });
}

// ---------------------------------------------------------------------------

/// Ordered map kept as a zip tree: a binary search tree max-heap-ordered by
/// random rank, ties broken toward smaller keys (a node's rank exceeds its
/// left child's and is at least its right child's).
///
/// The shape depends only on the (key, rank) pairs present. Single writer;
/// concurrent const access is safe while no writer is active.
template <class Key, class Value = std::monostate, class Compare = std::less<Key>>
class ZipTree {
public:
    using key_type = Key;
    using mapped_type = Value;
    using node_type = Node<Key, Value>;

    struct SearchResult {
        const Value* payload = nullptr;
        std::size_t nodes_visited = 0;
        [[nodiscard]] bool found() const noexcept { return payload != nullptr; }
    };

    struct InsertResult {
        bool inserted = false;  ///< false: key already present, tree untouched
        Rank rank;
        UpdateStats stats;
        explicit operator bool() const noexcept { return inserted; }
    };

    struct EraseResult {
        std::optional<Value> payload;  ///< empty: key not found
        Rank rank;
        UpdateStats stats;
        [[nodiscard]] bool found() const noexcept { return payload.has_value(); }
        explicit operator bool() const noexcept { return found(); }
    };

    explicit ZipTree(RankPolicy policy = {}, Compare less = Compare{})
        : policy_(policy), rng_(policy.seed), less_(std::move(less)) {
        policy_.check();
    }

    ZipTree(const ZipTree& other)
        : policy_(other.policy_), rng_(other.rng_), less_(other.less_), count_(other.count_),
          count_known_(other.count_known_) {
        std::vector<std::pair<const node_type*, node_type**>> stack;
        stack.emplace_back(other.root_, &root_);
        while (!stack.empty()) {
            auto [src, slot] = stack.back();
            stack.pop_back();
            if (src == nullptr) continue;
            auto* copy = new node_type{src->key, src->rank, nullptr, nullptr, src->value};
            *slot = copy;
            stack.emplace_back(src->left, &copy->left);
            stack.emplace_back(src->right, &copy->right);
        }
    }

    ZipTree(ZipTree&& other) noexcept
        : root_(std::exchange(other.root_, nullptr)), policy_(other.policy_), rng_(other.rng_),
          less_(std::move(other.less_)), count_(std::exchange(other.count_, 0)),
          count_known_(std::exchange(other.count_known_, true)) {}

    ZipTree& operator=(ZipTree other) noexcept {
        swap(other);
        return *this;
    }

    ~ZipTree() { destroy(root_); }

    void swap(ZipTree& other) noexcept {
        std::swap(root_, other.root_);
        std::swap(policy_, other.policy_);
        std::swap(rng_, other.rng_);
        std::swap(less_, other.less_);
        std::swap(count_, other.count_);
        std::swap(count_known_, other.count_known_);
    }

    /// Number of nodes. After split() the count of each side is computed on
    /// first request.
    [[nodiscard]] std::size_t size() const {
        if (!count_known_) {
            count_ = count_reachable(root_, static_cast<std::size_t>(-1));
            count_known_ = true;
        }
        return count_;
    }
    [[nodiscard]] std::optional<std::size_t> known_size() const noexcept {
        return count_known_ ? std::optional<std::size_t>(count_) : std::nullopt;
    }
    [[nodiscard]] bool empty() const noexcept { return root_ == nullptr; }
    [[nodiscard]] const RankPolicy& policy() const noexcept { return policy_; }
    [[nodiscard]] const node_type* root() const noexcept { return root_; }
    [[nodiscard]] const Compare& key_comp() const noexcept { return less_; }

    void clear() noexcept {
        destroy(root_);
        root_ = nullptr;
        count_ = 0;
        count_known_ = true;
    }

    [[nodiscard]] SearchResult search(const Key& key) const {
        SearchResult r;
        for (const node_type* cur = root_; cur != nullptr;) {
            ++r.nodes_visited;
            if (less_(key, cur->key)) {
                cur = cur->left;
            } else if (less_(cur->key, key)) {
                cur = cur->right;
            } else {
                r.payload = &cur->value;
                break;
            }
        }
        return r;
    }

    [[nodiscard]] bool contains(const Key& key) const { return search(key).found(); }

    [[nodiscard]] const Value* find(const Key& key) const { return search(key).payload; }
    [[nodiscard]] Value* find(const Key& key) {
        return const_cast<Value*>(std::as_const(*this).search(key).payload);
    }

    /// The rank a new node with this key would receive next. In stored mode
    /// this advances the generator.
    Rank next_rank(const Key& key) {
        return policy_.mode == RankMode::key_function ? rank_of_key(key, policy_)
                                                      : draw_rank(rng_, policy_);
    }

    InsertResult insert(const Key& key, Value value = Value{}, Strategy strategy = Strategy::iterative) {
        if (auto probe = search(key); probe.found()) {
            InsertResult r;
            r.stats.nodes_visited = probe.nodes_visited;
            return r;
        }
        return insert_new(key, std::move(value), next_rank(key), strategy);
    }

    /// Insert with a caller-chosen rank, bypassing the policy. Used by the
    /// test oracle and by replay tooling to reproduce exact shapes.
    InsertResult insert_with_rank(const Key& key, Value value, Rank rank,
                                  Strategy strategy = Strategy::iterative) {
        if (!rank.well_formed()) throw std::invalid_argument("insert_with_rank: malformed rank");
        if (auto probe = search(key); probe.found()) {
            InsertResult r;
            r.stats.nodes_visited = probe.nodes_visited;
            return r;
        }
        return insert_new(key, std::move(value), rank, strategy);
    }

    EraseResult erase(const Key& key, Strategy strategy = Strategy::iterative) {
        EraseResult r;
        node_type* parent = nullptr;
        node_type* victim = root_;
        while (victim != nullptr) {
            ++r.stats.nodes_visited;
            if (less_(key, victim->key)) {
                parent = victim;
                victim = victim->left;
            } else if (less_(victim->key, key)) {
                parent = victim;
                victim = victim->right;
            } else {
                break;
            }
        }
        if (victim == nullptr) return r;

        for (const node_type* n = victim->left; n != nullptr; n = n->right) ++r.stats.path_nodes;
        for (const node_type* n = victim->right; n != nullptr; n = n->left) ++r.stats.path_nodes;

        // The zip routines count the nodes they consume as visits; only their
        // link writes belong to this update's counters.
        UpdateStats zipped;
        if (strategy == Strategy::recursive) {
            node_type* new_root = erase_recursive(key, root_, zipped);
            if (new_root != root_) {
                root_ = new_root;
                ++r.stats.link_writes;
            }
        } else {
            node_type* top = zip_top_down(victim->left, victim->right, &zipped);
            if (parent == nullptr)
                root_ = top;
            else if (less_(key, parent->key))
                parent->left = top;
            else
                parent->right = top;
            ++r.stats.link_writes;
        }
        r.stats.link_writes += zipped.link_writes;

        r.payload.emplace(std::move(victim->value));
        r.rank = victim->rank;
        delete victim;
        if (count_known_) --count_;
        return r;
    }

    /// Every invariant violation found; empty when the tree is valid.
    [[nodiscard]] std::vector<Violation> validate() const {
        std::vector<Violation> out;
        struct Frame {
            const node_type* node;
            const Key* lo;
            const Key* hi;
        };
        // In-order walk with key bounds. The walk is capped so that corrupted
        // link structures (shared nodes, cycles) still terminate.
        const std::size_t cap = count_known_ ? count_ + 1 : static_cast<std::size_t>(-1);
        std::size_t reached = 0;
        const Key* prev_key = nullptr;
        std::vector<Frame> stack;
        Frame cur{root_, nullptr, nullptr};
        bool truncated = false;
        while ((cur.node != nullptr || !stack.empty()) && !truncated) {
            while (cur.node != nullptr) {
                stack.push_back(cur);
                cur = Frame{cur.node->left, cur.lo, &cur.node->key};
            }
            Frame f = stack.back();
            stack.pop_back();
            const node_type& n = *f.node;
            if (++reached > cap) {
                truncated = true;
                break;
            }
            check_node(n, f.lo, f.hi, out);
            if (prev_key != nullptr && detail::keys_equal(*prev_key, n.key, less_))
                out.push_back({Violation::Kind::duplicate_key,
                               "key " + detail::describe_key(n.key) + " occurs more than once"});
            prev_key = &n.key;
            cur = Frame{n.right, &n.key, f.hi};
        }
        if (truncated) {
            out.push_back({Violation::Kind::count_mismatch,
                           "more than " + std::to_string(count_) +
                               " nodes reachable (shared nodes or a cycle)"});
        } else if (count_known_ && reached != count_) {
            out.push_back({Violation::Kind::count_mismatch,
                           "count is " + std::to_string(count_) + " but " + std::to_string(reached) +
                               " nodes are reachable"});
        }
        return out;
    }

    [[nodiscard]] Shape<Key> shape() const {
        Shape<Key> s;
        struct Item {
            const node_type* node;
            std::int32_t parent;
            bool is_left;
        };
        std::vector<Item> stack;
        if (root_ != nullptr) stack.push_back({root_, -1, false});
        while (!stack.empty()) {
            Item it = stack.back();
            stack.pop_back();
            const auto idx = static_cast<std::int32_t>(s.nodes.size());
            s.nodes.push_back({it.node->key, it.node->rank, -1, -1});
            if (it.parent < 0)
                s.root = idx;
            else if (it.is_left)
                s.nodes[static_cast<std::size_t>(it.parent)].left = idx;
            else
                s.nodes[static_cast<std::size_t>(it.parent)].right = idx;
            if (it.node->right != nullptr) stack.push_back({it.node->right, idx, false});
            if (it.node->left != nullptr) stack.push_back({it.node->left, idx, true});
        }
        return s;
    }

    /// Builds a tree with exactly the given structure, without checking any
    /// zip-tree invariant (run validate() afterwards if that matters).
    /// Payloads are value-initialised. Throws std::invalid_argument if an
    /// index is out of range or reused.
    static ZipTree from_shape(const Shape<Key>& shape, RankPolicy policy = {}, Compare less = Compare{}) {
        ZipTree t(policy, std::move(less));
        std::vector<bool> used(shape.nodes.size(), false);
        std::vector<std::pair<std::int32_t, node_type**>> stack;
        stack.emplace_back(shape.root, &t.root_);
        std::size_t count = 0;
        while (!stack.empty()) {
            auto [idx, slot] = stack.back();
            stack.pop_back();
            if (idx < 0) continue;
            const auto i = static_cast<std::size_t>(idx);
            if (i >= shape.nodes.size() || used[i])
                throw std::invalid_argument("from_shape: child index out of range or reused");
            used[i] = true;
            const auto& e = shape.nodes[i];
            auto* n = new node_type{e.key, e.rank, nullptr, nullptr, Value{}};
            *slot = n;
            ++count;
            stack.emplace_back(e.left, &n->left);
            stack.emplace_back(e.right, &n->right);
        }
        t.count_ = count;
        return t;
    }

    /// Linear-time construction from (key, rank) pairs in strictly increasing
    /// key order, keeping a stack of the right spine.
    static ZipTree from_sorted(std::span<const std::pair<Key, Rank>> items, RankPolicy policy = {},
                               Compare less = Compare{}) {
        ZipTree t(policy, std::move(less));
        std::vector<node_type*> spine;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto& [key, rank] = items[i];
            if (i > 0 && !t.less_(items[i - 1].first, key))
                throw std::invalid_argument("from_sorted: keys must be strictly increasing");
            auto* n = new node_type{key, rank, nullptr, nullptr, Value{}};
            node_type* last_popped = nullptr;
            while (!spine.empty() && spine.back()->rank < rank) {
                last_popped = spine.back();
                spine.pop_back();
            }
            n->left = last_popped;
            if (spine.empty())
                t.root_ = n;
            else
                spine.back()->right = n;
            spine.push_back(n);
            ++t.count_;
        }
        return t;
    }

    /// Hands the node graph to the caller; the tree becomes empty.
    [[nodiscard]] node_type* release() noexcept {
        count_ = 0;
        count_known_ = true;
        return std::exchange(root_, nullptr);
    }

    /// Takes ownership of a node graph. With no count, size() counts lazily.
    static ZipTree adopt(node_type* root, RankPolicy policy, Rng rng, std::optional<std::size_t> count,
                         Compare less = Compare{}) {
        ZipTree t(policy, std::move(less));
        t.rng_ = rng;
        t.root_ = root;
        if (count) {
            t.count_ = *count;
        } else {
            t.count_known_ = false;
        }
        return t;
    }

    [[nodiscard]] Rng& rng() noexcept { return rng_; }

    /// Preorder visit: f(const node_type&, std::size_t depth).
    template <class F>
    void visit(F&& f) const {
        std::vector<std::pair<const node_type*, std::size_t>> stack;
        if (root_ != nullptr) stack.emplace_back(root_, 0);
        while (!stack.empty()) {
            auto [n, d] = stack.back();
            stack.pop_back();
            f(*n, d);
            if (n->right != nullptr) stack.emplace_back(n->right, d + 1);
            if (n->left != nullptr) stack.emplace_back(n->left, d + 1);
        }
    }

    /// In-order visit: f(const node_type&).
    template <class F>
    void for_each(F&& f) const {
        std::vector<const node_type*> stack;
        const node_type* cur = root_;
        while (cur != nullptr || !stack.empty()) {
            while (cur != nullptr) {
                stack.push_back(cur);
                cur = cur->left;
            }
            cur = stack.back();
            stack.pop_back();
            f(*cur);
            cur = cur->right;
        }
    }

    [[nodiscard]] const node_type* min_node() const noexcept {
        const node_type* n = root_;
        while (n != nullptr && n->left != nullptr) n = n->left;
        return n;
    }
    [[nodiscard]] const node_type* max_node() const noexcept {
        const node_type* n = root_;
        while (n != nullptr && n->right != nullptr) n = n->right;
        return n;
    }

private:
    InsertResult insert_new(const Key& key, Value value, Rank rank, Strategy strategy) {
        InsertResult r;
        r.inserted = true;
        r.rank = rank;
        auto* x = new node_type{key, rank, nullptr, nullptr, std::move(value)};
        if (strategy == Strategy::recursive) {
            r.stats.nodes_visited = search_depth(key);
            node_type* new_root = insert_recursive(x, root_, r.stats);
            if (new_root != root_) {
                root_ = new_root;
                ++r.stats.link_writes;
            }
        } else {
            insert_iterative(x, r.stats);
        }
        if (count_known_) ++count_;
        return r;
    }

    std::size_t search_depth(const Key& key) const {
        std::size_t d = 0;
        for (const node_type* cur = root_; cur != nullptr; cur = less_(key, cur->key) ? cur->left : cur->right)
            ++d;
        return d;
    }

    node_type* insert_recursive(node_type* x, node_type* root, UpdateStats& stats) {
        if (root == nullptr) return x;
        if (less_(x->key, root->key)) {
            if (insert_recursive(x, root->left, stats) == x) {
                ++stats.link_writes;
                if (x->rank < root->rank) {
                    root->left = x;
                } else {
                    root->left = x->right;
                    x->right = root;
                    ++stats.path_nodes;
                    return x;
                }
            }
        } else {
            if (insert_recursive(x, root->right, stats) == x) {
                ++stats.link_writes;
                if (x->rank <= root->rank) {
                    root->right = x;
                } else {
                    root->right = x->left;
                    x->left = root;
                    ++stats.path_nodes;
                    return x;
                }
            }
        }
        return root;
    }

    void insert_iterative(node_type* x, UpdateStats& stats) {
        const Rank rank = x->rank;
        const Key& key = x->key;

        node_type* cur = root_;
        node_type* prev = nullptr;
        while (cur != nullptr && (rank < cur->rank || (rank == cur->rank && less_(cur->key, key)))) {
            ++stats.nodes_visited;
            prev = cur;
            cur = less_(key, cur->key) ? cur->left : cur->right;
        }

        if (cur == root_)
            root_ = x;
        else if (less_(key, prev->key))
            prev->left = x;
        else
            prev->right = x;
        ++stats.link_writes;

        if (cur == nullptr) return;
        if (less_(key, cur->key))
            x->right = cur;
        else
            x->left = cur;
        prev = x;

        // Unzip the rest of the search path: runs below `key` hang off the
        // right links of P, runs above it off the left links of Q.
        while (cur != nullptr) {
            node_type* fix = prev;
            if (less_(cur->key, key)) {
                do {
                    prev = cur;
                    cur = cur->right;
                    ++stats.path_nodes;
                } while (cur != nullptr && !less_(key, cur->key));
            } else {
                do {
                    prev = cur;
                    cur = cur->left;
                    ++stats.path_nodes;
                } while (cur != nullptr && !less_(cur->key, key));
            }
            if (less_(key, fix->key) || (fix == x && less_(key, prev->key)))
                fix->left = cur;
            else
                fix->right = cur;
            if (fix != x) ++stats.link_writes;
        }
        stats.nodes_visited += stats.path_nodes;
    }

    // Requires the key to be present under `root`.
    node_type* erase_recursive(const Key& key, node_type* root, UpdateStats& stats) {
        if (detail::keys_equal(key, root->key, less_)) return zip(root->left, root->right, &stats);
        if (less_(key, root->key)) {
            if (detail::keys_equal(key, root->left->key, less_)) {
                root->left = zip(root->left->left, root->left->right, &stats);
                ++stats.link_writes;
            } else {
                erase_recursive(key, root->left, stats);
            }
        } else {
            if (detail::keys_equal(key, root->right->key, less_)) {
                root->right = zip(root->right->left, root->right->right, &stats);
                ++stats.link_writes;
            } else {
                erase_recursive(key, root->right, stats);
            }
        }
        return root;
    }

    void check_node(const node_type& n, const Key* lo, const Key* hi, std::vector<Violation>& out) const {
        const std::string k = detail::describe_key(n.key);
        if (!n.rank.well_formed())
            out.push_back({Violation::Kind::malformed_rank, "node " + k + " has a malformed rank"});
        if ((lo != nullptr && !less_(*lo, n.key)) || (hi != nullptr && !less_(n.key, *hi)))
            out.push_back({Violation::Kind::symmetric_order, "node " + k + " is outside its key interval"});
        if (n.left != nullptr && !(n.left->rank < n.rank))
            out.push_back({Violation::Kind::left_rank,
                           "left child " + detail::describe_key(n.left->key) + " (rank " +
                               detail::describe_rank(n.left->rank) + ") is not below parent " + k +
                               " (rank " + detail::describe_rank(n.rank) + ")"});
        if (n.right != nullptr && n.rank < n.right->rank)
            out.push_back({Violation::Kind::right_rank,
                           "right child " + detail::describe_key(n.right->key) + " (rank " +
                               detail::describe_rank(n.right->rank) + ") is above parent " + k + " (rank " +
                               detail::describe_rank(n.rank) + ")"});
    }

    static std::size_t count_reachable(const node_type* root, std::size_t cap) {
        std::size_t c = 0;
        std::vector<const node_type*> stack;
        if (root != nullptr) stack.push_back(root);
        while (!stack.empty() && c < cap) {
            const node_type* n = stack.back();
            stack.pop_back();
            ++c;
            if (n->left != nullptr) stack.push_back(n->left);
            if (n->right != nullptr) stack.push_back(n->right);
        }
        return c;
    }

    static void destroy(node_type* root) noexcept {
        // Flatten by right rotations so no auxiliary stack is needed.
        while (root != nullptr) {
            if (node_type* l = root->left) {
                root->left = l->right;
                l->right = root;
                root = l;
            } else {
                node_type* next = root->right;
                delete root;
                root = next;
            }
        }
    }

    node_type* root_ = nullptr;
    RankPolicy policy_;
    Rng rng_;
    [[no_unique_address]] Compare less_;
    mutable std::size_t count_ = 0;
    mutable bool count_known_ = true;
};

}  // namespace ziptree
