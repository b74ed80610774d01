#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ziptree/errors.hpp"
#include "ziptree/zip_tree.hpp"

namespace ziptree {

/// Skip list as a stack of sorted key lists, level 0 at the bottom.
///
/// Every level starts with an implicit minus-infinity header that is not a
/// key; `levels[i]` lists only the real items after it. A skip list always
/// has at least one level.
template <class Key, class Compare = std::less<Key>>
struct SkipList {
    std::vector<std::vector<Key>> levels{1};

    [[nodiscard]] std::size_t level_count() const noexcept { return levels.size(); }

    [[nodiscard]] std::size_t total_items() const noexcept {
        std::size_t n = 0;
        for (const auto& l : levels) n += l.size();
        return n;
    }

    /// Highest level whose list contains `key`.
    [[nodiscard]] std::optional<std::uint32_t> item_level(const Key& key, const Compare& less = Compare{}) const {
        for (std::size_t i = levels.size(); i-- > 0;) {
            if (std::binary_search(levels[i].begin(), levels[i].end(), key, less))
                return static_cast<std::uint32_t>(i);
        }
        return std::nullopt;
    }

    /// Throws MalformedLevels unless there is at least one level, every level
    /// is strictly increasing and each level is contained in the one below.
    void check(const Compare& less = Compare{}) const {
        if (levels.empty()) throw MalformedLevels("skip list has no levels");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto& l = levels[i];
            for (std::size_t j = 1; j < l.size(); ++j)
                if (!less(l[j - 1], l[j]))
                    throw MalformedLevels("level " + std::to_string(i) + " is not strictly increasing");
            if (i > 0 && !std::includes(levels[i - 1].begin(), levels[i - 1].end(), l.begin(), l.end(), less))
                throw MalformedLevels("level " + std::to_string(i) + " is not contained in level " +
                                      std::to_string(i - 1));
        }
    }
};

template <class Key>
struct Visit {
    Key key;
    std::uint32_t level;
    friend bool operator==(const Visit&, const Visit&) = default;
};

template <class Key>
struct SkipSearchResult {
    bool found = false;
    std::vector<Visit<Key>> trace;  ///< item comparisons, header hops excluded
};

/// Level i holds every item of rank >= i, for i up to the maximum rank.
/// Throws FractionalRanks if a node's rank has a nonzero fraction.
template <class Key, class Value, class Compare>
SkipList<Key, Compare> tree_to_skiplist(const ZipTree<Key, Value, Compare>& t) {
    std::vector<std::pair<Key, std::uint32_t>> items;
    std::uint32_t top = 0;
    t.for_each([&](const auto& n) {
        if (!n.rank.is_integral())
            throw FractionalRanks("tree_to_skiplist: node " + detail::describe_key(n.key) +
                                  " has a fractional rank");
        items.emplace_back(n.key, n.rank.integer);
        top = std::max(top, n.rank.integer);
    });
    SkipList<Key, Compare> s;
    s.levels.assign(static_cast<std::size_t>(top) + 1, {});
    for (const auto& [key, rank] : items)
        for (std::uint32_t i = 0; i <= rank; ++i) s.levels[i].push_back(key);
    return s;
}

/// Rank of each item = highest level containing it; the tree is the unique
/// zip tree over those (key, rank) pairs. Throws MalformedLevels.
template <class Key, class Value = std::monostate, class Compare = std::less<Key>>
ZipTree<Key, Value, Compare> skiplist_to_tree(const SkipList<Key, Compare>& s, RankPolicy policy = {},
                                              const Compare& less = Compare{}) {
    s.check(less);
    const auto& base = s.levels[0];
    std::vector<std::pair<Key, Rank>> items;
    items.reserve(base.size());
    for (const auto& k : base) items.emplace_back(k, Rank{0});
    for (std::size_t lvl = 1; lvl < s.levels.size(); ++lvl) {
        // Containment was checked, so a merge walk finds every item.
        std::size_t j = 0;
        for (const auto& k : s.levels[lvl]) {
            while (less(items[j].first, k)) ++j;
            items[j].second = Rank{static_cast<std::uint32_t>(lvl)};
        }
    }
    return ZipTree<Key, Value, Compare>::from_sorted(items, policy, less);
}

/// Top-down skip-list search. An item already found to be larger than the
/// key on a higher level is not compared again when it reappears as the
/// successor on a lower level.
template <class Key, class Compare = std::less<Key>>
SkipSearchResult<Key> skiplist_search(const SkipList<Key, Compare>& s, const Key& key,
                                      const Compare& less = Compare{}) {
    SkipSearchResult<Key> r;
    const Key* pos = nullptr;   // nullptr: the header
    const Key* stop = nullptr;  // smallest item known to exceed `key`
    for (std::size_t lvl = s.levels.size(); lvl-- > 0;) {
        const auto& list = s.levels[lvl];
        auto it = pos == nullptr ? list.begin() : std::upper_bound(list.begin(), list.end(), *pos, less);
        for (; it != list.end(); ++it) {
            if (stop != nullptr && detail::keys_equal(*it, *stop, less)) break;
            r.trace.push_back({*it, static_cast<std::uint32_t>(lvl)});
            if (less(key, *it)) {
                stop = &*it;
                break;
            }
            if (!less(*it, key)) {
                r.found = true;
                return r;
            }
            pos = &*it;
        }
    }
    return r;
}

}  // namespace ziptree
