#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ziptree/errors.hpp"
#include "ziptree/rank.hpp"
#include "ziptree/shape.hpp"

namespace ziptree {

/// Set of (key, rank) pairs with pairwise distinct keys.
template <class Key>
using KeyRankSet = std::vector<std::pair<Key, Rank>>;

/// Ground-truth shape for a key/rank set: the root is the smallest key among
/// the maximum-rank pairs, and each side is built the same way from the pairs
/// on that side. Quadratic in the worst case; meant for tests.
///
/// Throws DuplicateKeys if two pairs share a key.
template <class Key, class Compare = std::less<Key>>
Shape<Key> canonical_build(std::span<const std::pair<Key, Rank>> pairs, const Compare& less = Compare{}) {
    KeyRankSet<Key> sorted(pairs.begin(), pairs.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](const auto& a, const auto& b) { return less(a.first, b.first); });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (!less(sorted[i - 1].first, sorted[i].first)) throw DuplicateKeys("canonical_build: duplicate key");

    Shape<Key> out;
    out.nodes.reserve(sorted.size());

    // Each frame builds the subtree over sorted[lo, hi) and stores its root
    // index into *slot (a Shape child index, or the Shape root).
    struct Frame {
        std::size_t lo, hi;
        std::int32_t parent;
        bool is_left;
    };
    std::vector<Frame> stack;
    stack.push_back({0, sorted.size(), -1, false});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.lo >= f.hi) continue;
        std::size_t top = f.lo;
        for (std::size_t i = f.lo + 1; i < f.hi; ++i)
            if (sorted[top].second < sorted[i].second) top = i;  // first max == smallest key
        const auto idx = static_cast<std::int32_t>(out.nodes.size());
        out.nodes.push_back({sorted[top].first, sorted[top].second, -1, -1});
        if (f.parent < 0)
            out.root = idx;
        else if (f.is_left)
            out.nodes[static_cast<std::size_t>(f.parent)].left = idx;
        else
            out.nodes[static_cast<std::size_t>(f.parent)].right = idx;
        stack.push_back({top + 1, f.hi, idx, false});
        stack.push_back({f.lo, top, idx, true});
    }
    return out;
}

template <class Key, class Compare = std::less<Key>>
Shape<Key> canonical_build(const KeyRankSet<Key>& pairs, const Compare& less = Compare{}) {
    return canonical_build(std::span<const std::pair<Key, Rank>>(pairs), less);
}

}  // namespace ziptree
