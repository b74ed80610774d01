#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ziptree/rank.hpp"

namespace ziptree {

/// Value snapshot of a tree's keys, ranks and child structure.
///
/// Entries are stored in preorder with child links as indices (-1 = empty).
/// Producers in this library always emit preorder, but consumers must not
/// rely on it; compare with shape_equal.
template <class Key>
struct Shape {
    struct Entry {
        Key key;
        Rank rank;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::vector<Entry> nodes;
    std::int32_t root = -1;

    [[nodiscard]] bool empty() const noexcept { return root < 0; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Structural equality: same key, rank and children node-for-node.
/// Ranks compare exactly (integer, numerator and precision).
template <class Key>
[[nodiscard]] bool shape_equal(const Shape<Key>& a, const Shape<Key>& b) {
    std::vector<std::pair<std::int32_t, std::int32_t>> stack;
    stack.emplace_back(a.root, b.root);
    while (!stack.empty()) {
        auto [ia, ib] = stack.back();
        stack.pop_back();
        if ((ia < 0) != (ib < 0)) return false;
        if (ia < 0) continue;
        const auto& ea = a.nodes[static_cast<std::size_t>(ia)];
        const auto& eb = b.nodes[static_cast<std::size_t>(ib)];
        if (!(ea.key == eb.key)) return false;
        if (ea.rank.integer != eb.rank.integer || ea.rank.numerator != eb.rank.numerator ||
            ea.rank.bits != eb.rank.bits)
            return false;
        stack.emplace_back(ea.left, eb.left);
        stack.emplace_back(ea.right, eb.right);
    }
    return true;
}

}  // namespace ziptree
