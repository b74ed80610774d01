#pragma once

#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "ziptree/errors.hpp"
#include "ziptree/zip_tree.hpp"

namespace ziptree {

/// Joins two trees whose key ranges do not overlap (every key of `low` below
/// every key of `high`) by zipping the right spine of `low` with the left
/// spine of `high`. Both inputs are consumed.
///
/// `stats->nodes_visited` receives the number of spine nodes the zip passed
/// over; `link_writes` the links it rewrote.
///
/// Throws KeyOverlap on overlapping ranges and std::invalid_argument if the
/// rank policies are not interchangeable. Inputs are untouched on error.
template <class Key, class Value, class Compare>
ZipTree<Key, Value, Compare> catenate(ZipTree<Key, Value, Compare>&& low, ZipTree<Key, Value, Compare>&& high,
                                      UpdateStats* stats = nullptr) {
    if (!low.policy().compatible_with(high.policy()))
        throw std::invalid_argument("catenate: trees use different rank policies");
    if (low.empty()) return std::move(high);
    if (high.empty()) return std::move(low);
    if (!low.key_comp()(low.max_node()->key, high.min_node()->key))
        throw KeyOverlap("catenate: largest key of the first tree is not below the smallest key of the second");

    std::optional<std::size_t> count;
    if (low.known_size() && high.known_size()) count = *low.known_size() + *high.known_size();
    const RankPolicy policy = low.policy();
    const Rng rng = low.rng();
    const Compare less = low.key_comp();
    auto* a = low.release();
    auto* b = high.release();
    UpdateStats local;
    auto* root = zip_top_down(a, b, stats != nullptr ? stats : &local);
    return ZipTree<Key, Value, Compare>::adopt(root, policy, rng, count, less);
}

/// Splits into (keys <= k, keys > k) by unzipping the search path for k.
/// Node ranks and payloads are preserved; the input is consumed. The second
/// tree gets a fresh generator derived from the input's.
template <class Key, class Value, class Compare>
std::pair<ZipTree<Key, Value, Compare>, ZipTree<Key, Value, Compare>> split(ZipTree<Key, Value, Compare>&& t,
                                                                           const std::type_identity_t<Key>& k,
                                                                           std::size_t* path_nodes = nullptr) {
    const RankPolicy policy = t.policy();
    const Compare less = t.key_comp();
    Rng low_rng = t.rng();
    const Rng high_rng(low_rng());
    auto* root = t.release();
    auto [lo, hi] = unzip_by(root, [&](const Key& key) { return !less(k, key); }, path_nodes);
    using Tree = ZipTree<Key, Value, Compare>;
    return {Tree::adopt(lo, policy, low_rng, std::nullopt, less), Tree::adopt(hi, policy, high_rng, std::nullopt, less)};
}

}  // namespace ziptree
