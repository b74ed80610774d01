#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ziptree/shape.hpp"

namespace ziptree {

// Structure dump: one JSON value per tree. An empty subtree is `null`; a
// node is {"key": K, "rank": k, "frac": numerator, "bits": b, "left": ...,
// "right": ...} with members in exactly that order.

namespace detail {

template <class Key>
nlohmann::ordered_json node_to_json(const Shape<Key>& s, std::int32_t idx) {
    if (idx < 0) return nullptr;
    const auto& e = s.nodes[static_cast<std::size_t>(idx)];
    nlohmann::ordered_json j;
    j["key"] = e.key;
    j["rank"] = e.rank.integer;
    j["frac"] = e.rank.numerator;
    j["bits"] = e.rank.bits;
    j["left"] = node_to_json(s, e.left);
    j["right"] = node_to_json(s, e.right);
    return j;
}

template <class Key>
std::int32_t node_from_json(const nlohmann::ordered_json& j, Shape<Key>& s) {
    if (j.is_null()) return -1;
    if (!j.is_object()) throw std::invalid_argument("structure dump: node must be an object or null");
    Rank r;
    r.integer = j.at("rank").get<std::uint32_t>();
    r.numerator = j.value("frac", std::uint64_t{0});
    r.bits = j.value("bits", std::uint8_t{0});
    const auto idx = static_cast<std::int32_t>(s.nodes.size());
    s.nodes.push_back({j.at("key").get<Key>(), r, -1, -1});
    const std::int32_t l = node_from_json(j.contains("left") ? j.at("left") : nlohmann::ordered_json(), s);
    const std::int32_t rr = node_from_json(j.contains("right") ? j.at("right") : nlohmann::ordered_json(), s);
    s.nodes[static_cast<std::size_t>(idx)].left = l;
    s.nodes[static_cast<std::size_t>(idx)].right = rr;
    return idx;
}

}  // namespace detail

template <class Key>
nlohmann::ordered_json to_json(const Shape<Key>& s) {
    return detail::node_to_json(s, s.root);
}

/// Compact single-line rendering.
template <class Key>
std::string dump_shape(const Shape<Key>& s) {
    return to_json(s).dump();
}

/// Parses a structure dump. Throws std::invalid_argument or a
/// nlohmann::json exception on malformed input.
template <class Key>
Shape<Key> shape_from_json(const nlohmann::ordered_json& j) {
    Shape<Key> s;
    s.root = detail::node_from_json(j, s);
    return s;
}

template <class Key>
Shape<Key> parse_shape(const std::string& text) {
    return shape_from_json<Key>(nlohmann::ordered_json::parse(text));
}

}  // namespace ziptree
