#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "support.hpp"
#include "ziptree/oracle.hpp"
#include "ziptree/zip_tree.hpp"

using namespace ziptree;
using ziptree::testing::build_by_insertion;
using ziptree::testing::make_shape;
using ziptree::testing::random_key_ranks;
using ziptree::testing::Tree;

namespace {

constexpr Strategy kBoth[] = {Strategy::recursive, Strategy::iterative};

const char* name(Strategy s) { return s == Strategy::recursive ? "recursive" : "iterative"; }

Tree tree_123() {
    // root 2 (rank 1) with children 1 and 3 (rank 0)
    return Tree::from_shape(make_shape({{2, 1, 1, 2}, {1, 0, -1, -1}, {3, 0, -1, -1}}));
}

KeyRankSet<std::int64_t> pairs_of(const Tree& t) {
    KeyRankSet<std::int64_t> out;
    t.for_each([&](const auto& n) { out.emplace_back(n.key, n.rank); });
    return out;
}

std::size_t height(const Tree& t) {
    std::size_t h = 0;
    t.visit([&](const auto&, std::size_t d) { h = std::max(h, d); });
    return h;
}

}  // namespace

TEST_CASE("search") {
    SUBCASE("empty tree") {
        Tree t;
        const auto r = t.search(7);
        CHECK_FALSE(r.found());
        CHECK(r.nodes_visited == 0);
    }
    SUBCASE("hit and miss on a three-node tree") {
        const Tree t = tree_123();
        auto hit = t.search(3);
        CHECK(hit.found());
        CHECK(hit.nodes_visited == 2);
        auto miss = t.search(4);
        CHECK_FALSE(miss.found());
        CHECK(miss.nodes_visited == 2);
    }
}

TEST_CASE("insert") {
    for (Strategy s : kBoth) {
        CAPTURE(name(s));
        SUBCASE("into an empty tree") {
            Tree t;
            auto r = t.insert_with_rank(4, 40, Rank{3}, s);
            CHECK(r.inserted);
            REQUIRE(t.root() != nullptr);
            CHECK(t.root()->key == 4);
            CHECK(t.root()->left == nullptr);
            CHECK(t.root()->right == nullptr);
            CHECK(t.size() == 1);
        }
        SUBCASE("1, 2, 3 with ranks 0, 1, 0 in every order") {
            std::vector<std::pair<std::int64_t, std::uint32_t>> items{{1, 0}, {2, 1}, {3, 0}};
            std::sort(items.begin(), items.end());
            do {
                Tree t;
                for (auto [k, r] : items) t.insert_with_rank(k, k, Rank{r}, s);
                CHECK(shape_equal(t.shape(), tree_123().shape()));
            } while (std::next_permutation(items.begin(), items.end()));
        }
        SUBCASE("higher rank goes above") {
            Tree t;
            t.insert_with_rank(5, 0, Rank{0}, s);
            t.insert_with_rank(3, 0, Rank{2}, s);
            CHECK(shape_equal(t.shape(), make_shape({{3, 2, -1, 1}, {5, 0, -1, -1}})));
        }
        SUBCASE("duplicate key leaves the tree untouched") {
            Tree t = tree_123();
            const auto before = t.shape();
            auto r = t.insert_with_rank(2, 99, Rank{5}, s);
            CHECK_FALSE(r.inserted);
            CHECK(shape_equal(t.shape(), before));
            CHECK(*t.find(2) == 0);
        }
    }
}

TEST_CASE("erase") {
    for (Strategy s : kBoth) {
        CAPTURE(name(s));
        SUBCASE("the only node") {
            Tree t;
            t.insert_with_rank(1, 11, Rank{0}, s);
            auto r = t.erase(1, s);
            REQUIRE(r.found());
            CHECK(*r.payload == 11);
            CHECK(t.root() == nullptr);
            CHECK(t.empty());
            CHECK(t.size() == 0);
        }
        SUBCASE("the root of 1-2-3: rank tie resolved toward the smaller key") {
            Tree t = tree_123();
            CHECK(t.erase(2, s).found());
            CHECK(shape_equal(t.shape(), make_shape({{1, 0, -1, 1}, {3, 0, -1, -1}})));
        }
        SUBCASE("absent key") {
            Tree t = tree_123();
            auto r = t.erase(9, s);
            CHECK_FALSE(r.found());
            CHECK(shape_equal(t.shape(), tree_123().shape()));
            CHECK(t.size() == 3);
        }
    }
}

TEST_CASE("zip") {
    using N = Node<std::int64_t, std::monostate>;
    for (bool top_down : {false, true}) {
        CAPTURE(top_down);
        auto run = [&](N* x, N* y) { return top_down ? zip_top_down(x, y) : zip(x, y); };
        SUBCASE("null side") {
            N y{3, Rank{0}};
            CHECK(run(nullptr, &y) == &y);
            CHECK(run(&y, nullptr) == &y);
        }
        SUBCASE("tie keeps the x side on top") {
            N x{1, Rank{0}}, y{3, Rank{0}};
            N* top = run(&x, &y);
            CHECK(top == &x);
            CHECK(x.right == &y);
            CHECK(y.left == nullptr);
        }
        SUBCASE("higher y rank goes on top") {
            N x{1, Rank{0}}, y{3, Rank{2}};
            N* top = run(&x, &y);
            CHECK(top == &y);
            CHECK(y.left == &x);
        }
    }
}

TEST_CASE("unzip") {
    using N = Node<double, std::monostate>;
    SUBCASE("empty") {
        auto [p, q] = unzip<N>(nullptr, 1.0);
        CHECK(p == nullptr);
        CHECK(q == nullptr);
    }
    SUBCASE("three nodes around 2.5") {
        N one{1, Rank{0}}, three{3, Rank{0}};
        N two{2, Rank{1}, &one, &three};
        auto [p, q] = unzip(&two, 2.5);
        CHECK(p == &two);
        CHECK(two.left == &one);
        CHECK(two.right == nullptr);
        CHECK(q == &three);
    }
    SUBCASE("present key throws and leaves links alone") {
        N one{1, Rank{0}}, three{3, Rank{0}};
        N two{2, Rank{1}, &one, &three};
        CHECK_THROWS_AS(unzip(&two, 3.0), KeyPresent);
        CHECK(two.left == &one);
        CHECK(two.right == &three);
    }
}

TEST_CASE("zip after unzip rebuilds the same tree on small instances") {
    Rng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = rng.below(9);
        auto items = random_key_ranks(rng, n, 40);
        for (auto& [k, r] : items) k *= 2;  // even keys; probe with odd ones
        Tree t = build_by_insertion(items);
        const auto original = t.shape();
        const std::int64_t probe = static_cast<std::int64_t>(rng.below(82)) - 1;
        if (probe % 2 == 0) continue;
        Tree::node_type* root = t.release();
        auto [p, q] = unzip(root, probe);
        for (auto* n = p; n != nullptr; n = n->right) CHECK(n->key < probe);
        for (auto* n = q; n != nullptr; n = n->left) CHECK(n->key > probe);
        Tree back = Tree::adopt(zip(p, q), {}, Rng{}, items.size());
        CHECK(back.validate().empty());
        CHECK(shape_equal(back.shape(), original));
    }
}

TEST_CASE("validate") {
    SUBCASE("empty tree is valid") { CHECK(Tree{}.validate().empty()); }
    SUBCASE("left child with the parent's rank is rejected") {
        auto t = Tree::from_shape(make_shape({{2, 1, 1, -1}, {1, 1, -1, -1}}));
        auto v = t.validate();
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::left_rank);
    }
    SUBCASE("right child with the parent's rank is fine") {
        auto t = Tree::from_shape(make_shape({{1, 1, -1, 1}, {2, 1, -1, -1}}));
        CHECK(t.validate().empty());
    }
    SUBCASE("right child above its parent") {
        auto t = Tree::from_shape(make_shape({{1, 0, -1, 1}, {2, 1, -1, -1}}));
        auto v = t.validate();
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::right_rank);
    }
    SUBCASE("symmetric order") {
        auto t = Tree::from_shape(make_shape({{2, 2, 1, 2}, {3, 1, -1, -1}, {1, 0, -1, -1}}));
        auto v = t.validate();
        CHECK(std::count_if(v.begin(), v.end(),
                            [](const Violation& x) { return x.kind == Violation::Kind::symmetric_order; }) == 2);
    }
    SUBCASE("duplicate keys") {
        auto t = Tree::from_shape(make_shape({{2, 2, -1, 1}, {2, 1, -1, -1}}));
        auto v = t.validate();
        CHECK(std::any_of(v.begin(), v.end(),
                          [](const Violation& x) { return x.kind == Violation::Kind::duplicate_key; }));
    }
    SUBCASE("count mismatch") {
        auto shape = make_shape({{2, 1, -1, -1}});
        auto t = Tree::adopt(Tree::from_shape(shape).release(), {}, Rng{}, 3);
        auto v = t.validate();
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::count_mismatch);
    }
    SUBCASE("malformed rank") {
        Shape<std::int64_t> s;
        s.nodes.push_back({1, Rank{0, 9, 3}, -1, -1});
        s.root = 0;
        auto v = Tree::from_shape(s).validate();
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::malformed_rank);
    }
}

TEST_CASE("from_shape rejects shared or out-of-range children") {
    CHECK_THROWS_AS(Tree::from_shape(make_shape({{2, 1, 1, 1}, {1, 0, -1, -1}})), std::invalid_argument);
    CHECK_THROWS_AS(Tree::from_shape(make_shape({{2, 1, 5, -1}})), std::invalid_argument);
}

TEST_CASE("from_sorted matches the canonical shape") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto items = random_key_ranks(rng, rng.below(40), 1000, trial % 2 == 0 ? 0 : 3);
        std::sort(items.begin(), items.end());
        auto t = Tree::from_sorted(items);
        CHECK(t.validate().empty());
        CHECK(shape_equal(t.shape(), canonical_build(items)));
    }
    const std::vector<std::pair<std::int64_t, Rank>> unsorted{{2, Rank{0}}, {1, Rank{0}}};
    CHECK_THROWS_AS(Tree::from_sorted(unsorted), std::invalid_argument);
}

TEST_CASE("random update sequences keep every invariant") {
    // Both strategies replay the same operations with the same ranks.
    Rng rng(2024);
    for (int seq = 0; seq < 60; ++seq) {
        Tree rec, it;
        std::map<std::int64_t, std::int64_t> model;
        const std::uint64_t universe = 8 + rng.below(120);
        for (int step = 0; step < 300; ++step) {
            CAPTURE(seq);
            CAPTURE(step);
            const auto key = static_cast<std::int64_t>(rng.below(universe));
            const auto op = rng.below(3);
            if (op == 0) {
                const std::size_t depth_bound = 1 + height(it);
                auto a = rec.search(key), b = it.search(key);
                CHECK(a.found() == model.contains(key));
                CHECK(a.nodes_visited == b.nodes_visited);
                CHECK(b.nodes_visited <= depth_bound);
                if (b.found()) CHECK(*b.payload == model[key]);
            } else if (op == 1) {
                const Rank r = draw_rank(rng, RankPolicy{});
                auto a = rec.insert_with_rank(key, key + 1, r, Strategy::recursive);
                auto b = it.insert_with_rank(key, key + 1, r, Strategy::iterative);
                CHECK(a.inserted == !model.contains(key));
                CHECK(b.inserted == a.inserted);
                if (a.inserted) {
                    model[key] = key + 1;
                    CHECK(a.stats.path_nodes == b.stats.path_nodes);
                    CHECK(a.stats.nodes_visited == b.stats.nodes_visited);
                    CHECK(b.stats.link_writes <= b.stats.path_nodes + 1);
                    CHECK(a.stats.link_writes <= a.stats.path_nodes + 1);
                }
            } else {
                auto a = rec.erase(key, Strategy::recursive);
                auto b = it.erase(key, Strategy::iterative);
                CHECK(a.found() == model.contains(key));
                CHECK(b.found() == a.found());
                if (a.found()) {
                    CHECK(*a.payload == model[key]);
                    CHECK(*b.payload == model[key]);
                    model.erase(key);
                    CHECK(a.stats.path_nodes == b.stats.path_nodes);
                    CHECK(b.stats.link_writes <= b.stats.path_nodes + 1);
                }
            }
            REQUIRE(rec.validate().empty());
            REQUIRE(it.validate().empty());
            CHECK(rec.size() == model.size());
            CHECK(it.size() == model.size());
            REQUIRE(shape_equal(rec.shape(), it.shape()));
        }
        CHECK(shape_equal(it.shape(), canonical_build(pairs_of(it))));
    }
}

TEST_CASE("insert then erase is the identity, and the two paths coincide") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        auto items = random_key_ranks(rng, rng.below(60), 400);
        Tree t = build_by_insertion(items);
        const auto before = t.shape();
        const auto key = static_cast<std::int64_t>(rng.below(400)) * 2 + 1001;  // outside the key set
        const Rank r = draw_rank(rng, RankPolicy{});
        for (Strategy ins : kBoth) {
            for (Strategy del : kBoth) {
                auto a = t.insert_with_rank(key, 0, r, ins);
                REQUIRE(a.inserted);
                auto b = t.erase(key, del);
                REQUIRE(b.found());
                CHECK(a.stats.path_nodes == b.stats.path_nodes);
                CHECK(shape_equal(t.shape(), before));
            }
        }
    }
}

TEST_CASE("erasing a rank-0 leaf touches no spine") {
    Tree t = Tree::from_shape(make_shape({{2, 1, 1, -1}, {1, 0, -1, -1}}));
    auto r = t.erase(1);
    CHECK(r.stats.path_nodes == 0);
    CHECK(r.stats.link_writes == 1);
}

TEST_CASE("stored-mode ranks come from the seeded generator") {
    RankPolicy pol;
    pol.seed = 123;
    Tree a(pol), b(pol);
    for (std::int64_t k = 0; k < 500; ++k) {
        a.insert((k * 7919) % 1009, k);
        b.insert((k * 7919) % 1009, k, Strategy::recursive);
    }
    CHECK(shape_equal(a.shape(), b.shape()));
    CHECK(a.validate().empty());
}

TEST_CASE("key-function ranks make the shape a function of the key set") {
    RankPolicy pol;
    pol.mode = RankMode::key_function;
    pol.seed = 9;
    Tree a(pol), b(pol);
    for (std::int64_t k = 0; k < 300; ++k) a.insert(k);
    for (std::int64_t k = 299; k >= 0; --k) b.insert(k, 0, Strategy::recursive);
    CHECK(shape_equal(a.shape(), b.shape()));
    for (const auto& e : a.shape().nodes) CHECK(e.rank == rank_of_key(e.key, pol));
    for (std::int64_t k = 0; k < 300; k += 2) a.erase(k);
    Tree c(pol);
    for (std::int64_t k = 1; k < 300; k += 2) c.insert(k);
    CHECK(shape_equal(a.shape(), c.shape()));
}

TEST_CASE("copies are deep and moves leave the source empty") {
    Tree t = tree_123();
    Tree copy = t;
    copy.erase(2);
    CHECK(t.size() == 3);
    CHECK(shape_equal(t.shape(), tree_123().shape()));
    Tree moved = std::move(t);
    CHECK(moved.size() == 3);
    CHECK(t.empty());  // NOLINT(bugprone-use-after-move)
}

TEST_CASE("deep degenerate trees are destroyed without recursion") {
    Tree t;
    for (std::int64_t k = 199999; k >= 0; --k) t.insert_with_rank(k, 0, Rank{0});
    CHECK(t.size() == 200000);
    CHECK(t.root()->key == 0);
}
