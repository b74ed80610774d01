#include "ziptree/trace.hpp"

#include <charconv>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "ziptree/dump.hpp"
#include "ziptree/structural.hpp"

namespace ziptree {

namespace {

template <class Int>
Int parse_int(const std::string& tok, std::size_t line, const char* what) {
    Int v{};
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || end != tok.data() + tok.size())
        throw ScriptError(line, fmt::format("bad {} '{}'", what, tok));
    return v;
}

std::string rank_text(const Rank& r) { return detail::describe_rank(r); }

}  // namespace

OpScript parse_script(std::string_view text) {
    OpScript script;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (std::size_t line = 1; std::getline(in, raw); ++line) {
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream words(raw);
        std::vector<std::string> tok;
        for (std::string w; words >> w;) tok.push_back(std::move(w));
        if (tok.empty()) continue;

        Command c{};
        c.line = line;
        const std::string& op = tok[0];
        std::size_t min_args = 1, max_args = 1;
        if (op == "insert") {
            c.kind = Command::Kind::insert;
            max_args = 2;
        } else if (op == "delete") {
            c.kind = Command::Kind::erase;
        } else if (op == "search") {
            c.kind = Command::Kind::search;
        } else if (op == "split") {
            c.kind = Command::Kind::split;
        } else if (op == "catenate" || op == "dump") {
            c.kind = op == "dump" ? Command::Kind::dump : Command::Kind::catenate;
            min_args = max_args = 0;
        } else {
            throw ScriptError(line, fmt::format("unknown command '{}'", op));
        }
        const std::size_t args = tok.size() - 1;
        if (args < min_args || args > max_args)
            throw ScriptError(line, fmt::format("'{}' takes {} argument(s), got {}", op,
                                                min_args == max_args ? fmt::format("{}", min_args)
                                                                     : fmt::format("{}-{}", min_args, max_args),
                                                args));
        if (args >= 1) c.key = parse_int<std::int64_t>(tok[1], line, "key");
        if (args == 2) {
            const auto r = parse_int<std::uint32_t>(tok[2], line, "rank");
            if (r >= kRankCeiling) throw ScriptError(line, fmt::format("rank {} is too large", r));
            c.rank = r;
        }
        script.commands.push_back(c);
    }
    return script;
}

std::string run_trace(const OpScript& script, Strategy strategy, const RankPolicy& policy) {
    using Tree = ZipTree<std::int64_t>;
    Tree tree(policy);
    std::vector<Tree> side;
    std::string out;
    for (const auto& c : script.commands) {
        switch (c.kind) {
            case Command::Kind::insert: {
                const auto r = c.rank ? tree.insert_with_rank(c.key, {}, Rank{*c.rank}, strategy)
                                      : tree.insert(c.key, {}, strategy);
                if (r.inserted)
                    out += fmt::format("insert {} rank={} inserted path={} writes={}\n", c.key, rank_text(r.rank),
                                       r.stats.path_nodes, r.stats.link_writes);
                else
                    out += fmt::format("insert {} present\n", c.key);
                break;
            }
            case Command::Kind::erase: {
                const auto r = tree.erase(c.key, strategy);
                if (r.found())
                    out += fmt::format("delete {} rank={} deleted path={} writes={}\n", c.key, rank_text(r.rank),
                                       r.stats.path_nodes, r.stats.link_writes);
                else
                    out += fmt::format("delete {} absent\n", c.key);
                break;
            }
            case Command::Kind::search: {
                const auto r = tree.search(c.key);
                out += fmt::format("search {} {} visited={}\n", c.key, r.found() ? "found" : "absent",
                                   r.nodes_visited);
                break;
            }
            case Command::Kind::split: {
                auto [lo, hi] = split(std::move(tree), c.key);
                tree = std::move(lo);
                out += fmt::format("split {} low={} high={}\n", c.key, tree.size(), hi.size());
                side.push_back(std::move(hi));
                break;
            }
            case Command::Kind::catenate: {
                if (side.empty()) {
                    out += "catenate nothing-to-join\n";
                    break;
                }
                try {
                    tree = catenate(std::move(tree), std::move(side.back()));
                    side.pop_back();
                    out += fmt::format("catenate size={}\n", tree.size());
                } catch (const KeyOverlap&) {
                    out += "catenate overlap\n";
                }
                break;
            }
            case Command::Kind::dump:
                out += dump_shape(tree.shape()) + "\n";
                break;
        }
    }
    return out;
}

}  // namespace ziptree
