#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ziptree/rank.hpp"
#include "ziptree/zip_tree.hpp"

namespace ziptree {

// Script grammar, one command per line; blank lines and text after '#' are
// ignored. Keys are signed 64-bit integers, forced ranks integers.
//
//   insert KEY [RANK]
//   delete KEY
//   search KEY
//   split KEY      keep keys <= KEY, push the rest onto the side stack
//   catenate       join the top of the side stack back onto the right
//   dump           print the current tree as one JSON line

struct Command {
    enum class Kind { insert, erase, search, split, catenate, dump };
    Kind kind;
    std::int64_t key = 0;
    std::optional<std::uint32_t> rank;
    std::size_t line = 0;
};

struct OpScript {
    std::vector<Command> commands;
};

class ScriptError : public std::invalid_argument {
public:
    ScriptError(std::size_t line, const std::string& what)
        : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Throws ScriptError naming the first bad line.
OpScript parse_script(std::string_view text);

/// Applies the script to an empty tree and returns one output line per
/// command. Ranks not forced by the script are drawn from `policy`.
std::string run_trace(const OpScript& script, Strategy strategy, const RankPolicy& policy);

}  // namespace ziptree
