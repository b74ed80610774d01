#pragma once

#include <stdexcept>

namespace ziptree {

/// Precondition failures of structural operations. All derive from
/// std::invalid_argument so callers can catch them together.
class KeyPresent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class KeyOverlap : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DuplicateKeys : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FractionalRanks : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MalformedLevels : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ziptree
