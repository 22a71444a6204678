#pragma once

#include <stdexcept>
#include <string>

namespace ftr {

// Input files that fail to parse. CLI exit code 1.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters: unstable (g,n), s = 0, non-associative algebra, ...
// CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A computation touched a loop degree beyond the configured cap.
struct CapOverflow : ValidationError {
    explicit CapOverflow(const std::string& what) : ValidationError(what) {}
};

} // namespace ftr
