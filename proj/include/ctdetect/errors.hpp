#pragma once

#include <stdexcept>
#include <string>

namespace ctd {

// Malformed command line / state specification. CLI exit code 2.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read or written. CLI exit code 4.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ctd
