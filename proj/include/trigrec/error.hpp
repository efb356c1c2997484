#pragma once

#include <stdexcept>
#include <string>

namespace trigrec {

/// Raised on violated preconditions and malformed text input.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trigrec
