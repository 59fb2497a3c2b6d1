#pragma once

#include <stdexcept>
#include <string>

namespace upforms {

// Caller violated a documented precondition (bad weight, modulus mismatch,
// malformed manifest, ...).
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// A computation refused to run because a resource guard tripped
// (enumeration cap exceeded, manifest generators too short, ...).
class guard_error : public std::runtime_error {
public:
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace upforms
