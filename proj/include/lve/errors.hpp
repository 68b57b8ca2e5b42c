#pragma once

#include <stdexcept>
#include <string>

namespace lve {

/// Base of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interaction order p outside the supported range.
class invalid_order_error : public error {
public:
    using error::error;
};

/// Argument outside the analyticity domain (on the cut, outside the pacman domain, forbidden sector).
class domain_error : public error {
public:
    using error::error;
};

/// A numerical procedure failed to reach its target accuracy.
class numerical_error : public error {
public:
    using error::error;
};

/// Caller violated a precondition (mismatched jets, index out of range, w outside [0,1]).
class contract_error : public error {
public:
    using error::error;
};

/// Requested problem size exceeds the supported cap.
class size_error : public error {
public:
    using error::error;
};

} // namespace lve
