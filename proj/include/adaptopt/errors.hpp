#pragma once

#include <stdexcept>

namespace adaptopt {

/// Argument outside an operation's domain (dimension mismatch, negative time, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace adaptopt
