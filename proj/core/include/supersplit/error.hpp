#pragma once

#include <stdexcept>
#include <string>

namespace supersplit {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Arithmetic left the exactly-representable range.
struct OverflowError : Error {
    explicit OverflowError(const std::string& what) : Error(what) {}
};

// Operands built over different variable contexts or chart signatures.
struct ContextError : Error {
    explicit ContextError(const std::string& what) : Error(what) {}
};

// Parity preconditions violated (odd where even expected, etc).
struct ParityError : Error {
    explicit ParityError(const std::string& what) : Error(what) {}
};

struct NotAUnitError : Error {
    explicit NotAUnitError(const std::string& what) : Error(what) {}
};

struct ChartMismatchError : Error {
    explicit ChartMismatchError(const std::string& what) : Error(what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

} // namespace supersplit
