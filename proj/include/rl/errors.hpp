#pragma once

#include <stdexcept>
#include <string>

namespace rl {

// Thrown when an identifier pool runs dry.  Callers may garbage-collect and
// retry, or give up.
struct IdentifiersExhausted : std::runtime_error {
    IdentifiersExhausted() : std::runtime_error("identifier pool exhausted") {}
};

// Caller bug: out-of-range argument, releasing a free identifier, etc.
struct UsageError : std::logic_error {
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Semantic corruption detected (e.g. overlapping equations with o != o').
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rl
