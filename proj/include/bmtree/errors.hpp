#pragma once

#include <stdexcept>
#include <string>

namespace bmtree {

// Input value outside the grid or otherwise out of domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed BMP or tree (bad lengths, dangling child ids, cycles).
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Illegal level action (e.g. dimension exhausted on a node's path).
struct ActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated operation precondition (empty sample, nested prune set, ...).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable input file or record.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent generator or run configuration.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bmtree
