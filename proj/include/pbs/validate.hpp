#pragma once

#include <string>
#include <vector>

#include "pbs/types.hpp"

namespace pbs {

// Violations are data, not errors; an empty list means the dataset honors
// every type invariant.
struct Violation {
    std::string code;     // stable machine-readable identifier
    std::string subject;  // offending id (tx_id, block_id, slot_id, ...)
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_dataset(const Dataset& d);

}  // namespace pbs
