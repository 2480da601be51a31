#pragma once

#include <string>
#include <vector>

#include "sparta/esm/instance.hpp"

namespace sparta::esm {

struct Violation {
    std::string code;     // stable short description, e.g. "availability out of [0,1]"
    std::string detail;   // location of the offending entry
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool contains(const std::string& code) const;
    std::string to_string() const;

    friend bool operator==(const ValidationReport& a, const ValidationReport& b);
};

bool operator==(const Violation& a, const Violation& b);

ValidationReport validate_instance(const Instance& instance);

} // namespace sparta::esm
