#pragma once

#include <string>

#include "sparta/lp/linear_program.hpp"

namespace sparta::lp {

struct ExportOptions {
    // Hash characters in each 8-character external name; the rest is a key prefix.
    int hash_chars = 7;
    std::string problem_name = "SPARTA";
};

// Eight-character external name for a registry key: key prefix plus a
// base-62 hash suffix.
std::string external_name(const std::string& key, int hash_chars = 7);

// Fixed-format MPS text. Throws NameCollisionError when two keys map to the
// same external name. The objective constant is written as the negated RHS
// of the objective row.
std::string export_standard(const LinearProgram& lp, const ExportOptions& options = {});

// Reads fixed or free MPS as written by export_standard. Ranged rows are split
// into two one-sided rows. Throws FormatError on malformed input.
LinearProgram import_standard(const std::string& text);

} // namespace sparta::lp
