#pragma once

#include <iosfwd>
#include <string>

#include "sparta/esm/instance.hpp"

namespace sparta::esm {

inline constexpr const char* kInstanceSchema = "sparta-instance/1";

// Parses an instance document. Throws FormatError on malformed structure;
// value-level problems are left for validate_instance.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
Instance parse_instance(const std::string& text);

void write_instance(std::ostream& out, const Instance& instance);
void write_instance_file(const std::string& path, const Instance& instance);
std::string dump_instance(const Instance& instance);

} // namespace sparta::esm
