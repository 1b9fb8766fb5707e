#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sbm {

// Quotes a field when it contains commas, quotes, or newlines (RFC 4180).
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Parses RFC 4180 CSV: quoted fields, doubled-quote escapes, CR/LF tolerant.
// Returns one vector of fields per record.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace sbm
