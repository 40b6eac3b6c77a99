#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace botsentinel::csv {

// RFC 4180 field quoting: fields containing a comma, quote or line break are
// wrapped in quotes with embedded quotes doubled.
std::string quote(std::string_view field);
std::string join(const std::vector<std::string>& fields);

// Splits a whole document into records of fields, honouring quoted fields that
// span lines. Accepts both LF and CRLF line endings.
std::vector<std::vector<std::string>> parse(std::string_view document);

// Shortest representation that round-trips through from_chars.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace botsentinel::csv
