#pragma once

#include <stdexcept>
#include <string>

#include "zolaw/formula.hpp"

namespace zolaw {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(column_)),
          line(line_), column(column_) {}
};

// Parse the s-expression formula grammar; requires the whole input to be one
// formula (trailing garbage is an error). Duplicate binders and tuple length
// mismatches are rejected here as well.
FormulaRef parse(const std::string& text);

// Canonical single-line form; parse(print(f)) is structurally equal to f.
std::string print(const FormulaRef& f);

} // namespace zolaw
