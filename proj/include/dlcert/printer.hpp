#pragma once

#include <iosfwd>
#include <string>

#include "dlcert/ast.hpp"

namespace dlcert {

// Concrete syntax accepted by the parser. For every AST built from
// nonnegative literals, parsing the output yields an equal AST.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const Program& p);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Formula& f);
std::ostream& operator<<(std::ostream& os, const Program& p);

}  // namespace dlcert
