#pragma once

#include <string>
#include <string_view>

#include "pichan/program.hpp"

namespace pichan {

// Parses a `.pi` source file: extern blocks followed by an optional process.
// Throws DiagnosticError (E-SYNTAX, E-DUP) when no program can be built.
// Binders get fresh ids; free names with the same spelling share an id, and
// a free name spelled like an extern channel is that channel.
Program parse_program(std::string_view text, const std::string& file = "<input>");

// Replaces every binding input x?(v).P by new v' in x?<v'>.P{v'/v}.
Program desugar(const Program& p);

// Source text that parses back to `p` up to alpha-renaming. Bound names are
// printed with a numeric suffix where they would otherwise clash.
std::string format(const Program& p);
std::string format(const Process& p);
std::string format(const ExternDecl& d);

}  // namespace pichan
