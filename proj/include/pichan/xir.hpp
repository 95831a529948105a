#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pichan/diagnostic.hpp"
#include "pichan/program.hpp"

namespace pichan {

// Serializes a core program. Name ids are written as they are, so
// from_xml(to_xml(p)) == p exactly; apply renumber() first to get the dense
// numbering the compiler emits. Throws SurfaceFormError on binding inputs.
std::string to_xml(const Program& p);

// Throws DiagnosticError carrying E-SCHEMA / E-VERSION diagnostics.
Program from_xml(std::string_view text, const std::string& file = "<xir>");

// Empty iff from_xml succeeds.
std::vector<Diagnostic> validate(std::string_view text, const std::string& file = "<xir>");

// Same program with ids 1, 2, ... assigned in order of first occurrence in
// the serialized document (extern channels first, then the process).
Program renumber(const Program& p);

}  // namespace pichan
