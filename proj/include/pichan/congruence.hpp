#pragma once

#include <string>

#include "pichan/process.hpp"

namespace pichan {

// Canonical text of the structural-congruence class of a core term.
//
// Restrictions are scoped minimally and grouped into connected "molecules";
// a restricted name fused with another name is eliminated by substitution,
// including when the fusion sits at the top of (nested) replicated bodies;
// replicated bodies absorb parallel copies of themselves; bound names are
// labelled by the lexicographically least labelling. Replication is never
// unfolded here.
//
// Throws SurfaceFormError on binding inputs.
std::string canonical_form(const Process& p);

bool congruent(const Process& p, const Process& q);

}  // namespace pichan
