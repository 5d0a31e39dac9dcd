#pragma once

#include <iosfwd>
#include <string>

#include "wco/shift.hpp"

namespace wco {

/// Text format for finite weighted-shift instances, one directive per line:
///
///   vertex <id>
///   edge <parent> <child> <re> [<im>]     # weight attaches to the child
///   root <id>                             # optional consistency assertion
///   # comment
///
/// Ids are arbitrary non-whitespace tokens; parsing is whitespace tolerant.
/// A parsed file is taken as the whole truth: the window covers the tree with
/// no truncation flags.
ShiftInstance parse_tree_spec(std::istream& in, const std::string& name);
ShiftInstance parse_tree_spec_file(const std::string& path);

/// Writes the window members of an instance in the same format. Truncation
/// flags cannot be represented in the format; the emitted file is a finite
/// snapshot of the instance.
void emit_tree_spec(const ShiftInstance& instance, std::ostream& out);

}  // namespace wco
