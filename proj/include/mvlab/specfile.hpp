// Key-value spec files describing a multiplicative function (rule, extension,
// partition, per-class parameters, exceptional set).  Schema documented in the
// README.
#pragma once

#include <string>

#include "mvlab/multfn.hpp"

namespace mvlab {

// Parse errors carry 1-based line numbers in the message.
MultFnSpec parse_spec_text(const std::string& text, const std::string& origin = "<spec>");
MultFnSpec parse_spec_file(const std::string& path);

// "name" resolves builtins ("liouville-strong", "random-cb-2", ...); anything
// containing a path separator or ending in .spec is read as a file.
MultFnSpec resolve_spec(const std::string& name_or_path);

} // namespace mvlab
