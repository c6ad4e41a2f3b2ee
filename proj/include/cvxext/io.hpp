#pragma once

// Instance (de)serialization and the shared text conventions of the CLI:
// round-trippable JSON instances and 17-significant-digit reals.

#include <string>

#include "cvxext/instance.hpp"
#include "cvxext/solvers.hpp"
#include "cvxext/surface.hpp"

namespace cvxext {

// %.17g with '.' decimal, locale-independent.
std::string format_real(double v);

// Parsers for the enum spellings used in files and flags. Throw config_error
// on unknown names.
LossKind loss_kind_from_string(const std::string& s);
RegKind reg_kind_from_string(const std::string& s);
Decomposition decomposition_from_string(const std::string& s);
ExtensionChoice extension_choice_from_string(const std::string& s);
SurfaceExtension surface_extension_from_string(const std::string& s);

// Inclusive "lo:hi:step" axis.
AxisRange range_from_string(const std::string& s);

// JSON instance document. Bounds accept numbers, per-coordinate arrays with
// "inf"/"-inf"/null entries, or null for an unbounded side. Parse errors
// carry the line and column.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace cvxext
