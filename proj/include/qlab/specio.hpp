#pragma once

#include "qlab/fields.hpp"
#include "qlab/monotone.hpp"

#include <string>

namespace qlab {

/// Parse a function spec: inline shorthand ("power:1,2", "exp_power:1,1,1",
/// "affine:0,5"), a JSON object text ({"family":...,"params":{...}}), or a
/// path to a JSON file.
MonotoneMap parse_map_spec(const std::string& text);

/// JSON wire format for a map: {"family":..., "params":{...}}.
std::string map_spec_json(const MonotoneMap& map);

/// Parse a field spec: inline shorthand ("const:2", "rpow:1,1" for c r^-a,
/// "logpow:1,1"), JSON object text, or a path to a JSON file. dim applies to
/// inline forms; JSON may carry its own "n" (validated against dim when both
/// are present).
RadialField parse_field_spec(const std::string& text, int dim);

std::string field_spec_json(const RadialField& field);

} // namespace qlab
