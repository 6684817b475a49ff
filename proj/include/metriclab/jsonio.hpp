#pragma once

#include <string>

#include <json.hpp>

#include "metriclab/domain.hpp"

namespace metriclab {

using ordered_json = nlohmann::ordered_json;

// Parse a domain spec: {"kind": "disk"|"halfplane"|"strip"|"annulus"|
// "punctured_disk"|"punctured"|"whole_plane", parameters..., "label": ...}.
Domain domain_from_json(const ordered_json& j);
ordered_json domain_to_json(const Domain& d);

// Serialize with every floating-point number printed at 17 significant digits,
// so reports are byte-stable and round-trip exactly.
std::string dump_json_17(const ordered_json& j, int indent = 2);

Cplx parse_point(const std::string& text);  // "RE,IM"

}  // namespace metriclab
