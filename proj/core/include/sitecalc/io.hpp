#pragma once

#include <string>

#include "sitecalc/error.hpp"
#include "sitecalc/poset.hpp"
#include "sitecalc/topology.hpp"

namespace sitecalc {

// Line format: '#' comments, one "elements:" line, then "le: a b" lines (a <= b).
// Throws ParseError, DuplicateElementError, CycleError.
FinitePoset parse_poset(const std::string& text);
std::string format_poset(const FinitePoset& P);

// {"elements": [...], "le_pairs": [[i, j], ...]} with the closed relation.
json poset_to_json(const FinitePoset& P);
FinitePoset poset_from_json(const json& j);

// Whitespace- or comma-separated element names; throws ParseError on unknown names.
Mask parse_subset(const FinitePoset& P, const std::string& text);

// {"poset": ..., "covers": {"p": [[members], ...]}}
json topology_to_json(const Topology& J);
// Validates the axioms; the embedded poset must equal P.
Topology topology_from_json(const FramePtr& frame, const json& j);

std::string read_file(const std::string& path);

} // namespace sitecalc
