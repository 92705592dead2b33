#pragma once

#include "presist/graph.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace presist {

/// Canonical text form of a GraphSpec:
///
///     family: torus_product
///     factors: [4, 4, 3]
///     generators: [box, "full:2"]
///     radius: 3
///
/// `factors` entries are positive integers or `inf`. `generators` entries are `box`,
/// `"full:<i>"`, `"boxfull:<i>"`, `"chords:<k>"`, or an explicit offset `[a, b, ...]`.
/// The document is YAML; emit_spec is canonical, so emit(parse(emit(s))) == emit(s).
std::string emit_spec(const GraphSpec &spec);
GraphSpec parse_spec(std::string_view text);
GraphSpec load_spec(const std::string &path);

/// Same canonical form indented by `indent` spaces (for embedding in manifests).
std::string emit_spec_block(const GraphSpec &spec, int indent);

std::string emit_generator(const GeneratorTerm &g);

/// FNV-1a over the canonical text, as 16 lowercase hex digits.
std::string spec_hash(const GraphSpec &spec);
std::string fnv1a_hex(std::string_view text);

} // namespace presist
