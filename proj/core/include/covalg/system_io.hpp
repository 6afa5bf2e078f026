#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covalg/circle_action.hpp"
#include "covalg/partial_automorphism.hpp"

namespace covalg {

/// Plain-data mirror of the on-disk JSON system format (format version 1).
///
/// Files use 1-based block indices and [re, im] pairs for complex entries;
/// both are converted on load, so every index in this struct is 0-based.
/// Required fields: "format" (the integer 1) and "block_sizes". Optional:
/// "name", "ideal_i", "ideal_j", "block_map" (array of [source, target]
/// pairs), "unitaries" (object keyed by 1-based source block), "weights"
/// (one integer list per block, enabling the circle-action commands).
/// Unknown fields are rejected.
struct SystemDescription {
  std::string name;
  std::vector<int> block_sizes;
  std::vector<int> ideal_i;
  std::vector<int> ideal_j;
  std::map<int, int> block_map;
  std::map<int, Matrix> unitaries;
  std::optional<std::vector<std::vector<int>>> weights;
};

/// Parses a description from JSON text. Throws Error with a line/column
/// annotated message on malformed JSON, and a field-naming message on
/// schema violations (unknown field, bad type, out-of-range block index).
SystemDescription parse_description(const std::string& text);

/// Reads a description from a file path, or from the bundled gallery when
/// the argument has the form "gallery:NAME".
SystemDescription load_description(const std::string& source);

/// The raw JSON text behind load_description, for fingerprinting.
std::string load_description_text(const std::string& source);

/// The dynamical system a description encodes. Unitaries default to
/// identity matrices on unlisted mapped blocks.
System description_to_system(const SystemDescription& d, double tol = 1e-9);

/// The circle action a description encodes; requires the weights field.
CircleAction description_to_action(const SystemDescription& d);

/// Names of the bundled example systems, in listing order.
const std::vector<std::string>& gallery_names();

/// JSON text of one bundled system; throws Error for unknown names.
const std::string& gallery_text(const std::string& name);

/// Re-serialization of a description with fixed field order, fixed
/// formatting, and defaults materialized, so that descriptions of the same
/// system fingerprint identically regardless of file layout.
std::string canonical_text(const SystemDescription& d);

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string fingerprint(const std::string& bytes);

}  // namespace covalg
