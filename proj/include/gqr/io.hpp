#pragma once

// Machine-readable documents. Schemas live in docs/schemas/v1.

#include <json.hpp>
#include <string>
#include <vector>

#include "gqr/classifier.hpp"
#include "gqr/isomorphism.hpp"

namespace gqr::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// "UNIT", "CHI_A", "CHI_PROD", "CHI_PAIR" or "ZERO".
std::string tag_name(ClassTag tag);

Json to_json(const IsoWitness& w);
Json to_json(const M2Witness& w);
Json to_json(const CanonicalClass& c);
Json to_json(const ClassReport& report);

/// Header "n,rep_a,rep_b,class_size,canonical_tags" and one row per class.
std::string to_csv(const ClassReport& report);

/// Rebuilds a witness from its JSON form (the images follow from the matrix).
IsoWitness witness_from_json(const Json& j);

}  // namespace gqr::io
