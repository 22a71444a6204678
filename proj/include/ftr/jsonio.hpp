#pragma once

#include <json.hpp>

#include "ftr/spectral.hpp"
#include "ftr/twospin.hpp"

namespace ftr {

using Json = nlohmann::ordered_json;

// Rationals serialize as decimal-free strings "p/q" ("p" when q = 1);
// loop indices as two-element arrays [alpha, k]; tensor entries as
// {"out": [...], "in": [[...], ...], "value": "p/q"} with "in" sorted.
// Identical inputs yield byte-identical outputs (keys ordered).

Json seed_to_json(const Seed& s);
Seed seed_from_json(const Json& j);

Json curve_to_json(const LocalCurve& c);
LocalCurve curve_from_json(const Json& j);

Json linmap_to_json(const LinMap<Rat>& m);
LinMap<Rat> linmap_from_json(const Json& j);

Json tensor_to_json(const MultiTensor<Rat>& t);

// key -> "p/q" correlator rows; `one_based` prints "(alpha,k)" labels with
// alpha counted from 1 (the two-spin convention).
Json correlator_rows_json(const std::map<CorrelatorKey, Rat>& rows, bool one_based);
std::string correlator_rows_csv(const std::map<CorrelatorKey, Rat>& rows, bool one_based);

} // namespace ftr
