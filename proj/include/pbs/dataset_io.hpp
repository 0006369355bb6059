#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pbs/types.hpp"

namespace pbs {

using Json = nlohmann::ordered_json;

// JSON codecs; amounts render as decimal strings, field names match the type
// definitions. Encoding is canonical: encode(decode(x)) round-trips
// byte-for-byte.
Json to_json(const Transaction& tx);
Json to_json(const BlockSubmission& sub);
Json to_json(const SlotTrace& slot);
Transaction transaction_from_json(const Json& j);
BlockSubmission submission_from_json(const Json& j);
SlotTrace slot_from_json(const Json& j);

// Directory layout: slots.jsonl, transactions.jsonl, prices/<PAIR>.csv,
// meta.json.
void write_dataset(const std::filesystem::path& dir, const Dataset& d);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace pbs
