#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdp/core.hpp"

namespace wdp {

using Json = nlohmann::json;

Json to_json(const AuctionInstance& instance);
/// Throws FormatError on missing fields or wrong types.
AuctionInstance instance_from_json(const Json& j);

/// { "decisions": [0|1, ...], "revenue": number }
Json allocation_to_json(const AuctionInstance& instance, const Allocation& alloc);
Allocation allocation_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

AuctionInstance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const AuctionInstance& instance);

/// All `*.json` files directly inside `dir`, sorted by filename.
std::vector<std::filesystem::path> list_json_files(const std::filesystem::path& dir);

/// Decimal text with 17 significant digits, round-trippable.
std::string format_double(double value);

}  // namespace wdp
