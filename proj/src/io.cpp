#include "wdp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "wdp/errors.hpp"

namespace wdp {

Json to_json(const AuctionInstance& instance) {
  Json items = Json::array();
  for (const auto& it : instance.items) items.push_back({{"units", it.units}});
  Json bids = Json::array();
  for (const auto& b : instance.bids) bids.push_back({{"demand", b.demand}, {"price", b.price}});
  return {{"name", instance.name}, {"items", std::move(items)}, {"bids", std::move(bids)}};
}

AuctionInstance instance_from_json(const Json& j) {
  try {
    AuctionInstance inst;
    inst.name = j.value("name", std::string{});
    for (const auto& it : j.at("items")) inst.items.push_back(Item{it.at("units").get<int>()});
    for (const auto& b : j.at("bids")) {
      inst.bids.push_back(Bid{b.at("demand").get<std::vector<int>>(), b.at("price").get<double>()});
    }
    return inst;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
}

Json allocation_to_json(const AuctionInstance& instance, const Allocation& alloc) {
  std::vector<int> decisions(alloc.decisions.begin(), alloc.decisions.end());
  return {{"decisions", decisions}, {"revenue", evaluate_allocation(instance, alloc).revenue}};
}

Allocation allocation_from_json(const Json& j) {
  try {
    Allocation a;
    for (const auto& d : j.at("decisions")) {
      const int v = d.get<int>();
      if (v != 0 && v != 1) throw FormatError("allocation JSON: decisions must be 0 or 1");
      a.decisions.push_back(static_cast<std::uint8_t>(v));
    }
    return a;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("allocation JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

AuctionInstance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

void save_instance(const std::filesystem::path& path, const AuctionInstance& instance) {
  write_json_file(path, to_json(instance));
}

std::vector<std::filesystem::path> list_json_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace wdp
