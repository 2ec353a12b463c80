#include "tau2loop/op_cache.hpp"

#include "tau2loop/version.hpp"

#include <fstream>

namespace tau2 {

Json operator_to_json(const LatticeConfig& config, const std::string& name, const SparseOp& op) {
  Json entries = Json::array();
  op.for_each([&](Rank i, Rank j, const Cyclotomic& v) {
    entries.push_back(Json::array({i, j, v.to_strings()}));
  });
  return Json{{"version", kCacheSchema}, {"tool", kToolVersion}, {"N", config.n()},
              {"L", config.l()},         {"name", name},         {"dim", op.dim()},
              {"entries", entries}};
}

SparseOp operator_from_json(const LatticeConfig& config, const Json& j) {
  if (j.at("version").get<int>() != kCacheSchema) throw std::runtime_error("cache schema mismatch");
  if (j.at("tool").get<std::string>() != kToolVersion)
    throw std::runtime_error("cache tool version mismatch");
  if (j.at("N").get<long>() != config.n() || j.at("L").get<long>() != config.l())
    throw std::runtime_error("cache lattice mismatch");
  SparseOp op(config.context(), j.at("dim").get<Rank>());
  for (const auto& e : j.at("entries")) {
    std::vector<std::string> parts = e.at(2).get<std::vector<std::string>>();
    op.add_entry(e.at(0).get<Rank>(), e.at(1).get<Rank>(),
                 Cyclotomic::from_strings(config.context(), parts));
  }
  return op;
}

OpCache::OpCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::filesystem::path OpCache::file_for(const LatticeConfig& config,
                                        const std::string& name) const {
  return dir_ / ("N" + std::to_string(config.n()) + "_L" + std::to_string(config.l()) + "_" +
                 name + ".json");
}

std::optional<SparseOp> OpCache::try_load(const LatticeConfig& config, const std::string& name) {
  if (!enabled()) return std::nullopt;
  const auto path = file_for(config, name);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    std::ifstream in(path);
    Json j = Json::parse(in);
    if (j.at("name").get<std::string>() != name) throw std::runtime_error("cache name mismatch");
    SparseOp op = operator_from_json(config, j);
    ++hits_;
    return op;
  } catch (const std::exception& e) {
    warnings_.push_back("cache file " + path.string() + " rebuilt: " + e.what());
    return std::nullopt;
  }
}

void OpCache::store(const LatticeConfig& config, const std::string& name, const SparseOp& op) {
  if (!enabled()) return;
  std::ofstream out(file_for(config, name));
  out << operator_to_json(config, name, op).dump();
}

SparseOp OpCache::get_or_build(const LatticeConfig& config, const std::string& name,
                               const std::function<SparseOp()>& build) {
  if (auto cached = try_load(config, name)) return *cached;
  ++misses_;
  SparseOp op = build();
  store(config, name, op);
  return op;
}

} // namespace tau2
