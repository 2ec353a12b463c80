#pragma once

#include "tau2loop/check_result.hpp"
#include "tau2loop/sparse_op.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace tau2 {

/// Versioned JSON persistence of an exact sparse operator:
/// {version, tool, N, L, name, dim, entries: [[row, col, [num/den strings]]]}.
Json operator_to_json(const LatticeConfig& config, const std::string& name, const SparseOp& op);
SparseOp operator_from_json(const LatticeConfig& config, const Json& j);

/// On-disk operator cache keyed by (N, L, name, tool version). Invalid or
/// stale files are rebuilt and overwritten; the event is kept as a warning.
class OpCache {
 public:
  OpCache() = default; // disabled
  explicit OpCache(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }

  SparseOp get_or_build(const LatticeConfig& config, const std::string& name,
                        const std::function<SparseOp()>& build);

  /// nullopt when disabled, missing, stale or corrupt (corruption is logged).
  std::optional<SparseOp> try_load(const LatticeConfig& config, const std::string& name);
  void store(const LatticeConfig& config, const std::string& name, const SparseOp& op);

  const std::vector<std::string>& warnings() const { return warnings_; }
  long hits() const { return hits_; }
  long misses() const { return misses_; }

 private:
  std::filesystem::path file_for(const LatticeConfig& config, const std::string& name) const;

  std::filesystem::path dir_;
  std::vector<std::string> warnings_;
  long hits_ = 0;
  long misses_ = 0;
};

} // namespace tau2
