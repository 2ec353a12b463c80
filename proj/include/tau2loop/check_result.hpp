#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace tau2 {

using Json = nlohmann::json;

enum class CheckStatus { pass, fail, skip };

std::string to_string(CheckStatus s);

/// Outcome of one verification check. A fail always carries a witness
/// pinpointing where the identity broke; a skip always carries a reason.
struct CheckResult {
  std::string id;
  Json params = Json::object();
  CheckStatus status = CheckStatus::pass;
  std::optional<Json> witness;
  double elapsed_ms = 0.0;

  static CheckResult pass(std::string id, Json params = Json::object());
  static CheckResult fail(std::string id, Json witness, Json params = Json::object());
  static CheckResult skip(std::string id, std::string reason, Json params = Json::object());

  bool ok() const { return status != CheckStatus::fail; }

  Json to_json() const;
};

} // namespace tau2
