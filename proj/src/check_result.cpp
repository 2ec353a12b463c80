#include "tau2loop/check_result.hpp"

#include <stdexcept>

namespace tau2 {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skip: return "skip";
  }
  throw std::logic_error("unknown status");
}

CheckResult CheckResult::pass(std::string id, Json params) {
  CheckResult r;
  r.id = std::move(id);
  r.params = std::move(params);
  r.status = CheckStatus::pass;
  return r;
}

CheckResult CheckResult::fail(std::string id, Json witness, Json params) {
  CheckResult r;
  r.id = std::move(id);
  r.params = std::move(params);
  r.status = CheckStatus::fail;
  r.witness = std::move(witness);
  return r;
}

CheckResult CheckResult::skip(std::string id, std::string reason, Json params) {
  CheckResult r;
  r.id = std::move(id);
  r.params = std::move(params);
  r.status = CheckStatus::skip;
  r.witness = Json{{"reason", std::move(reason)}};
  return r;
}

Json CheckResult::to_json() const {
  Json j{{"id", id}, {"params", params}, {"status", to_string(status)},
         {"elapsed_ms", elapsed_ms}};
  if (witness) j["witness"] = *witness;
  return j;
}

} // namespace tau2
