#pragma once

#include "json.hpp"

#include <string>
#include <utility>

namespace polytower {

enum class Status { Holds = 0, Fails = 1, Inconclusive = 2 };

const char* to_string(Status status);

/// Three-valued answer for checks that are not decidable in general.
/// A Fails verdict always carries a witness; an Inconclusive one carries the
/// reason (usually an exhausted budget).
class Verdict {
 public:
  static Verdict holds(nlohmann::json evidence = nullptr);
  static Verdict fails(nlohmann::json witness);
  static Verdict inconclusive(std::string reason, nlohmann::json detail = nullptr);

  Status status() const { return status_; }
  bool is_holds() const { return status_ == Status::Holds; }
  bool is_fails() const { return status_ == Status::Fails; }
  bool is_inconclusive() const { return status_ == Status::Inconclusive; }

  const nlohmann::json& detail() const { return detail_; }
  const std::string& reason() const { return reason_; }

  nlohmann::json to_json() const;

 private:
  Verdict(Status status, nlohmann::json detail, std::string reason)
      : status_(status), detail_(std::move(detail)), reason_(std::move(reason)) {}

  Status status_;
  nlohmann::json detail_;
  std::string reason_;
};

/// Fails dominates Inconclusive dominates Holds. The first dominating
/// operand is returned unchanged.
Verdict conjoin(const Verdict& lhs, const Verdict& rhs);

Status worst(Status lhs, Status rhs);

}  // namespace polytower
