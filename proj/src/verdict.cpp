#include "polytower/verdict.hpp"

#include "polytower/error.hpp"

namespace polytower {

const char* to_string(Status status) {
  switch (status) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::EmptySimplex: return "EmptySimplex";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NotSubcomplex: return "NotSubcomplex";
    case ErrorCode::NotSimplicial: return "NotSimplicial";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::ComplexMismatch: return "ComplexMismatch";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::DomainError: return "DomainError";
  }
  return "Unknown";
}

Verdict Verdict::holds(nlohmann::json evidence) { return Verdict(Status::Holds, std::move(evidence), {}); }

Verdict Verdict::fails(nlohmann::json witness) { return Verdict(Status::Fails, std::move(witness), {}); }

Verdict Verdict::inconclusive(std::string reason, nlohmann::json detail) {
  return Verdict(Status::Inconclusive, std::move(detail), std::move(reason));
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json out;
  out["status"] = to_string(status_);
  switch (status_) {
    case Status::Holds:
      if (!detail_.is_null()) out["evidence"] = detail_;
      break;
    case Status::Fails:
      out["witness"] = detail_;
      break;
    case Status::Inconclusive:
      out["reason"] = reason_;
      if (!detail_.is_null()) out["detail"] = detail_;
      break;
  }
  return out;
}

Status worst(Status lhs, Status rhs) {
  if (lhs == Status::Fails || rhs == Status::Fails) return Status::Fails;
  if (lhs == Status::Inconclusive || rhs == Status::Inconclusive) return Status::Inconclusive;
  return Status::Holds;
}

Verdict conjoin(const Verdict& lhs, const Verdict& rhs) {
  if (lhs.is_fails()) return lhs;
  if (rhs.is_fails()) return rhs;
  if (lhs.is_inconclusive()) return lhs;
  if (rhs.is_inconclusive()) return rhs;
  return lhs;
}

}  // namespace polytower
