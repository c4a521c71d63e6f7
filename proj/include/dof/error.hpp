#pragma once

#include <stdexcept>
#include <string>

namespace dof {

// Status codes double as CLI exit codes.
enum class ErrorCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kSizeLimit = 3,
  kBudgetExhausted = 4,
  kIo = 5,
  kDomain = 6,
  kPlanInconsistency = 7,
  kCut = 8,
  kPairing = 9,
  kRouteInfeasible = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define DOF_DEFINE_ERROR(Name, Code) \
  class Name : public Error {        \
   public:                           \
    explicit Name(const std::string& what) : Error(Code, what) {} \
  };

DOF_DEFINE_ERROR(ConfigError, ErrorCode::kConfig)
DOF_DEFINE_ERROR(SizeLimitError, ErrorCode::kSizeLimit)
DOF_DEFINE_ERROR(IoError, ErrorCode::kIo)
DOF_DEFINE_ERROR(DomainError, ErrorCode::kDomain)
DOF_DEFINE_ERROR(PlanInconsistency, ErrorCode::kPlanInconsistency)
DOF_DEFINE_ERROR(CutError, ErrorCode::kCut)
DOF_DEFINE_ERROR(PairingError, ErrorCode::kPairing)

#undef DOF_DEFINE_ERROR

}  // namespace dof
