#include "error.hpp"

namespace ltb {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Validation: return "validation error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::NoSignChange: return "no sign change";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::SizeLimit: return "size limit exceeded";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace ltb
