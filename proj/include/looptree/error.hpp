#pragma once

#include <stdexcept>
#include <string>

namespace looptree {

enum class ErrorKind {
  NotSorted,
  SumMismatch,
  NegativePart,
  ZeroSigma,
  Infeasible,
  NotABridge,
  NotExcursion,
  OutOfRange,
  UnsupportedLaw,
  LengthMismatch,
  NotGoodLabelling,
  NotBipartite,
  SizeLimit,
  NotPseudoMetric,
  Empty,
  MismatchFound,
  BadInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotSorted: return "NotSorted";
    case ErrorKind::SumMismatch: return "SumMismatch";
    case ErrorKind::NegativePart: return "NegativePart";
    case ErrorKind::ZeroSigma: return "ZeroSigma";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NotABridge: return "NotABridge";
    case ErrorKind::NotExcursion: return "NotExcursion";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnsupportedLaw: return "UnsupportedLaw";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotGoodLabelling: return "NotGoodLabelling";
    case ErrorKind::NotBipartite: return "NotBipartite";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::NotPseudoMetric: return "NotPseudoMetric";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::MismatchFound: return "MismatchFound";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace looptree
