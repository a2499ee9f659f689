#include "fsplit/error.hpp"

namespace fsplit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameters: return "invalid-parameters";
    case ErrorKind::NotCausal: return "not-causal";
    case ErrorKind::DegenerateRow: return "degenerate-row";
    case ErrorKind::InvalidM: return "invalid-M";
    case ErrorKind::NotRepresentable: return "not-representable";
    case ErrorKind::StepSizeViolation: return "step-size-violation";
    case ErrorKind::InvalidGraph: return "invalid-graph";
    case ErrorKind::InvalidInitialization: return "invalid-initialization";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::OracleFailure: return "oracle-failure";
    case ErrorKind::Ingestion: return "ingestion";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace fsplit
