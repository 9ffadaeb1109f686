#include "isac/types.hpp"

#include <cmath>

namespace isac {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kDegenerateRecovery: return "degenerate primal recovery";
    case ErrorCode::kRecoveryFailure: return "power allocation failure";
    case ErrorCode::kInfeasibleScenario: return "infeasible scenario";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

double inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "inner: shape mismatch");
  }
  // tr(A^H B) = sum_ij conj(a_ij) b_ij
  const Complex value = (a.array().conjugate() * b.array()).sum();
  const double scale = 1.0 + a.norm() * b.norm();
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw Error(ErrorCode::kInternal,
                "inner: non-Hermitian operands left an imaginary residue");
  }
  return value.real();
}

CMatrix hermitian_part(const CMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

}  // namespace isac
