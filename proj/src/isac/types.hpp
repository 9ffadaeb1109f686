#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isac {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

enum class ErrorCode {
  kInvalidInput = 1,
  kDimensionMismatch,
  kIndexOutOfRange,
  kDegenerateRecovery,
  kRecoveryFailure,
  kInfeasibleScenario,
  kIo,
  kParse,
  kInternal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Real trace inner product Re tr(A^H B).
double inner(const CMatrix& a, const CMatrix& b);

// (A + A^H) / 2
CMatrix hermitian_part(const CMatrix& a);

}  // namespace isac
