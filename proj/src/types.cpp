#include "cholqr/types.hpp"

namespace cholqr {

const char* method_name(Method m) {
  switch (m) {
    case Method::HouseholderQr: return "householder";
    case Method::CholeskyQr: return "cholqr";
    case Method::CholeskyQr2: return "cholqr2";
    case Method::ShiftedCholeskyQr3: return "scholqr3";
    case Method::RluCholeskyQr: return "rlu";
    case Method::RqrCholeskyQr: return "rqr";
    case Method::RqrCholeskyQrGaussian: return "rqr-gaussian";
  }
  return "?";
}

}  // namespace cholqr
