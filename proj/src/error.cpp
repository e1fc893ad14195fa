#include "tpgm/error.hpp"

namespace tpgm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::dimension: return "dimension mismatch";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::solver: return "solver error";
    case ErrorKind::size_cap: return "size cap exceeded";
    case ErrorKind::internal: return "internal error";
  }
  return "unknown error";
}

Error Error::with_stage(const std::string& stage) const {
  if (!stage_.empty()) return *this;
  return Error(kind_, what(), stage);
}

}  // namespace tpgm
