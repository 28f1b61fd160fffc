#pragma once

#include <stdexcept>
#include <string>

namespace spincorr {

// Raised when a numerical contract is breached (non-Hermitian input where a
// Hermitian operator is required, unitarity loss, norm drift). The CLI maps
// this to exit code 3; plain std::invalid_argument maps to exit code 2.
class ContractViolation : public std::runtime_error {
  public:
    explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spincorr
