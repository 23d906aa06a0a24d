#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavinv::cli {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// A few seconds of oracle checks: lifting round trip and polynomial
// annihilation, V-cycle against the sparse direct solve, the marginal
// likelihood against alpha quadrature, and a chain-model SMC run against
// exact enumeration.
std::vector<SelftestResult> run_selftests(std::uint64_t seed);

}  // namespace wavinv::cli
