// oracle_check.hpp: Cross-checks between the independent computation routes:
// brute-force universe propagation, pattern enumeration, binomial reduction
// and mixture sampling.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cspin {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

std::vector<CheckResult> run_oracle_check(std::uint64_t seed = 0);

}  // namespace cspin
