#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tensorpow {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // observed vs expected on failure, empty when clean
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::size_t fail_count() const;
};

// Cross-checks the fast paths against independent slow oracles on seeded
// random spectra: counting vs direct enumeration, top-k vs brute force,
// tau_at vs tau_topk, sandwich containment, rank-one identities.
// quick trims the case list to a sub-second subset.
VerificationReport run_verification(std::uint64_t seed, bool quick);

// Prints one line per check plus a summary tail; returns all_pass().
bool print_verification(const VerificationReport& report, std::ostream& out);

}  // namespace tensorpow
