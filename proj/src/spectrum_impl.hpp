#pragma once

// Internal spectrum machinery shared by spectrum.cpp and h2_roots.cpp.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tensorpow/numeric.hpp"
#include "tensorpow/spectrum.hpp"

namespace tensorpow::detail {

// Base of every spectrum backend.  Subclasses implement eval() for the raw
// log value and fill the metadata fields in their constructor, then call
// finalize() as the last constructor statement.
class SpectrumImpl {
 public:
  virtual ~SpectrumImpl() = default;

  xreal log_value(std::uint64_t n) const;
  xreal log_sigma1() const { return round_to_backend(log_s1_); }
  xreal log_sigma2() const { return round_to_backend(log_s2_); }
  std::optional<std::uint64_t> tie_multiplicity() const;
  const std::optional<Envelope>& envelope() const { return envelope_; }
  std::optional<std::uint64_t> rank() const { return rank_; }
  const std::string& label() const { return label_; }

  std::uint64_t last_index_not_below(const xreal& t) const;
  std::uint64_t last_index_above(const xreal& t) const;

 protected:
  // Raw log sigma(n) at full precision.  Called with n past any rank or
  // prefix limit already filtered out.
  virtual xreal eval(std::uint64_t n) const = 0;

  // Computes sigma(1), sigma(2), the tie class, and checks the head of the
  // sequence for monotonicity.  Must run in the most-derived constructor.
  void finalize();

  std::string label_ = "spectrum";
  std::optional<Envelope> envelope_;
  std::optional<std::uint64_t> rank_;          // zero tail past this index
  std::optional<std::uint64_t> domain_limit_;  // queries past this throw
  std::optional<std::uint64_t> tie_override_;  // analytic v when known

 private:
  enum class TieState { known, infinite, unknown };

  xreal raw(std::uint64_t n) const;
  // Largest n with raw(n) >= t, or > t when strict.
  std::uint64_t last_index(const xreal& t, bool strict) const;

  mutable std::shared_mutex mu_;
  mutable std::vector<xreal> cache_;
  xreal log_s1_ = 0, log_s2_ = 0;
  TieState tie_state_ = TieState::unknown;
  std::uint64_t tie_v_ = 1;
};

// Incremental root scanner of the fourth-order boundary problem on [a, b].
// Thread-safe; roots come out strictly increasing, merged across branches.
class H2Scanner {
 public:
  H2Scanner(double a, double b);

  // Grows the root list to at least `count` entries.
  void ensure(std::size_t count) const;
  FrequencyRoot root(std::size_t index) const;  // 0-based

 private:
  // Advances the grid until at least one more root lands in roots_.
  void scan_cells_locked() const;

  double half_length_;
  double step_;
  mutable std::mutex mu_;
  mutable std::vector<FrequencyRoot> roots_;
  mutable double grid_ = 0.0;     // last scanned grid point
  mutable double prev_h1_ = 0.0;  // branch values at grid_
  mutable double prev_h2_ = 0.0;
};

}  // namespace tensorpow::detail
