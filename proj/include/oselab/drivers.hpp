#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "oselab/errors.hpp"

namespace oselab {

// Bit stream over all of Z. Queried lazily; must be total on the indices
// a driver ever touches.
using BitSource = std::function<int(std::int64_t)>;

// First n fractional binary digits of pi, computed with guard precision.
std::vector<int> pi_fraction_bits(int n);

// Two-sided symbol sequence feeding a cocycle. Symbols are 1-based.
class Driver {
 public:
  static Driver periodic(std::vector<int> word);
  // Stored symbol list covering indices [origin, origin + size); queries
  // outside that window are errors.
  static Driver explicit_sequence(std::vector<int> symbols, std::int64_t origin);
  // Function-backed sequence with unbounded range (e.g. seeded i.i.d.).
  static Driver explicit_function(std::function<int(std::int64_t)> fn, int alphabet);
  // Unique admissible sequence through the transition matrix whose
  // two-class projection matches the bit source at shifted indices,
  // pinned by the anchor symbol at index 0.
  static Driver sft_lift(Eigen::MatrixXi transitions, std::vector<int> h_classes, BitSource bits,
                         std::int64_t shift, int anchor);

  int symbol_at(std::int64_t i) const;
  int alphabet() const { return alphabet_; }

 private:
  Driver() = default;

  struct LiftState;
  std::function<int(std::int64_t)> lookup_;
  int alphabet_ = 0;
};

bool check_admissible(const Eigen::MatrixXi& transitions, const std::vector<int>& word);

// The six-symbol transition matrix and two-interval classes used by the
// rotation-composed map family.
Eigen::MatrixXi six_map_transitions();
std::vector<int> six_map_classes();

// The distinguished aperiodic sequence: the lift of a shifted bit stream
// derived from the binary digits of pi (bit k of the source is the
// complement of fractional pi bit k-1 for k >= 1, zero otherwise),
// anchored at symbol 1.
Driver coherent_sequence_driver(std::int64_t shift = 120, int anchor = 1);

}  // namespace oselab
