#include "oselab/drivers.hpp"

#include <mutex>

#include <gmp.h>
#include <mpfr.h>

namespace oselab {

std::vector<int> pi_fraction_bits(int n) {
  if (n < 1) throw IndexOutOfRange("pi_fraction_bits: need n >= 1");
  const mpfr_prec_t prec = n + 64;
  mpfr_t pi;
  mpfr_init2(pi, prec);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_sub_ui(pi, pi, 3, MPFR_RNDN);
  mpfr_mul_2ui(pi, pi, static_cast<unsigned long>(n), MPFR_RNDN);
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, pi, MPFR_RNDD);
  std::vector<int> bits(n, 0);
  for (int i = 0; i < n; ++i)
    if (mpz_tstbit(z, static_cast<mp_bitcnt_t>(n - 1 - i))) bits[i] = 1;
  mpz_clear(z);
  mpfr_clear(pi);
  return bits;
}

namespace {

// Unique successor/predecessor tables per (symbol, class); existence and
// uniqueness is the deterministic-lift condition.
struct LiftTables {
  std::vector<std::array<int, 2>> succ;  // succ[sym-1][class] = next symbol
  std::vector<std::array<int, 2>> pred;
};

LiftTables build_lift_tables(const Eigen::MatrixXi& E, const std::vector<int>& h) {
  const int K = static_cast<int>(E.rows());
  if (E.cols() != K || static_cast<int>(h.size()) != K)
    throw DimensionMismatch("transition matrix and class table sizes disagree");
  LiftTables t;
  t.succ.assign(K, {0, 0});
  t.pred.assign(K, {0, 0});
  for (int i = 0; i < K; ++i)
    for (int b = 0; b < 2; ++b) {
      int found = 0;
      for (int j = 0; j < K; ++j)
        if (E(i, j) == 1 && h[j] == b) {
          t.succ[i][b] = j + 1;
          ++found;
        }
      if (found != 1) throw NondeterministicLift("row " + std::to_string(i + 1) + " has " +
                                                 std::to_string(found) + " successors in class " + std::to_string(b));
    }
  for (int j = 0; j < K; ++j)
    for (int b = 0; b < 2; ++b) {
      int found = 0;
      for (int i = 0; i < K; ++i)
        if (E(i, j) == 1 && h[i] == b) {
          t.pred[j][b] = i + 1;
          ++found;
        }
      if (found != 1) throw NondeterministicLift("column " + std::to_string(j + 1) + " has " +
                                                 std::to_string(found) + " predecessors in class " + std::to_string(b));
    }
  return t;
}

}  // namespace

struct Driver::LiftState {
  LiftTables tables;
  BitSource bits;
  std::int64_t shift = 0;
  int anchor = 1;
  std::vector<int> h;
  // Memo grows outward from index 0; fills are idempotent.
  mutable std::vector<int> forward{};   // index i >= 0 at position i
  mutable std::vector<int> backward{};  // index i < 0 at position -i-1
  mutable std::mutex mu;

  int at(std::int64_t i) const {
    std::scoped_lock lock(mu);
    if (forward.empty()) forward.push_back(anchor);
    if (i >= 0) {
      while (static_cast<std::int64_t>(forward.size()) <= i) {
        const std::int64_t next = static_cast<std::int64_t>(forward.size());
        const int b = bits(next + shift);
        forward.push_back(tables.succ[forward.back() - 1][b]);
      }
      return forward[static_cast<size_t>(i)];
    }
    while (static_cast<std::int64_t>(backward.size()) < -i) {
      const std::int64_t idx = -static_cast<std::int64_t>(backward.size()) - 1;
      const int from = backward.empty() ? forward.front() : backward.back();
      const int b = bits(idx + shift);
      backward.push_back(tables.pred[from - 1][b]);
    }
    return backward[static_cast<size_t>(-i - 1)];
  }
};

Driver Driver::periodic(std::vector<int> word) {
  if (word.empty()) throw Error("periodic driver needs a nonempty word");
  Driver d;
  d.alphabet_ = *std::max_element(word.begin(), word.end());
  d.lookup_ = [word = std::move(word)](std::int64_t i) {
    const std::int64_t R = static_cast<std::int64_t>(word.size());
    return word[static_cast<size_t>(((i % R) + R) % R)];
  };
  return d;
}

Driver Driver::explicit_sequence(std::vector<int> symbols, std::int64_t origin) {
  if (symbols.empty()) throw Error("explicit driver needs symbols");
  Driver d;
  d.alphabet_ = *std::max_element(symbols.begin(), symbols.end());
  d.lookup_ = [symbols = std::move(symbols), origin](std::int64_t i) {
    const std::int64_t off = i - origin;
    if (off < 0 || off >= static_cast<std::int64_t>(symbols.size()))
      throw IndexOutOfRange("explicit driver queried outside its stored range");
    return symbols[static_cast<size_t>(off)];
  };
  return d;
}

Driver Driver::explicit_function(std::function<int(std::int64_t)> fn, int alphabet) {
  Driver d;
  d.alphabet_ = alphabet;
  d.lookup_ = std::move(fn);
  return d;
}

Driver Driver::sft_lift(Eigen::MatrixXi transitions, std::vector<int> h_classes, BitSource bits,
                        std::int64_t shift, int anchor) {
  auto state = std::make_shared<LiftState>();
  state->tables = build_lift_tables(transitions, h_classes);
  state->h = h_classes;
  state->bits = std::move(bits);
  state->shift = shift;
  state->anchor = anchor;
  const int K = static_cast<int>(h_classes.size());
  if (anchor < 1 || anchor > K) throw IndexOutOfRange("anchor symbol outside alphabet");
  if (h_classes[anchor - 1] != state->bits(shift))
    throw AnchorMismatch("anchor symbol class does not match the bit at the shift index");
  Driver d;
  d.alphabet_ = K;
  d.lookup_ = [state](std::int64_t i) { return state->at(i); };
  return d;
}

int Driver::symbol_at(std::int64_t i) const { return lookup_(i); }

bool check_admissible(const Eigen::MatrixXi& transitions, const std::vector<int>& word) {
  for (size_t k = 0; k + 1 < word.size(); ++k)
    if (transitions(word[k] - 1, word[k + 1] - 1) != 1) return false;
  return true;
}

Eigen::MatrixXi six_map_transitions() {
  Eigen::MatrixXi E(6, 6);
  E << 0, 1, 0, 0, 1, 0,  //
      0, 0, 1, 0, 0, 1,   //
      1, 0, 0, 1, 0, 0,   //
      0, 0, 1, 0, 0, 1,   //
      1, 0, 0, 1, 0, 0,   //
      0, 1, 0, 0, 1, 0;
  return E;
}

std::vector<int> six_map_classes() { return {0, 0, 0, 1, 1, 1}; }

Driver coherent_sequence_driver(std::int64_t shift, int anchor) {
  auto cache = std::make_shared<std::vector<int>>(pi_fraction_bits(4096));
  BitSource bits = [cache](std::int64_t k) -> int {
    if (k < 1) return 0;
    const std::int64_t idx = k - 1;
    if (idx >= static_cast<std::int64_t>(cache->size()))
      throw IndexOutOfRange("bit source queried past the materialized prefix");
    return 1 - (*cache)[static_cast<size_t>(idx)];
  };
  return Driver::sft_lift(six_map_transitions(), six_map_classes(), std::move(bits), shift, anchor);
}

}  // namespace oselab
