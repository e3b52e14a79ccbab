#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cdl/kernels.hpp"
#include "cdl/monad.hpp"

namespace cdl {

struct LawReport {
  std::string suite;
  std::string instance;
  std::size_t carrier = 0;
  bool exhaustive = false;
  std::uint64_t checks = 0;
  std::uint64_t violation_count = 0;
  std::vector<std::string> violations;

  bool ok() const { return violation_count == 0; }
  void absorb(const ViolationSink& sink);
};

struct LawBudget {
  std::uint64_t samples = 10000;
  /// Enumerate exhaustively when the number of arrows X -> TX is at most this.
  std::uint64_t exhaustive_limit = 4096;
  /// Enumerate T(TX) in the transpose multiplication square when it has at
  /// most this many elements (7828354 for monotone neighbourhoods on two states).
  std::uint64_t square_limit = std::uint64_t{1} << 23;
  std::uint64_t seed = 1;
  bool parallel = true;
};

/// Deterministic per-sample generator: sample i of a suite always sees the
/// same stream regardless of scheduling.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t suite_tag, std::uint64_t i);

/// |TX|^n, saturating.
std::uint64_t arrow_count(MonadKind kind, std::size_t n);
/// The arrow whose table reads the base-|values| digits of index.
KleisliArrow arrow_from_index(const std::vector<TValue>& values, std::size_t n, std::uint64_t index);

/// Left unit, right unit and associativity of the Kleisli extension.
LawReport check_monad_laws(const MonadInstance& m, std::size_t n, const LawBudget& b);
/// Associativity, commutativity, idempotence and the bottom unit of the
/// join, plus agreement of n-ary joins with iterated binary ones.
LawReport check_join_laws(const MonadInstance& m, std::size_t n, const LawBudget& b);
/// f;(join of g_i) = join of (f;g_i) for families of size 0 to 3.
LawReport check_left_quantalic(const MonadInstance& m, std::size_t n, const LawBudget& b);
/// ext(g)(join of t_i) = join of ext(g)(t_i).
LawReport check_extension_preserves_joins(const MonadInstance& m, std::size_t n, const LawBudget& b);
/// kleisli_star(f) = unit join (f; kleisli_star(f)) pointwise.
LawReport check_star_unfolding(const MonadInstance& m, std::size_t n, const LawBudget& b);
/// The join's origin tau is a natural monad morphism from Pow and the
/// join it induces is the instance's join.
LawReport check_join_origin(const MonadInstance& m, std::size_t n, const LawBudget& b);

}  // namespace cdl
