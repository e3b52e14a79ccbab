#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cdl/state_set.hpp"

namespace cdl {

enum class MonadKind { Pow, MonNbhd, Nbhd, Filter };

const char* monad_kind_name(MonadKind k);
std::optional<MonadKind> parse_monad_kind(const std::string& s);

/// A family of subsets of a carrier, kept sorted and duplicate free.
using Family = std::vector<StateSet>;

Family normalize(Family f);
/// Minimal elements of f, sorted.
Family minimize(Family f);
/// Does the upset generated by gens contain u?
bool upset_contains(const Family& gens, const StateSet& u);
Family upset_union(const Family& a, const Family& b);
Family upset_intersection(const Family& a, const Family& b);
/// Every member of the upset generated by gens (n <= 20).
Family upset_members(const Family& gens, std::size_t n);
bool is_upward_closed(const Family& members);

/// One element of TX for a finite carrier X.
///   Pow      a subset of X
///   Filter   the principal filter generated by a subset (empty = improper)
///   MonNbhd  an upward closed family, stored by its minimal generators
///   Nbhd     an arbitrary family
class TValue {
 public:
  TValue() = default;

  static TValue pow(StateSet s);
  static TValue filter(StateSet generator);
  /// Upset generated by an arbitrary family.
  static TValue mon_nbhd(Family generators, std::size_t n);
  /// From the full member list; throws std::invalid_argument unless upward closed.
  static TValue mon_nbhd_from_upset(const Family& members, std::size_t n);
  static TValue nbhd(Family members, std::size_t n);

  MonadKind kind() const { return kind_; }
  std::size_t universe() const { return n_; }

  /// Pow payload or Filter generator.
  const StateSet& set() const { return set_; }
  /// MonNbhd generators or Nbhd members.
  const Family& family() const { return family_; }

  /// Neighbourhood membership: u in the filter / upset / family. Not
  /// defined for Pow.
  bool contains_set(const StateSet& u) const;
  /// Explicit member list of a neighbourhood-style value (n <= 20).
  Family members() const;

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const TValue& a, const TValue& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.set_ == b.set_ && a.family_ == b.family_;
  }
  friend bool operator<(const TValue& a, const TValue& b);

 private:
  MonadKind kind_ = MonadKind::Pow;
  std::size_t n_ = 0;
  StateSet set_;
  Family family_;
};

struct TValueHash {
  std::size_t operator()(const TValue& t) const { return t.hash(); }
};

/// f: X -> TY given by its table; domain() = |X|, codomain = |Y|.
struct KleisliArrow {
  std::size_t codomain = 0;
  std::vector<TValue> table;

  std::size_t domain() const { return table.size(); }
  const TValue& operator()(std::size_t x) const { return table[x]; }
  friend bool operator==(const KleisliArrow&, const KleisliArrow&) = default;
};

/// A monad morphism from the powerset monad into T, used to induce a join
/// on TX.
struct MonadMorphismPow {
  enum class Kind {
    Identity,          // Pow -> Pow
    DiamondTranspose,  // A |-> {U | A meets U}
    BoxTranspose,      // A |-> {U | A subset of U}
    Upset,             // A |-> principal filter of A
  };
  Kind kind = Kind::Identity;
  MonadKind target = MonadKind::Pow;

  TValue apply(const StateSet& a) const;
  /// Whether the morphism turns a set of elements into an element of TX
  /// that accepts a predicate when some (true) or all (false) elements do.
  bool existential() const { return kind == Kind::Identity || kind == Kind::DiamondTranspose; }
  std::string name() const;
};

/// A finite monad instance together with the sup-lattice join chosen for it.
struct MonadInstance {
  MonadKind kind = MonadKind::Pow;
  std::string name;
  std::string join_name;
  std::function<TValue(std::size_t n, std::size_t x)> unit;
  std::function<TValue(const KleisliArrow& g, const TValue& t)> extend;
  std::function<TValue(std::size_t n, const std::vector<TValue>& ts)> join;
  std::function<TValue(std::size_t n)> bottom;
  std::optional<MonadMorphismPow> join_origin;
};

enum class JoinKind { Union, Intersection };

MonadInstance pow_monad();
MonadInstance filter_monad();
MonadInstance mon_nbhd_monad(JoinKind join);
MonadInstance nbhd_monad();
/// Negative control: unit replaced by bottom.
MonadInstance broken_unit_monad(MonadInstance base);

/// |TX| saturated at UINT64_MAX.
std::uint64_t tx_size(MonadKind kind, std::size_t n);
/// Every element of TX in a fixed order; requires tx_size small.
std::vector<TValue> enumerate_values(MonadKind kind, std::size_t n);
TValue random_value(MonadKind kind, std::size_t n, std::mt19937_64& rng);
KleisliArrow random_arrow(MonadKind kind, std::size_t n, std::mt19937_64& rng);

KleisliArrow unit_arrow(const MonadInstance& m, std::size_t n);
KleisliArrow bottom_arrow(const MonadInstance& m, std::size_t n);
/// Pointwise join of arrows with equal shape.
KleisliArrow join_arrows(const MonadInstance& m, const std::vector<KleisliArrow>& fs,
                         std::size_t domain, std::size_t codomain);

/// (f;g)(x) = ext(g)(f(x)): run f, then g. Throws std::invalid_argument when
/// f's codomain is not g's domain.
KleisliArrow kleisli_compose(const MonadInstance& m, const KleisliArrow& f, const KleisliArrow& g);

/// Least s with s = unit join (f;s), by iteration from the bottom arrow.
/// Throws std::logic_error when the round budget |TX|*|X| is exceeded,
/// which can only happen with a join that is not a sup-lattice join.
KleisliArrow kleisli_star(const MonadInstance& m, const KleisliArrow& f);

/// Join of all Kleisli powers f^0, f^1, ... taken literally; the sequence of
/// powers is eventually periodic, so it is joined up to the first repeat.
KleisliArrow kleisli_power_join(const MonadInstance& m, const KleisliArrow& f);

/// mu(tau(ts)) evaluated by membership, independently of m.join.
TValue induced_join(const MonadMorphismPow& tau, std::size_t n, const std::vector<TValue>& ts);

/// Functor action on a map X -> Y given as a table of images.
TValue fmap(const TValue& t, const std::vector<std::size_t>& f, std::size_t codomain);

}  // namespace cdl
