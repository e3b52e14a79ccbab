#include "cdl/monad.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>

namespace cdl {

const char* monad_kind_name(MonadKind k) {
  switch (k) {
    case MonadKind::Pow: return "Pow";
    case MonadKind::MonNbhd: return "MonNbhd";
    case MonadKind::Nbhd: return "Nbhd";
    case MonadKind::Filter: return "Filter";
  }
  return "?";
}

std::optional<MonadKind> parse_monad_kind(const std::string& s) {
  for (auto k : {MonadKind::Pow, MonadKind::MonNbhd, MonadKind::Nbhd, MonadKind::Filter})
    if (s == monad_kind_name(k)) return k;
  return std::nullopt;
}

Family normalize(Family f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

Family minimize(Family f) {
  std::sort(f.begin(), f.end(), [](const StateSet& a, const StateSet& b) {
    const auto ca = a.count(), cb = b.count();
    return ca != cb ? ca < cb : a < b;
  });
  Family out;
  for (auto& s : f) {
    bool dominated = false;
    for (const auto& g : out)
      if (g.is_subset_of(s)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool upset_contains(const Family& gens, const StateSet& u) {
  for (const auto& g : gens)
    if (g.is_subset_of(u)) return true;
  return false;
}

Family upset_union(const Family& a, const Family& b) {
  Family all = a;
  all.insert(all.end(), b.begin(), b.end());
  return minimize(std::move(all));
}

Family upset_intersection(const Family& a, const Family& b) {
  Family all;
  all.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) all.push_back(x | y);
  return minimize(std::move(all));
}

Family upset_members(const Family& gens, std::size_t n) {
  Family out;
  for (auto& u : all_subsets(n))
    if (upset_contains(gens, u)) out.push_back(std::move(u));
  return out;
}

bool is_upward_closed(const Family& members) {
  std::set<StateSet> index(members.begin(), members.end());
  for (const auto& m : members)
    for (std::size_t x = 0; x < m.universe(); ++x) {
      if (m.test(x)) continue;
      StateSet bigger = m;
      bigger.set(x);
      if (!index.count(bigger)) return false;
    }
  return true;
}

namespace {

void check_universe(const Family& f, std::size_t n) {
  for (const auto& s : f)
    if (s.universe() != n) throw std::invalid_argument("family member over the wrong carrier");
}

}  // namespace

TValue TValue::pow(StateSet s) {
  TValue t;
  t.kind_ = MonadKind::Pow;
  t.n_ = s.universe();
  t.set_ = std::move(s);
  return t;
}

TValue TValue::filter(StateSet generator) {
  TValue t = pow(std::move(generator));
  t.kind_ = MonadKind::Filter;
  return t;
}

TValue TValue::mon_nbhd(Family generators, std::size_t n) {
  check_universe(generators, n);
  TValue t;
  t.kind_ = MonadKind::MonNbhd;
  t.n_ = n;
  t.family_ = minimize(std::move(generators));
  return t;
}

TValue TValue::mon_nbhd_from_upset(const Family& members, std::size_t n) {
  check_universe(members, n);
  if (!is_upward_closed(members))
    throw std::invalid_argument("monotone neighbourhood value is not upward closed");
  return mon_nbhd(members, n);
}

TValue TValue::nbhd(Family members, std::size_t n) {
  check_universe(members, n);
  TValue t;
  t.kind_ = MonadKind::Nbhd;
  t.n_ = n;
  t.family_ = normalize(std::move(members));
  return t;
}

bool TValue::contains_set(const StateSet& u) const {
  switch (kind_) {
    case MonadKind::Filter:
      return set_.is_subset_of(u);
    case MonadKind::MonNbhd:
      return upset_contains(family_, u);
    case MonadKind::Nbhd:
      return std::binary_search(family_.begin(), family_.end(), u);
    case MonadKind::Pow:
      break;
  }
  throw std::logic_error("contains_set on a powerset value");
}

Family TValue::members() const {
  switch (kind_) {
    case MonadKind::Filter:
      return upset_members({set_}, n_);
    case MonadKind::MonNbhd:
      return upset_members(family_, n_);
    case MonadKind::Nbhd:
      return family_;
    case MonadKind::Pow:
      break;
  }
  throw std::logic_error("members on a powerset value");
}

std::size_t TValue::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL + n_;
  h ^= set_.hash() + (h << 7);
  for (const auto& s : family_) h = (h ^ s.hash()) * 0x100000001b3ULL;
  return h;
}

std::string TValue::to_string() const {
  auto fam = [](const Family& f) {
    std::string out = "[";
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ",";
      out += f[i].to_string();
    }
    return out + "]";
  };
  switch (kind_) {
    case MonadKind::Pow: return set_.to_string();
    case MonadKind::Filter: return "^" + set_.to_string();
    case MonadKind::MonNbhd: return "^" + fam(family_);
    case MonadKind::Nbhd: return fam(family_);
  }
  return "?";
}

bool operator<(const TValue& a, const TValue& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.n_ != b.n_) return a.n_ < b.n_;
  if (!(a.set_ == b.set_)) return a.set_ < b.set_;
  return a.family_ < b.family_;
}

TValue MonadMorphismPow::apply(const StateSet& a) const {
  const std::size_t n = a.universe();
  switch (kind) {
    case Kind::Identity:
      return TValue::pow(a);
    case Kind::Upset:
      return TValue::filter(a);
    case Kind::DiamondTranspose: {
      Family singles;
      a.for_each([&](std::size_t x) { singles.push_back(StateSet::singleton(n, x)); });
      if (target == MonadKind::MonNbhd) return TValue::mon_nbhd(std::move(singles), n);
      return TValue::nbhd(upset_members(singles, n), n);
    }
    case Kind::BoxTranspose:
      if (target == MonadKind::MonNbhd) return TValue::mon_nbhd({a}, n);
      return TValue::nbhd(upset_members({a}, n), n);
  }
  throw std::logic_error("MonadMorphismPow::apply: bad kind");
}

std::string MonadMorphismPow::name() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::DiamondTranspose: return "diamond-transpose";
    case Kind::BoxTranspose: return "box-transpose";
    case Kind::Upset: return "upset";
  }
  return "?";
}

namespace {

void check_extend_shape(const KleisliArrow& g, const TValue& t) {
  if (t.universe() != g.domain())
    throw std::invalid_argument("Kleisli extension: value carrier " + std::to_string(t.universe()) +
                                " does not match arrow domain " + std::to_string(g.domain()));
}

StateSet union_over(const KleisliArrow& g, const StateSet& a) {
  StateSet out(g.codomain);
  a.for_each([&](std::size_t x) { out |= g(x).set(); });
  return out;
}

}  // namespace

MonadInstance pow_monad() {
  MonadInstance m;
  m.kind = MonadKind::Pow;
  m.name = "Pow";
  m.join_name = "union";
  m.unit = [](std::size_t n, std::size_t x) { return TValue::pow(StateSet::singleton(n, x)); };
  m.extend = [](const KleisliArrow& g, const TValue& t) {
    check_extend_shape(g, t);
    return TValue::pow(union_over(g, t.set()));
  };
  m.join = [](std::size_t n, const std::vector<TValue>& ts) {
    StateSet out(n);
    for (const auto& t : ts) out |= t.set();
    return TValue::pow(std::move(out));
  };
  m.bottom = [](std::size_t n) { return TValue::pow(StateSet(n)); };
  m.join_origin = MonadMorphismPow{MonadMorphismPow::Kind::Identity, MonadKind::Pow};
  return m;
}

MonadInstance filter_monad() {
  MonadInstance m;
  m.kind = MonadKind::Filter;
  m.name = "Filter";
  m.join_name = "upset";
  m.unit = [](std::size_t n, std::size_t x) { return TValue::filter(StateSet::singleton(n, x)); };
  // ext(g)(^A) = ^(union of the generators of g(x), x in A).
  m.extend = [](const KleisliArrow& g, const TValue& t) {
    check_extend_shape(g, t);
    return TValue::filter(union_over(g, t.set()));
  };
  m.join = [](std::size_t n, const std::vector<TValue>& ts) {
    StateSet out(n);
    for (const auto& t : ts) out |= t.set();
    return TValue::filter(std::move(out));
  };
  m.bottom = [](std::size_t n) { return TValue::filter(StateSet(n)); };
  m.join_origin = MonadMorphismPow{MonadMorphismPow::Kind::Upset, MonadKind::Filter};
  return m;
}

MonadInstance mon_nbhd_monad(JoinKind join) {
  MonadInstance m;
  m.kind = MonadKind::MonNbhd;
  m.name = "MonNbhd";
  m.unit = [](std::size_t n, std::size_t x) {
    return TValue::mon_nbhd({StateSet::singleton(n, x)}, n);
  };
  // U is in ext(g)(t) iff {x | U in g(x)} is in t, i.e. iff some generator
  // G of t has U in g(x) for all x in G.
  m.extend = [](const KleisliArrow& g, const TValue& t) {
    check_extend_shape(g, t);
    Family acc;
    for (const auto& gen : t.family()) {
      Family meet{StateSet(g.codomain)};
      gen.for_each([&](std::size_t x) { meet = upset_intersection(meet, g(x).family()); });
      acc.insert(acc.end(), meet.begin(), meet.end());
    }
    return TValue::mon_nbhd(std::move(acc), g.codomain);
  };
  if (join == JoinKind::Union) {
    m.join_name = "union";
    m.join = [](std::size_t n, const std::vector<TValue>& ts) {
      Family acc;
      for (const auto& t : ts) acc.insert(acc.end(), t.family().begin(), t.family().end());
      return TValue::mon_nbhd(std::move(acc), n);
    };
    m.bottom = [](std::size_t n) { return TValue::mon_nbhd({}, n); };
    m.join_origin =
        MonadMorphismPow{MonadMorphismPow::Kind::DiamondTranspose, MonadKind::MonNbhd};
  } else {
    m.join_name = "intersection";
    m.join = [](std::size_t n, const std::vector<TValue>& ts) {
      Family acc{StateSet(n)};
      for (const auto& t : ts) acc = upset_intersection(acc, t.family());
      return TValue::mon_nbhd(std::move(acc), n);
    };
    m.bottom = [](std::size_t n) { return TValue::mon_nbhd({StateSet(n)}, n); };
    m.join_origin = MonadMorphismPow{MonadMorphismPow::Kind::BoxTranspose, MonadKind::MonNbhd};
  }
  return m;
}

MonadInstance nbhd_monad() {
  MonadInstance m;
  m.kind = MonadKind::Nbhd;
  m.name = "Nbhd";
  m.join_name = "union";
  m.unit = [](std::size_t n, std::size_t x) {
    return TValue::nbhd(upset_members({StateSet::singleton(n, x)}, n), n);
  };
  m.extend = [](const KleisliArrow& g, const TValue& t) {
    check_extend_shape(g, t);
    Family out;
    for (auto& u : all_subsets(g.codomain)) {
      StateSet pre(g.domain());
      for (std::size_t x = 0; x < g.domain(); ++x)
        if (g(x).contains_set(u)) pre.set(x);
      if (t.contains_set(pre)) out.push_back(std::move(u));
    }
    return TValue::nbhd(std::move(out), g.codomain);
  };
  m.join = [](std::size_t n, const std::vector<TValue>& ts) {
    Family acc;
    for (const auto& t : ts) acc.insert(acc.end(), t.family().begin(), t.family().end());
    return TValue::nbhd(std::move(acc), n);
  };
  m.bottom = [](std::size_t n) { return TValue::nbhd({}, n); };
  m.join_origin = MonadMorphismPow{MonadMorphismPow::Kind::DiamondTranspose, MonadKind::Nbhd};
  return m;
}

MonadInstance broken_unit_monad(MonadInstance base) {
  base.name += "-broken";
  auto bottom = base.bottom;
  base.unit = [bottom](std::size_t n, std::size_t) { return bottom(n); };
  return base;
}

std::uint64_t tx_size(MonadKind kind, std::size_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  switch (kind) {
    case MonadKind::Pow:
    case MonadKind::Filter:
      return n >= 64 ? kMax : std::uint64_t{1} << n;
    case MonadKind::MonNbhd: {
      static constexpr std::array<std::uint64_t, 8> dedekind = {
          2, 3, 6, 20, 168, 7581, 7828354, 2414682040998ULL};
      return n < dedekind.size() ? dedekind[n] : kMax;
    }
    case MonadKind::Nbhd:
      return n >= 6 ? kMax : std::uint64_t{1} << (std::uint64_t{1} << n);
  }
  return kMax;
}

namespace {

// All upward closed families over an n-element carrier (n <= 4) as bit
// masks over subset indices.
std::vector<std::uint64_t> upset_masks(std::size_t n) {
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::uint64_t> out;
  const std::uint64_t limit = std::uint64_t{1} << subsets;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    bool closed = true;
    for (std::size_t s = 0; s < subsets && closed; ++s) {
      if (!((mask >> s) & 1)) continue;
      for (std::size_t x = 0; x < n; ++x)
        if (!((mask >> (s | (std::size_t{1} << x))) & 1)) {
          closed = false;
          break;
        }
    }
    if (closed) out.push_back(mask);
  }
  return out;
}

Family family_from_mask(std::size_t n, std::uint64_t mask) {
  Family f;
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s)
    if ((mask >> s) & 1) f.push_back(StateSet::from_mask(n, s));
  return f;
}

const std::vector<std::uint64_t>& cached_upset_masks(std::size_t n) {
  static std::array<std::vector<std::uint64_t>, 5> cache;
  static std::array<std::once_flag, 5> once;
  std::call_once(once[n], [n] { cache[n] = upset_masks(n); });
  return cache[n];
}

StateSet random_subset(std::size_t n, std::mt19937_64& rng) {
  StateSet s(n);
  for (std::size_t x = 0; x < n; ++x)
    if (rng() & 1) s.set(x);
  return s;
}

}  // namespace

std::vector<TValue> enumerate_values(MonadKind kind, std::size_t n) {
  std::vector<TValue> out;
  switch (kind) {
    case MonadKind::Pow:
    case MonadKind::Filter:
      if (n > 20) break;
      for (auto& s : all_subsets(n))
        out.push_back(kind == MonadKind::Pow ? TValue::pow(std::move(s)) : TValue::filter(std::move(s)));
      return out;
    case MonadKind::MonNbhd:
      if (n > 4) break;
      for (auto mask : cached_upset_masks(n))
        out.push_back(TValue::mon_nbhd(family_from_mask(n, mask), n));
      return out;
    case MonadKind::Nbhd:
      if (n > 4) break;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (std::size_t{1} << n)); ++mask)
        out.push_back(TValue::nbhd(family_from_mask(n, mask), n));
      return out;
  }
  throw std::invalid_argument(std::string("enumerate_values: carrier too large for ") +
                              monad_kind_name(kind));
}

TValue random_value(MonadKind kind, std::size_t n, std::mt19937_64& rng) {
  switch (kind) {
    case MonadKind::Pow:
      return TValue::pow(random_subset(n, rng));
    case MonadKind::Filter:
      return TValue::filter(random_subset(n, rng));
    case MonadKind::MonNbhd: {
      if (n <= 4) {
        const auto& masks = cached_upset_masks(n);
        return TValue::mon_nbhd(family_from_mask(n, masks[rng() % masks.size()]), n);
      }
      Family gens;
      const std::size_t k = rng() % 4;
      for (std::size_t i = 0; i < k; ++i) gens.push_back(random_subset(n, rng));
      return TValue::mon_nbhd(std::move(gens), n);
    }
    case MonadKind::Nbhd: {
      if (n <= 4) {
        const std::size_t subsets = std::size_t{1} << n;
        std::uint64_t mask = rng();
        if (subsets < 64) mask &= (std::uint64_t{1} << subsets) - 1;
        return TValue::nbhd(family_from_mask(n, mask), n);
      }
      Family members;
      const std::size_t k = rng() % 6;
      for (std::size_t i = 0; i < k; ++i) members.push_back(random_subset(n, rng));
      return TValue::nbhd(std::move(members), n);
    }
  }
  throw std::logic_error("random_value: bad kind");
}

KleisliArrow random_arrow(MonadKind kind, std::size_t n, std::mt19937_64& rng) {
  KleisliArrow f{n, {}};
  for (std::size_t x = 0; x < n; ++x) f.table.push_back(random_value(kind, n, rng));
  return f;
}

KleisliArrow unit_arrow(const MonadInstance& m, std::size_t n) {
  KleisliArrow f{n, {}};
  for (std::size_t x = 0; x < n; ++x) f.table.push_back(m.unit(n, x));
  return f;
}

KleisliArrow bottom_arrow(const MonadInstance& m, std::size_t n) {
  return KleisliArrow{n, std::vector<TValue>(n, m.bottom(n))};
}

KleisliArrow join_arrows(const MonadInstance& m, const std::vector<KleisliArrow>& fs,
                         std::size_t domain, std::size_t codomain) {
  KleisliArrow out{codomain, {}};
  std::vector<TValue> column;
  for (std::size_t x = 0; x < domain; ++x) {
    column.clear();
    for (const auto& f : fs) column.push_back(f(x));
    out.table.push_back(m.join(codomain, column));
  }
  return out;
}

KleisliArrow kleisli_compose(const MonadInstance& m, const KleisliArrow& f, const KleisliArrow& g) {
  if (f.codomain != g.domain())
    throw std::invalid_argument("kleisli_compose: carrier mismatch (" + std::to_string(f.codomain) +
                                " vs " + std::to_string(g.domain()) + ")");
  KleisliArrow out{g.codomain, {}};
  out.table.reserve(f.domain());
  for (const auto& t : f.table) out.table.push_back(m.extend(g, t));
  return out;
}

namespace {

std::uint64_t star_budget(const MonadInstance& m, std::size_t n) {
  const std::uint64_t tx = tx_size(m.kind, n);
  if (n != 0 && tx > std::numeric_limits<std::uint64_t>::max() / n)
    return std::numeric_limits<std::uint64_t>::max();
  return tx * n;
}

}  // namespace

KleisliArrow kleisli_star(const MonadInstance& m, const KleisliArrow& f) {
  const std::size_t n = f.domain();
  if (f.codomain != n) throw std::invalid_argument("kleisli_star: arrow is not an endomap");
  const KleisliArrow eta = unit_arrow(m, n);
  const std::uint64_t budget = star_budget(m, n);
  KleisliArrow s = bottom_arrow(m, n);
  for (std::uint64_t round = 0;; ++round) {
    if (round > budget)
      throw std::logic_error("kleisli_star: iteration budget exceeded; join is not a sup-lattice join");
    KleisliArrow next{n, {}};
    next.table.reserve(n);
    for (std::size_t x = 0; x < n; ++x) next.table.push_back(m.join(n, {eta(x), m.extend(s, f(x))}));
    if (next == s) return s;
    s = std::move(next);
  }
}

KleisliArrow kleisli_power_join(const MonadInstance& m, const KleisliArrow& f) {
  const std::size_t n = f.domain();
  if (f.codomain != n) throw std::invalid_argument("kleisli_power_join: arrow is not an endomap");
  const std::uint64_t budget = std::min<std::uint64_t>(star_budget(m, n), 1u << 20);
  std::vector<KleisliArrow> powers{unit_arrow(m, n)};
  while (true) {
    KleisliArrow next = kleisli_compose(m, powers.back(), f);
    if (std::find(powers.begin(), powers.end(), next) != powers.end()) break;
    powers.push_back(std::move(next));
    if (powers.size() > budget) throw std::logic_error("kleisli_power_join: budget exceeded");
  }
  return join_arrows(m, powers, n, n);
}

TValue induced_join(const MonadMorphismPow& tau, std::size_t n, const std::vector<TValue>& ts) {
  auto accepts = [&](auto&& pred) {
    if (tau.existential()) return std::any_of(ts.begin(), ts.end(), pred);
    return std::all_of(ts.begin(), ts.end(), pred);
  };
  if (tau.target == MonadKind::Pow) {
    StateSet out(n);
    for (std::size_t x = 0; x < n; ++x)
      if (accepts([&](const TValue& t) { return t.set().test(x); })) out.set(x);
    return TValue::pow(std::move(out));
  }
  Family members;
  for (auto& u : all_subsets(n))
    if (accepts([&](const TValue& t) { return t.contains_set(u); })) members.push_back(std::move(u));
  switch (tau.target) {
    case MonadKind::MonNbhd:
      return TValue::mon_nbhd_from_upset(members, n);
    case MonadKind::Nbhd:
      return TValue::nbhd(std::move(members), n);
    case MonadKind::Filter: {
      StateSet gen = StateSet::full(n);
      for (const auto& u : members) gen &= u;
      return TValue::filter(std::move(gen));
    }
    case MonadKind::Pow:
      break;
  }
  throw std::logic_error("induced_join: bad target");
}

TValue fmap(const TValue& t, const std::vector<std::size_t>& f, std::size_t codomain) {
  auto image = [&](const StateSet& a) {
    StateSet out(codomain);
    a.for_each([&](std::size_t x) { out.set(f[x]); });
    return out;
  };
  switch (t.kind()) {
    case MonadKind::Pow:
      return TValue::pow(image(t.set()));
    case MonadKind::Filter:
      return TValue::filter(image(t.set()));
    case MonadKind::MonNbhd: {
      Family gens;
      for (const auto& g : t.family()) gens.push_back(image(g));
      return TValue::mon_nbhd(std::move(gens), codomain);
    }
    case MonadKind::Nbhd: {
      Family out;
      for (auto& v : all_subsets(codomain)) {
        StateSet pre(t.universe());
        for (std::size_t x = 0; x < t.universe(); ++x)
          if (v.test(f[x])) pre.set(x);
        if (t.contains_set(pre)) out.push_back(std::move(v));
      }
      return TValue::nbhd(std::move(out), codomain);
    }
  }
  throw std::logic_error("fmap: bad kind");
}

}  // namespace cdl
