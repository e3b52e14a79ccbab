#include "cdl/lifting.hpp"

#include <stdexcept>

namespace cdl {

const char* polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Diamond:
      return "diamond";
    case Polarity::Box:
      return "box";
    case Polarity::Neither:
      return "neither";
  }
  return "?";
}

namespace {

void require_kind(const char* lifting, const TValue& t, MonadKind k) {
  if (t.kind() != k)
    throw std::invalid_argument(std::string(lifting) + " is not defined on " + monad_kind_name(t.kind()) +
                                " values");
}

std::string show(const std::vector<TValue>& ts) {
  std::string out = "{";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += ts[i].to_string();
  }
  return out + "}";
}

LawReport make_report(const char* suite, const Lifting& l, const MonadInstance& m, std::size_t n,
                      bool exhaustive) {
  LawReport r;
  r.suite = suite;
  r.instance = l.name + "@" + m.name + "/" + m.join_name;
  r.carrier = n;
  r.exhaustive = exhaustive;
  return r;
}

bool small_carrier(MonadKind k, std::size_t n, std::uint64_t limit) { return tx_size(k, n) <= limit; }

std::vector<std::size_t> map_from_index(std::size_t n, std::size_t code) {
  std::vector<std::size_t> f(n);
  for (auto& y : f) {
    y = code % n;
    code /= n;
  }
  return f;
}

std::size_t map_count(std::size_t n) {
  std::size_t maps = 1;
  for (std::size_t i = 0; i < n; ++i) maps *= n;
  return maps;
}

StateSet preimage(const std::vector<std::size_t>& f, const StateSet& u) {
  StateSet out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    if (u.test(f[x])) out.set(x);
  return out;
}

// Upward closed families over P({0..k-1}) as bitmasks indexed by subset
// mask, k <= 6. An upset over P(k) is a pair (without k-1, with k-1) of
// upsets over P(k-1), the first inside the second.
const std::vector<std::uint64_t>& upset_masks(std::size_t k) {
  static std::vector<std::vector<std::uint64_t>> cache;
  if (k > 5) throw std::invalid_argument("upset_masks: k too large to store");
  if (cache.empty()) cache.push_back({0, 1});
  while (cache.size() <= k) {
    const std::size_t half = std::size_t{1} << (cache.size() - 1);
    const auto& prev = cache.back();
    std::vector<std::uint64_t> next;
    for (auto f1 : prev)
      for (auto f0 : prev)
        if ((f0 & ~f1) == 0) next.push_back(f0 | (f1 << half));
    cache.push_back(std::move(next));
  }
  return cache[k];
}

Family minimal_members(std::size_t k, std::uint64_t mask) {
  Family gens;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
    if (!((mask >> s) & 1)) continue;
    bool minimal = true;
    for (std::size_t x = 0; x < k && minimal; ++x)
      if (((s >> x) & 1) && ((mask >> (s ^ (std::uint64_t{1} << x))) & 1)) minimal = false;
    if (minimal) gens.push_back(StateSet::from_mask(k, s));
  }
  return gens;
}

Family members_of_mask(std::size_t k, std::uint64_t mask) {
  Family out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s)
    if ((mask >> s) & 1) out.push_back(StateSet::from_mask(k, s));
  return out;
}

bool eval_chi(const PositiveTerm& chi, const std::vector<bool>& leaves) {
  switch (chi.kind) {
    case PositiveTerm::Kind::Leaf:
      return leaves.at(chi.index);
    case PositiveTerm::Kind::And:
      for (const auto& c : chi.children)
        if (!eval_chi(c, leaves)) return false;
      return true;
    case PositiveTerm::Kind::Or:
      for (const auto& c : chi.children)
        if (eval_chi(c, leaves)) return true;
      return false;
  }
  return false;
}

}  // namespace

Lifting kripke_diamond() {
  return {"kripke-diamond", Polarity::Diamond, [](const TValue& t, const StateSet& u) {
            require_kind("kripke-diamond", t, MonadKind::Pow);
            return t.set().intersects(u);
          }};
}

Lifting kripke_box() {
  return {"kripke-box", Polarity::Box, [](const TValue& t, const StateSet& u) {
            require_kind("kripke-box", t, MonadKind::Pow);
            return t.set().is_subset_of(u);
          }};
}

Lifting nonempty_subset() {
  return {"nonempty-subset", Polarity::Neither, [](const TValue& t, const StateSet& u) {
            require_kind("nonempty-subset", t, MonadKind::Pow);
            return t.set().any() && t.set().is_subset_of(u);
          }};
}

Lifting neighbourhood_modality() {
  return {"neighbourhood", Polarity::Neither, [](const TValue& t, const StateSet& u) {
            if (t.kind() == MonadKind::Pow) throw std::invalid_argument("neighbourhood is not defined on Pow values");
            return t.contains_set(u);
          }};
}

Lifting filter_diamond() {
  return {"filter-diamond", Polarity::Diamond, [](const TValue& t, const StateSet& u) {
            require_kind("filter-diamond", t, MonadKind::Filter);
            return !t.contains_set(u.complement());
          }};
}

Lifting constant_empty() {
  return {"constant-empty", Polarity::Diamond, [](const TValue&, const StateSet&) { return false; }};
}

Lifting boolean_dual(const Lifting& l) {
  Polarity p = Polarity::Neither;
  if (l.declared == Polarity::Diamond) p = Polarity::Box;
  if (l.declared == Polarity::Box) p = Polarity::Diamond;
  auto inner = l.contains;
  return {"dual(" + l.name + ")", p,
          [inner](const TValue& t, const StateSet& u) { return !inner(t, u.complement()); }};
}

TValue transpose(const Lifting& l, const TValue& t) {
  const std::size_t n = t.universe();
  Family members;
  for (const auto& u : all_subsets(n))
    if (l.contains(t, u)) members.push_back(u);
  return TValue::nbhd(std::move(members), n);
}

PolarityReport classify_polarity(const Lifting& l, const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = small_carrier(m.kind, n, 64);
  PolarityReport out;
  out.diamond = make_report("polarity-diamond", l, m, n, exhaustive);
  out.box = make_report("polarity-box", l, m, n, exhaustive);
  const std::vector<StateSet> subsets = all_subsets(n);

  // existential: the join is accepted iff some member is; otherwise iff all are.
  auto family = [&](const std::vector<TValue>& ts, bool existential, ViolationSink& sink) {
    const TValue joined = m.join(n, ts);
    for (const auto& u : subsets) {
      bool any = false, all = true;
      for (const auto& t : ts) {
        const bool in = l.contains(t, u);
        any = any || in;
        all = all && in;
      }
      sink.check(l.contains(joined, u) == (existential ? any : all),
                 [&] { return "join of " + show(ts) + " at U=" + u.to_string(); });
    }
  };
  auto run = [&](std::size_t count, auto&& make_family) {
    for (const bool existential : {true, false}) {
      LawReport& target = existential ? out.diamond : out.box;
      target.absorb(sweep(count, [&](std::size_t i, ViolationSink& sink) {
        family(make_family(i), existential, sink);
      }, b.parallel));
    }
  };

  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    const std::size_t v = values.size();
    run(1 + v + v * v + v * v * v, [&](std::size_t i) {
      std::vector<TValue> ts;
      if (i == 0) return ts;
      i -= 1;
      std::size_t size = 1, span = v;
      while (i >= span) {
        i -= span;
        ++size;
        span *= v;
      }
      for (std::size_t k = 0; k < size; ++k) {
        ts.push_back(values[i % v]);
        i /= v;
      }
      return ts;
    });
  } else {
    run(b.samples, [&](std::size_t i) {
      auto rng = sample_rng(b.seed, 20, i);
      std::vector<TValue> ts(i == 0 ? 0 : rng() % 4);
      for (auto& t : ts) t = random_value(m.kind, n, rng);
      return ts;
    });
  }

  if (out.diamond.ok())
    out.result = Polarity::Diamond;
  else if (out.box.ok())
    out.result = Polarity::Box;
  return out;
}

LawReport check_transpose_monad_morphism(const Lifting& l, const MonadInstance& m, std::size_t n,
                                         const LawBudget& b) {
  const std::vector<StateSet> subsets = all_subsets(n);

  // Unit square: unit(x) in lambda(U) iff x in U.
  ViolationSink unit_sink = sweep(subsets.size(), [&](std::size_t i, ViolationSink& sink) {
    const StateSet& u = subsets[i];
    for (std::size_t x = 0; x < n; ++x)
      sink.check(l.contains(m.unit(n, x), u) == u.test(x),
                 [&] { return "unit square at x=" + std::to_string(x) + " U=" + u.to_string(); });
  }, false);

  if (!small_carrier(m.kind, n, 64)) {
    LawReport r = make_report("transpose-morphism", l, m, n, false);
    r.absorb(unit_sink);
    r.violations.push_back("multiplication square skipped: carrier too large to enumerate TX");
    return r;
  }

  const std::vector<TValue> values = enumerate_values(m.kind, n);
  const std::size_t v = values.size();
  const KleisliArrow id_tx{n, values};
  // For every U, the set of t in TX with t in lambda(U).
  std::vector<StateSet> accepted;
  for (const auto& u : subsets) {
    StateSet s(v);
    for (std::size_t i = 0; i < v; ++i)
      if (l.contains(values[i], u)) s.set(i);
    accepted.push_back(s);
  }

  auto square = [&](const TValue& phi, ViolationSink& sink) {
    const TValue flat = m.extend(id_tx, phi);
    for (std::size_t k = 0; k < subsets.size(); ++k)
      sink.check(l.contains(flat, subsets[k]) == l.contains(phi, accepted[k]), [&] {
        return "multiplication square at Phi=" + phi.to_string() + " U=" + subsets[k].to_string();
      });
  };

  // Exhaustive over T(TX) where it is enumerable: subsets of TX for Pow and
  // Filter, upsets over P(TX) for MonNbhd when |TX| <= 6, families over
  // P(TX) for Nbhd when |TX| <= 4.
  bool exhaustive = false;
  ViolationSink mu_sink;
  const auto within = [&](std::uint64_t count) { return count <= b.square_limit; };
  static constexpr std::uint64_t kMonotone[] = {2, 3, 6, 20, 168, 7581, 7828354};
  if ((m.kind == MonadKind::Pow || m.kind == MonadKind::Filter) && v <= 16 && within(std::uint64_t{1} << v)) {
    exhaustive = true;
    mu_sink = sweep(std::size_t{1} << v, [&](std::size_t i, ViolationSink& sink) {
      const StateSet s = StateSet::from_mask(v, i);
      square(m.kind == MonadKind::Pow ? TValue::pow(s) : TValue::filter(s), sink);
    }, b.parallel);
  } else if (m.kind == MonadKind::MonNbhd && v <= 6 && within(kMonotone[v])) {
    exhaustive = true;
    if (v == 6) {
      const auto& half = upset_masks(5);
      mu_sink = sweep(half.size(), [&](std::size_t i, ViolationSink& sink) {
        const std::uint64_t f1 = half[i];
        for (auto f0 : half)
          if ((f0 & ~f1) == 0) square(TValue::mon_nbhd(minimal_members(6, f0 | (f1 << 32)), 6), sink);
      }, b.parallel);
    } else {
      const auto& masks = upset_masks(v);
      mu_sink = sweep(masks.size(), [&](std::size_t i, ViolationSink& sink) {
        square(TValue::mon_nbhd(minimal_members(v, masks[i]), v), sink);
      }, b.parallel);
    }
  } else if (m.kind == MonadKind::Nbhd && v <= 4 && within(std::uint64_t{1} << (std::size_t{1} << v))) {
    exhaustive = true;
    mu_sink = sweep(std::size_t{1} << (std::size_t{1} << v), [&](std::size_t i, ViolationSink& sink) {
      square(TValue::nbhd(members_of_mask(v, i), v), sink);
    }, b.parallel);
  } else {
    mu_sink = sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
      auto rng = sample_rng(b.seed, 21, i);
      square(random_value(m.kind, v, rng), sink);
    }, b.parallel);
  }

  LawReport r = make_report("transpose-morphism", l, m, n, exhaustive);
  r.absorb(unit_sink);
  r.absorb(mu_sink);
  return r;
}

LawReport check_composition_lemma(const Lifting& l, const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const std::vector<StateSet> subsets = all_subsets(n);
  const std::uint64_t arrows = arrow_count(m.kind, n);
  const bool exhaustive = small_carrier(m.kind, n, 64) && arrows * tx_size(m.kind, n) <= (1u << 22);
  LawReport r = make_report("composition-lemma", l, m, n, exhaustive);

  // (f;g)(x) = ext(g)(f(x)), so the statement at x only involves t = f(x);
  // quantifying over every t covers every f and x.
  auto check = [&](const TValue& t, const KleisliArrow& g, ViolationSink& sink) {
    const TValue composed = m.extend(g, t);
    for (const auto& u : subsets) {
      StateSet pre(n);
      for (std::size_t y = 0; y < n; ++y)
        if (l.contains(g(y), u)) pre.set(y);
      sink.check(l.contains(composed, u) == l.contains(t, pre), [&] {
        std::string gs;
        for (std::size_t y = 0; y < n; ++y) gs += (y ? ", " : "") + g(y).to_string();
        return "t=" + t.to_string() + " g=[" + gs + "] U=" + u.to_string();
      });
    }
  };

  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    r.absorb(sweep(arrows, [&](std::size_t i, ViolationSink& sink) {
      const KleisliArrow g = arrow_from_index(values, n, i);
      for (const auto& t : values) check(t, g, sink);
    }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 22, i);
    const KleisliArrow f = random_arrow(m.kind, n, rng);
    const KleisliArrow g = random_arrow(m.kind, n, rng);
    check(f(n ? rng() % n : 0), g, sink);
  }, b.parallel));
  return r;
}

LawReport check_lifting_monotone(const Lifting& l, const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = small_carrier(m.kind, n, 4096);
  LawReport r = make_report("monotonicity", l, m, n, exhaustive);
  const std::vector<StateSet> subsets = all_subsets(n);
  auto check = [&](const TValue& t, ViolationSink& sink) {
    for (const auto& u : subsets) {
      if (!l.contains(t, u)) continue;
      for (const auto& w : subsets)
        if (u.is_subset_of(w))
          sink.check(l.contains(t, w),
                     [&] { return "t=" + t.to_string() + " U=" + u.to_string() + " V=" + w.to_string(); });
    }
  };
  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    r.absorb(sweep(values.size(), [&](std::size_t i, ViolationSink& sink) { check(values[i], sink); }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 23, i);
    check(random_value(m.kind, n, rng), sink);
  }, b.parallel));
  return r;
}

LawReport check_lifting_natural(const Lifting& l, const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = small_carrier(m.kind, n, 4096);
  LawReport r = make_report("lifting-naturality", l, m, n, exhaustive);
  const std::vector<StateSet> subsets = all_subsets(n);
  const std::size_t maps = map_count(n);
  auto check = [&](const std::vector<std::size_t>& f, const TValue& t, ViolationSink& sink) {
    const TValue image = fmap(t, f, n);
    for (const auto& u : subsets)
      sink.check(l.contains(t, preimage(f, u)) == l.contains(image, u),
                 [&] { return "t=" + t.to_string() + " U=" + u.to_string(); });
  };
  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    r.absorb(sweep(maps, [&](std::size_t i, ViolationSink& sink) {
      const auto f = map_from_index(n, i);
      for (const auto& t : values) check(f, t, sink);
    }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 24, i);
    check(map_from_index(n, rng() % maps), random_value(m.kind, n, rng), sink);
  }, b.parallel));
  return r;
}

LawReport check_bottom_polarity(const Lifting& l, Polarity p, const MonadInstance& m, std::size_t n) {
  LawReport r = make_report("bottom-polarity", l, m, n, true);
  const TValue bot = m.bottom(n);
  r.absorb(sweep_serial(1, [&](std::size_t, ViolationSink& sink) {
    for (const auto& u : all_subsets(n)) {
      if (p == Polarity::Diamond)
        sink.check(!l.contains(bot, u), [&] { return "bottom accepted at U=" + u.to_string(); });
      else if (p == Polarity::Box)
        sink.check(l.contains(bot, u), [&] { return "bottom rejected at U=" + u.to_string(); });
    }
  }));
  return r;
}

NaturalOperation natural_operation(const std::string& symbol, MonadKind kind) {
  const auto unsupported = [&] {
    return std::invalid_argument("operation '" + symbol + "' is not available for " + monad_kind_name(kind));
  };
  if (symbol == "id")
    return {"id", 1, [](std::size_t, const std::vector<TValue>& a) { return a.at(0); }, PositiveTerm::leaf(0)};
  if (symbol == "+") {
    NaturalOperation op{"+", 2, nullptr, PositiveTerm::disj(PositiveTerm::leaf(0), PositiveTerm::leaf(1))};
    switch (kind) {
      case MonadKind::Pow:
        op.sigma = [](std::size_t, const std::vector<TValue>& a) { return TValue::pow(a.at(0).set() | a.at(1).set()); };
        return op;
      case MonadKind::MonNbhd:
        op.sigma = [](std::size_t n, const std::vector<TValue>& a) {
          return TValue::mon_nbhd(upset_union(a.at(0).family(), a.at(1).family()), n);
        };
        return op;
      case MonadKind::Nbhd:
        op.sigma = [](std::size_t n, const std::vector<TValue>& a) {
          Family members = a.at(0).family();
          members.insert(members.end(), a.at(1).family().begin(), a.at(1).family().end());
          return TValue::nbhd(std::move(members), n);
        };
        return op;
      case MonadKind::Filter:
        break;
    }
    throw unsupported();
  }
  if (symbol == "^") {
    NaturalOperation op{"^", 2, nullptr, PositiveTerm::conj(PositiveTerm::leaf(0), PositiveTerm::leaf(1))};
    switch (kind) {
      case MonadKind::MonNbhd:
        op.sigma = [](std::size_t n, const std::vector<TValue>& a) {
          return TValue::mon_nbhd(upset_intersection(a.at(0).family(), a.at(1).family()), n);
        };
        return op;
      case MonadKind::Nbhd:
        op.sigma = [](std::size_t n, const std::vector<TValue>& a) {
          Family members;
          for (const auto& s : a.at(0).family())
            if (a.at(1).contains_set(s)) members.push_back(s);
          return TValue::nbhd(std::move(members), n);
        };
        return op;
      case MonadKind::Pow:
      case MonadKind::Filter:
        break;
    }
    throw unsupported();
  }
  throw unsupported();
}

namespace {

template <typename Check>
LawReport sweep_tuples(LawReport r, const NaturalOperation& op, const MonadInstance& m, std::size_t n,
                       const LawBudget& b, std::uint64_t tag, Check&& check) {
  std::uint64_t tuples = 1;
  const std::uint64_t tx = tx_size(m.kind, n);
  bool exhaustive = tx <= 4096;
  for (std::size_t i = 0; i < op.arity && exhaustive; ++i) {
    tuples *= tx;
    exhaustive = tuples <= (1u << 16);
  }
  r.exhaustive = exhaustive;
  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    r.absorb(sweep(tuples, [&](std::size_t i, ViolationSink& sink) {
      std::vector<TValue> ts;
      for (std::size_t k = 0; k < op.arity; ++k) {
        ts.push_back(values[i % values.size()]);
        i /= values.size();
      }
      check(ts, sink);
    }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, tag, i);
    std::vector<TValue> ts(op.arity);
    for (auto& t : ts) t = random_value(m.kind, n, rng);
    check(ts, sink);
  }, b.parallel));
  return r;
}

}  // namespace

LawReport check_sigma_chi_compat(const NaturalOperation& op, const Lifting& l, const MonadInstance& m,
                                 std::size_t n, const LawBudget& b) {
  LawReport r = make_report("sigma-chi", l, m, n, false);
  r.instance = op.symbol + " " + r.instance;
  const std::vector<StateSet> subsets = all_subsets(n);
  return sweep_tuples(std::move(r), op, m, n, b, 25, [&](const std::vector<TValue>& ts, ViolationSink& sink) {
    const TValue s = op.sigma(n, ts);
    std::vector<bool> leaves(ts.size());
    for (const auto& u : subsets) {
      for (std::size_t i = 0; i < ts.size(); ++i) leaves[i] = l.contains(ts[i], u);
      sink.check(l.contains(s, u) == eval_chi(op.chi, leaves),
                 [&] { return "args " + show(ts) + " at U=" + u.to_string(); });
    }
  });
}

LawReport check_sigma_natural(const NaturalOperation& op, const MonadInstance& m, std::size_t n,
                              const LawBudget& b) {
  LawReport r;
  r.suite = "sigma-naturality";
  r.instance = op.symbol + "@" + m.name;
  r.carrier = n;
  const std::size_t maps = map_count(n);
  return sweep_tuples(std::move(r), op, m, n, b, 26, [&](const std::vector<TValue>& ts, ViolationSink& sink) {
    const TValue s = op.sigma(n, ts);
    for (std::size_t code = 0; code < maps; ++code) {
      const auto f = map_from_index(n, code);
      std::vector<TValue> images;
      for (const auto& t : ts) images.push_back(fmap(t, f, n));
      sink.check(op.sigma(n, images) == fmap(s, f, n), [&] { return "args " + show(ts); });
    }
  });
}

Formula generate_pw_axiom(const SignatureEntry& op, const std::vector<Action>& args, const Formula& placeholder) {
  const Formula body = pw_axiom_body(op, args, placeholder);
  return iff(dia(cdl::op(op.symbol, args), placeholder), body);
}

}  // namespace cdl
