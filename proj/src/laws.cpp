#include "cdl/laws.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace cdl {

void LawReport::absorb(const ViolationSink& sink) {
  checks += sink.checks();
  violation_count += sink.violations();
  for (const auto& s : sink.samples()) {
    if (violations.size() >= ViolationSink::kMaxSamples) break;
    violations.push_back(s);
  }
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t suite_tag, std::uint64_t i) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + suite_tag * 0xbf58476d1ce4e5b9ULL + i;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return std::mt19937_64(z ^ (z >> 31));
}

std::uint64_t arrow_count(MonadKind kind, std::size_t n) {
  const std::uint64_t tx = tx_size(kind, n);
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / tx) return std::numeric_limits<std::uint64_t>::max();
    out *= tx;
  }
  return out;
}

KleisliArrow arrow_from_index(const std::vector<TValue>& values, std::size_t n, std::uint64_t index) {
  KleisliArrow f{n, {}};
  for (std::size_t x = 0; x < n; ++x) {
    f.table.push_back(values[index % values.size()]);
    index /= values.size();
  }
  return f;
}

namespace {

std::string show(const KleisliArrow& f) {
  std::string out = "[";
  for (std::size_t x = 0; x < f.domain(); ++x) {
    if (x) out += ", ";
    out += std::to_string(x) + "->" + f(x).to_string();
  }
  return out + "]";
}

std::string show(const std::vector<TValue>& ts) {
  std::string out = "{";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += ts[i].to_string();
  }
  return out + "}";
}

LawReport make_report(const char* suite, const MonadInstance& m, std::size_t n, bool exhaustive) {
  LawReport r;
  r.suite = suite;
  r.instance = m.name + "/" + m.join_name;
  r.carrier = n;
  r.exhaustive = exhaustive;
  return r;
}

bool enumerable(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  return arrow_count(m.kind, n) <= b.exhaustive_limit;
}

// Dense index over an enumerated TX.
struct ValueIndex {
  std::vector<TValue> values;
  std::unordered_map<TValue, std::uint32_t, TValueHash> index;

  explicit ValueIndex(std::vector<TValue> vs) : values(std::move(vs)) {
    for (std::uint32_t i = 0; i < values.size(); ++i) index.emplace(values[i], i);
  }
  std::uint32_t of(const TValue& t) const {
    auto it = index.find(t);
    if (it == index.end()) throw std::logic_error("value outside the enumerated carrier: " + t.to_string());
    return it->second;
  }
  std::size_t size() const { return values.size(); }
};

}  // namespace

LawReport check_monad_laws(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = enumerable(m, n, b);
  LawReport r = make_report("monad-laws", m, n, exhaustive);
  const KleisliArrow eta = unit_arrow(m, n);

  auto left_unit = [&](const KleisliArrow& f, std::size_t x, ViolationSink& sink) {
    sink.check(m.extend(f, m.unit(n, x)) == f(x),
               [&] { return "left unit: f=" + show(f) + " x=" + std::to_string(x); });
  };
  auto right_unit = [&](const TValue& t, ViolationSink& sink) {
    sink.check(m.extend(eta, t) == t, [&] { return "right unit: t=" + t.to_string(); });
  };
  auto assoc = [&](const KleisliArrow& f, const KleisliArrow& g, const TValue& t, ViolationSink& sink) {
    const KleisliArrow fg = kleisli_compose(m, f, g);
    sink.check(m.extend(g, m.extend(f, t)) == m.extend(fg, t), [&] {
      return "associativity: f=" + show(f) + " g=" + show(g) + " t=" + t.to_string();
    });
  };

  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    const std::uint64_t arrows = arrow_count(m.kind, n);
    r.absorb(sweep(arrows, [&](std::size_t i, ViolationSink& sink) {
      const KleisliArrow f = arrow_from_index(values, n, i);
      for (std::size_t x = 0; x < n; ++x) left_unit(f, x, sink);
    }, b.parallel));
    r.absorb(sweep(values.size(), [&](std::size_t i, ViolationSink& sink) { right_unit(values[i], sink); },
                   b.parallel));
    r.absorb(sweep(arrows * arrows, [&](std::size_t i, ViolationSink& sink) {
      const KleisliArrow f = arrow_from_index(values, n, i / arrows);
      const KleisliArrow g = arrow_from_index(values, n, i % arrows);
      for (const auto& t : values) assoc(f, g, t, sink);
    }, b.parallel));
    return r;
  }

  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 1, i);
    const KleisliArrow f = random_arrow(m.kind, n, rng);
    const KleisliArrow g = random_arrow(m.kind, n, rng);
    const TValue t = random_value(m.kind, n, rng);
    if (n > 0) left_unit(f, rng() % n, sink);
    right_unit(t, sink);
    assoc(f, g, t, sink);
  }, b.parallel));
  return r;
}

LawReport check_join_laws(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = tx_size(m.kind, n) <= 64;
  LawReport r = make_report("join-laws", m, n, exhaustive);
  const TValue bot = m.bottom(n);
  auto j2 = [&](const TValue& a, const TValue& c) { return m.join(n, {a, c}); };

  auto unary = [&](const TValue& a, ViolationSink& sink) {
    sink.check(j2(a, a) == a, [&] { return "idempotence: " + a.to_string(); });
    sink.check(j2(a, bot) == a, [&] { return "bottom unit: " + a.to_string(); });
    sink.check(m.join(n, {a}) == a, [&] { return "singleton join: " + a.to_string(); });
  };
  auto ternary = [&](const TValue& a, const TValue& c, const TValue& d, ViolationSink& sink) {
    sink.check(j2(a, c) == j2(c, a), [&] { return "commutativity: " + show({a, c}); });
    sink.check(j2(j2(a, c), d) == j2(a, j2(c, d)), [&] { return "associativity: " + show({a, c, d}); });
    sink.check(m.join(n, {a, c, d}) == j2(j2(a, c), d), [&] { return "n-ary join: " + show({a, c, d}); });
  };

  r.absorb(sweep(1, [&](std::size_t, ViolationSink& sink) {
    sink.check(m.join(n, {}) == bot, [&] { return "empty join is not bottom"; });
  }, false));

  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    const std::size_t v = values.size();
    r.absorb(sweep(v, [&](std::size_t i, ViolationSink& sink) { unary(values[i], sink); }, b.parallel));
    r.absorb(sweep(v * v * v, [&](std::size_t i, ViolationSink& sink) {
      ternary(values[i / (v * v)], values[(i / v) % v], values[i % v], sink);
    }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 2, i);
    const TValue a = random_value(m.kind, n, rng);
    const TValue c = random_value(m.kind, n, rng);
    const TValue d = random_value(m.kind, n, rng);
    unary(a, sink);
    ternary(a, c, d, sink);
  }, b.parallel));
  return r;
}

LawReport check_left_quantalic(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = enumerable(m, n, b) && tx_size(m.kind, n) <= 256;
  LawReport r = make_report("left-quantalic", m, n, exhaustive);

  if (exhaustive) {
    // The equation at a point x only involves t = f(x), and every t occurs
    // as some f(x), so quantifying over t covers all arrows f.
    const ValueIndex vi(enumerate_values(m.kind, n));
    const std::size_t v = vi.size();
    const std::uint64_t arrows = arrow_count(m.kind, n);
    std::vector<std::uint32_t> join2(v * v);
    for (std::size_t a = 0; a < v; ++a)
      for (std::size_t c = 0; c < v; ++c) join2[a * v + c] = vi.of(m.join(n, {vi.values[a], vi.values[c]}));
    std::vector<std::uint32_t> ext(arrows * v);
    for (std::uint64_t g = 0; g < arrows; ++g) {
      const KleisliArrow ga = arrow_from_index(vi.values, n, g);
      for (std::size_t t = 0; t < v; ++t) ext[g * v + t] = vi.of(m.extend(ga, vi.values[t]));
    }
    std::vector<std::uint64_t> radix(n, 1);
    for (std::size_t x = 1; x < n; ++x) radix[x] = radix[x - 1] * v;
    auto digit = [&](std::uint64_t a, std::size_t x) { return (a / radix[x]) % v; };
    auto join_arrow = [&](std::uint64_t a, std::uint64_t c) {
      std::uint64_t out = 0;
      for (std::size_t x = 0; x < n; ++x) out += join2[digit(a, x) * v + digit(c, x)] * radix[x];
      return out;
    };
    auto describe = [&](std::size_t t, std::vector<std::uint64_t> gs) {
      std::string out = "t=" + vi.values[t].to_string() + " family=";
      for (auto g : gs) out += show(arrow_from_index(vi.values, n, g));
      return out;
    };

    // The n-ary join must agree with the binary table used below.
    r.absorb(sweep(v * v * v, [&](std::size_t i, ViolationSink& sink) {
      const std::size_t a = i / (v * v), c = (i / v) % v, d = i % v;
      sink.check(vi.of(m.join(n, {vi.values[a], vi.values[c], vi.values[d]})) == join2[join2[a * v + c] * v + d],
                 [&] { return "n-ary join disagrees with binary join"; });
    }, b.parallel));

    const std::uint64_t bottom_arrow_index = [&] {
      std::uint64_t out = 0;
      const std::uint32_t bi = vi.of(m.bottom(n));
      for (std::size_t x = 0; x < n; ++x) out += bi * radix[x];
      return out;
    }();
    const std::uint32_t bottom_index = vi.of(m.bottom(n));
    r.absorb(sweep(v, [&](std::size_t t, ViolationSink& sink) {
      sink.check(ext[bottom_arrow_index * v + t] == bottom_index, [&] { return describe(t, {}); });
    }, b.parallel));

    r.absorb(sweep(arrows, [&](std::size_t i, ViolationSink& sink) {
      for (std::size_t t = 0; t < v; ++t)
        sink.check(vi.of(m.join(n, {vi.values[ext[i * v + t]]})) == ext[i * v + t],
                   [&] { return describe(t, {i}); });
      for (std::uint64_t j = i + 1; j < arrows; ++j) {
        const std::uint64_t ij = join_arrow(i, j);
        for (std::size_t t = 0; t < v; ++t)
          sink.check(ext[ij * v + t] == join2[ext[i * v + t] * v + ext[j * v + t]],
                     [&] { return describe(t, {i, j}); });
        for (std::uint64_t k = j + 1; k < arrows; ++k) {
          const std::uint64_t ijk = join_arrow(ij, k);
          for (std::size_t t = 0; t < v; ++t) {
            const std::uint32_t rhs = join2[join2[ext[i * v + t] * v + ext[j * v + t]] * v + ext[k * v + t]];
            sink.check(ext[ijk * v + t] == rhs, [&] { return describe(t, {i, j, k}); });
          }
        }
      }
    }, b.parallel));
    return r;
  }

  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 3, i);
    const KleisliArrow f = random_arrow(m.kind, n, rng);
    std::vector<KleisliArrow> gs(rng() % 4);
    for (auto& g : gs) g = random_arrow(m.kind, n, rng);
    const KleisliArrow lhs = kleisli_compose(m, f, join_arrows(m, gs, n, n));
    std::vector<KleisliArrow> parts;
    for (const auto& g : gs) parts.push_back(kleisli_compose(m, f, g));
    const KleisliArrow rhs = join_arrows(m, parts, n, n);
    sink.check(lhs == rhs, [&] {
      std::string out = "f=" + show(f) + " family=";
      for (const auto& g : gs) out += show(g);
      return out;
    });
  }, b.parallel));
  return r;
}

LawReport check_extension_preserves_joins(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = enumerable(m, n, b) && tx_size(m.kind, n) <= 64;
  LawReport r = make_report("extension-preserves-joins", m, n, exhaustive);
  auto check = [&](const KleisliArrow& g, const std::vector<TValue>& ts, ViolationSink& sink) {
    std::vector<TValue> images;
    for (const auto& t : ts) images.push_back(m.extend(g, t));
    sink.check(m.extend(g, m.join(n, ts)) == m.join(n, images),
               [&] { return "g=" + show(g) + " values=" + show(ts); });
  };
  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    const std::size_t v = values.size();
    r.absorb(sweep(arrow_count(m.kind, n), [&](std::size_t i, ViolationSink& sink) {
      const KleisliArrow g = arrow_from_index(values, n, i);
      check(g, {}, sink);
      for (std::size_t a = 0; a < v; ++a)
        for (std::size_t c = a + 1; c < v; ++c) check(g, {values[a], values[c]}, sink);
    }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 4, i);
    const KleisliArrow g = random_arrow(m.kind, n, rng);
    std::vector<TValue> ts(rng() % 4);
    for (auto& t : ts) t = random_value(m.kind, n, rng);
    check(g, ts, sink);
  }, b.parallel));
  return r;
}

LawReport check_star_unfolding(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = enumerable(m, n, b);
  LawReport r = make_report("star-unfolding", m, n, exhaustive);
  const KleisliArrow eta = unit_arrow(m, n);
  auto check = [&](const KleisliArrow& f, ViolationSink& sink) {
    const KleisliArrow s = kleisli_star(m, f);
    const KleisliArrow unfolded = join_arrows(m, {eta, kleisli_compose(m, f, s)}, n, n);
    sink.check(s == unfolded, [&] { return "f=" + show(f) + " star=" + show(s); });
  };
  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    r.absorb(sweep(arrow_count(m.kind, n), [&](std::size_t i, ViolationSink& sink) {
      check(arrow_from_index(values, n, i), sink);
    }, b.parallel));
    return r;
  }
  r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
    auto rng = sample_rng(b.seed, 5, i);
    check(random_arrow(m.kind, n, rng), sink);
  }, b.parallel));
  return r;
}

LawReport check_join_origin(const MonadInstance& m, std::size_t n, const LawBudget& b) {
  const bool exhaustive = n <= 3 && tx_size(m.kind, n) <= 64;
  LawReport r = make_report("join-origin", m, n, exhaustive);
  if (!m.join_origin) {
    r.violation_count = 1;
    r.violations.push_back("instance has no join origin");
    return r;
  }
  const MonadMorphismPow& tau = *m.join_origin;
  const std::vector<StateSet> subsets = all_subsets(n);

  r.absorb(sweep(n, [&](std::size_t x, ViolationSink& sink) {
    sink.check(tau.apply(StateSet::singleton(n, x)) == m.unit(n, x),
               [&] { return "tau(unit " + std::to_string(x) + ") is not the unit"; });
  }, false));

  // Multiplication square on A = a family of subsets: tau(union A) must
  // accept exactly the predicates that tau-many members of A accept.
  const std::size_t families = n <= 3 ? std::size_t{1} << subsets.size() : b.samples;
  r.absorb(sweep(families, [&](std::size_t i, ViolationSink& sink) {
    Family fam;
    if (n <= 3) {
      for (std::size_t s = 0; s < subsets.size(); ++s)
        if ((i >> s) & 1) fam.push_back(subsets[s]);
    } else {
      auto rng = sample_rng(b.seed, 6, i);
      for (const auto& s : subsets)
        if (rng() & 1) fam.push_back(s);
    }
    StateSet u(n);
    for (const auto& a : fam) u |= a;
    const TValue lhs = tau.apply(u);
    std::vector<TValue> images;
    for (const auto& a : fam) images.push_back(tau.apply(a));
    if (tau.target == MonadKind::Pow) {
      for (std::size_t x = 0; x < n; ++x) {
        bool rhs = false;
        for (const auto& t : images) rhs = rhs || t.set().test(x);
        sink.check(lhs.set().test(x) == rhs, [&] { return "multiplication square at element " + std::to_string(x); });
      }
      return;
    }
    for (const auto& w : subsets) {
      bool any = false, all = true;
      for (const auto& t : images) {
        const bool in = t.contains_set(w);
        any = any || in;
        all = all && in;
      }
      sink.check(lhs.contains_set(w) == (tau.existential() ? any : all),
                 [&] { return "multiplication square at U=" + w.to_string(); });
    }
  }, b.parallel));

  // Naturality along every map n -> n.
  std::size_t maps = 1;
  for (std::size_t i = 0; i < n; ++i) maps *= n;
  r.absorb(sweep(maps, [&](std::size_t i, ViolationSink& sink) {
    std::vector<std::size_t> f(n);
    std::size_t code = i;
    for (auto& y : f) {
      y = code % n;
      code /= n;
    }
    for (const auto& a : subsets) {
      StateSet img(n);
      a.for_each([&](std::size_t x) { img.set(f[x]); });
      sink.check(tau.apply(img) == fmap(tau.apply(a), f, n),
                 [&] { return "naturality at A=" + a.to_string(); });
    }
  }, b.parallel));

  // The induced join is the instance's join.
  auto agree = [&](const std::vector<TValue>& ts, ViolationSink& sink) {
    sink.check(induced_join(tau, n, ts) == m.join(n, ts), [&] { return "induced join differs on " + show(ts); });
  };
  if (exhaustive) {
    const std::vector<TValue> values = enumerate_values(m.kind, n);
    const std::size_t v = values.size();
    r.absorb(sweep(v * v, [&](std::size_t i, ViolationSink& sink) {
      if (i == 0) agree({}, sink);
      agree({values[i / v], values[i % v]}, sink);
    }, b.parallel));
  } else {
    r.absorb(sweep(b.samples, [&](std::size_t i, ViolationSink& sink) {
      auto rng = sample_rng(b.seed, 7, i);
      std::vector<TValue> ts(rng() % 4);
      for (auto& t : ts) t = random_value(m.kind, n, rng);
      agree(ts, sink);
    }, b.parallel));
  }
  return r;
}

}  // namespace cdl
