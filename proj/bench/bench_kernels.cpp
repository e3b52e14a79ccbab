// Serial vs OpenMP timings for the relation kernels and the elimination loop.

#include <chrono>
#include <cstdio>
#include <random>

#include "cdl/decide.hpp"
#include "cdl/kernels.hpp"
#include "cdl/parser.hpp"
#include <omp.h>

using namespace cdl;

namespace {

template <class F>
double best_ms(F&& f, int reps = 5) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

std::vector<StateSet> random_rows(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(density);
  std::vector<StateSet> rows(n, StateSet(n));
  for (auto& r : rows)
    for (std::size_t j = 0; j < n; ++j)
      if (edge(rng)) r.set(j);
  return rows;
}

void row(const char* name, std::size_t n, double serial, double parallel, bool same) {
  std::printf("%-22s %6zu %12.3f %12.3f %8.2fx  %s\n", name, n, serial, parallel, serial / parallel,
              same ? "same" : "DIFFERENT");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %6s %12s %12s %9s\n", "kernel", "n", "serial ms", "parallel ms", "speedup");
  std::mt19937_64 rng(42);
  for (std::size_t n : {256, 1024, 2048}) {
    const auto r = random_rows(n, 2.0 / n, rng);
    const auto s = random_rows(n, 2.0 / n, rng);
    StateSet t(n);
    t.set(0);
    std::vector<StateSet> a, b;
    const double cs = best_ms([&] { a = rt_closure_serial(r); });
    const double cp = best_ms([&] { b = rt_closure_parallel(r); });
    row("rt_closure", n, cs, cp, a == b);
    const double ms = best_ms([&] { a = compose_serial(r, s); });
    const double mp = best_ms([&] { b = compose_parallel(r, s); });
    row("compose", n, ms, mp, a == b);
    StateSet x, y;
    const double ps = best_ms([&] { x = preimage_serial(r, t); });
    const double pp = best_ms([&] { y = preimage_parallel(r, t); });
    row("preimage", n, ps, pp, x == y);
  }

  const InstanceConfig pdl = shipped_config("pdl");
  for (const char* text : {"p & [(a + b)*](p -> [a]p & <b>q) & <(a;b)*>~p", "<a*>(p & <b*>~p) & [(a;b)*]<a>q & ~q"}) {
    const Formula f = parse_formula(text, pdl.signature());
    Verdict vs, vp;
    const double ds = best_ms([&] { vs = decide_sat(f, pdl, {false}); }, 3);
    const double dp = best_ms([&] { vp = decide_sat(f, pdl, {true}); }, 3);
    row("decide_sat", vs.stats.atoms_generated, ds, dp, vs.kind == vp.kind);
  }
  return 0;
}
