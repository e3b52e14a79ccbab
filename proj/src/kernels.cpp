#include "cdl/kernels.hpp"

#include <omp.h>

namespace cdl {

std::vector<StateSet> rt_closure_serial(std::vector<StateSet> rows) {
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) rows[i].set(i);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (rows[i].test(k)) rows[i] |= rows[k];
  return rows;
}

std::vector<StateSet> rt_closure_parallel(std::vector<StateSet> rows) {
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) rows[i].set(i);
  for (std::size_t k = 0; k < n; ++k) {
    // Row k is invariant during round k (it already contains k).
    const StateSet pivot = rows[k];
#pragma omp parallel for schedule(static) if (n > 256)
    for (std::size_t i = 0; i < n; ++i)
      if (rows[i].test(k)) rows[i] |= pivot;
  }
  return rows;
}

std::vector<StateSet> compose_serial(const std::vector<StateSet>& r, const std::vector<StateSet>& s) {
  const std::size_t m = s.empty() ? 0 : s[0].universe();
  std::vector<StateSet> out(r.size(), StateSet(m));
  for (std::size_t i = 0; i < r.size(); ++i) r[i].for_each([&](std::size_t j) { out[i] |= s[j]; });
  return out;
}

std::vector<StateSet> compose_parallel(const std::vector<StateSet>& r, const std::vector<StateSet>& s) {
  const std::size_t m = s.empty() ? 0 : s[0].universe();
  std::vector<StateSet> out(r.size(), StateSet(m));
#pragma omp parallel for schedule(dynamic, 16) if (r.size() > 256)
  for (std::size_t i = 0; i < r.size(); ++i) r[i].for_each([&](std::size_t j) { out[i] |= s[j]; });
  return out;
}

StateSet preimage_serial(const std::vector<StateSet>& r, const StateSet& target) {
  StateSet out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i].intersects(target)) out.set(i);
  return out;
}

StateSet preimage_parallel(const std::vector<StateSet>& r, const StateSet& target) {
  std::vector<char> hit(r.size(), 0);
#pragma omp parallel for schedule(static) if (r.size() > 256)
  for (std::size_t i = 0; i < r.size(); ++i) hit[i] = r[i].intersects(target);
  StateSet out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    if (hit[i]) out.set(i);
  return out;
}

int kernel_threads() { return omp_get_max_threads(); }

}  // namespace cdl
