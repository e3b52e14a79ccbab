#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "cdl/state_set.hpp"

namespace cdl {

/// Collects check outcomes; keeps the first few violation descriptions.
class ViolationSink {
 public:
  static constexpr std::size_t kMaxSamples = 16;

  template <typename Describe>
  bool check(bool ok, Describe&& describe) {
    ++checks_;
    if (!ok) {
      ++violations_;
      if (samples_.size() < kMaxSamples) samples_.push_back(describe());
    }
    return ok;
  }

  void merge(const ViolationSink& other) {
    checks_ += other.checks_;
    violations_ += other.violations_;
    for (const auto& s : other.samples_) {
      if (samples_.size() >= kMaxSamples) break;
      samples_.push_back(s);
    }
  }

  std::uint64_t checks() const { return checks_; }
  std::uint64_t violations() const { return violations_; }
  const std::vector<std::string>& samples() const { return samples_; }

 private:
  std::uint64_t checks_ = 0;
  std::uint64_t violations_ = 0;
  std::vector<std::string> samples_;
};

/// Runs body(i, sink) for i in [0, count). Work is cut into blocks whose
/// sinks are merged in index order, so the parallel and serial versions
/// produce identical reports.
template <typename Body>
ViolationSink sweep_serial(std::size_t count, Body&& body) {
  ViolationSink sink;
  for (std::size_t i = 0; i < count; ++i) body(i, sink);
  return sink;
}

template <typename Body>
ViolationSink sweep_parallel(std::size_t count, Body&& body) {
  const std::size_t block = std::max<std::size_t>(1, count / 256);
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<ViolationSink> partial(blocks);
  std::vector<std::exception_ptr> errors(blocks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t end = std::min(count, (b + 1) * block);
    try {
      for (std::size_t i = b * block; i < end; ++i) body(i, partial[b]);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  ViolationSink sink;
  for (const auto& p : partial) sink.merge(p);
  return sink;
}

template <typename Body>
ViolationSink sweep(std::size_t count, Body&& body, bool parallel) {
  return parallel ? sweep_parallel(count, body) : sweep_serial(count, body);
}

/// Reflexive-transitive closure of a relation given as successor rows
/// (Warshall). rows[i] is the successor set of i.
std::vector<StateSet> rt_closure_serial(std::vector<StateSet> rows);
std::vector<StateSet> rt_closure_parallel(std::vector<StateSet> rows);

/// Relational composition: out[i] is the union of s[j] over j in r[i].
std::vector<StateSet> compose_serial(const std::vector<StateSet>& r, const std::vector<StateSet>& s);
std::vector<StateSet> compose_parallel(const std::vector<StateSet>& r, const std::vector<StateSet>& s);

/// {i | r[i] meets target}.
StateSet preimage_serial(const std::vector<StateSet>& r, const StateSet& target);
StateSet preimage_parallel(const std::vector<StateSet>& r, const StateSet& target);

/// Number of OpenMP threads available (1 without OpenMP).
int kernel_threads();

}  // namespace cdl
