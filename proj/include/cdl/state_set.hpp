#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace cdl {

/// A subset of a finite carrier {0, ..., n-1}. The universe size is part of
/// the value: sets over different carriers never compare equal.
class StateSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  StateSet() = default;
  explicit StateSet(std::size_t n);

  static StateSet full(std::size_t n);
  static StateSet singleton(std::size_t n, std::size_t i);
  static StateSet from_mask(std::size_t n, Word mask);
  static StateSet from_indices(std::size_t n, std::initializer_list<std::size_t> ids);
  static StateSet from_indices(std::size_t n, const std::vector<std::size_t>& ids);

  std::size_t universe() const { return n_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  void reset(std::size_t i) { set(i, false); }

  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }
  bool all() const { return count() == n_; }

  bool is_subset_of(const StateSet& other) const;
  bool intersects(const StateSet& other) const;

  StateSet& operator|=(const StateSet& other);
  StateSet& operator&=(const StateSet& other);
  /// Set difference.
  StateSet& operator-=(const StateSet& other);
  StateSet complement() const;

  /// Only valid for universes of at most 64 states.
  Word to_mask() const;

  std::size_t find_first() const;
  std::size_t find_next(std::size_t i) const;
  std::vector<std::size_t> indices() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const auto bit = static_cast<std::size_t>(__builtin_ctzll(bits));
        f(w * 64 + bit);
        bits &= bits - 1;
      }
    }
  }

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const StateSet& a, const StateSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  friend bool operator<(const StateSet& a, const StateSet& b);

 private:
  void trim();

  std::size_t n_ = 0;
  boost::container::small_vector<Word, 1> words_;
};

inline StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
inline StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
inline StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

/// All subsets of an n-element carrier in mask order (n <= 20).
std::vector<StateSet> all_subsets(std::size_t n);

}  // namespace cdl
