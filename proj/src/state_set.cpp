#include "cdl/state_set.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cdl {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

}  // namespace

StateSet::StateSet(std::size_t n) : n_(n), words_(word_count(n), 0) {}

StateSet StateSet::full(std::size_t n) {
  StateSet s(n);
  for (auto& w : s.words_) w = ~Word{0};
  s.trim();
  return s;
}

StateSet StateSet::singleton(std::size_t n, std::size_t i) {
  StateSet s(n);
  s.set(i);
  return s;
}

StateSet StateSet::from_mask(std::size_t n, Word mask) {
  if (n > 64) throw std::invalid_argument("StateSet::from_mask: universe exceeds 64");
  StateSet s(n);
  if (n > 0) s.words_[0] = mask;
  s.trim();
  return s;
}

StateSet StateSet::from_indices(std::size_t n, std::initializer_list<std::size_t> ids) {
  StateSet s(n);
  for (auto i : ids) s.set(i);
  return s;
}

StateSet StateSet::from_indices(std::size_t n, const std::vector<std::size_t>& ids) {
  StateSet s(n);
  for (auto i : ids) s.set(i);
  return s;
}

void StateSet::set(std::size_t i, bool value) {
  if (i >= n_) throw std::out_of_range("StateSet::set: index outside carrier");
  const Word bit = Word{1} << (i & 63);
  if (value)
    words_[i >> 6] |= bit;
  else
    words_[i >> 6] &= ~bit;
}

std::size_t StateSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool StateSet::any() const {
  return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

bool StateSet::is_subset_of(const StateSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

bool StateSet::intersects(const StateSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & other.words_[i]) != 0) return true;
  return false;
}

StateSet& StateSet::operator|=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

StateSet& StateSet::operator&=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

StateSet& StateSet::operator-=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

StateSet StateSet::complement() const {
  StateSet s(*this);
  for (auto& w : s.words_) w = ~w;
  s.trim();
  return s;
}

StateSet::Word StateSet::to_mask() const {
  if (n_ > 64) throw std::logic_error("StateSet::to_mask: universe exceeds 64");
  return words_.empty() ? 0 : words_[0];
}

std::size_t StateSet::find_first() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  return npos;
}

std::size_t StateSet::find_next(std::size_t i) const {
  ++i;
  if (i >= n_) return npos;
  std::size_t w = i >> 6;
  Word bits = words_[w] & (~Word{0} << (i & 63));
  while (true) {
    if (bits != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w >= words_.size()) return npos;
    bits = words_[w];
  }
}

std::vector<std::size_t> StateSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

std::size_t StateSet::hash() const {
  std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
  for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return h;
}

std::string StateSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each([&](std::size_t i) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  });
  return out + "}";
}

bool operator<(const StateSet& a, const StateSet& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return std::lexicographical_compare(a.words_.begin(), a.words_.end(), b.words_.begin(),
                                      b.words_.end());
}

void StateSet::trim() {
  if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (Word{1} << (n_ % 64)) - 1;
}

std::vector<StateSet> all_subsets(std::size_t n) {
  if (n > 20) throw std::invalid_argument("all_subsets: carrier too large to enumerate");
  std::vector<StateSet> out;
  out.reserve(std::size_t{1} << n);
  for (StateSet::Word m = 0; m < (StateSet::Word{1} << n); ++m) out.push_back(StateSet::from_mask(n, m));
  return out;
}

}  // namespace cdl
