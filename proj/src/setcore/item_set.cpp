#include "xoslab/item_set.hpp"

#include <stdexcept>

namespace xoslab {

namespace {

std::size_t words_for(std::size_t universe) {
  return (universe + ItemSet::kWordBits - 1) / ItemSet::kWordBits;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

ItemSet::ItemSet(std::size_t universe) : universe_(universe), words_(words_for(universe), 0) {}

ItemSet::ItemSet(std::size_t universe, std::initializer_list<std::size_t> items)
    : ItemSet(universe) {
  for (auto item : items) set(item);
}

ItemSet::ItemSet(std::size_t universe, std::span<const std::size_t> items) : ItemSet(universe) {
  for (auto item : items) set(item);
}

ItemSet ItemSet::full(std::size_t universe) {
  ItemSet s(universe);
  for (auto& w : s.words_) w = ~Word{0};
  s.trim();
  return s;
}

bool ItemSet::test(std::size_t item) const {
  if (item >= universe_) throw std::out_of_range("item outside universe");
  return (words_[item / kWordBits] >> (item % kWordBits)) & 1u;
}

void ItemSet::set(std::size_t item) {
  if (item >= universe_) throw std::out_of_range("item outside universe");
  words_[item / kWordBits] |= Word{1} << (item % kWordBits);
}

void ItemSet::reset(std::size_t item) {
  if (item >= universe_) throw std::out_of_range("item outside universe");
  words_[item / kWordBits] &= ~(Word{1} << (item % kWordBits));
}

std::size_t ItemSet::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool ItemSet::empty() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool ItemSet::is_subset_of(const ItemSet& other) const {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

std::vector<std::size_t> ItemSet::items() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    Word w = words_[i];
    while (w != 0) {
      out.push_back(i * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

ItemSet ItemSet::complement() const {
  ItemSet out(*this);
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

ItemSet& ItemSet::operator&=(const ItemSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ItemSet& ItemSet::operator|=(const ItemSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ItemSet& ItemSet::operator^=(const ItemSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

ItemSet& ItemSet::operator-=(const ItemSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::string ItemSet::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t bytes = (universe_ + 7) / 8;
  std::string out;
  out.reserve(2 * bytes);
  for (std::size_t b = 0; b < bytes; ++b) {
    const auto byte = static_cast<unsigned>((words_[b / 8] >> (8 * (b % 8))) & 0xFFu);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

ItemSet ItemSet::from_hex(std::size_t universe, const std::string& hex) {
  const std::size_t bytes = (universe + 7) / 8;
  if (hex.size() != 2 * bytes) {
    throw std::invalid_argument("hex item set has length " + std::to_string(hex.size()) +
                                ", expected " + std::to_string(2 * bytes));
  }
  ItemSet s(universe);
  for (std::size_t b = 0; b < bytes; ++b) {
    const int hi = hex_value(hex[2 * b]);
    const int lo = hex_value(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("non-hex digit in item set");
    const auto byte = static_cast<Word>((hi << 4) | lo);
    s.words_[b / 8] |= byte << (8 * (b % 8));
  }
  const ItemSet trimmed = [&] {
    ItemSet t(s);
    t.trim();
    return t;
  }();
  if (!(trimmed == s)) throw std::invalid_argument("hex item set has bits beyond the universe");
  return s;
}

void ItemSet::trim() {
  if (words_.empty()) return;
  const std::size_t tail = universe_ % kWordBits;
  if (tail != 0) words_.back() &= (Word{1} << tail) - 1;
}

void ItemSet::require_same_universe(const ItemSet& other) const {
  if (universe_ != other.universe_) {
    throw std::invalid_argument("item sets over different universes (" +
                                std::to_string(universe_) + " vs " +
                                std::to_string(other.universe_) + ")");
  }
}

std::size_t intersection_count(const ItemSet& a, const ItemSet& b) {
  if (a.universe() != b.universe()) throw std::invalid_argument("item sets over different universes");
  return intersection_count(a.words(), b.words());
}

std::size_t union_count(const ItemSet& a, const ItemSet& b) {
  if (a.universe() != b.universe()) throw std::invalid_argument("item sets over different universes");
  std::size_t total = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) total += static_cast<std::size_t>(std::popcount(wa[i] | wb[i]));
  return total;
}

}  // namespace xoslab
