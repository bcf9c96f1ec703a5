#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace xoslab {

/// A subset of the item universe {0, ..., m-1}, stored as a fixed-width bit
/// vector. Bits at positions >= m are always zero.
class ItemSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  ItemSet() = default;
  explicit ItemSet(std::size_t universe);
  ItemSet(std::size_t universe, std::initializer_list<std::size_t> items);
  ItemSet(std::size_t universe, std::span<const std::size_t> items);

  static ItemSet full(std::size_t universe);

  std::size_t universe() const { return universe_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const Word> words() const { return words_; }
  std::span<Word> mutable_words() { return words_; }

  bool test(std::size_t item) const;
  void set(std::size_t item);
  void reset(std::size_t item);

  std::size_t count() const;
  bool empty() const;
  bool is_subset_of(const ItemSet& other) const;
  std::vector<std::size_t> items() const;

  ItemSet complement() const;

  ItemSet& operator&=(const ItemSet& other);
  ItemSet& operator|=(const ItemSet& other);
  ItemSet& operator^=(const ItemSet& other);
  /// Set difference.
  ItemSet& operator-=(const ItemSet& other);

  friend ItemSet operator&(ItemSet a, const ItemSet& b) { return a &= b; }
  friend ItemSet operator|(ItemSet a, const ItemSet& b) { return a |= b; }
  friend ItemSet operator^(ItemSet a, const ItemSet& b) { return a ^= b; }
  friend ItemSet operator-(ItemSet a, const ItemSet& b) { return a -= b; }
  friend bool operator==(const ItemSet& a, const ItemSet& b) = default;

  /// Lowercase hex, two digits per byte; item 0 is the least significant bit
  /// of the first byte.
  std::string to_hex() const;
  static ItemSet from_hex(std::size_t universe, const std::string& hex);

  /// Clears any bits at positions >= universe. Only needed after writing
  /// through mutable_words().
  void trim();

 private:
  void require_same_universe(const ItemSet& other) const;

  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

/// |a ∩ b| without allocating.
std::size_t intersection_count(const ItemSet& a, const ItemSet& b);
/// |a ∪ b| without allocating.
std::size_t union_count(const ItemSet& a, const ItemSet& b);

/// Popcount of a word span intersected with another of equal length.
inline std::size_t intersection_count(std::span<const ItemSet::Word> a,
                                      std::span<const ItemSet::Word> b) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return total;
}

}  // namespace xoslab
