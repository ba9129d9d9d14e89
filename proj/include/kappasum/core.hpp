#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace kappasum {

using Complex = std::complex<double>;

/// Default cap on the number of terms a single threshold query may produce.
inline constexpr std::uint64_t kDefaultTermCap = 10'000'000;

/// Raised when an enumeration would produce more terms than its cap allows.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + " terms)"),
        cap_(cap) {}

  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cap_;
};

/*!
  Opaque label of an array entry.

  A label is either a nonnegative integer leaf or a pair of labels (the index
  of a product array). Pairs nest up to kMaxLeaves leaves in total. Storage is
  flat: the leaves in left-to-right order plus the preorder shape of the tree
  (bit set = pair node, bit clear = leaf).
*/
class Index {
 public:
  static constexpr std::size_t kMaxLeaves = 4;

  Index() = default;
  explicit Index(std::uint64_t label) : leaves_{label}, leaf_count_(1), shape_len_(1) {}

  /// Throws std::length_error when the combined label has too many leaves.
  static Index pair(const Index& left, const Index& right);

  bool is_pair() const noexcept { return (shape_ & 1u) != 0; }
  std::uint64_t leaf() const;  // throws std::logic_error on pairs
  Index left() const;
  Index right() const;

  /// Leaves print as decimal integers, pairs as "(left,right)".
  std::string to_string() const;

  friend bool operator==(const Index& a, const Index& b) noexcept;
  friend std::strong_ordering operator<=>(const Index& a, const Index& b) noexcept;

 private:
  Index sub_index(std::size_t shape_pos, std::size_t leaf_pos) const;

  std::array<std::uint64_t, kMaxLeaves> leaves_{};
  std::uint8_t leaf_count_ = 1;
  // Preorder shape bits, least significant first.
  std::uint8_t shape_ = 0;
  std::uint8_t shape_len_ = 1;
};

/// One array entry. The value is never zero; its magnitude is cached.
class Term {
 public:
  Term(Index index, Complex value);

  const Index& index() const noexcept { return index_; }
  const Complex& value() const noexcept { return value_; }
  double magnitude() const noexcept { return magnitude_; }

  friend bool operator==(const Term& a, const Term& b) noexcept {
    return a.index_ == b.index_ && a.value_ == b.value_;
  }

 private:
  Index index_;
  Complex value_;
  double magnitude_;
};

/// Enumeration order: decreasing magnitude, ties by ascending index.
bool precedes(const Term& a, const Term& b) noexcept;

/*!
  A numeric array {a_s} that can list the finitely many entries above any
  positive magnitude threshold.

  terms_above(eps) returns exactly the entries with |a_s| > eps, ordered by
  precedes(). Implementations are immutable, so concurrent queries are safe.
*/
class ArraySource {
 public:
  virtual ~ArraySource() = default;

  virtual std::vector<Term> terms_above(double epsilon) const = 0;
  virtual double magnitude_bound() const = 0;
  virtual std::string descriptor() const = 0;
};

using Source = std::shared_ptr<const ArraySource>;

using SequenceFn = std::function<Complex(std::uint64_t)>;

/// Rejects zero values and duplicate indices with std::invalid_argument.
Source finite_array(std::vector<Term> terms, std::string name = "finite");

/*!
  Array indexed by n = 1, 2, ... whose magnitudes are nonincreasing and tend
  to zero. A threshold query walks n upward until the first |a_n| <= eps and
  throws BudgetExceeded once more than max_terms entries qualify.
*/
Source sequence_array(SequenceFn value_fn, std::string name,
                      std::uint64_t max_terms = kDefaultTermCap);

Source scale_array(Source source, Complex factor);

/// Entries ((s,t), a_s * b_t). Throws BudgetExceeded past max_terms pairs.
Source product_array(Source left, Source right,
                     std::uint64_t max_terms = kDefaultTermCap);

}  // namespace kappasum
