#include "kappasum/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace kappasum {

namespace {

// Derived sources query their inputs slightly below the exact threshold and
// then filter on the emitted magnitude, so rounding in eps/|c| never drops an
// entry that belongs in the result.
constexpr double kQuerySlack = 1.0 - 0x1p-40;

// Upper bound on |x*y| that survives the rounding of the complex product.
double rounded_up_product(double x, double y) {
  return x * y * (1.0 + 0x1p-50);
}

struct Extent {
  std::size_t shape_len = 0;
  std::size_t leaves = 0;
};

Extent subtree_extent(std::uint8_t shape, std::size_t pos) {
  Extent e;
  int open = 1;
  while (open > 0) {
    const bool is_pair = ((shape >> pos) & 1u) != 0;
    ++pos;
    ++e.shape_len;
    if (is_pair) {
      ++open;
    } else {
      --open;
      ++e.leaves;
    }
  }
  return e;
}

void check_threshold(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("threshold must be a positive finite number");
  }
}

}  // namespace

// ---------------------------------------------------------------- Index

Index Index::pair(const Index& left, const Index& right) {
  const std::size_t leaves = left.leaf_count_ + right.leaf_count_;
  if (leaves > kMaxLeaves) {
    throw std::length_error("index nesting exceeds " + std::to_string(kMaxLeaves) + " leaves");
  }
  Index out;
  out.leaf_count_ = static_cast<std::uint8_t>(leaves);
  std::copy_n(left.leaves_.begin(), left.leaf_count_, out.leaves_.begin());
  std::copy_n(right.leaves_.begin(), right.leaf_count_, out.leaves_.begin() + left.leaf_count_);
  out.shape_len_ = static_cast<std::uint8_t>(1 + left.shape_len_ + right.shape_len_);
  out.shape_ = static_cast<std::uint8_t>(1u | (left.shape_ << 1) |
                                         (right.shape_ << (1 + left.shape_len_)));
  return out;
}

std::uint64_t Index::leaf() const {
  if (is_pair()) throw std::logic_error("index is a pair, not a leaf");
  return leaves_[0];
}

Index Index::sub_index(std::size_t shape_pos, std::size_t leaf_pos) const {
  const Extent e = subtree_extent(shape_, shape_pos);
  Index out;
  out.leaf_count_ = static_cast<std::uint8_t>(e.leaves);
  std::copy_n(leaves_.begin() + leaf_pos, e.leaves, out.leaves_.begin());
  out.shape_len_ = static_cast<std::uint8_t>(e.shape_len);
  out.shape_ = static_cast<std::uint8_t>((shape_ >> shape_pos) & ((1u << e.shape_len) - 1u));
  return out;
}

Index Index::left() const {
  if (!is_pair()) throw std::logic_error("leaf index has no left part");
  return sub_index(1, 0);
}

Index Index::right() const {
  if (!is_pair()) throw std::logic_error("leaf index has no right part");
  const Extent l = subtree_extent(shape_, 1);
  return sub_index(1 + l.shape_len, l.leaves);
}

std::string Index::to_string() const {
  if (!is_pair()) return std::to_string(leaves_[0]);
  return "(" + left().to_string() + "," + right().to_string() + ")";
}

bool operator==(const Index& a, const Index& b) noexcept {
  return a.leaves_ == b.leaves_ && a.leaf_count_ == b.leaf_count_ && a.shape_ == b.shape_ &&
         a.shape_len_ == b.shape_len_;
}

std::strong_ordering operator<=>(const Index& a, const Index& b) noexcept {
  if (auto c = a.leaves_ <=> b.leaves_; c != 0) return c;
  if (auto c = a.leaf_count_ <=> b.leaf_count_; c != 0) return c;
  if (auto c = a.shape_len_ <=> b.shape_len_; c != 0) return c;
  return a.shape_ <=> b.shape_;
}

// ---------------------------------------------------------------- Term

Term::Term(Index index, Complex value)
    : index_(index), value_(value), magnitude_(std::abs(value)) {
  if (magnitude_ == 0.0) {
    throw std::invalid_argument("term " + index_.to_string() + " has zero value");
  }
  if (!std::isfinite(magnitude_)) {
    throw std::invalid_argument("term " + index_.to_string() + " is not finite");
  }
}

bool precedes(const Term& a, const Term& b) noexcept {
  if (a.magnitude() != b.magnitude()) return a.magnitude() > b.magnitude();
  return a.index() < b.index();
}

// ---------------------------------------------------------------- sources

namespace {

class FiniteArray final : public ArraySource {
 public:
  FiniteArray(std::vector<Term> terms, std::string name)
      : terms_(std::move(terms)), name_(std::move(name)) {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.index() < b.index(); });
    const auto dup = std::adjacent_find(
        terms_.begin(), terms_.end(),
        [](const Term& a, const Term& b) { return a.index() == b.index(); });
    if (dup != terms_.end()) {
      throw std::invalid_argument("duplicate index " + dup->index().to_string());
    }
    std::sort(terms_.begin(), terms_.end(), precedes);
    bound_ = terms_.empty() ? 0.0 : terms_.front().magnitude();
  }

  std::vector<Term> terms_above(double epsilon) const override {
    check_threshold(epsilon);
    const auto end = std::partition_point(
        terms_.begin(), terms_.end(), [epsilon](const Term& t) { return t.magnitude() > epsilon; });
    return {terms_.begin(), end};
  }

  double magnitude_bound() const override { return bound_; }

  std::string descriptor() const override {
    return name_ + "[" + std::to_string(terms_.size()) + "]";
  }

 private:
  std::vector<Term> terms_;
  std::string name_;
  double bound_ = 0.0;
};

class SequenceArray final : public ArraySource {
 public:
  SequenceArray(SequenceFn fn, std::string name, std::uint64_t cap)
      : fn_(std::move(fn)), name_(std::move(name)), cap_(cap) {
    bound_ = std::abs(fn_(1));
    if (bound_ == 0.0 || !std::isfinite(bound_)) {
      throw std::invalid_argument(name_ + ": first term must be finite and nonzero");
    }
  }

  std::vector<Term> terms_above(double epsilon) const override {
    check_threshold(epsilon);
    std::vector<Term> out;
    double previous = bound_;
    for (std::uint64_t n = 1;; ++n) {
      const Complex value = fn_(n);
      const double magnitude = std::abs(value);
      if (magnitude > previous) {
        throw std::domain_error(name_ + ": magnitude increases at n = " + std::to_string(n));
      }
      if (!(magnitude > epsilon)) break;
      if (out.size() == cap_) {
        throw BudgetExceeded(name_ + ": more terms above " + std::to_string(epsilon) + " than allowed", cap_);
      }
      out.emplace_back(Index(n), value);
      previous = magnitude;
    }
    return out;
  }

  double magnitude_bound() const override { return bound_; }
  std::string descriptor() const override { return name_; }

 private:
  SequenceFn fn_;
  std::string name_;
  std::uint64_t cap_;
  double bound_;
};

class ScaledArray final : public ArraySource {
 public:
  ScaledArray(Source inner, Complex factor) : inner_(std::move(inner)), factor_(factor) {
    if (!inner_) throw std::invalid_argument("scale_array: null source");
    if (factor_ == Complex{} || !std::isfinite(std::abs(factor_))) {
      throw std::invalid_argument("scale_array: factor must be finite and nonzero");
    }
    bound_ = rounded_up_product(std::abs(factor_), inner_->magnitude_bound());
  }

  std::vector<Term> terms_above(double epsilon) const override {
    check_threshold(epsilon);
    const auto candidates = inner_->terms_above(epsilon / std::abs(factor_) * kQuerySlack);
    std::vector<Term> out;
    out.reserve(candidates.size());
    for (const Term& t : candidates) {
      const Complex value = factor_ * t.value();
      if (std::abs(value) > epsilon) out.emplace_back(t.index(), value);
    }
    std::sort(out.begin(), out.end(), precedes);
    return out;
  }

  double magnitude_bound() const override { return bound_; }

  std::string descriptor() const override {
    std::ostringstream os;
    os << factor_ << "*" << inner_->descriptor();
    return os.str();
  }

 private:
  Source inner_;
  Complex factor_;
  double bound_;
};

class ProductArray final : public ArraySource {
 public:
  ProductArray(Source left, Source right, std::uint64_t cap)
      : left_(std::move(left)), right_(std::move(right)), cap_(cap) {
    if (!left_ || !right_) throw std::invalid_argument("product_array: null source");
    bound_ = rounded_up_product(left_->magnitude_bound(), right_->magnitude_bound());
  }

  std::vector<Term> terms_above(double epsilon) const override {
    check_threshold(epsilon);
    if (left_->magnitude_bound() == 0.0 || right_->magnitude_bound() == 0.0) return {};
    const auto outer = left_->terms_above(epsilon / right_->magnitude_bound() * kQuerySlack);
    if (outer.empty()) return {};
    // Every inner list is a prefix of the one for the largest outer magnitude.
    const auto inner = right_->terms_above(epsilon / outer.front().magnitude() * kQuerySlack);

    std::vector<std::size_t> prefix(outer.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      const double cut = epsilon / outer[i].magnitude() * kQuerySlack;
      const auto end = std::partition_point(inner.begin(), inner.end(),
                                            [cut](const Term& t) { return t.magnitude() > cut; });
      prefix[i] = static_cast<std::size_t>(end - inner.begin());
      for (std::size_t j = 0; j < prefix[i]; ++j) {
        if (std::abs(outer[i].value() * inner[j].value()) > epsilon) ++total;
      }
      if (total > cap_) {
        throw BudgetExceeded(descriptor() + ": more pairs above " + std::to_string(epsilon) + " than allowed", cap_);
      }
    }

    std::vector<Term> out;
    out.reserve(total);
    for (std::size_t i = 0; i < outer.size(); ++i) {
      for (std::size_t j = 0; j < prefix[i]; ++j) {
        const Complex value = outer[i].value() * inner[j].value();
        if (std::abs(value) > epsilon) {
          out.emplace_back(Index::pair(outer[i].index(), inner[j].index()), value);
        }
      }
    }
    std::sort(out.begin(), out.end(), precedes);
    return out;
  }

  double magnitude_bound() const override { return bound_; }

  std::string descriptor() const override {
    return "(" + left_->descriptor() + ")x(" + right_->descriptor() + ")";
  }

 private:
  Source left_;
  Source right_;
  std::uint64_t cap_;
  double bound_;
};

}  // namespace

Source finite_array(std::vector<Term> terms, std::string name) {
  return std::make_shared<FiniteArray>(std::move(terms), std::move(name));
}

Source sequence_array(SequenceFn value_fn, std::string name, std::uint64_t max_terms) {
  if (!value_fn) throw std::invalid_argument("sequence_array: empty value function");
  return std::make_shared<SequenceArray>(std::move(value_fn), std::move(name), max_terms);
}

Source scale_array(Source source, Complex factor) {
  return std::make_shared<ScaledArray>(std::move(source), factor);
}

Source product_array(Source left, Source right, std::uint64_t max_terms) {
  return std::make_shared<ProductArray>(std::move(left), std::move(right), max_terms);
}

}  // namespace kappasum
