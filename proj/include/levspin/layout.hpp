#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace levspin::qops {

struct Factor {
  std::string label;
  int dim = 0;
};

/// Ordered tensor-factor structure of a composite Hilbert space.
/// The last factor varies fastest in the flattened index.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  SpaceLayout(std::initializer_list<Factor> fs) : SpaceLayout(std::vector<Factor>(fs)) {}
  explicit SpaceLayout(std::vector<Factor> fs) : factors_(std::move(fs)) {
    total_ = 1;
    for (const auto& f : factors_) {
      if (f.dim < 1) throw std::invalid_argument("SpaceLayout: factor dimension must be >= 1");
      for (const auto& g : factors_)
        if (&f != &g && f.label == g.label)
          throw std::invalid_argument("SpaceLayout: duplicate factor label '" + f.label + "'");
      total_ *= f.dim;
    }
  }

  int total_dim() const { return total_; }
  size_t n_factors() const { return factors_.size(); }
  const Factor& factor(size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }

  size_t index_of(const std::string& label) const {
    for (size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].label == label) return i;
    throw std::out_of_range("SpaceLayout: no factor '" + label + "'");
  }

  int stride(size_t i) const {
    int s = 1;
    for (size_t k = i + 1; k < factors_.size(); ++k) s *= factors_[k].dim;
    return s;
  }

  bool operator==(const SpaceLayout& o) const {
    if (factors_.size() != o.factors_.size()) return false;
    for (size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].label != o.factors_[i].label || factors_[i].dim != o.factors_[i].dim)
        return false;
    return true;
  }
  bool operator!=(const SpaceLayout& o) const { return !(*this == o); }

 private:
  std::vector<Factor> factors_;
  int total_ = 1;
};

}  // namespace levspin::qops
