#pragma once

// Dense matrices over the integers and the Smith normal form.

#include "polytower/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace polytower {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix column_block(std::size_t first, std::size_t count) const;
  std::vector<Integer> column(std::size_t c) const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& lhs, const IntMatrix& rhs);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// [lhs | rhs]; row counts must agree.
IntMatrix hconcat(const IntMatrix& lhs, const IntMatrix& rhs);
IntMatrix negated(const IntMatrix& m);

/// left * input * right == diagonal matrix with entries `invariants`
/// (positive, each dividing the next) followed by zeros.
struct SmithForm {
  std::vector<Integer> invariants;
  IntMatrix left;
  IntMatrix right;
  std::size_t rank() const { return invariants.size(); }
};

/// Exact Smith normal form over unbounded integers. Pivots on the entry of
/// least absolute value to limit coefficient growth. Transforms are only
/// accumulated when `with_transforms` is set.
SmithForm smith_normal_form(const IntMatrix& input, bool with_transforms = true);

/// Columns form a saturated integer basis of {x : m x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

/// Integer solutions of m x = b for a fixed m.
class IntegerSolver {
 public:
  explicit IntegerSolver(const IntMatrix& m);
  std::optional<std::vector<Integer>> solve(const std::vector<Integer>& b) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  SmithForm smith_;
};

}  // namespace polytower
