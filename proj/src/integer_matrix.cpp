#include "polytower/integer_matrix.hpp"

#include "polytower/error.hpp"

#include <utility>

namespace polytower {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::column_block(std::size_t first, std::size_t count) const {
  IntMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  }
  return out;
}

std::vector<Integer> IntMatrix::column(std::size_t c) const {
  std::vector<Integer> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : data_) {
    if (x != 0) return false;
  }
  return true;
}

IntMatrix operator*(const IntMatrix& lhs, const IntMatrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw Error(ErrorCode::InvalidInput, "matrix shape mismatch");
  IntMatrix out(lhs.rows_, rhs.cols_);
  for (std::size_t i = 0; i < lhs.rows_; ++i) {
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const Integer& a = lhs(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        if (rhs(k, j) != 0) out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

IntMatrix hconcat(const IntMatrix& lhs, const IntMatrix& rhs) {
  if (lhs.rows() != rhs.rows()) throw Error(ErrorCode::InvalidInput, "matrix shape mismatch");
  IntMatrix out(lhs.rows(), lhs.cols() + rhs.cols());
  for (std::size_t r = 0; r < lhs.rows(); ++r) {
    for (std::size_t c = 0; c < lhs.cols(); ++c) out(r, c) = lhs(r, c);
    for (std::size_t c = 0; c < rhs.cols(); ++c) out(r, lhs.cols() + c) = rhs(r, c);
  }
  return out;
}

IntMatrix negated(const IntMatrix& m) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = -m(r, c);
  }
  return out;
}

namespace {

class SmithWorker {
 public:
  SmithWorker(const IntMatrix& input, bool with_transforms)
      : a_(input), track_(with_transforms) {
    if (track_) {
      left_ = IntMatrix::identity(a_.rows());
      right_ = IntMatrix::identity(a_.cols());
    }
  }

  SmithForm run() {
    const std::size_t m = a_.rows();
    const std::size_t n = a_.cols();
    std::size_t t = 0;
    while (t < m && t < n) {
      if (!move_smallest_to(t)) break;
      for (;;) {
        bool dirty = false;
        for (std::size_t r = t + 1; r < m; ++r) {
          if (a_(r, t) == 0) continue;
          const Integer q = a_(r, t) / a_(t, t);
          add_row(r, t, -q);
          if (a_(r, t) != 0) dirty = true;
        }
        for (std::size_t c = t + 1; c < n; ++c) {
          if (a_(t, c) == 0) continue;
          const Integer q = a_(t, c) / a_(t, t);
          add_col(c, t, -q);
          if (a_(t, c) != 0) dirty = true;
        }
        if (dirty) {
          move_smallest_in_cross(t);
          continue;
        }
        // Row and column are clear; enforce divisibility of the remainder.
        bool divisible = true;
        for (std::size_t r = t + 1; r < m && divisible; ++r) {
          for (std::size_t c = t + 1; c < n; ++c) {
            if (a_(r, c) % a_(t, t) != 0) {
              add_row(t, r, Integer(1));
              divisible = false;
              break;
            }
          }
        }
        if (divisible) break;
      }
      if (a_(t, t) < 0) negate_row(t);
      ++t;
    }
    SmithForm out;
    for (std::size_t i = 0; i < t; ++i) out.invariants.push_back(a_(i, i));
    if (track_) {
      out.left = std::move(left_);
      out.right = std::move(right_);
    }
    return out;
  }

 private:
  bool move_smallest_to(std::size_t t) {
    std::size_t best_r = 0;
    std::size_t best_c = 0;
    bool found = false;
    Integer best;
    for (std::size_t r = t; r < a_.rows(); ++r) {
      for (std::size_t c = t; c < a_.cols(); ++c) {
        const Integer& x = a_(r, c);
        if (x == 0) continue;
        const Integer ax = x < 0 ? Integer(-x) : x;
        if (!found || ax < best) {
          best = ax;
          best_r = r;
          best_c = c;
          found = true;
          if (best == 1) break;
        }
      }
      if (found && best == 1) break;
    }
    if (!found) return false;
    swap_rows(t, best_r);
    swap_cols(t, best_c);
    return true;
  }

  void move_smallest_in_cross(std::size_t t) {
    std::size_t best_r = t;
    std::size_t best_c = t;
    Integer best = a_(t, t) < 0 ? Integer(-a_(t, t)) : a_(t, t);
    for (std::size_t r = t + 1; r < a_.rows(); ++r) {
      const Integer& x = a_(r, t);
      if (x == 0) continue;
      const Integer ax = x < 0 ? Integer(-x) : x;
      if (ax < best) {
        best = ax;
        best_r = r;
        best_c = t;
      }
    }
    for (std::size_t c = t + 1; c < a_.cols(); ++c) {
      const Integer& x = a_(t, c);
      if (x == 0) continue;
      const Integer ax = x < 0 ? Integer(-x) : x;
      if (ax < best) {
        best = ax;
        best_r = t;
        best_c = c;
      }
    }
    swap_rows(t, best_r);
    swap_cols(t, best_c);
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a_.cols(); ++c) std::swap(a_(i, c), a_(j, c));
    if (track_) {
      for (std::size_t c = 0; c < left_.cols(); ++c) std::swap(left_(i, c), left_(j, c));
    }
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a_.rows(); ++r) std::swap(a_(r, i), a_(r, j));
    if (track_) {
      for (std::size_t r = 0; r < right_.rows(); ++r) std::swap(right_(r, i), right_(r, j));
    }
  }

  // row[target] += factor * row[source]
  void add_row(std::size_t target, std::size_t source, const Integer& factor) {
    for (std::size_t c = 0; c < a_.cols(); ++c) {
      if (a_(source, c) != 0) a_(target, c) += factor * a_(source, c);
    }
    if (track_) {
      for (std::size_t c = 0; c < left_.cols(); ++c) {
        if (left_(source, c) != 0) left_(target, c) += factor * left_(source, c);
      }
    }
  }

  // col[target] += factor * col[source]
  void add_col(std::size_t target, std::size_t source, const Integer& factor) {
    for (std::size_t r = 0; r < a_.rows(); ++r) {
      if (a_(r, source) != 0) a_(r, target) += factor * a_(r, source);
    }
    if (track_) {
      for (std::size_t r = 0; r < right_.rows(); ++r) {
        if (right_(r, source) != 0) right_(r, target) += factor * right_(r, source);
      }
    }
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a_.cols(); ++c) a_(i, c) = -a_(i, c);
    if (track_) {
      for (std::size_t c = 0; c < left_.cols(); ++c) left_(i, c) = -left_(i, c);
    }
  }

  IntMatrix a_;
  bool track_;
  IntMatrix left_;
  IntMatrix right_;
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input, bool with_transforms) {
  return SmithWorker(input, with_transforms).run();
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const auto smith = smith_normal_form(m, true);
  return smith.right.column_block(smith.rank(), m.cols() - smith.rank());
}

IntegerSolver::IntegerSolver(const IntMatrix& m)
    : rows_(m.rows()), cols_(m.cols()), smith_(smith_normal_form(m, true)) {}

std::optional<std::vector<Integer>> IntegerSolver::solve(const std::vector<Integer>& b) const {
  if (b.size() != rows_) throw Error(ErrorCode::InvalidInput, "right-hand side has the wrong length");
  // left * m * right = D, so m x = b  <=>  D y = left b with x = right y.
  std::vector<Integer> ub(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < rows_; ++c) {
      if (smith_.left(r, c) != 0 && b[c] != 0) ub[r] += smith_.left(r, c) * b[c];
    }
  }
  std::vector<Integer> y(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i < smith_.rank()) {
      if (ub[i] % smith_.invariants[i] != 0) return std::nullopt;
      y[i] = ub[i] / smith_.invariants[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Integer> x(cols_);
  for (std::size_t r = 0; r < cols_; ++r) {
    for (std::size_t c = 0; c < smith_.rank(); ++c) {
      if (smith_.right(r, c) != 0 && y[c] != 0) x[r] += smith_.right(r, c) * y[c];
    }
  }
  return x;
}

}  // namespace polytower
