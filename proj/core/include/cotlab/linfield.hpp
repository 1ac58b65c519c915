#pragma once

// Exact dense linear algebra over prime fields F_p, 2 <= p <= 251.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cotlab::linfield {

using Elem = std::uint8_t;

class PrimeField {
 public:
  // Throws MalformedInput unless p is a prime in [2, 251].
  explicit PrimeField(unsigned p);

  unsigned p() const noexcept { return p_; }

  Elem reduce(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    return static_cast<Elem>(r < 0 ? r + p_ : r);
  }
  Elem add(Elem a, Elem b) const noexcept {
    unsigned s = unsigned{a} + b;
    return static_cast<Elem>(s >= p_ ? s - p_ : s);
  }
  Elem sub(Elem a, Elem b) const noexcept {
    return static_cast<Elem>(a >= b ? a - b : a + p_ - b);
  }
  Elem neg(Elem a) const noexcept {
    return static_cast<Elem>(a == 0 ? 0 : p_ - a);
  }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>((unsigned{a} * b) % p_);
  }
  // a must be nonzero.
  Elem inv(Elem a) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  unsigned p_;
};

bool is_prime(unsigned p) noexcept;

// Row-major matrix with entries in 0..p-1.
class Mat {
 public:
  Mat() : field_(2) {}
  Mat(PrimeField f, std::size_t rows, std::size_t cols);
  // Throws MalformedInput if entries.size() != rows*cols or an entry is out
  // of range.
  Mat(PrimeField f, std::size_t rows, std::size_t cols,
      std::vector<Elem> entries);

  static Mat zero(PrimeField f, std::size_t rows, std::size_t cols) {
    return Mat(f, rows, cols);
  }
  static Mat identity(PrimeField f, std::size_t n);
  // Builds from nested integer rows (reduced mod p); `cols` is used when
  // `rows` is empty.
  static Mat from_rows(PrimeField f,
                       const std::vector<std::vector<long long>>& rows,
                       std::size_t cols = 0);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Elem operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  Elem& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  std::span<const Elem> entries() const noexcept { return data_; }
  std::span<const Elem> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  bool is_zero() const noexcept;
  bool is_square() const noexcept { return rows_ == cols_; }

  Mat transpose() const;
  Mat block(std::size_t r0, std::size_t c0, std::size_t nr,
            std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Mat& b);
  Mat column(std::size_t c) const { return block(0, c, rows_, 1); }
  Mat select_columns(std::span<const std::size_t> idx) const;
  Mat scaled(Elem s) const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  friend bool operator==(const Mat& a, const Mat& b);

  std::string to_string() const;

 private:
  PrimeField field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
// Block-diagonal sum.
Mat diag(const Mat& a, const Mat& b);

struct RankKernel {
  std::size_t rank = 0;
  Mat kernel_basis;  // cols x k, columns a basis of the right null space
};

// Gaussian elimination with first-nonzero pivoting.
RankKernel rank_kernel(const Mat& m);
std::size_t rank(const Mat& m);

// Reduced row echelon form; returns pivot columns.
struct Echelon {
  Mat rref;
  std::vector<std::size_t> pivots;
};
Echelon echelon(const Mat& m);

// One x with m*x = b, or nullopt. Throws MalformedInput if rows differ.
std::optional<Mat> solve_linear(const Mat& m, const Mat& b);

// Columns forming a basis of the column space (subset of original columns).
Mat column_space(const Mat& m);

// Basis completion: columns c of `basis` (independent) followed by standard
// unit vectors chosen greedily, giving an invertible n x n matrix.
Mat complete_basis(const Mat& basis);

// Inverse of a square matrix, nullopt if singular.
std::optional<Mat> inverse(const Mat& m);

// Power of a square matrix.
Mat power(const Mat& m, std::size_t k);

bool is_nilpotent(const Mat& m);

// Views a matrix as a flat column vector (row-major order).
Mat vectorize(const Mat& m);

}  // namespace cotlab::linfield
