#include "cotlab/linfield.hpp"

#include <sstream>
#include <utility>

#include "cotlab/error.hpp"

namespace cotlab::linfield {

bool is_prime(unsigned p) noexcept {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(unsigned p) : p_(p) {
  if (p > 251 || !is_prime(p)) {
    throw MalformedInput("field characteristic must be a prime in [2, 251], got " +
                         std::to_string(p));
  }
}

Elem PrimeField::inv(Elem a) const {
  if (a == 0) throw MalformedInput("inverse of zero");
  // Fermat: a^(p-2)
  unsigned result = 1, base = a, e = p_ - 2;
  while (e > 0) {
    if (e & 1u) result = (result * base) % p_;
    base = (base * base) % p_;
    e >>= 1u;
  }
  return static_cast<Elem>(result);
}

Mat::Mat(PrimeField f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Mat::Mat(PrimeField f, std::size_t rows, std::size_t cols,
         std::vector<Elem> entries)
    : field_(f), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw MalformedInput("matrix entries length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  for (Elem e : data_) {
    if (e >= f.p()) throw MalformedInput("matrix entry out of range for F_p");
  }
}

Mat Mat::identity(PrimeField f, std::size_t n) {
  Mat m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(PrimeField f, const std::vector<std::vector<long long>>& rows,
                   std::size_t cols) {
  std::size_t nc = rows.empty() ? cols : rows.front().size();
  Mat m(f, rows.size(), nc);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != nc) throw MalformedInput("ragged matrix rows");
    for (std::size_t c = 0; c < nc; ++c) m(r, c) = f.reduce(rows[r][c]);
  }
  return m;
}

bool Mat::is_zero() const noexcept {
  for (Elem e : data_) {
    if (e != 0) return false;
  }
  return true;
}

Mat Mat::transpose() const {
  Mat t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw MalformedInput("block out of range");
  }
  Mat b(field_, nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  }
  return b;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) {
    throw MalformedInput("set_block out of range");
  }
  for (std::size_t r = 0; r < b.rows_; ++r) {
    for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }
}

Mat Mat::select_columns(std::span<const std::size_t> idx) const {
  Mat m(field_, rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < idx.size(); ++k) m(r, k) = (*this)(r, idx[k]);
  }
  return m;
}

Mat Mat::scaled(Elem s) const {
  Mat m = *this;
  for (Elem& e : m.data_) e = field_.mul(e, s);
  return m;
}

namespace {
void require_same_field(const Mat& a, const Mat& b) {
  if (a.field() != b.field()) {
    throw MalformedInput("matrices over different fields");
  }
}
}  // namespace

Mat operator*(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  if (a.cols_ != b.rows_) {
    throw MalformedInput("product shape mismatch " + std::to_string(a.rows_) + "x" +
                         std::to_string(a.cols_) + " * " + std::to_string(b.rows_) +
                         "x" + std::to_string(b.cols_));
  }
  const unsigned p = a.field_.p();
  Mat c(a.field_, a.rows_, b.cols_);
  std::vector<unsigned> acc(b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0u);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const unsigned aik = a(i, k);
      if (aik == 0) continue;
      const Elem* brow = b.data_.data() + k * b.cols_;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        acc[j] = (acc[j] + aik * brow[j]) % p;
      }
    }
    for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) = static_cast<Elem>(acc[j]);
  }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw MalformedInput("sum shape mismatch");
  }
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) {
    c.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
  }
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw MalformedInput("difference shape mismatch");
  }
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) {
    c.data_[i] = a.field_.sub(a.data_[i], b.data_[i]);
  }
  return c;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
         a.data_ == b.data_;
}

std::string Mat::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << " ";
      os << unsigned{(*this)(r, c)};
    }
  }
  os << "]";
  return os.str();
}

Mat hstack(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows()) throw MalformedInput("hstack row mismatch");
  Mat m(a.field(), a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Mat vstack(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  if (a.cols() != b.cols()) throw MalformedInput("vstack column mismatch");
  Mat m(a.field(), a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Mat diag(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  Mat m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

Echelon echelon(const Mat& m) {
  const PrimeField& f = m.field();
  Mat a = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(piv, c), a(row, c));
    }
    const Elem s = f.inv(a(row, col));
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) = f.mul(a(row, c), s);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      const Elem factor = a(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < a.cols(); ++c) {
        a(r, c) = f.sub(a(r, c), f.mul(factor, a(row, c)));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

RankKernel rank_kernel(const Mat& m) {
  Echelon e = echelon(m);
  const PrimeField& f = m.field();
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  Mat k(f, n, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const std::size_t fc = free_cols[j];
    k(fc, j) = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      k(e.pivots[i], j) = f.neg(e.rref(i, fc));
    }
  }
  return {e.pivots.size(), std::move(k)};
}

std::size_t rank(const Mat& m) { return echelon(m).pivots.size(); }

std::optional<Mat> solve_linear(const Mat& m, const Mat& b) {
  if (m.rows() != b.rows()) {
    throw MalformedInput("solve_linear: m has " + std::to_string(m.rows()) +
                         " rows but b has " + std::to_string(b.rows()));
  }
  const PrimeField& f = m.field();
  Echelon e = echelon(hstack(m, b));
  Mat x(f, m.cols(), b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] >= m.cols()) return std::nullopt;
  }
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      x(e.pivots[i], j) = e.rref(i, m.cols() + j);
    }
  }
  return x;
}

Mat column_space(const Mat& m) {
  Echelon e = echelon(m);
  return m.select_columns(e.pivots);
}

Mat complete_basis(const Mat& basis) {
  const std::size_t n = basis.rows();
  Mat cur = basis;
  std::size_t r = rank(cur);
  if (r != basis.cols()) throw MalformedInput("complete_basis: dependent columns");
  for (std::size_t i = 0; i < n && cur.cols() < n; ++i) {
    Mat e(basis.field(), n, 1);
    e(i, 0) = 1;
    Mat trial = hstack(cur, e);
    if (rank(trial) > cur.cols()) cur = std::move(trial);
  }
  return cur;
}

std::optional<Mat> inverse(const Mat& m) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  Echelon e = echelon(hstack(m, Mat::identity(m.field(), n)));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) {
    return std::nullopt;
  }
  return e.rref.block(0, n, n, n);
}

Mat power(const Mat& m, std::size_t k) {
  Mat result = Mat::identity(m.field(), m.rows());
  Mat base = m;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

bool is_nilpotent(const Mat& m) {
  if (m.rows() == 0) return true;
  return power(m, m.rows()).is_zero();
}

Mat vectorize(const Mat& m) {
  std::vector<Elem> v(m.entries().begin(), m.entries().end());
  return Mat(m.field(), v.size(), 1, std::move(v));
}

}  // namespace cotlab::linfield
