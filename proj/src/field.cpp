#include "subcomp/field.hpp"

#include <stdexcept>
#include <string>

namespace subcomp {

namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

FieldOrder::FieldOrder(unsigned q) : q_(q) {
  if (q < 2 || q > 251 || !is_prime(q))
    throw std::invalid_argument("field order must be a prime <= 251, got " + std::to_string(q));
  inv_.assign(q_, 0);
  for (unsigned a = 1; a < q_; ++a) {
    for (unsigned b = 1; b < q_; ++b) {
      if ((a * b) % q_ == 1) {
        inv_[a] = static_cast<uint8_t>(b);
        break;
      }
    }
  }
}

uint8_t FieldOrder::inv(uint8_t a) const {
  if (a == 0 || a >= q_) throw std::invalid_argument("no inverse for residue " + std::to_string(a));
  return inv_[a];
}

FieldMatrix::FieldMatrix(FieldOrder field, size_t rows, size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix FieldMatrix::identity(FieldOrder field, size_t n) {
  FieldMatrix m(field, n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::from_rows(FieldOrder field, const std::vector<std::vector<uint8_t>>& rows,
                                   size_t cols) {
  FieldMatrix m(field, rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch in from_rows");
    for (size_t c = 0; c < cols; ++c) {
      if (rows[r][c] >= field.q()) throw std::invalid_argument("entry out of field range");
      m.at(r, c) = rows[r][c];
    }
  }
  return m;
}

std::vector<uint8_t> FieldMatrix::row(size_t r) const {
  return std::vector<uint8_t>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void FieldMatrix::set_row(size_t r, const std::vector<uint8_t>& v) {
  if (v.size() != cols_) throw std::invalid_argument("row length mismatch in set_row");
  for (size_t c = 0; c < cols_; ++c) data_[r * cols_ + c] = v[c];
}

FieldMatrix FieldMatrix::times(const FieldMatrix& rhs) const {
  if (field_ != rhs.field_ || cols_ != rhs.rows_)
    throw std::invalid_argument("matrix product shape/field mismatch");
  FieldMatrix out(field_, rows_, rhs.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t k = 0; k < cols_; ++k) {
      const unsigned a = at(i, k);
      if (a == 0) continue;
      for (size_t j = 0; j < rhs.cols_; ++j) {
        unsigned v = out.at(i, j) + a * rhs.at(k, j);
        out.at(i, j) = static_cast<uint8_t>(v % field_.q());
      }
    }
  }
  return out;
}

FieldMatrix FieldMatrix::transposed() const {
  FieldMatrix out(field_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

FieldMatrix FieldMatrix::vstack(const FieldMatrix& below) const {
  if (field_ != below.field_ || cols_ != below.cols_)
    throw std::invalid_argument("vstack shape/field mismatch");
  FieldMatrix out(field_, rows_ + below.rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
  for (size_t i = 0; i < below.rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(rows_ + i, j) = below.at(i, j);
  return out;
}

std::vector<uint8_t> FieldMatrix::row_combination(const std::vector<uint8_t>& v) const {
  if (v.size() != rows_) throw std::invalid_argument("row_combination length mismatch");
  std::vector<uint8_t> out(cols_, 0);
  for (size_t i = 0; i < rows_; ++i) {
    const unsigned a = v[i];
    if (a == 0) continue;
    for (size_t j = 0; j < cols_; ++j)
      out[j] = static_cast<uint8_t>((out[j] + a * at(i, j)) % field_.q());
  }
  return out;
}

std::vector<uint8_t> FieldMatrix::apply(const std::vector<uint8_t>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply length mismatch");
  std::vector<uint8_t> out(rows_, 0);
  for (size_t i = 0; i < rows_; ++i) {
    unsigned acc = 0;
    for (size_t j = 0; j < cols_; ++j) acc += at(i, j) * v[j];
    out[i] = static_cast<uint8_t>(acc % field_.q());
  }
  return out;
}

bool FieldMatrix::is_zero() const {
  for (uint8_t e : data_)
    if (e) return false;
  return true;
}

bool FieldMatrix::operator==(const FieldMatrix& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

RrefResult rref(const FieldMatrix& m) {
  FieldMatrix a = m;
  const FieldOrder& f = a.field();
  const size_t rows = a.rows(), cols = a.cols();
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a.at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (size_t j = 0; j < cols; ++j) std::swap(a.at(p, j), a.at(r, j));
    const uint8_t scale = f.inv(a.at(r, c));
    if (scale != 1)
      for (size_t j = c; j < cols; ++j) a.at(r, j) = f.mul(a.at(r, j), scale);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const uint8_t factor = a.at(i, c);
      if (factor == 0) continue;
      for (size_t j = c; j < cols; ++j)
        a.at(i, j) = f.sub(a.at(i, j), f.mul(factor, a.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return RrefResult{std::move(a), r, std::move(pivots)};
}

size_t rank_of(const FieldMatrix& m) { return rref(m).rank; }

std::optional<FieldMatrix> inverse(const FieldMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse requires a square matrix");
  const size_t n = m.rows();
  FieldMatrix aug(m.field(), n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  RrefResult r = rref(aug);
  // Invertible iff the left block reduced to the identity.
  for (size_t i = 0; i < n; ++i)
    if (r.matrix.at(i, i) != 1) return std::nullopt;
  FieldMatrix out(m.field(), n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out.at(i, j) = r.matrix.at(i, n + j);
  return out;
}

FieldMatrix right_nullspace(const FieldMatrix& m) {
  RrefResult r = rref(m);
  const size_t cols = m.cols();
  const FieldOrder& f = m.field();
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : r.pivot_columns) is_pivot[c] = true;
  FieldMatrix out(f, cols - r.rank, cols);
  size_t row = 0;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    out.at(row, free_col) = 1;
    for (size_t i = 0; i < r.rank; ++i)
      out.at(row, r.pivot_columns[i]) = f.neg(r.matrix.at(i, free_col));
    ++row;
  }
  return out;
}

}  // namespace subcomp
