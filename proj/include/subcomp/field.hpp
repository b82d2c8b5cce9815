#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace subcomp {

/* Arithmetic in a prime field F_q.  q stays <= 251 so every residue fits in
 * a byte and inverses come from a small table built once per field. */
class FieldOrder {
public:
  explicit FieldOrder(unsigned q);

  unsigned q() const { return q_; }

  uint8_t add(uint8_t a, uint8_t b) const { return static_cast<uint8_t>((a + b) % q_); }
  uint8_t sub(uint8_t a, uint8_t b) const { return static_cast<uint8_t>((a + q_ - b) % q_); }
  uint8_t mul(uint8_t a, uint8_t b) const { return static_cast<uint8_t>((a * b) % q_); }
  uint8_t neg(uint8_t a) const { return static_cast<uint8_t>((q_ - a) % q_); }
  uint8_t inv(uint8_t a) const;  // throws on a == 0

  bool operator==(const FieldOrder& o) const { return q_ == o.q_; }
  bool operator!=(const FieldOrder& o) const { return q_ != o.q_; }

private:
  unsigned q_;
  std::vector<uint8_t> inv_;
};

/* Dense row-major matrix over F_q with byte entries.  Value semantics;
 * all mutating algorithms below return fresh matrices instead. */
class FieldMatrix {
public:
  FieldMatrix(FieldOrder field, size_t rows, size_t cols);

  static FieldMatrix identity(FieldOrder field, size_t n);
  static FieldMatrix from_rows(FieldOrder field, const std::vector<std::vector<uint8_t>>& rows,
                               size_t cols);

  const FieldOrder& field() const { return field_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  uint8_t at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  uint8_t& at(size_t r, size_t c) { return data_[r * cols_ + c]; }

  std::vector<uint8_t> row(size_t r) const;
  void set_row(size_t r, const std::vector<uint8_t>& v);

  FieldMatrix times(const FieldMatrix& rhs) const;
  FieldMatrix transposed() const;
  FieldMatrix vstack(const FieldMatrix& below) const;

  /* v (length rows) -> row combination v * M, length cols. */
  std::vector<uint8_t> row_combination(const std::vector<uint8_t>& v) const;
  /* v (length cols) -> M * v, length rows. */
  std::vector<uint8_t> apply(const std::vector<uint8_t>& v) const;

  bool is_zero() const;
  bool operator==(const FieldMatrix& o) const;
  bool operator!=(const FieldMatrix& o) const { return !(*this == o); }

private:
  FieldOrder field_;
  size_t rows_, cols_;
  std::vector<uint8_t> data_;
};

struct RrefResult {
  FieldMatrix matrix;                 // reduced row echelon form, zero rows at the bottom
  size_t rank;
  std::vector<size_t> pivot_columns;  // one per nonzero row, increasing
};

RrefResult rref(const FieldMatrix& m);
size_t rank_of(const FieldMatrix& m);

/* Inverse of a square matrix, or nullopt when singular. */
std::optional<FieldMatrix> inverse(const FieldMatrix& m);

/* Basis of { v : M v = 0 }, returned as rows of a (cols - rank) x cols matrix. */
FieldMatrix right_nullspace(const FieldMatrix& m);

}  // namespace subcomp
