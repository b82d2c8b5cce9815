#include "subcomp/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace subcomp {

namespace {

/* Reduce v against an RREF basis in place; returns true when v lies in the
 * row space (i.e. reduces to zero).  Basis rows are processed in order, which
 * suffices because each pivot column is zero in every other basis row. */
bool reduce_against(const FieldMatrix& basis, std::vector<uint8_t>& v,
                    const std::vector<size_t>& pivots) {
  const FieldOrder& f = basis.field();
  for (size_t i = 0; i < basis.rows(); ++i) {
    const uint8_t coef = v[pivots[i]];
    if (coef == 0) continue;
    for (size_t j = 0; j < basis.cols(); ++j)
      v[j] = f.sub(v[j], f.mul(coef, basis.at(i, j)));
  }
  return std::all_of(v.begin(), v.end(), [](uint8_t e) { return e == 0; });
}

std::vector<size_t> pivot_columns_of(const FieldMatrix& rref_basis) {
  std::vector<size_t> pivots;
  pivots.reserve(rref_basis.rows());
  for (size_t i = 0; i < rref_basis.rows(); ++i) {
    size_t c = 0;
    while (c < rref_basis.cols() && rref_basis.at(i, c) == 0) ++c;
    pivots.push_back(c);
  }
  return pivots;
}

uint64_t checked_pow(uint64_t base, uint64_t exp, uint64_t cap) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;  // saturate just past the cap
    r *= base;
  }
  return r;
}

}  // namespace

Subspace Subspace::zero(FieldOrder field, size_t ambient) {
  return Subspace(FieldMatrix(field, 0, ambient));
}

Subspace Subspace::full(FieldOrder field, size_t ambient) {
  return Subspace(FieldMatrix::identity(field, ambient));
}

Subspace Subspace::span(FieldOrder field, size_t ambient,
                        const std::vector<std::vector<uint8_t>>& vectors) {
  return row_space(FieldMatrix::from_rows(field, vectors, ambient));
}

Subspace Subspace::row_space(const FieldMatrix& m) {
  RrefResult r = rref(m);
  FieldMatrix basis(m.field(), r.rank, m.cols());
  for (size_t i = 0; i < r.rank; ++i)
    for (size_t j = 0; j < m.cols(); ++j) basis.at(i, j) = r.matrix.at(i, j);
  return Subspace(std::move(basis));
}

bool Subspace::contains_vector(const std::vector<uint8_t>& v) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("vector/ambient length mismatch");
  std::vector<uint8_t> work = v;
  return reduce_against(basis_, work, pivot_columns_of(basis_));
}

bool Subspace::contains(const Subspace& w) const {
  require_same_space(*this, w);
  if (w.dim() > dim()) return false;
  const std::vector<size_t> pivots = pivot_columns_of(basis_);
  for (size_t i = 0; i < w.dim(); ++i) {
    std::vector<uint8_t> row = w.basis_.row(i);
    if (!reduce_against(basis_, row, pivots)) return false;
  }
  return true;
}

bool Subspace::operator<(const Subspace& o) const {
  if (ambient_dim() != o.ambient_dim()) return ambient_dim() < o.ambient_dim();
  if (dim() != o.dim()) return dim() < o.dim();
  for (size_t i = 0; i < dim(); ++i)
    for (size_t j = 0; j < ambient_dim(); ++j)
      if (basis_.at(i, j) != o.basis_.at(i, j)) return basis_.at(i, j) < o.basis_.at(i, j);
  return false;
}

void require_same_space(const Subspace& a, const Subspace& b) {
  if (a.field() != b.field() || a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("subspaces live in different ambient spaces");
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require_same_space(a, b);
  return Subspace::row_space(a.basis().vstack(b.basis()));
}

/* Zassenhaus: row reduce [A|A; B|0]; rows whose left half is zero carry a
 * basis of the intersection in their right half. */
Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  require_same_space(a, b);
  const size_t m = a.ambient_dim();
  const FieldOrder& f = a.field();
  FieldMatrix block(f, a.dim() + b.dim(), 2 * m);
  for (size_t i = 0; i < a.dim(); ++i)
    for (size_t j = 0; j < m; ++j) {
      block.at(i, j) = a.basis().at(i, j);
      block.at(i, m + j) = a.basis().at(i, j);
    }
  for (size_t i = 0; i < b.dim(); ++i)
    for (size_t j = 0; j < m; ++j) block.at(a.dim() + i, j) = b.basis().at(i, j);
  RrefResult r = rref(block);
  std::vector<std::vector<uint8_t>> rows;
  for (size_t i = 0; i < r.rank; ++i) {
    bool left_zero = true;
    for (size_t j = 0; j < m && left_zero; ++j) left_zero = r.matrix.at(i, j) == 0;
    if (!left_zero) continue;
    std::vector<uint8_t> v(m);
    for (size_t j = 0; j < m; ++j) v[j] = r.matrix.at(i, m + j);
    rows.push_back(std::move(v));
  }
  return Subspace::span(f, m, rows);
}

Subspace complement_basis(const Subspace& s, const Subspace& w) {
  require_same_space(s, w);
  if (!w.contains(s)) throw std::invalid_argument("complement_basis requires S ⊆ W");
  std::vector<std::vector<uint8_t>> acc;
  for (size_t i = 0; i < s.dim(); ++i) acc.push_back(s.basis().row(i));
  size_t current_rank = s.dim();
  std::vector<std::vector<uint8_t>> chosen;
  for (size_t i = 0; i < w.dim() && current_rank < w.dim(); ++i) {
    std::vector<std::vector<uint8_t>> trial = acc;
    trial.push_back(w.basis().row(i));
    const size_t r = rank_of(FieldMatrix::from_rows(w.field(), trial, w.ambient_dim()));
    if (r > current_rank) {
      chosen.push_back(w.basis().row(i));
      acc = std::move(trial);
      current_rank = r;
    }
  }
  return Subspace::span(w.field(), w.ambient_dim(), chosen);
}

std::vector<size_t> coordinate_extension_indices(const Subspace& s) {
  const size_t m = s.ambient_dim();
  std::vector<std::vector<uint8_t>> acc;
  for (size_t i = 0; i < s.dim(); ++i) acc.push_back(s.basis().row(i));
  size_t current_rank = s.dim();
  std::vector<size_t> out;
  for (size_t i = 0; i < m && current_rank < m; ++i) {
    std::vector<uint8_t> e(m, 0);
    e[i] = 1;
    std::vector<std::vector<uint8_t>> trial = acc;
    trial.push_back(e);
    const size_t r = rank_of(FieldMatrix::from_rows(s.field(), trial, m));
    if (r > current_rank) {
      out.push_back(i);
      acc = std::move(trial);
      current_rank = r;
    }
  }
  return out;
}

Subspace coordinate_subspace(FieldOrder field, size_t ambient, const std::vector<size_t>& indices) {
  std::vector<std::vector<uint8_t>> rows;
  for (size_t i : indices) {
    if (i >= ambient) throw std::invalid_argument("coordinate index out of range");
    std::vector<uint8_t> e(ambient, 0);
    e[i] = 1;
    rows.push_back(std::move(e));
  }
  return Subspace::span(field, ambient, rows);
}

namespace detail {

/* Enumerates RREF basis matrices of all subspaces of F_q^d with dimension in
 * [dim_lo, dim_hi]: for each dimension, for each pivot-column combination in
 * lexicographic order, the non-forced entries run through an odometer. */
class RrefShapeEnumerator {
public:
  RrefShapeEnumerator(unsigned q, size_t d, size_t dim_lo, size_t dim_hi)
      : q_(q), d_(d), dim_hi_(std::min(dim_hi, d)), k_(dim_lo), done_(false) {
    if (dim_lo > dim_hi_) {
      done_ = true;
      return;
    }
    start_dim();
  }

  /* Emits the current RREF rows and advances.  False when exhausted. */
  bool next(std::vector<std::vector<uint8_t>>& rows_out) {
    if (done_) return false;
    emit(rows_out);
    advance();
    return true;
  }

private:
  void start_dim() {
    pivots_.resize(k_);
    for (size_t i = 0; i < k_; ++i) pivots_[i] = i;
    start_combo();
  }

  void start_combo() {
    free_pos_.clear();
    std::vector<bool> is_pivot(d_, false);
    for (size_t p : pivots_) is_pivot[p] = true;
    for (size_t i = 0; i < k_; ++i)
      for (size_t c = pivots_[i] + 1; c < d_; ++c)
        if (!is_pivot[c]) free_pos_.emplace_back(i, c);
    digits_.assign(free_pos_.size(), 0);
  }

  bool advance_combo() {
    if (k_ == 0) return false;
    size_t i = k_;
    while (i-- > 0) {
      if (pivots_[i] < d_ - k_ + i) {
        ++pivots_[i];
        for (size_t j = i + 1; j < k_; ++j) pivots_[j] = pivots_[j - 1] + 1;
        start_combo();
        return true;
      }
    }
    return false;
  }

  void advance() {
    size_t i = digits_.size();
    while (i-- > 0) {
      if (digits_[i] + 1u < q_) {
        ++digits_[i];
        std::fill(digits_.begin() + i + 1, digits_.end(), 0);
        return;
      }
    }
    if (advance_combo()) return;
    ++k_;
    if (k_ > dim_hi_) {
      done_ = true;
      return;
    }
    start_dim();
  }

  void emit(std::vector<std::vector<uint8_t>>& rows_out) const {
    rows_out.assign(k_, std::vector<uint8_t>(d_, 0));
    for (size_t i = 0; i < k_; ++i) rows_out[i][pivots_[i]] = 1;
    for (size_t idx = 0; idx < free_pos_.size(); ++idx)
      rows_out[free_pos_[idx].first][free_pos_[idx].second] = digits_[idx];
  }

  unsigned q_;
  size_t d_, dim_hi_, k_;
  bool done_;
  std::vector<size_t> pivots_;
  std::vector<std::pair<size_t, size_t>> free_pos_;
  std::vector<uint8_t> digits_;
};

}  // namespace detail

namespace {

double gaussian_binomial_approx(unsigned q, unsigned m, unsigned k) {
  if (k > m) return 0.0;
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i)
    r *= (std::pow(double(q), double(m - i)) - 1.0) / (std::pow(double(q), double(i + 1)) - 1.0);
  return r;
}

double projected_count(unsigned q, size_t d, std::optional<size_t> dim) {
  if (dim) return gaussian_binomial_approx(q, unsigned(d), unsigned(*dim));
  double total = 0.0;
  for (size_t k = 0; k <= d; ++k) total += gaussian_binomial_approx(q, unsigned(d), unsigned(k));
  return total;
}

}  // namespace

SubspaceStream::SubspaceStream(FieldOrder field, size_t ambient, EnumerationOptions opts)
    : field_(field),
      ambient_(ambient),
      filtered_(!opts.use_quotient),
      lo_(opts.contains_lo.value_or(Subspace::zero(field, ambient))),
      hi_(opts.contained_in_hi.value_or(Subspace::full(field, ambient))),
      dim_filter_(opts.dim),
      lift_(field, 0, ambient) {
  if (lo_.field() != field || lo_.ambient_dim() != ambient || hi_.field() != field ||
      hi_.ambient_dim() != ambient)
    throw std::invalid_argument("enumeration bounds live in a different ambient space");
  const uint64_t points = checked_pow(field.q(), ambient, opts.max_points);
  if (points > opts.max_points)
    throw budget_error("enumeration budget exceeded: q^m > " + std::to_string(opts.max_points));

  if (!hi_.contains(lo_)) {  // empty interval
    core_.reset();
    return;
  }

  if (filtered_) {
    const double proj = projected_count(field.q(), ambient, std::nullopt);
    if (proj > double(opts.max_subspaces))
      throw budget_error("enumeration budget exceeded: projected subspace count " +
                         std::to_string(proj) + " > " + std::to_string(opts.max_subspaces));
    core_ = std::make_unique<detail::RrefShapeEnumerator>(field.q(), ambient, 0, ambient);
    return;
  }

  const size_t d = hi_.dim() - lo_.dim();
  lift_ = complement_basis(lo_, hi_).basis();
  std::optional<size_t> core_dim;
  if (dim_filter_) {
    if (*dim_filter_ < lo_.dim() || *dim_filter_ > hi_.dim()) {
      core_.reset();
      return;
    }
    core_dim = *dim_filter_ - lo_.dim();
  }
  const double proj = projected_count(field.q(), d, core_dim);
  if (proj > double(opts.max_subspaces))
    throw budget_error("enumeration budget exceeded: projected subspace count " +
                       std::to_string(proj) + " > " + std::to_string(opts.max_subspaces));
  core_ = std::make_unique<detail::RrefShapeEnumerator>(
      field.q(), d, core_dim.value_or(0), core_dim.value_or(d));
}

SubspaceStream::SubspaceStream(SubspaceStream&&) noexcept = default;
SubspaceStream::~SubspaceStream() = default;

std::optional<Subspace> SubspaceStream::next() {
  std::vector<std::vector<uint8_t>> rows;
  while (core_ && core_->next(rows)) {
    if (filtered_) {
      Subspace u = Subspace::span(field_, ambient_, rows);
      if (dim_filter_ && u.dim() != *dim_filter_) continue;
      if (!u.contains(lo_) || !hi_.contains(u)) continue;
      return u;
    }
    /* Lift the quotient subspace: map its basis rows through the complement
     * directions and adjoin lo's basis. */
    std::vector<std::vector<uint8_t>> lifted;
    lifted.reserve(rows.size() + lo_.dim());
    for (const auto& sigma : rows) lifted.push_back(lift_.row_combination(sigma));
    for (size_t i = 0; i < lo_.dim(); ++i) lifted.push_back(lo_.basis().row(i));
    return Subspace::span(field_, ambient_, lifted);
  }
  return std::nullopt;
}

std::vector<Subspace> enumerate_subspaces(FieldOrder field, size_t ambient,
                                          EnumerationOptions opts) {
  SubspaceStream stream(field, ambient, opts);
  std::vector<Subspace> out;
  while (auto u = stream.next()) out.push_back(std::move(*u));
  return out;
}

uint64_t gaussian_binomial(unsigned q, unsigned m, unsigned k) {
  if (k > m) return 0;
  /* [m k]_q via the q-Pascal recurrence, checking for overflow. */
  std::vector<uint64_t> prev(m + 1, 0), cur;
  prev[0] = 1;
  for (unsigned n = 1; n <= m; ++n) {
    cur.assign(m + 1, 0);
    cur[0] = 1;
    uint64_t qk = 1;
    for (unsigned j = 1; j <= n; ++j) {
      if (qk > UINT64_MAX / q) throw std::overflow_error("gaussian_binomial overflow");
      qk *= q;  // q^j
      const uint64_t a = prev[j - 1];
      const uint64_t b = j <= n - 1 ? prev[j] : 0;
      if (b != 0 && qk > (UINT64_MAX - a) / b) throw std::overflow_error("gaussian_binomial overflow");
      cur[j] = a + qk * b;
    }
    prev = cur;
  }
  return prev[k];
}

uint64_t subspace_count(unsigned q, unsigned m) {
  uint64_t total = 0;
  for (unsigned k = 0; k <= m; ++k) {
    const uint64_t g = gaussian_binomial(q, m, k);
    if (total > UINT64_MAX - g) throw std::overflow_error("subspace_count overflow");
    total += g;
  }
  return total;
}

}  // namespace subcomp
