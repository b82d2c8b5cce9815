#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "subcomp/field.hpp"

namespace subcomp {

/* Enumeration or decoding work exceeded a configured budget. */
class budget_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* An internal invariant that the theory guarantees failed to hold
 * numerically; usually means a tolerance is mis-set. */
class consistency_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* A subspace of F_q^m held in canonical form: the basis matrix is the unique
 * reduced row echelon basis (no zero rows), so operator== is structural
 * equality and subspaces are usable as ordered container keys. */
class Subspace {
public:
  static Subspace zero(FieldOrder field, size_t ambient);
  static Subspace full(FieldOrder field, size_t ambient);
  static Subspace span(FieldOrder field, size_t ambient,
                       const std::vector<std::vector<uint8_t>>& vectors);
  static Subspace row_space(const FieldMatrix& m);

  const FieldMatrix& basis() const { return basis_; }  // dim x ambient, RREF
  size_t dim() const { return basis_.rows(); }
  size_t ambient_dim() const { return basis_.cols(); }
  const FieldOrder& field() const { return basis_.field(); }

  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  bool contains_vector(const std::vector<uint8_t>& v) const;
  bool contains(const Subspace& w) const;

  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }
  /* Canonical total order: ambient, then dim, then basis entries. */
  bool operator<(const Subspace& o) const;

private:
  explicit Subspace(FieldMatrix rref_basis) : basis_(std::move(rref_basis)) {}
  FieldMatrix basis_;
};

void require_same_space(const Subspace& a, const Subspace& b);

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);

/* Deterministic complement T of S inside W (S ⊆ W required): greedy over the
 * canonical basis rows of W, keeping rows independent of S + chosen.
 * S ⊕ T = W. */
Subspace complement_basis(const Subspace& s, const Subspace& w);

/* Indices i (0-based) with e_i not in S + <e_0..e_{i-1}>; the standard basis
 * vectors at these indices extend S to the full ambient space.  The greedy
 * ascending choice makes the sets nested: S1 ⊆ S2 implies E(S2) ⊆ E(S1). */
std::vector<size_t> coordinate_extension_indices(const Subspace& s);

Subspace coordinate_subspace(FieldOrder field, size_t ambient, const std::vector<size_t>& indices);

struct EnumerationOptions {
  std::optional<Subspace> contains_lo;    // enumerate U with lo ⊆ U
  std::optional<Subspace> contained_in_hi;  // ... and U ⊆ hi
  std::optional<size_t> dim;              // ... of this exact dimension
  bool use_quotient = true;               // false: filtered full enumeration
  uint64_t max_points = uint64_t{1} << 20;   // guard on q^m
  uint64_t max_subspaces = 10'000'000;       // guard on projected output size
};

namespace detail {
class RrefShapeEnumerator;
}

/* Streams every subspace matching the options exactly once, in a fixed
 * deterministic order (dimension ascending, pivot columns lexicographic,
 * free entries in odometer order).  The default path enumerates the quotient
 * interval hi/lo and lifts; the fallback filters a full enumeration. */
class SubspaceStream {
public:
  SubspaceStream(FieldOrder field, size_t ambient, EnumerationOptions opts = {});
  SubspaceStream(SubspaceStream&&) noexcept;
  ~SubspaceStream();

  std::optional<Subspace> next();

private:
  FieldOrder field_;
  size_t ambient_;
  bool filtered_;
  Subspace lo_, hi_;
  std::optional<size_t> dim_filter_;
  FieldMatrix lift_;  // complement basis rows of lo in hi (quotient path)
  std::unique_ptr<detail::RrefShapeEnumerator> core_;
};

std::vector<Subspace> enumerate_subspaces(FieldOrder field, size_t ambient,
                                          EnumerationOptions opts = {});

/* Exact Gaussian binomial [m choose k]_q; throws on uint64 overflow. */
uint64_t gaussian_binomial(unsigned q, unsigned m, unsigned k);
/* Total number of subspaces of F_q^m (Galois number); throws on overflow. */
uint64_t subspace_count(unsigned q, unsigned m);

}  // namespace subcomp
