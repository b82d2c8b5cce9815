#pragma once

#include <map>
#include <set>
#include <vector>

#include "subcomp/dist.hpp"
#include "subcomp/subspace.hpp"

namespace subcomp {

/* Memoizes H(U) per canonical subspace; the chain and rate computations
 * revisit the same subspaces constantly. */
class SubspaceEntropyCache {
public:
  explicit SubspaceEntropyCache(const JointDist& d) : d_(&d) {}

  const JointDist& dist() const { return *d_; }

  double entropy(const Subspace& u);
  double cond(const Subspace& u2, const Subspace& u1);
  /* Normalized conditional entropy; requires U2 not contained in U1. */
  double ncond(const Subspace& u2, const Subspace& u1);

private:
  const JointDist* d_;
  std::map<Subspace, double> memo_;
};

struct ChainOptions {
  double tol = 1e-9;  // entropy comparison tolerance (bits)
  EnumerationOptions enum_opts;
};

struct ChainLink {
  Subspace subspace;             // W^(j)
  double cond_norm_entropy_bits;  // H_N(W^(j) | W^(j-1))
};

/* The strictly increasing subspace chain {0} = W^(0) ⊊ W^(1) ⊊ ... ⊊ W^(r) = V
 * with strictly increasing normalized conditional entropies.  links[j-1]
 * holds W^(j); W^(0) is implicit. */
struct SubspaceChain {
  std::vector<ChainLink> links;

  size_t length() const { return links.size(); }  // r
  Subspace link(size_t j) const;                   // W^(j), j in [0, r]; 0 is the zero space
  /* Index of the first link containing w (1-based); throws if none. */
  size_t first_link_containing(const Subspace& w) const;
};

/* All subspaces U ⊋ W0 minimizing H_N(U | W0), up to the tolerance.  This set
 * is closed under subspace sums. */
std::set<Subspace> min_entropy_set(const JointDist& d, const Subspace& w0,
                                   const ChainOptions& opts = {});
std::set<Subspace> min_entropy_set(SubspaceEntropyCache& cache, const Subspace& w0,
                                   const ChainOptions& opts);

/* The next chain subspace after W0: the sum of the minimizing set.  Checks
 * that the sum itself attains the minimum (closure). */
Subspace next_link(const JointDist& d, const Subspace& w0, const ChainOptions& opts = {});
Subspace next_link(SubspaceEntropyCache& cache, const Subspace& w0, const ChainOptions& opts);

/* Full chain decomposition of a linearly non-degenerate source. */
SubspaceChain decompose(const JointDist& d, const ChainOptions& opts = {});
SubspaceChain decompose(SubspaceEntropyCache& cache, const ChainOptions& opts);

/* Chain of a source X = Y G with independent components: sort the component
 * entropies ascending, group ties, and take spans of the leading groups of
 * component directions.  marginal_entropies_bits[i] = H(Y_i) > 0. */
SubspaceChain decompose_independent(const FieldMatrix& g,
                                    const std::vector<double>& marginal_entropies_bits,
                                    double tol = 1e-9);

}  // namespace subcomp
