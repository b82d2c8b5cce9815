#include "subcomp/chain.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace subcomp {

double SubspaceEntropyCache::entropy(const Subspace& u) {
  auto it = memo_.find(u);
  if (it != memo_.end()) return it->second;
  const double h = subspace_entropy(*d_, u);
  memo_.emplace(u, h);
  return h;
}

double SubspaceEntropyCache::cond(const Subspace& u2, const Subspace& u1) {
  return entropy(subspace_sum(u1, u2)) - entropy(u1);
}

double SubspaceEntropyCache::ncond(const Subspace& u2, const Subspace& u1) {
  require_same_space(u2, u1);
  if (u1.contains(u2))
    throw std::domain_error("normalized conditional entropy needs U2 not contained in U1");
  const Subspace s = subspace_sum(u1, u2);
  return (entropy(s) - entropy(u1)) / double(s.dim() - u1.dim());
}

Subspace SubspaceChain::link(size_t j) const {
  if (j > links.size() || links.empty()) throw std::out_of_range("chain link index");
  if (j == 0) {
    const Subspace& top = links.front().subspace;
    return Subspace::zero(top.field(), top.ambient_dim());
  }
  return links[j - 1].subspace;
}

size_t SubspaceChain::first_link_containing(const Subspace& w) const {
  for (size_t j = 1; j <= links.size(); ++j)
    if (link(j).contains(w)) return j;
  throw std::invalid_argument("subspace not contained in the final chain link");
}

namespace {

/* One pass over the open interval (w0, V]: the least H_N(U | w0) value. */
double min_value_above(SubspaceEntropyCache& cache, const Subspace& w0,
                       const ChainOptions& opts) {
  EnumerationOptions eo = opts.enum_opts;
  eo.contains_lo = w0;
  eo.contained_in_hi.reset();
  eo.dim.reset();
  const JointDist& d = cache.dist();
  SubspaceStream stream(d.field(), d.source_count(), eo);
  const double h0 = cache.entropy(w0);
  double best = std::numeric_limits<double>::infinity();
  while (auto u = stream.next()) {
    if (u->dim() == w0.dim()) continue;  // skip w0 itself
    const double v = (cache.entropy(*u) - h0) / double(u->dim() - w0.dim());
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

std::set<Subspace> min_entropy_set(SubspaceEntropyCache& cache, const Subspace& w0,
                                   const ChainOptions& opts) {
  const JointDist& d = cache.dist();
  if (w0.field() != d.field() || w0.ambient_dim() != d.source_count())
    throw std::invalid_argument("subspace/distribution ambient mismatch");
  if (w0.is_full()) throw std::invalid_argument("min_entropy_set needs W0 a proper subspace");
  const double best = min_value_above(cache, w0, opts);
  EnumerationOptions eo = opts.enum_opts;
  eo.contains_lo = w0;
  eo.contained_in_hi.reset();
  eo.dim.reset();
  SubspaceStream stream(d.field(), d.source_count(), eo);
  const double h0 = cache.entropy(w0);
  std::set<Subspace> out;
  while (auto u = stream.next()) {
    if (u->dim() == w0.dim()) continue;
    const double v = (cache.entropy(*u) - h0) / double(u->dim() - w0.dim());
    if (v <= best + opts.tol) out.insert(std::move(*u));
  }
  return out;
}

namespace {

/* The chain theory needs every nonzero subspace to carry positive entropy;
 * reject degenerate sources at the public entry points with the violating
 * direction as the certificate. */
void require_nondegenerate(const JointDist& d) {
  if (auto bad = nondegeneracy_violation(d)) {
    std::string dir;
    for (uint8_t e : *bad) dir += std::to_string(unsigned(e));
    throw std::invalid_argument("source is linearly degenerate along direction " + dir);
  }
}

}  // namespace

std::set<Subspace> min_entropy_set(const JointDist& d, const Subspace& w0,
                                   const ChainOptions& opts) {
  require_nondegenerate(d);
  SubspaceEntropyCache cache(d);
  return min_entropy_set(cache, w0, opts);
}

Subspace next_link(SubspaceEntropyCache& cache, const Subspace& w0, const ChainOptions& opts) {
  const std::set<Subspace> candidates = min_entropy_set(cache, w0, opts);
  if (candidates.empty()) throw consistency_error("empty minimizing set above a proper subspace");
  Subspace sum = *candidates.begin();
  for (const Subspace& u : candidates) sum = subspace_sum(sum, u);
  /* Closure: the sum of all minimizers must itself attain the minimum. */
  const double best = cache.ncond(*candidates.begin(), w0);
  const double at_sum = cache.ncond(sum, w0);
  if (at_sum > best + 2 * opts.tol)
    throw consistency_error("minimizing set is not closed under sums: H_N at the sum is " +
                            std::to_string(at_sum) + " vs minimum " + std::to_string(best));
  return sum;
}

Subspace next_link(const JointDist& d, const Subspace& w0, const ChainOptions& opts) {
  require_nondegenerate(d);
  SubspaceEntropyCache cache(d);
  return next_link(cache, w0, opts);
}

SubspaceChain decompose(SubspaceEntropyCache& cache, const ChainOptions& opts) {
  const JointDist& d = cache.dist();
  require_nondegenerate(d);
  SubspaceChain chain;
  Subspace w = Subspace::zero(d.field(), d.source_count());
  double prev = -std::numeric_limits<double>::infinity();
  while (!w.is_full()) {
    Subspace nxt = next_link(cache, w, opts);
    const double hn = cache.ncond(nxt, w);
    if (hn <= prev + opts.tol)
      throw consistency_error("chain normalized entropies failed to strictly increase");
    chain.links.push_back(ChainLink{nxt, hn});
    prev = hn;
    w = std::move(nxt);
  }
  return chain;
}

SubspaceChain decompose(const JointDist& d, const ChainOptions& opts) {
  SubspaceEntropyCache cache(d);
  return decompose(cache, opts);
}

SubspaceChain decompose_independent(const FieldMatrix& g,
                                    const std::vector<double>& marginal_entropies_bits,
                                    double tol) {
  const size_t m = g.rows();
  if (marginal_entropies_bits.size() != m)
    throw std::invalid_argument("need one marginal entropy per component");
  for (double h : marginal_entropies_bits)
    if (!(h > tol))
      throw std::invalid_argument("component entropies must be strictly positive");
  const FieldMatrix dirs = independent_directions(g);  // row i = Y_i as a coefficient vector

  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return marginal_entropies_bits[a] < marginal_entropies_bits[b];
  });

  SubspaceChain chain;
  std::vector<std::vector<uint8_t>> rows;
  size_t i = 0;
  while (i < m) {
    /* Group consecutive sorted entropies whose successive gaps are within
     * the tolerance; the group shares one chain link. */
    double group_sum = marginal_entropies_bits[order[i]];
    rows.push_back(dirs.row(order[i]));
    size_t j = i + 1;
    while (j < m && marginal_entropies_bits[order[j]] - marginal_entropies_bits[order[j - 1]] <=
                        tol) {
      group_sum += marginal_entropies_bits[order[j]];
      rows.push_back(dirs.row(order[j]));
      ++j;
    }
    chain.links.push_back(ChainLink{Subspace::span(g.field(), m, rows),
                                    group_sum / double(j - i)});
    i = j;
  }
  return chain;
}

}  // namespace subcomp
