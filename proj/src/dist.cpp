#include "subcomp/dist.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace subcomp {

namespace {

size_t checked_table_size(unsigned q, size_t m) {
  size_t n = 1;
  for (size_t i = 0; i < m; ++i) {
    if (n > (size_t{1} << 20) / q) throw std::invalid_argument("q^m too large for a dense pmf");
    n *= q;
  }
  return n;
}

/* Kahan-compensated sum: the 1e-12 normalization gate must not trip on
 * accumulation roundoff for tables of up to 2^20 entries. */
double compensated_sum(const std::vector<double>& v) {
  double sum = 0.0, c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

JointDist::JointDist(FieldOrder field, size_t m, std::vector<double> pmf)
    : field_(field), m_(m), pmf_(std::move(pmf)) {
  if (m_ == 0) throw std::invalid_argument("need at least one source");
  if (pmf_.size() != checked_table_size(field_.q(), m_))
    throw std::invalid_argument("pmf size is not q^m");
  for (double p : pmf_)
    if (!(p >= 0.0)) throw std::invalid_argument("pmf entries must be nonnegative");
  const double sum = compensated_sum(pmf_);
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("pmf must sum to 1 (off by " + std::to_string(sum - 1.0) + ")");
}

size_t JointDist::index_of(const std::vector<uint8_t>& x) const {
  if (x.size() != m_) throw std::invalid_argument("outcome length mismatch");
  size_t idx = 0;
  for (size_t i = 0; i < m_; ++i) idx = idx * field_.q() + x[i];
  return idx;
}

std::vector<uint8_t> JointDist::outcome_of(size_t index) const {
  std::vector<uint8_t> x(m_);
  for (size_t i = m_; i-- > 0;) {
    x[i] = static_cast<uint8_t>(index % field_.q());
    index /= field_.q();
  }
  return x;
}

double shannon_entropy_bits(const std::vector<double>& pmf) {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

JointDist pushforward(const JointDist& d, const FieldMatrix& gamma) {
  const FieldOrder& f = d.field();
  if (gamma.field() != f) throw std::invalid_argument("pushforward field mismatch");
  if (gamma.rows() != d.source_count())
    throw std::invalid_argument("pushforward map must have m rows");
  const size_t k = gamma.cols();
  if (rank_of(gamma) != k)
    throw std::invalid_argument("pushforward map must have full column rank");
  const unsigned q = f.q();
  size_t out_size = 1;
  for (size_t j = 0; j < k; ++j) out_size *= q;
  std::vector<double> out(out_size, 0.0);
  std::vector<uint8_t> x(d.source_count());
  for (size_t idx = 0; idx < d.size(); ++idx) {
    const double p = d.prob(idx);
    if (p == 0.0) continue;
    size_t rem = idx;
    for (size_t i = d.source_count(); i-- > 0;) {
      x[i] = static_cast<uint8_t>(rem % q);
      rem /= q;
    }
    size_t z = 0;
    for (size_t j = 0; j < k; ++j) {
      unsigned acc = 0;
      for (size_t i = 0; i < d.source_count(); ++i) acc += x[i] * gamma.at(i, j);
      z = z * q + acc % q;
    }
    out[z] += p;
  }
  return JointDist(f, k, std::move(out));
}

double subspace_entropy(const JointDist& d, const Subspace& u) {
  if (u.field() != d.field() || u.ambient_dim() != d.source_count())
    throw std::invalid_argument("subspace/distribution ambient mismatch");
  if (u.is_zero()) return 0.0;
  return shannon_entropy_bits(pushforward(d, u.basis().transposed()).pmf());
}

double cond_entropy(const JointDist& d, const Subspace& u2, const Subspace& u1) {
  require_same_space(u2, u1);
  return subspace_entropy(d, subspace_sum(u1, u2)) - subspace_entropy(d, u1);
}

double norm_cond_entropy(const JointDist& d, const Subspace& u2, const Subspace& u1) {
  require_same_space(u2, u1);
  if (u1.contains(u2))
    throw std::domain_error("normalized conditional entropy needs U2 not contained in U1");
  const Subspace s = subspace_sum(u1, u2);
  return (subspace_entropy(d, s) - subspace_entropy(d, u1)) / double(s.dim() - u1.dim());
}

double norm_entropy(const JointDist& d, const Subspace& u) {
  if (u.is_zero()) throw std::domain_error("normalized entropy of the zero subspace");
  return subspace_entropy(d, u) / double(u.dim());
}

std::optional<std::vector<uint8_t>> nondegeneracy_violation(const JointDist& d) {
  const unsigned q = d.field().q();
  const size_t m = d.source_count();
  std::vector<uint8_t> a(m);
  for (size_t dir = 1; dir < d.size(); ++dir) {
    size_t rem = dir;
    for (size_t i = m; i-- > 0;) {
      a[i] = static_cast<uint8_t>(rem % q);
      rem /= q;
    }
    size_t first = 0;
    while (first < m && a[first] == 0) ++first;
    if (a[first] != 1) continue;  // one representative per projective class
    double mass_at_zero = 0.0;
    for (size_t idx = 0; idx < d.size(); ++idx) {
      if (d.prob(idx) == 0.0) continue;
      size_t r = idx;
      unsigned dot = 0;
      for (size_t i = m; i-- > 0;) {
        dot += a[i] * (r % q);
        r /= q;
      }
      if (dot % q == 0) mass_at_zero += d.prob(idx);
    }
    if (mass_at_zero >= 1.0 - 1e-12) return a;
  }
  return std::nullopt;
}

namespace {

/* Product law of independent Y pushed through X = Y G. */
JointDist mix_independent(FieldOrder f, const FieldMatrix& g,
                          const std::vector<std::vector<double>>& marginals) {
  const size_t m = g.rows();
  if (g.cols() != m) throw std::invalid_argument("mixing matrix must be square");
  if (!inverse(g)) throw std::invalid_argument("mixing matrix must be invertible");
  if (marginals.size() != m) throw std::invalid_argument("need one marginal per component");
  for (const auto& marg : marginals) {
    if (marg.size() != f.q()) throw std::invalid_argument("marginal length must be q");
    double s = 0.0;
    for (double p : marg) {
      if (!(p >= 0.0)) throw std::invalid_argument("marginal entries must be nonnegative");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("marginal must sum to 1");
  }
  const unsigned q = f.q();
  const size_t n = checked_table_size(q, m);
  std::vector<double> pmf(n, 0.0);
  std::vector<uint8_t> y(m);
  const FieldMatrix gt = g.transposed();
  for (size_t idx = 0; idx < n; ++idx) {
    size_t rem = idx;
    double p = 1.0;
    for (size_t i = m; i-- > 0;) {
      y[i] = static_cast<uint8_t>(rem % q);
      rem /= q;
      p *= marginals[i][y[i]];
    }
    if (p == 0.0) continue;
    const std::vector<uint8_t> x = gt.apply(y);  // x_j = sum_i y_i G[i][j]
    size_t xi = 0;
    for (size_t j = 0; j < m; ++j) xi = xi * q + x[j];
    pmf[xi] += p;
  }
  return JointDist(f, m, std::move(pmf));
}

std::vector<double> bernoulli(double p) { return {1.0 - p, p}; }

FieldMatrix example1_mixing() {
  /* Column form X = M Y with M upper triangular all ones; as a row
   * convention X = Y G this is G = M^T. */
  FieldOrder f2(2);
  FieldMatrix g(f2, 4, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j <= i; ++j) g.at(i, j) = 1;
  return g;
}

FieldMatrix opt_ss_mixing(size_t m) {
  /* X_i = Y_1 + ... + Y_i, i.e. G upper triangular all ones. */
  FieldOrder f2(2);
  FieldMatrix g(f2, m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i; j < m; ++j) g.at(i, j) = 1;
  return g;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

JointDist make_family(const FamilySpec& spec) {
  if (const auto* e = std::get_if<Example1Family>(&spec)) {
    if (!(e->p1 > 0.0 && e->p1 < 0.5 && e->p2 > 0.0 && e->p2 < 0.5))
      throw std::invalid_argument("example1 needs 0 < p1, p2 < 1/2");
    return mix_independent(FieldOrder(2), example1_mixing(),
                           {bernoulli(e->p1), bernoulli(e->p1), bernoulli(e->p2), bernoulli(0.5)});
  }
  if (const auto* o = std::get_if<OptSsFamily>(&spec)) {
    if (o->m < 2 || o->m % 2 != 0) throw std::invalid_argument("opt_ss needs even m >= 2");
    if (!(o->p > 0.0 && o->p < 0.5)) throw std::invalid_argument("opt_ss needs 0 < p < 1/2");
    std::vector<std::vector<double>> margs;
    for (size_t i = 0; i < o->m; ++i) margs.push_back(bernoulli(i % 2 == 0 ? 0.5 : o->p));
    return mix_independent(FieldOrder(2), opt_ss_mixing(o->m), margs);
  }
  if (const auto* x = std::get_if<IndependentMixFamily>(&spec))
    return mix_independent(x->g.field(), x->g, x->marginals);
  if (const auto* u = std::get_if<UniformFamily>(&spec)) {
    FieldOrder f(u->q);
    const size_t n = checked_table_size(u->q, u->m);
    return JointDist(f, u->m, std::vector<double>(n, 1.0 / double(n)));
  }
  const auto& r = std::get<RandomFamily>(spec);
  if (!(r.smoothing > 0.0)) throw std::invalid_argument("random family needs smoothing > 0");
  FieldOrder f(r.q);
  const size_t n = checked_table_size(r.q, r.m);
  std::mt19937_64 rng(splitmix64(r.seed));
  std::vector<double> pmf(n);
  double sum = 0.0;
  for (double& p : pmf) {
    const double u01 = double(rng() >> 11) * 0x1.0p-53;
    p = u01 + r.smoothing;
    sum += p;
  }
  for (double& p : pmf) p /= sum;
  return JointDist(f, r.m, std::move(pmf));
}

FieldMatrix family_mixing_matrix(const FamilySpec& spec) {
  if (std::holds_alternative<Example1Family>(spec)) return example1_mixing();
  if (const auto* o = std::get_if<OptSsFamily>(&spec)) return opt_ss_mixing(o->m);
  if (const auto* x = std::get_if<IndependentMixFamily>(&spec)) return x->g;
  throw std::invalid_argument("family has no mixing matrix");
}

FieldMatrix independent_directions(const FieldMatrix& g) {
  auto gi = inverse(g);
  if (!gi) throw std::invalid_argument("mixing matrix must be invertible");
  return gi->transposed();  // row i = coefficient vector of Y_i
}

}  // namespace subcomp
