#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subcomp/field.hpp"
#include "subcomp/subspace.hpp"

namespace subcomp {

/* Joint law of m source symbols over F_q, stored densely.  Outcomes are
 * indexed by x = sum_i x_i q^(m-1-i), i.e. the first source is the most
 * significant digit.  All entropies in this project are in bits. */
class JointDist {
public:
  JointDist(FieldOrder field, size_t m, std::vector<double> pmf);

  const FieldOrder& field() const { return field_; }
  size_t source_count() const { return m_; }
  size_t size() const { return pmf_.size(); }  // q^m
  const std::vector<double>& pmf() const { return pmf_; }
  double prob(size_t index) const { return pmf_[index]; }

  size_t index_of(const std::vector<uint8_t>& x) const;
  std::vector<uint8_t> outcome_of(size_t index) const;

private:
  FieldOrder field_;
  size_t m_;
  std::vector<double> pmf_;
};

double shannon_entropy_bits(const std::vector<double>& pmf);

/* Law of Z = X * gamma for gamma m x k of full column rank (columns are the
 * coefficient vectors of the k linear combinations). */
JointDist pushforward(const JointDist& d, const FieldMatrix& gamma);

/* H(U): entropy of the joint law of any basis of U; basis-independent. */
double subspace_entropy(const JointDist& d, const Subspace& u);
/* H(U2 | U1) = H(U1 + U2) - H(U1). */
double cond_entropy(const JointDist& d, const Subspace& u2, const Subspace& u1);
/* H_N(U2 | U1) = (H(U2 + U1) - H(U1)) / (dim(U2 + U1) - dim U1);
 * requires U2 not contained in U1. */
double norm_cond_entropy(const JointDist& d, const Subspace& u2, const Subspace& u1);
/* H_N(U) = H(U) / dim U for nonzero U. */
double norm_entropy(const JointDist& d, const Subspace& u);

/* Returns a monic direction a with P(a·X = 0) = 1 when the sources are
 * linearly degenerate, nullopt otherwise (the certificate of validity). */
std::optional<std::vector<uint8_t>> nondegeneracy_violation(const JointDist& d);

/* Named source families.  The mixing-matrix families follow the row
 * convention X = Y * G with the Y_i independent. */
struct Example1Family {   // q=2, m=4; Y1,Y2~Bern(p1), Y3~Bern(p2), Y4~Bern(1/2)
  double p1, p2;
};
struct OptSsFamily {      // q=2; X_i = Y_1+...+Y_i, Y odd ~ Bern(1/2), even ~ Bern(p)
  size_t m;
  double p;
};
struct IndependentMixFamily {
  FieldMatrix g;                               // invertible m x m
  std::vector<std::vector<double>> marginals;  // one pmf of length q per Y_i
};
struct UniformFamily {
  unsigned q;
  size_t m;
};
struct RandomFamily {     // strictly positive pmf from a seeded generator
  unsigned q;
  size_t m;
  uint64_t seed;
  double smoothing = 1e-6;
};
using FamilySpec =
    std::variant<Example1Family, OptSsFamily, IndependentMixFamily, UniformFamily, RandomFamily>;

JointDist make_family(const FamilySpec& spec);

/* The mixing matrix G (X = Y G) of a mixing-type family; throws for families
 * without one.  Row i of inverse(G)^T is the coefficient vector of Y_i. */
FieldMatrix family_mixing_matrix(const FamilySpec& spec);

/* Coefficient vectors of the independent components: row i represents Y_i as
 * a linear combination of the X's. */
FieldMatrix independent_directions(const FieldMatrix& g);

}  // namespace subcomp
