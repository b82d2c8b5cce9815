#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subcomp/chain.hpp"
#include "subcomp/dist.hpp"
#include "subcomp/subspace.hpp"

namespace subcomp {

enum class MatrixMode { RedrawPerTrial, FixedPerRun };

struct SimConfig {
  int n = 16;                        // blocklength
  std::optional<int> k;              // encoder rows; wins over rate_bits
  std::optional<double> rate_bits;   // per-encoder rate; k = ceil(n*rate/log2 q)
  std::vector<double> stage_rates_bits;  // nested: per-stage rates (cumulative stacks)
  double stage_rate_scale = 1.2;     // nested fallback: scale x analytic stage rates
  long trials = 1000;
  uint64_t seed = 1;
  MatrixMode matrix_mode = MatrixMode::RedrawPerTrial;
  uint64_t decoder_budget = uint64_t{1} << 22;  // max enumerated coset size
};

struct CosetStats {
  uint64_t min_size = 0, max_size = 0;
  double mean_size = 0.0;
};

struct SimResult {
  long trials = 0, failures = 0;
  double empirical_pe = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // Wilson 95%
  CosetStats coset;
  int n = 0, k = 0;
  double rate_bits = 0.0;  // effective k/n * log2 q
};

std::pair<double, double> wilson_interval_95(long failures, long trials);

/* Monte Carlo error probability of a common linear code: a random k x n
 * encoder A over F_q, syndromes A Z_j for the target blocks Z_j = x-block
 * pushed through row j of W's basis, and exact ML decoding over the coset
 * Z + Null(A)^dim(W).  A trial fails when some wrong coset word is at least
 * as likely as the truth (ties count as failures). */
SimResult simulate_cc(const JointDist& d, const Subspace& w, const SimConfig& cfg);

/* Same procedure with a caller-supplied encoder matrix (for studying an
 * individual code); cfg.matrix_mode is ignored. */
SimResult simulate_cc_with_matrix(const JointDist& d, const Subspace& w, const SimConfig& cfg,
                                  const FieldMatrix& a);

/* Genie-aided side information: the decoder knows the true blocks of S ⊊ W
 * and conditions its likelihood on them.  Only the sources extending S
 * need encoding, so failures are counted on T = W ∩ <e_i : i extends S>,
 * the complement of S in W supported on those sources.  With S = {0} this
 * is exactly simulate_cc. */
SimResult simulate_cc_side_info(const JointDist& d, const Subspace& w, const Subspace& s,
                                const SimConfig& cfg);

struct NestedSimResult {
  std::vector<SimResult> stages;   // stage l decoded with true side info (genie)
  SimResult end_to_end;            // pipeline: stages consume decoded values
  std::vector<int> stage_k;        // rows of the stacked encoder per stage
  std::vector<double> stage_rates_bits;  // requested per-stage rates
  size_t target_link = 0;          // decoded chain subspace index j0
};

/* Nested-code simulation of the chain scheme: per-stage encoders B_l stack
 * into A^(l) = [B_1; ...; B_l]; stage l recovers the complement of W^(l-1)
 * in W^(l) given the side subspace W^(l-1).  When a stage succeeds its
 * decoded block equals the truth, so the pipeline run coincides with the
 * genie runs up to the first stage failure; an end-to-end trial fails
 * exactly when some stage fails. */
NestedSimResult simulate_nested(const JointDist& d, const Subspace& w, const SimConfig& cfg,
                                const ChainOptions& copts = {});

struct SweepRow {
  std::string scheme;
  int n, k;
  double rate_bits;  // requested grid rate
  long trials, failures;
  double pe, ci_lo, ci_hi;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  /* Fraction of adjacent (rate-ascending, same n) pairs with non-increasing
   * empirical error; 1.0 means a perfectly monotone threshold plot. */
  double monotone_fraction = 1.0;
};

/* Grid of simulate_cc runs; scheme currently must be "cc".  Rates above
 * log2 q clamp k to n with a warning on stderr. */
SweepTable rate_sweep(const JointDist& d, const Subspace& w, const std::string& scheme,
                      const std::vector<int>& n_list, const std::vector<double>& rate_grid,
                      const SimConfig& base);

std::string sweep_csv(const SweepTable& table);

/* Empirical P(A Delta = 0) over uniform k x n matrices A, for checking the
 * q^(-k * rank(Delta)) annihilation law. */
double empirical_annihilation_probability(FieldOrder field, int k, int n,
                                          const FieldMatrix& delta, long matrices, uint64_t seed);

/* Deterministic n x s matrix of exactly the requested rank. */
FieldMatrix random_matrix_of_rank(FieldOrder field, size_t rows, size_t cols, size_t rank,
                                  uint64_t seed);

}  // namespace subcomp
