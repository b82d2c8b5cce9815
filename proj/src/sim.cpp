#include "subcomp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

namespace subcomp {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/* Per-trial generator: an independent deterministic stream per (seed, id). */
// Per-trial streams use the trial index directly; auxiliary draws (fixed
// encoder matrices, rank-conditioned sampling) live in a disjoint id domain so
// they can never alias a trial stream.
constexpr uint64_t kMatrixStream = 0x8000000000000001ull;
constexpr uint64_t kRankStream = 0x8000000000000002ull;

std::mt19937_64 stream_rng(uint64_t seed, uint64_t id) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(id + 0x1234567)));
}

uint8_t uniform_residue(std::mt19937_64& rng, unsigned q) {
  /* Rejection keeps the draw exactly uniform and platform-stable. */
  const uint64_t t = (UINT64_MAX % q + 1) % q;  // 2^64 mod q
  const uint64_t max_ok = UINT64_MAX - t;
  uint64_t r = rng();
  while (r > max_ok) r = rng();
  return static_cast<uint8_t>(r % q);
}

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

void fill_uniform_matrix(FieldMatrix& a, std::mt19937_64& rng) {
  const unsigned q = a.field().q();
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) a.at(i, j) = uniform_residue(rng, q);
}

uint64_t saturating_pow(uint64_t base, uint64_t exp, uint64_t cap) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

/* Joint (side, target) log-likelihood table in fixed point.  With |log2 p|
 * below 1075 for any positive double, each entry fits in 2^49, so sums of up
 * to 2^13 block positions stay exact in int64; likelihood ratios below 2^-38
 * quantize into honest ties. */
constexpr double kLogScale = 274877906944.0;  // 2^38
constexpr int kMaxBlocklength = 8192;

struct DecodeTables {
  size_t s_target = 0, s_side = 0;
  size_t q_target = 1;             // q^s_target
  std::vector<int64_t> log_lut;    // size q^(s_side+s_target); 0 for impossible
  std::vector<uint8_t> zero_flag;  // 1 where the joint symbol has probability 0
  FieldMatrix target_rows, side_rows;
};

DecodeTables build_tables(const JointDist& d, const Subspace& target, const Subspace& side) {
  DecodeTables t{.s_target = target.dim(),
                 .s_side = side.dim(),
                 .q_target = 1,
                 .log_lut = {},
                 .zero_flag = {},
                 .target_rows = target.basis(),
                 .side_rows = side.basis()};
  const unsigned q = d.field().q();
  for (size_t j = 0; j < t.s_target; ++j) t.q_target *= q;
  const FieldMatrix stacked = side.basis().vstack(target.basis());
  const JointDist joint = pushforward(d, stacked.transposed());
  t.log_lut.resize(joint.size());
  t.zero_flag.resize(joint.size());
  for (size_t i = 0; i < joint.size(); ++i) {
    const double p = joint.prob(i);
    t.zero_flag[i] = p <= 0.0;
    t.log_lut[i] = p <= 0.0 ? 0 : llround(std::log2(p) * kLogScale);
  }
  return t;
}

struct TrialOutcome {
  bool failure = false;
  uint64_t coset_size = 1;
};

/* Workspace reused across trials to keep the hot loop allocation-free. */
struct DecodeScratch {
  std::vector<uint8_t> digits;      // s_target x n current candidate symbols
  std::vector<int32_t> tidx;        // per-position target index
  std::vector<int64_t> base;        // per-position LUT offset from side info
  std::vector<std::vector<std::pair<int32_t, uint8_t>>> supports;
  std::vector<uint8_t> gray_a;
  std::vector<int8_t> gray_dir;
  std::vector<int32_t> gray_focus;
};

/* Exact ML decoding over the coset truth + Null(A)^s_target.  The walk is a
 * loopless reflected mixed-radix Gray code over the nullspace coefficients,
 * so each step touches one nullspace vector's support.  Returns failure when
 * any wrong word is at least as likely as the truth. */
TrialOutcome decode_trial(const DecodeTables& tables, const FieldMatrix& a,
                          const std::vector<int64_t>& side_base,
                          const std::vector<uint8_t>& truth_digits, uint64_t budget,
                          DecodeScratch& ws) {
  const unsigned q = a.field().q();
  const size_t n = a.cols();
  const size_t s = tables.s_target;

  const FieldMatrix ns = right_nullspace(a);
  const size_t dnull = ns.rows();
  /* The decoding coset is exactly truth + Null(A)^s: verify the computed
   * nullspace annihilates under A before trusting the enumeration. */
  for (size_t c = 0; c < dnull; ++c) {
    const std::vector<uint8_t> v = ns.row(c);
    for (size_t i = 0; i < a.rows(); ++i) {
      unsigned acc = 0;
      for (size_t j = 0; j < n; ++j) acc += a.at(i, j) * v[j];
      if (acc % q != 0) throw consistency_error("nullspace basis fails the syndrome check");
    }
  }

  TrialOutcome out;
  out.coset_size = saturating_pow(q, dnull * s, UINT64_MAX / 2);
  const uint64_t hard_cap = budget > UINT64_MAX / 64 ? UINT64_MAX : 64 * budget;
  if (out.coset_size > hard_cap)
    throw budget_error("decoder budget exceeded: coset size beyond 64x the configured limit");

  /* Position-wise state: target index and total fixed-point log-likelihood. */
  ws.tidx.assign(n, 0);
  int64_t level = 0;
  int64_t bad = 0;
  std::vector<int32_t> pw(s);
  for (size_t j = 0; j < s; ++j) {
    int32_t p = 1;
    for (size_t l = j + 1; l < s; ++l) p *= int32_t(q);
    pw[j] = p;
  }
  for (size_t t = 0; t < n; ++t) {
    int32_t idx = 0;
    for (size_t j = 0; j < s; ++j) idx += pw[j] * truth_digits[j * n + t];
    ws.tidx[t] = idx;
    const size_t full = size_t(side_base[t]) + size_t(idx);
    if (tables.zero_flag[full]) throw consistency_error("sampled truth has zero likelihood");
    level += tables.log_lut[full];
  }
  const int64_t truth_level = level;

  ws.supports.resize(dnull);
  for (size_t c = 0; c < dnull; ++c) {
    ws.supports[c].clear();
    for (size_t t = 0; t < n; ++t)
      if (ns.at(c, t)) ws.supports[c].emplace_back(int32_t(t), ns.at(c, t));
  }

  const size_t ndigits = dnull * s;
  if (ndigits == 0) return out;  // singleton coset: always correct
  ws.gray_a.assign(ndigits, 0);
  ws.gray_dir.assign(ndigits, 1);
  ws.gray_focus.resize(ndigits + 1);
  for (size_t i = 0; i <= ndigits; ++i) ws.gray_focus[i] = int32_t(i);
  ws.digits = truth_digits;

  while (true) {
    const int32_t u = ws.gray_focus[0];
    ws.gray_focus[0] = 0;
    if (size_t(u) == ndigits) break;  // walked the whole coset, truth stays best
    const int8_t step = ws.gray_dir[u];
    ws.gray_a[u] += step;
    if (ws.gray_a[u] == 0 || ws.gray_a[u] == uint8_t(q - 1)) {
      ws.gray_dir[u] = -ws.gray_dir[u];
      ws.gray_focus[u] = ws.gray_focus[u + 1];
      ws.gray_focus[u + 1] = u + 1;
    }
    const size_t block = size_t(u) / dnull;   // which target coordinate moves
    const size_t vec = size_t(u) % dnull;     // along which nullspace vector
    const int32_t w = pw[block];
    uint8_t* digit_row = ws.digits.data() + block * n;
    for (const auto& [t, val] : ws.supports[vec]) {
      const uint8_t delta = step > 0 ? val : uint8_t(q - val);
      const uint8_t oldd = digit_row[t];
      const uint8_t newd = uint8_t((oldd + delta) % q);
      digit_row[t] = newd;
      const int32_t oldidx = ws.tidx[t];
      const int32_t newidx = oldidx + w * (int32_t(newd) - int32_t(oldd));
      ws.tidx[t] = newidx;
      const size_t oldfull = size_t(side_base[t]) + size_t(oldidx);
      const size_t newfull = size_t(side_base[t]) + size_t(newidx);
      level += tables.log_lut[newfull] - tables.log_lut[oldfull];
      bad += int64_t(tables.zero_flag[newfull]) - int64_t(tables.zero_flag[oldfull]);
    }
    if (bad == 0 && level >= truth_level) {
      out.failure = true;  // a wrong word ties or beats the truth
      break;
    }
  }
  return out;
}

int resolve_k(const SimConfig& cfg, unsigned q, bool warn_clamp) {
  int k;
  if (cfg.k) {
    k = *cfg.k;
  } else if (cfg.rate_bits) {
    k = int(std::ceil(double(cfg.n) * *cfg.rate_bits / std::log2(double(q)) - 1e-12));
  } else {
    throw std::invalid_argument("simulation config needs k or rate_bits");
  }
  if (k > cfg.n) {
    if (warn_clamp)
      std::fprintf(stderr, "warning: requested rate exceeds log2(q); clamping k to n=%d\n", cfg.n);
    k = cfg.n;
  }
  if (k < 0) throw std::invalid_argument("encoder rows k must be nonnegative");
  return k;
}

void validate_common(const JointDist& d, const Subspace& w, const SimConfig& cfg) {
  if (w.field() != d.field() || w.ambient_dim() != d.source_count())
    throw std::invalid_argument("subspace/distribution ambient mismatch");
  if (w.is_zero()) throw std::invalid_argument("target subspace must be nonzero");
  if (cfg.n < 1 || cfg.n > kMaxBlocklength)
    throw std::invalid_argument("blocklength n out of range");
  if (cfg.trials < 1) throw std::invalid_argument("need at least one trial");
}

std::vector<double> cumulative(const JointDist& d) {
  std::vector<double> cum(d.size());
  double acc = 0.0;
  for (size_t i = 0; i < d.size(); ++i) {
    acc += d.prob(i);
    cum[i] = acc;
  }
  cum.back() = 1.0;
  return cum;
}

size_t sample_index(const std::vector<double>& cum, double u) {
  return size_t(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
}

SimResult finish_result(SimResult r) {
  r.empirical_pe = double(r.failures) / double(r.trials);
  std::tie(r.ci_lo, r.ci_hi) = wilson_interval_95(r.failures, r.trials);
  return r;
}

/* Shared trial driver for the common-code and side-information schemes.
 * target and side must intersect trivially; the decoder conditions on the
 * true side blocks. */
SimResult run_linear_sim(const JointDist& d, const Subspace& target, const Subspace& side,
                         const SimConfig& cfg, const FieldMatrix* forced_matrix) {
  validate_common(d, target, cfg);
  const unsigned q = d.field().q();
  const size_t n = size_t(cfg.n);
  const int k = forced_matrix ? int(forced_matrix->rows()) : resolve_k(cfg, q, true);
  if (forced_matrix && forced_matrix->cols() != n)
    throw std::invalid_argument("encoder matrix must have n columns");

  const uint64_t projected = saturating_pow(q, uint64_t(cfg.n - k) * target.dim(), UINT64_MAX / 2);
  if (projected > cfg.decoder_budget)
    throw budget_error("decoder budget exceeded: q^((n-k)*s) = " + std::to_string(projected) +
                       " > " + std::to_string(cfg.decoder_budget));

  const DecodeTables tables = build_tables(d, target, side);
  const std::vector<double> cum = cumulative(d);
  const size_t m = d.source_count();

  FieldMatrix a(d.field(), size_t(k), n);
  if (forced_matrix) {
    a = *forced_matrix;
  } else if (cfg.matrix_mode == MatrixMode::FixedPerRun) {
    std::mt19937_64 mrng = stream_rng(cfg.seed, kMatrixStream);
    fill_uniform_matrix(a, mrng);
  }

  SimResult res;
  res.trials = cfg.trials;
  res.n = cfg.n;
  res.k = k;
  res.rate_bits = double(k) / double(cfg.n) * std::log2(double(q));

  DecodeScratch ws;
  std::vector<uint8_t> truth(tables.s_target * n);
  std::vector<int64_t> side_base(n);
  std::vector<uint8_t> x(m);
  uint64_t coset_min = UINT64_MAX, coset_max = 0;
  double coset_sum = 0.0;

  for (long trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng = stream_rng(cfg.seed, uint64_t(trial));
    for (size_t t = 0; t < n; ++t) {
      const size_t idx = sample_index(cum, uniform01(rng));
      size_t rem = idx;
      for (size_t i = m; i-- > 0;) {
        x[i] = static_cast<uint8_t>(rem % q);
        rem /= q;
      }
      int64_t sidx = 0;
      for (size_t i = 0; i < tables.s_side; ++i) {
        unsigned acc = 0;
        for (size_t j = 0; j < m; ++j) acc += tables.side_rows.at(i, j) * x[j];
        sidx = sidx * q + acc % q;
      }
      side_base[t] = sidx * int64_t(tables.q_target);
      for (size_t j = 0; j < tables.s_target; ++j) {
        unsigned acc = 0;
        for (size_t i = 0; i < m; ++i) acc += tables.target_rows.at(j, i) * x[i];
        truth[j * n + t] = static_cast<uint8_t>(acc % q);
      }
    }
    if (!forced_matrix && cfg.matrix_mode == MatrixMode::RedrawPerTrial)
      fill_uniform_matrix(a, rng);

    const TrialOutcome o = decode_trial(tables, a, side_base, truth, cfg.decoder_budget, ws);
    if (o.failure) ++res.failures;
    coset_min = std::min(coset_min, o.coset_size);
    coset_max = std::max(coset_max, o.coset_size);
    coset_sum += double(o.coset_size);
  }
  res.coset = CosetStats{coset_min, coset_max, coset_sum / double(cfg.trials)};
  return finish_result(res);
}

/* Complement of S in W supported on the coordinate-extension sources of S;
 * its generators are functions of those sources alone. */
Subspace extension_complement(const Subspace& w, const Subspace& s) {
  const Subspace ce = coordinate_subspace(
      s.field(), s.ambient_dim(), coordinate_extension_indices(s));
  Subspace t = subspace_intersect(w, ce);
  if (t.dim() != w.dim() - s.dim() || !subspace_intersect(t, s).is_zero())
    throw consistency_error("extension complement failed the direct-sum check");
  return t;
}

}  // namespace

std::pair<double, double> wilson_interval_95(long failures, long trials) {
  if (trials < 1) throw std::invalid_argument("wilson interval needs trials >= 1");
  const double z = 1.959963984540054;  // 97.5th normal quantile
  const double nn = double(trials);
  const double phat = double(failures) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SimResult simulate_cc(const JointDist& d, const Subspace& w, const SimConfig& cfg) {
  return run_linear_sim(d, w, Subspace::zero(d.field(), d.source_count()), cfg, nullptr);
}

SimResult simulate_cc_with_matrix(const JointDist& d, const Subspace& w, const SimConfig& cfg,
                                  const FieldMatrix& a) {
  return run_linear_sim(d, w, Subspace::zero(d.field(), d.source_count()), cfg, &a);
}

SimResult simulate_cc_side_info(const JointDist& d, const Subspace& w, const Subspace& s,
                                const SimConfig& cfg) {
  require_same_space(w, s);
  if (!w.contains(s)) throw std::invalid_argument("side information must satisfy S ⊆ W");
  if (s == w) throw std::invalid_argument("side information already determines the target");
  if (s.is_zero()) return simulate_cc(d, w, cfg);
  return run_linear_sim(d, extension_complement(w, s), s, cfg, nullptr);
}

NestedSimResult simulate_nested(const JointDist& d, const Subspace& w, const SimConfig& cfg,
                                const ChainOptions& copts) {
  validate_common(d, w, cfg);
  const unsigned q = d.field().q();
  const size_t n = size_t(cfg.n);
  const size_t m = d.source_count();

  SubspaceEntropyCache cache(d);
  const SubspaceChain chain = decompose(cache, copts);
  const size_t j0 = chain.first_link_containing(w);

  NestedSimResult out;
  out.target_link = j0;
  out.stage_rates_bits.resize(j0);
  if (!cfg.stage_rates_bits.empty()) {
    if (cfg.stage_rates_bits.size() != j0)
      throw std::invalid_argument("need one stage rate per decoded chain link");
    out.stage_rates_bits = cfg.stage_rates_bits;
  } else {
    for (size_t l = 0; l < j0; ++l)
      out.stage_rates_bits[l] = cfg.stage_rate_scale * chain.links[l].cond_norm_entropy_bits;
  }

  /* Cumulative row counts of the stacked encoders; never decreasing. */
  out.stage_k.resize(j0);
  const double logq = std::log2(double(q));
  int prev_k = 0;
  for (size_t l = 0; l < j0; ++l) {
    int k = int(std::ceil(double(cfg.n) * out.stage_rates_bits[l] / logq - 1e-12));
    if (k > cfg.n) {
      std::fprintf(stderr, "warning: stage %zu rate exceeds log2(q); clamping k to n\n", l + 1);
      k = cfg.n;
    }
    k = std::max(k, prev_k);
    out.stage_k[l] = k;
    prev_k = k;
  }

  struct StageSetup {
    DecodeTables tables;
    Subspace target, side;
  };
  std::vector<StageSetup> stages;
  Subspace prev = Subspace::zero(d.field(), m);
  for (size_t l = 1; l <= j0; ++l) {
    const Subspace target = extension_complement(chain.link(l), prev);
    const uint64_t projected =
        saturating_pow(q, uint64_t(cfg.n - out.stage_k[l - 1]) * target.dim(), UINT64_MAX / 2);
    if (projected > cfg.decoder_budget)
      throw budget_error("decoder budget exceeded at stage " + std::to_string(l));
    stages.push_back(StageSetup{build_tables(d, target, prev), target, prev});
    prev = chain.link(l);
  }

  const std::vector<double> cum = cumulative(d);
  const int total_k = out.stage_k.back();
  FieldMatrix stacked(d.field(), size_t(total_k), n);
  if (cfg.matrix_mode == MatrixMode::FixedPerRun) {
    std::mt19937_64 mrng = stream_rng(cfg.seed, kMatrixStream);
    fill_uniform_matrix(stacked, mrng);
  }

  std::vector<long> stage_failures(j0, 0);
  std::vector<uint64_t> coset_min(j0, UINT64_MAX), coset_max(j0, 0);
  std::vector<double> coset_sum(j0, 0.0);
  long e2e_failures = 0;

  DecodeScratch ws;
  std::vector<uint8_t> x(m);
  std::vector<std::vector<uint8_t>> xs(n, std::vector<uint8_t>(m));
  std::vector<uint8_t> truth;
  std::vector<int64_t> side_base(n);

  for (long trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng = stream_rng(cfg.seed, uint64_t(trial));
    for (size_t t = 0; t < n; ++t) {
      const size_t idx = sample_index(cum, uniform01(rng));
      size_t rem = idx;
      for (size_t i = m; i-- > 0;) {
        xs[t][i] = static_cast<uint8_t>(rem % q);
        rem /= q;
      }
    }
    if (cfg.matrix_mode == MatrixMode::RedrawPerTrial) fill_uniform_matrix(stacked, rng);

    bool trial_failed = false;
    for (size_t l = 0; l < j0; ++l) {
      const StageSetup& st = stages[l];
      const size_t sT = st.tables.s_target;
      truth.assign(sT * n, 0);
      for (size_t t = 0; t < n; ++t) {
        int64_t sidx = 0;
        for (size_t i = 0; i < st.tables.s_side; ++i) {
          unsigned acc = 0;
          for (size_t j = 0; j < m; ++j) acc += st.tables.side_rows.at(i, j) * xs[t][j];
          sidx = sidx * q + acc % q;
        }
        side_base[t] = sidx * int64_t(st.tables.q_target);
        for (size_t j = 0; j < sT; ++j) {
          unsigned acc = 0;
          for (size_t i = 0; i < m; ++i) acc += st.tables.target_rows.at(j, i) * xs[t][i];
          truth[j * n + t] = static_cast<uint8_t>(acc % q);
        }
      }
      FieldMatrix a(d.field(), size_t(out.stage_k[l]), n);
      for (size_t i = 0; i < size_t(out.stage_k[l]); ++i)
        for (size_t j = 0; j < n; ++j) a.at(i, j) = stacked.at(i, j);
      const TrialOutcome o = decode_trial(st.tables, a, side_base, truth, cfg.decoder_budget, ws);
      if (o.failure) {
        ++stage_failures[l];
        trial_failed = true;
      }
      coset_min[l] = std::min(coset_min[l], o.coset_size);
      coset_max[l] = std::max(coset_max[l], o.coset_size);
      coset_sum[l] += double(o.coset_size);
    }
    if (trial_failed) ++e2e_failures;
  }

  for (size_t l = 0; l < j0; ++l) {
    SimResult r;
    r.trials = cfg.trials;
    r.failures = stage_failures[l];
    r.n = cfg.n;
    r.k = out.stage_k[l];
    r.rate_bits = double(out.stage_k[l]) / double(cfg.n) * logq;
    r.coset = CosetStats{coset_min[l], coset_max[l], coset_sum[l] / double(cfg.trials)};
    out.stages.push_back(finish_result(r));
  }
  long stage_total = 0;
  for (long f : stage_failures) stage_total += f;
  if (e2e_failures > stage_total)
    throw consistency_error("end-to-end failures exceeded the union bound over stages");
  SimResult e2e;
  e2e.trials = cfg.trials;
  e2e.failures = e2e_failures;
  e2e.n = cfg.n;
  e2e.k = total_k;
  e2e.rate_bits = double(total_k) / double(cfg.n) * logq;
  e2e.coset = CosetStats{0, 0, 0.0};
  out.end_to_end = finish_result(e2e);
  return out;
}

SweepTable rate_sweep(const JointDist& d, const Subspace& w, const std::string& scheme,
                      const std::vector<int>& n_list, const std::vector<double>& rate_grid,
                      const SimConfig& base) {
  if (scheme != "cc")
    throw std::invalid_argument("rate_sweep supports the 'cc' scheme");
  if (n_list.empty() || rate_grid.empty())
    throw std::invalid_argument("rate_sweep needs at least one n and one rate");
  SweepTable table;
  for (int n : n_list) {
    for (double rate : rate_grid) {
      SimConfig cfg = base;
      cfg.n = n;
      cfg.k.reset();
      cfg.rate_bits = rate;
      const SimResult r = simulate_cc(d, w, cfg);
      table.rows.push_back(SweepRow{scheme, n, r.k, rate, r.trials, r.failures, r.empirical_pe,
                                    r.ci_lo, r.ci_hi});
    }
  }
  /* Monotone-trend summary over rate-ascending neighbours at fixed n. */
  long pairs = 0, good = 0;
  for (int n : n_list) {
    std::vector<const SweepRow*> rows;
    for (const auto& row : table.rows)
      if (row.n == n) rows.push_back(&row);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow* a, const SweepRow* b) { return a->rate_bits < b->rate_bits; });
    for (size_t i = 1; i < rows.size(); ++i) {
      ++pairs;
      if (rows[i]->pe <= rows[i - 1]->pe) ++good;
    }
  }
  table.monotone_fraction = pairs == 0 ? 1.0 : double(good) / double(pairs);
  return table;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "scheme,n,k,rate_bits,trials,failures,pe,ci_lo,ci_hi\n";
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.12g,%ld,%ld,%.12g,%.12g,%.12g\n", r.scheme.c_str(),
                  r.n, r.k, r.rate_bits, r.trials, r.failures, r.pe, r.ci_lo, r.ci_hi);
    out += buf;
  }
  return out;
}

double empirical_annihilation_probability(FieldOrder field, int k, int n,
                                          const FieldMatrix& delta, long matrices, uint64_t seed) {
  if (delta.rows() != size_t(n)) throw std::invalid_argument("delta must have n rows");
  if (k < 1 || matrices < 1) throw std::invalid_argument("need k >= 1 and matrices >= 1");
  const unsigned q = field.q();
  long hits = 0;
  std::vector<uint8_t> row(static_cast<size_t>(n));
  for (long idx = 0; idx < matrices; ++idx) {
    std::mt19937_64 rng = stream_rng(seed, uint64_t(idx));
    bool annihilated = true;
    for (int i = 0; i < k && annihilated; ++i) {
      for (int j = 0; j < n; ++j) row[size_t(j)] = uniform_residue(rng, q);
      for (size_t c = 0; c < delta.cols(); ++c) {
        unsigned acc = 0;
        for (int j = 0; j < n; ++j) acc += row[size_t(j)] * delta.at(size_t(j), c);
        if (acc % q != 0) {
          annihilated = false;
          break;
        }
      }
    }
    if (annihilated) ++hits;
  }
  return double(hits) / double(matrices);
}

FieldMatrix random_matrix_of_rank(FieldOrder field, size_t rows, size_t cols, size_t rank,
                                  uint64_t seed) {
  if (rank > std::min(rows, cols)) throw std::invalid_argument("rank exceeds matrix shape");
  std::mt19937_64 rng = stream_rng(seed, kRankStream);
  if (rank == 0) return FieldMatrix(field, rows, cols);
  FieldMatrix left(field, rows, rank), right(field, rank, cols);
  do {
    fill_uniform_matrix(left, rng);
  } while (rank_of(left) != rank);
  do {
    fill_uniform_matrix(right, rng);
  } while (rank_of(right) != rank);
  return left.times(right);
}

}  // namespace subcomp
