#pragma once

#include <string>
#include <vector>

#include "subcomp/chain.hpp"
#include "subcomp/dist.hpp"
#include "subcomp/rates.hpp"
#include "subcomp/sim.hpp"

namespace subcomp {

/* Digit-string coefficient vectors: "1101" for q <= 9, or the comma form
 * "2,0,11" which works for every field.  Entries must be < q. */
std::vector<uint8_t> parse_digit_vector(const std::string& text, FieldOrder field,
                                        size_t expected_len);
std::string format_digit_vector(const FieldOrder& field, const std::vector<uint8_t>& v);
/* Basis rows joined by '|'; "0" denotes the zero subspace. */
std::string format_subspace(const Subspace& s);

/* Gamma columns from CLI arguments: each argument holds one column or
 * several separated by ';'. */
std::vector<std::vector<uint8_t>> parse_columns(const std::vector<std::string>& args,
                                                FieldOrder field, size_t m);

/* Inline family syntax: "example1:p1=0.1,p2=0.2", "opt_ss:m=4,p=0.11",
 * "uniform:q=2,m=3", "random:q=2,m=3,seed=7[,smoothing=1e-6]".
 * independent_mix is file-only (it needs a matrix and marginal tables). */
FamilySpec parse_family(const std::string& text);

/* Distribution documents: JSON objects with integer fields "q" and "m" plus
 * either "pmf" (array of q^m reals, indexed as on JointDist) or "family"
 * (tagged object: {"name": "example1", "p1": ..., "p2": ...} and so on).
 * The pmf must sum to 1 within 1e-9; it is renormalized only when it is off
 * by more than the JointDist construction tolerance, so emitted documents
 * reload bit-for-bit. */
JointDist distribution_from_json_text(const std::string& text);
JointDist load_distribution(const std::string& path);
std::string distribution_to_json_text(const JointDist& d);
void save_distribution(const JointDist& d, const std::string& path);

/* All numeric fields in the text and CSV renderings go through this one
 * formatter (12 significant digits), so the two forms agree byte for byte. */
std::string format_value(double v);

std::string render_chain_text(const SubspaceChain& chain);
std::string render_chain_csv(const SubspaceChain& chain);
std::string render_report_text(const RateReport& r);
std::string render_report_csv(const RateReport& r);
std::string render_sim_text(const SimResult& r, const std::string& scheme);
std::string render_sim_csv(const SimResult& r, const std::string& scheme);
std::string render_nested_text(const NestedSimResult& r);
std::string render_nested_csv(const NestedSimResult& r);

}  // namespace subcomp
