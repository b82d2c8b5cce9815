#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "subcomp/io.hpp"
#include "test_util.hpp"

using namespace subcomp;

TEST_CASE("digit vectors: compact and comma syntax") {
  const FieldOrder f2(2), f3(3), f11(11);
  CHECK(parse_digit_vector("1100", f2, 4) == std::vector<uint8_t>{1, 1, 0, 0});
  CHECK(parse_digit_vector("2,0,1", f3, 3) == std::vector<uint8_t>{2, 0, 1});
  CHECK(parse_digit_vector("10,0,3", f11, 3) == std::vector<uint8_t>{10, 0, 3});
  CHECK(parse_digit_vector("201", f3, 3) == std::vector<uint8_t>{2, 0, 1});

  CHECK_THROWS_AS(parse_digit_vector("1121", f2, 4), std::invalid_argument);   // digit >= q
  CHECK_THROWS_AS(parse_digit_vector("110", f2, 4), std::invalid_argument);    // length
  CHECK_THROWS_AS(parse_digit_vector("", f2, 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_digit_vector("1,x", f2, 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_digit_vector("11,1", f11, 2), std::invalid_argument);  // 11 >= q
  CHECK_THROWS_AS(parse_digit_vector("1a0", f2, 3), std::invalid_argument);

  CHECK(format_digit_vector(f2, {1, 1, 0, 0}) == "1100");
  CHECK(format_digit_vector(f11, {10, 0, 3}) == "10,0,3");
  CHECK(parse_digit_vector(format_digit_vector(f11, {10, 0, 3}), f11, 3) ==
        std::vector<uint8_t>{10, 0, 3});
}

TEST_CASE("subspace rendering uses canonical rows") {
  const FieldOrder f2(2);
  const auto w = Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}});
  CHECK(format_subspace(w) == "1010|0110");
  CHECK(format_subspace(Subspace::zero(f2, 3)) == "0");
}

TEST_CASE("column lists split on semicolons and repeat flags") {
  const FieldOrder f2(2);
  const auto cols = parse_columns({"1100;0110", "0011"}, f2, 4);
  REQUIRE(cols.size() == 3);
  CHECK(cols[0] == std::vector<uint8_t>{1, 1, 0, 0});
  CHECK(cols[1] == std::vector<uint8_t>{0, 1, 1, 0});
  CHECK(cols[2] == std::vector<uint8_t>{0, 0, 1, 1});
  CHECK_THROWS_AS(parse_columns({}, f2, 4), std::invalid_argument);
}

TEST_CASE("inline family strings") {
  const JointDist ex = make_family(parse_family("example1:p1=0.1,p2=0.2"));
  CHECK(ex.source_count() == 4);
  CHECK(ex.pmf() == make_family(Example1Family{0.1, 0.2}).pmf());

  const JointDist ss = make_family(parse_family("opt_ss:m=4,p=0.11"));
  CHECK(ss.pmf() == make_family(OptSsFamily{4, 0.11}).pmf());

  const JointDist un = make_family(parse_family("uniform:q=3,m=2"));
  CHECK(un.field().q() == 3);

  const JointDist r1 = make_family(parse_family("random:q=2,m=3,seed=7"));
  const JointDist r2 = make_family(parse_family("random:q=2,m=3,seed=7,smoothing=1e-6"));
  CHECK(r1.pmf() == r2.pmf());

  CHECK_THROWS_AS(parse_family("nosuch:p=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("example1:p1=0.1"), std::invalid_argument);       // missing p2
  CHECK_THROWS_AS(parse_family("example1:p1=0.1,p1=0.2"), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(parse_family("example1:p1=0.1,p2=0.2,x=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("uniform:q=2,m=3x"), std::invalid_argument);     // trailing junk
  CHECK_THROWS_AS(parse_family("opt_ss:m=4 p=0.11"), std::invalid_argument);
}

TEST_CASE("distribution documents round-trip bit for bit") {
  for (const char* family : {"example1:p1=0.1,p2=0.2", "opt_ss:m=4,p=0.11",
                             "random:q=3,m=2,seed=12"}) {
    const JointDist d = make_family(parse_family(family));
    const JointDist back = distribution_from_json_text(distribution_to_json_text(d));
    CHECK(back.field().q() == d.field().q());
    CHECK(back.source_count() == d.source_count());
    CHECK(back.pmf() == d.pmf());  // exact double equality
  }
}

TEST_CASE("documents with tagged families resolve like the library constructors") {
  const JointDist a = distribution_from_json_text(
      R"({"q":2,"m":4,"family":{"name":"example1","p1":0.1,"p2":0.2}})");
  CHECK(a.pmf() == make_family(Example1Family{0.1, 0.2}).pmf());

  const JointDist b = distribution_from_json_text(
      R"({"q":2,"m":4,"family":{"name":"opt_ss","p":0.11}})");
  CHECK(b.pmf() == make_family(OptSsFamily{4, 0.11}).pmf());

  const JointDist c = distribution_from_json_text(
      R"({"q":3,"m":2,"family":{"name":"uniform"}})");
  CHECK(c.pmf() == make_family(UniformFamily{3, 2}).pmf());

  const JointDist e = distribution_from_json_text(
      R"({"q":2,"m":2,"family":{"name":"independent_mix",
           "g":[[1,1],[0,1]],"marginals":[[0.5,0.5],[0.89,0.11]]}})");
  CHECK(e.pmf() == make_family(OptSsFamily{2, 0.11}).pmf());
}

TEST_CASE("malformed documents are rejected with specific messages") {
  try {
    distribution_from_json_text(R"({"q":2,"m":1,"pmf":[0.5,0.4]})");
    FAIL("expected a normalization failure");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("normalization") != std::string::npos);
  }
  CHECK_THROWS_AS(distribution_from_json_text(R"({"q":2,"m":2,"pmf":[0.5,0.5]})"),
                  std::invalid_argument);  // wrong length
  CHECK_THROWS_AS(distribution_from_json_text(R"({"q":2,"m":1,"pmf":[1.5,-0.5]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json_text(R"({"q":2,"m":1})"), std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json_text(
                      R"({"q":2,"m":1,"pmf":[0.5,0.5],"family":{"name":"uniform"}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json_text("not json at all"), std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json_text(R"({"m":1,"pmf":[0.5,0.5]})"),
                  std::invalid_argument);  // q missing
  CHECK_THROWS_AS(distribution_from_json_text(R"({"q":4,"m":1,"pmf":[0.5,0.5]})"),
                  std::invalid_argument);  // composite q
  CHECK_THROWS_AS(distribution_from_json_text(
                      R"({"q":2,"m":3,"family":{"name":"example1","p1":0.1,"p2":0.2}})"),
                  std::invalid_argument);  // shape mismatch
  CHECK_THROWS_AS(distribution_from_json_text(R"({"q":2,"m":1,"family":{"name":"zzz"}})"),
                  std::invalid_argument);
}

TEST_CASE("near-one sums load through renormalization") {
  // Off by 4e-10: inside the 1e-9 load tolerance, outside the construction one.
  const JointDist d =
      distribution_from_json_text(R"({"q":2,"m":1,"pmf":[0.5000000002,0.5000000002]})");
  double sum = 0.0;
  for (double p : d.pmf()) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("file save and load round trip") {
  const std::string path = "io_roundtrip_tmp.json";
  const JointDist d = make_family(Example1Family{0.3, 0.4});
  save_distribution(d, path);
  const JointDist back = load_distribution(path);
  CHECK(back.pmf() == d.pmf());
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_distribution("definitely_missing_file.json"), std::invalid_argument);
}

TEST_CASE("text and CSV renderings share their numeric fields") {
  const JointDist d = make_family(Example1Family{0.1, 0.2});
  const SubspaceChain chain = decompose(d);
  const std::string ct = render_chain_text(chain);
  const std::string cc = render_chain_csv(chain);
  CHECK(cc.rfind("j,dim,basis,hn_bits\n", 0) == 0);
  for (const ChainLink& l : chain.links) {
    const std::string v = format_value(l.cond_norm_entropy_bits);
    CHECK(ct.find(v) != std::string::npos);
    CHECK(cc.find(v) != std::string::npos);
    CHECK(cc.find("\"" + format_subspace(l.subspace) + "\"") != std::string::npos);
  }

  const RateReport r = rate_report(d, TargetSpec::from_columns(d, {{1, 1, 1, 1}}));
  const std::string rt = render_report_text(r);
  const std::string rc = render_report_csv(r);
  for (double value : {r.r_cc_sum, r.r_ss_sum, r.r_nc_sum, r.r_sw_sum, r.converse_sum_lower,
                       r.r_cc_sym, r.r_ss_sym}) {
    CHECK(rt.find(format_value(value)) != std::string::npos);
    CHECK(rc.find(format_value(value)) != std::string::npos);
  }

  SimResult s;
  s.trials = 100;
  s.failures = 7;
  s.empirical_pe = 0.07;
  s.ci_lo = 0.03;
  s.ci_hi = 0.14;
  s.n = 16;
  s.k = 9;
  s.rate_bits = 0.5625;
  const std::string sc = render_sim_csv(s, "cc");
  CHECK(sc.rfind("scheme,n,k,rate_bits,trials,failures,pe,ci_lo,ci_hi\n", 0) == 0);
  CHECK(sc.find("cc,16,9,0.5625,100,7,0.07,0.03,0.14") != std::string::npos);
  const std::string st = render_sim_text(s, "cc");
  CHECK(st.find("0.5625") != std::string::npos);
  CHECK(st.find("0.07") != std::string::npos);
}

TEST_CASE("formatting keeps twelve significant digits") {
  CHECK(format_value(0.4689955935892812) == "0.468995593589");
  CHECK(format_value(1.0) == "1");
  CHECK(format_value(2.6599192820659248) == "2.65991928207");
  CHECK(format_value(0.0) == "0");
}
