#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "fijord/config.hpp"
#include "fijord/errors.hpp"
#include "fijord/jordan.hpp"
#include "fijord/linmap.hpp"
#include "fijord/prng.hpp"
#include "fijord/runner.hpp"
#include "helpers.hpp"

using namespace fijord;
using namespace fijord::testutil;

namespace {

const std::string kChainCfg =
    "# three-element chain over Z_6\n"
    "[instance]\n"
    "modulus = 6\n"
    "elements = a b c\n"
    "pairs = a<b b<c\n"
    "[map]\n"
    "spec = identity\n"
    "[suite]\n"
    "checks = all\n"
    "seed = 5\n";

std::filesystem::path temp_file(const std::string& stem, const std::string& text) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / (stem + ".cfg");
  std::ofstream out(p);
  out << text;
  return p;
}

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  CmdResult res;
  std::string cmd = std::string(FIJORD_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

RunOptions default_opts() { return RunOptions{}; }

}  // namespace

TEST_CASE("config text parses into the instance description") {
  InstanceConfig cfg = parse_config_text(kChainCfg);
  CHECK(cfg.modulus == 6);
  CHECK(cfg.elements == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(cfg.pairs.size() == 2);
  CHECK(cfg.pairs[0] == std::pair<std::string, std::string>{"a", "b"});
  CHECK(cfg.pairs[1] == std::pair<std::string, std::string>{"b", "c"});
  CHECK(cfg.map_spec == "identity");
  CHECK(cfg.checks.empty());  // "all" selects every suite
  CHECK(cfg.seed == 5);
  FiContextPtr ctx = build_context(cfg);
  CHECK(ctx->dim() == 6);
  CHECK(ctx->poset().class_count() == 3);
}

TEST_CASE("malformed configs are rejected with a parse error") {
  CHECK_THROWS_AS(parse_config_text(""), ParseError);  // no modulus, no elements
  CHECK_THROWS_AS(parse_config_text("[instance]\nelements = a\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[instance]\nmodulus = 6\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[instance]\nmodulus = 6\nmodulus = 5\nelements = a\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_config_text("[instance]\nmodulus = 6\nelements = a\nwhatever = 1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_config_text("[oops]\nmodulus = 6\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[instance]\nmodulus = 6\nelements = a\npairs = a-b\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_config_text("[instance]\nmodulus = 6\nelements = a b\nmax_elements = 1\n"),
      ParseError);
  // Keys must live inside a section.
  CHECK_THROWS_AS(parse_config_text("modulus = 6\n"), ParseError);
}

TEST_CASE("map specs evaluate to the documented frozen maps") {
  InstanceConfig cfg = parse_config_text(kChainCfg);
  FiContextPtr ctx = build_context(cfg);
  SplitMix64 rng(0);

  LinearMap id = eval_map_spec(ctx, "identity", rng);
  CHECK(id.matrix() == MatZn::identity(ctx->ring(), ctx->dim()));

  LinearMap rev = eval_map_spec(ctx, "reversal", rng);
  CHECK(rev.matrix() == order_reversal_map(ctx).matrix());

  LinearMap rev2 = eval_map_spec(ctx, "reversal lambda=c,b,a", rng);
  CHECK(rev2.matrix() == rev.matrix());

  LinearMap pd = eval_map_spec(ctx, "dproj", rng);
  CHECK(pd.matrix() == diagonal_projection(ctx).matrix());

  // scale and sum: 3*id + 4*reversal written as combinators.
  LinearMap mix = eval_map_spec(ctx, "sum(scale k=3(identity); scale k=4(reversal))", rng);
  CHECK(mix.matrix() == id.matrix().scaled(3) + rev.matrix().scaled(4));

  // compose applies the rightmost child first.
  LinearMap comp = eval_map_spec(ctx, "compose(reversal; dproj)", rng);
  CHECK(comp.matrix() == rev.matrix() * pd.matrix());

  // inner with explicit coordinates: conjugation by 1 + E(a,b).
  std::vector<Residue> u = ctx->add_coords(ctx->delta_coords(), unit(ctx, "a", "b"));
  LinearMap inner = eval_map_spec(ctx, "inner unit=1,1,0,1,0,1", rng);
  CHECK(inner.matrix() == inner_automorphism(ctx, u).matrix());

  // matrix: an explicit column list (here the identity).
  std::string eye;
  for (std::size_t i = 0; i < ctx->dim(); ++i)
    for (std::size_t j = 0; j < ctx->dim(); ++j) eye += (i == j ? "1," : "0,");
  eye.pop_back();
  LinearMap m = eval_map_spec(ctx, "matrix coords=" + eye, rng);
  CHECK(m.matrix() == MatZn::identity(ctx->ring(), ctx->dim()));

  // near_sum assembles an accepted pair.
  LinearMap ns = eval_map_spec(ctx,
                               "near_sum(sum(scale k=3(identity); scale k=4(compose(reversal; "
                               "dproj))); sum(scale k=3(dproj); scale k=4(reversal)))",
                               rng);
  CHECK(ns.matrix() == id.matrix().scaled(3) + rev.matrix().scaled(4));
}

TEST_CASE("random inner units are reproducible from the seed") {
  InstanceConfig cfg = parse_config_text(kChainCfg);
  FiContextPtr ctx = build_context(cfg);
  SplitMix64 r1(99), r2(99), r3(100);
  LinearMap a = eval_map_spec(ctx, "inner unit=random", r1);
  LinearMap b = eval_map_spec(ctx, "inner", r2);  // unit defaults to random
  CHECK(a.matrix() == b.matrix());
  CHECK(multiplicative_check(a).passed);
  LinearMap c = eval_map_spec(ctx, "inner", r3);
  CHECK(multiplicative_check(c).passed);
}

TEST_CASE("map spec grammar rejects malformed expressions") {
  InstanceConfig cfg = parse_config_text(kChainCfg);
  FiContextPtr ctx = build_context(cfg);
  SplitMix64 rng(0);
  CHECK_THROWS_AS(eval_map_spec(ctx, "", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "unknown_map", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "identity(identity)", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "scale k=3", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "scale(identity)", rng), ParseError);  // k missing
  CHECK_THROWS_AS(eval_map_spec(ctx, "sum(identity)", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "compose(identity; reversal", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "identity extra", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "jtwist e=3", rng), ParseError);  // class or blockwise
  CHECK_THROWS_AS(eval_map_spec(ctx, "jtwist class=a blockwise e=3", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "matrix coords=1,2", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "inner unit=0,0,0,0,0,0", rng), NotInvertible);
  CHECK_THROWS_AS(eval_map_spec(ctx, "reversal lambda=a,b", rng), ParseError);
  CHECK_THROWS_AS(eval_map_spec(ctx, "reversal lambda=a,b,zz", rng), BadLabel);
}

TEST_CASE("a passing run reports every suite and exits zero") {
  InstanceConfig cfg = parse_config_text(kChainCfg);
  RunOutcome out = run_instance(cfg, default_opts());
  CHECK(out.exit_code == 0);
  CHECK(out.report.find("MODULUS 6\n") != std::string::npos);
  CHECK(out.report.find("ELEMENTS a b c\n") != std::string::npos);
  CHECK(out.report.find("CLASSES a[1] b[1] c[1]\n") != std::string::npos);
  CHECK(out.report.find("ORDER a<b a<c b<c\n") != std::string::npos);
  CHECK(out.report.find("MODE verify\n") != std::string::npos);
  CHECK(out.report.find("SEED 5\n") != std::string::npos);
  CHECK(out.report.find("CHECK ring.additive_group PASS\n") != std::string::npos);
  CHECK(out.report.find("CHECK fi.associativity_basis PASS\n") != std::string::npos);
  CHECK(out.report.find("CHECK jordan.squares PASS\n") != std::string::npos);
  CHECK(out.report.find("VERDICT classify.multiplicative: yes") != std::string::npos);
  CHECK(out.report.find(" FAIL") == std::string::npos);
  // The sum suite is skipped with a note: singleton classes.
  CHECK(out.report.find("NOTE") != std::string::npos);
  CHECK(out.report.find("RESULT PASS") != std::string::npos);
  // The last line is the summary.
  std::size_t pos = out.report.rfind("RESULT PASS checks=");
  CHECK(pos != std::string::npos);
}

TEST_CASE("failing product laws drive the exit code to one") {
  // Swapping two strict columns is additive and bijective but breaks the
  // square law.
  std::string text =
      "[instance]\n"
      "modulus = 6\n"
      "elements = a b c\n"
      "pairs = a<b b<c\n"
      "[map]\n"
      "spec = matrix coords=" +
      [] {
        // identity with the E(a,b) and E(a,c) columns swapped
        std::string s;
        for (std::size_t i = 0; i < 6; ++i)
          for (std::size_t j = 0; j < 6; ++j) {
            std::size_t jj = j == 1 ? 2 : (j == 2 ? 1 : j);
            s += (i == jj ? "1," : "0,");
          }
        s.pop_back();
        return s;
      }() +
      "\n[suite]\nchecks = jordan\n";
  InstanceConfig cfg = parse_config_text(text);
  RunOutcome out = run_instance(cfg, default_opts());
  CHECK(out.exit_code == 1);
  CHECK(out.report.find("CHECK jordan.squares FAIL") != std::string::npos);
  CHECK(out.report.find("witness:") != std::string::npos);
  CHECK(out.report.find("RESULT FAIL") != std::string::npos);

  // The same map cannot support the block extraction: the near-sum suite
  // converts the failure into a failed check rather than an abort.
  cfg.checks = {"near-sum"};
  RunOutcome out2 = run_instance(cfg, default_opts());
  CHECK(out2.exit_code == 1);
  CHECK(out2.report.find("CHECK near-sum.block_extraction FAIL") != std::string::npos);
}

TEST_CASE("construction problems exit with code two") {
  // A non-invertible explicit matrix.
  std::string text =
      "[instance]\nmodulus = 6\nelements = a\n[map]\nspec = matrix "
      "coords=3\n[suite]\nchecks = jordan\n";
  InstanceConfig cfg = parse_config_text(text);
  RunOutcome out = run_instance(cfg, default_opts());
  CHECK(out.exit_code == 2);
  CHECK(out.report.find("RESULT ERROR") != std::string::npos);

  // A near-sum whose components do not agree on the diagonal.
  std::string ns =
      "[instance]\nmodulus = 6\nelements = a b\npairs = a<b\n[map]\n"
      "spec = near_sum(identity; reversal)\n[suite]\nchecks = jordan\n";
  RunOutcome out2 = run_instance(parse_config_text(ns), default_opts());
  CHECK(out2.exit_code == 2);
  CHECK(out2.report.find("RESULT ERROR") != std::string::npos);
  CHECK(out2.report.find("disagree on the diagonal") != std::string::npos);
}

TEST_CASE("explicitly requesting an unavailable decomposition exits with three") {
  std::string text =
      "[instance]\nmodulus = 6\nelements = a b c\npairs = a<b b<c\n"
      "[map]\nspec = identity\n[suite]\nchecks = sum\n";
  RunOutcome out = run_instance(parse_config_text(text), default_opts());
  CHECK(out.exit_code == 3);
  CHECK(out.report.find("RESULT ERROR hypothesis") != std::string::npos);

  // The same suite under "all" is skipped with a note instead.
  std::string all_text =
      "[instance]\nmodulus = 6\nelements = a b c\npairs = a<b b<c\n"
      "[map]\nspec = identity\n[suite]\nchecks = all\n";
  RunOutcome out2 = run_instance(parse_config_text(all_text), default_opts());
  CHECK(out2.exit_code == 0);

  // A cap too small for the block image enumeration also aborts when the
  // suite was requested by name.
  std::string cap_text =
      "[instance]\nmodulus = 6\nelements = p q\npairs = p<q q<p\n"
      "[map]\nspec = jtwist class=p e=3\n[suite]\nchecks = sum\ncap = 100\n";
  RunOutcome out3 = run_instance(parse_config_text(cap_text), default_opts());
  CHECK(out3.exit_code == 3);
  CHECK(out3.report.find("RESULT ERROR") != std::string::npos);
}

TEST_CASE("unknown suite names are a configuration error") {
  std::string text =
      "[instance]\nmodulus = 6\nelements = a\n[map]\nspec = identity\n"
      "[suite]\nchecks = no-such-suite\n";
  RunOutcome out = run_instance(parse_config_text(text), default_opts());
  CHECK(out.exit_code == 2);
  CHECK(out.report.find("RESULT ERROR") != std::string::npos);
}

TEST_CASE("reports are byte-identical for identical configuration and seed") {
  std::string text =
      "[instance]\nmodulus = 6\nelements = a1 a2 b1 b2\n"
      "pairs = a1<a2 a2<a1 b1<b2 b2<b1 a1<b1\n"
      "[map]\nspec = compose(inner unit=random; jtwist blockwise e=3)\n"
      "[suite]\nchecks = all\nseed = 7\n";
  InstanceConfig cfg = parse_config_text(text);
  RunOutcome first = run_instance(cfg, default_opts());
  RunOutcome second = run_instance(cfg, default_opts());
  CHECK(first.exit_code == 0);
  CHECK(first.report == second.report);

  // Seed overrides change the effective seed header.
  RunOptions opt;
  opt.seed = 11;
  RunOutcome third = run_instance(cfg, opt);
  CHECK(third.report.find("SEED 11\n") != std::string::npos);
}

TEST_CASE("decompose mode emits the component maps and witnesses") {
  std::string text =
      "[instance]\nmodulus = 6\nelements = p q\npairs = p<q q<p\n"
      "[map]\nspec = jtwist class=p e=3\n[suite]\nseed = 0\n";
  InstanceConfig cfg = parse_config_text(text);
  RunOptions opt;
  opt.decompose = true;
  RunOutcome out = run_instance(cfg, opt);
  CHECK(out.exit_code == 0);
  CHECK(out.report.find("MODE decompose\n") != std::string::npos);
  CHECK(out.report.find("NEAR_SUM_MODE diagonal_only\n") != std::string::npos);
  CHECK(out.report.find("IDEMPOTENT class=p f=[3 0 0 3] g=[4 0 0 4]\n") != std::string::npos);
  CHECK(out.report.find("MAP psi E(p,p)[0,1] -> [0 3 0 0]\n") != std::string::npos);
  CHECK(out.report.find("MAP theta E(p,p)[0,1] -> [0 0 4 0]\n") != std::string::npos);
  CHECK(out.report.find("RESULT PASS") != std::string::npos);
}

TEST_CASE("the report writes to the configured file") {
  std::filesystem::path report = std::filesystem::temp_directory_path() / "fijord_report.txt";
  std::filesystem::remove(report);
  InstanceConfig cfg = parse_config_text(kChainCfg);
  RunOptions opt;
  opt.report_path = report.string();
  RunOutcome out = run_instance(cfg, opt);
  CHECK(out.exit_code == 0);
  std::ifstream in(report);
  REQUIRE(in.good());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == out.report);
  std::filesystem::remove(report);
}

TEST_CASE("command line: verify, decompose, and suites") {
  std::filesystem::path cfg = temp_file("fijord_cli_chain", kChainCfg);

  CmdResult verify = run_cli("verify " + cfg.string());
  CHECK(verify.exit_code == 0);
  CHECK(verify.output.find("RESULT PASS") != std::string::npos);
  CHECK(verify.output.find("MODE verify") != std::string::npos);

  // Byte-identical output on a repeated invocation.
  CmdResult again = run_cli("verify " + cfg.string());
  CHECK(again.output == verify.output);

  // Seed override changes the header.
  CmdResult seeded = run_cli("verify --seed 9 " + cfg.string());
  CHECK(seeded.exit_code == 0);
  CHECK(seeded.output.find("SEED 9\n") != std::string::npos);

  CmdResult suites = run_cli("suites");
  CHECK(suites.exit_code == 0);
  for (const std::string& name : all_suite_names()) {
    INFO("suite ", name);
    CHECK(suites.output.find(name) != std::string::npos);
  }

  std::filesystem::path m2 = temp_file(
      "fijord_cli_m2",
      "[instance]\nmodulus = 6\nelements = p q\npairs = p<q q<p\n"
      "[map]\nspec = jtwist class=p e=3\n[suite]\nseed = 0\n");
  CmdResult dec = run_cli("decompose " + m2.string());
  CHECK(dec.exit_code == 0);
  CHECK(dec.output.find("MODE decompose") != std::string::npos);
  CHECK(dec.output.find("IDEMPOTENT class=p") != std::string::npos);

  // Report flag writes the same bytes to the file.
  std::filesystem::path rp = std::filesystem::temp_directory_path() / "fijord_cli_report.txt";
  std::filesystem::remove(rp);
  CmdResult rep = run_cli("verify --report " + rp.string() + " " + cfg.string());
  CHECK(rep.exit_code == 0);
  std::ifstream in(rp);
  REQUIRE(in.good());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(rep.output.find(content) != std::string::npos);
  std::filesystem::remove(rp);
}

TEST_CASE("command line: error paths map to the documented exit codes") {
  CmdResult missing = run_cli("verify /nonexistent/path.cfg");
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("RESULT ERROR") != std::string::npos);

  CmdResult nosub = run_cli("");
  CHECK(nosub.exit_code == 2);

  CmdResult badflag = run_cli("verify --frobnicate x.cfg");
  CHECK(badflag.exit_code == 2);

  CmdResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("verify") != std::string::npos);

  std::filesystem::path sum3 = temp_file(
      "fijord_cli_sum3",
      "[instance]\nmodulus = 6\nelements = a b c\npairs = a<b b<c\n"
      "[map]\nspec = identity\n[suite]\nchecks = sum\n");
  CmdResult hyp = run_cli("verify " + sum3.string());
  CHECK(hyp.exit_code == 3);

  std::filesystem::path bad = temp_file(
      "fijord_cli_bad",
      "[instance]\nmodulus = 6\nelements = a b\npairs = a<b\n"
      "[map]\nspec = near_sum(identity; reversal)\n[suite]\nchecks = all\n");
  CmdResult cons = run_cli("verify " + bad.string());
  CHECK(cons.exit_code == 2);
  CHECK(cons.output.find("RESULT ERROR construction") != std::string::npos);
}
