#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "config.hpp"
#include "fixtures.hpp"
#include "ipress/error.hpp"
#include "run.hpp"

using namespace ipress;
using namespace ipress::cli;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome shell(const std::string& args) {
  const std::string cmd = std::string(IPRESS_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) o.out += buf.data();
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string field_of(const std::string& yaml) {
  try {
    const auto c = parse_config(yaml);
    validate(c);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST(Config, RoundTripIsIdempotent) {
  const std::string text = R"(
command: gurevich
shift: {family: renewal}
potentials:
  tau: {kind: table, depth: 1, rows: [[1, 0.5], [2, 1.25]], strictly_positive: true, lower_bound: 0.5}
phi: zero
psi: alpha-farey
collection: {kind: periodic-at, anchor: 1}
numeric: {trunc: 1000, max_len: 1000, t_grid: [1, 2.5], tail: {kind: harmonic}}
threads: 2
)";
  const RunConfig c = parse_config(text);
  const std::string once = emit_config(c);
  const RunConfig again = parse_config(once);
  EXPECT_EQ(again, c);
  EXPECT_EQ(emit_config(again), once);
  EXPECT_EQ(config_hash(again), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Config, EveryFixtureRoundTrips) {
  for (const auto& f : fixture_catalog()) {
    EXPECT_NO_THROW(validate(f.config)) << f.name;
    EXPECT_EQ(parse_config(emit_config(f.config)), f.config) << f.name;
  }
}

TEST(Config, FixtureSeedsThenKeysOverride) {
  const auto c = parse_config("fixture: alpha-farey\npsi: one\nnumeric: {max_len: 500}\n");
  EXPECT_EQ(c.command, "gurevich");
  EXPECT_EQ(c.psi, "one");
  EXPECT_EQ(c.numeric.max_len, 500u);
  EXPECT_EQ(*c.numeric.trunc, 100'000u);
}

TEST(Config, ValidationErrorsNameTheField) {
  EXPECT_EQ(field_of("numeric: {trunc: -3}"), "numeric.trunc");
  EXPECT_EQ(field_of("numeric: {trunc: 0}"), "numeric.trunc");
  EXPECT_EQ(field_of("numeric: {eta: abc}"), "numeric.eta");
  EXPECT_EQ(field_of("numeric: {t_grid: [2, 1]}"), "numeric.t_grid");
  EXPECT_EQ(field_of("shift: {family: torus}"), "shift.family");
  EXPECT_EQ(field_of("phi: nonsense"), "phi");
  EXPECT_EQ(field_of("flow: {tau: 'const:x'}"), "flow.tau");
  EXPECT_EQ(field_of("collection: {kind: bridges, start: [1]}"), "collection.terminal");
  EXPECT_EQ(field_of("potentials: {p: {kind: table, depth: 2, rows: [[1, 0.5]]}}"), "potentials.p.rows");
  EXPECT_EQ(field_of("colection: {kind: all}"), "colection");
  EXPECT_EQ(field_of("fixture: nope"), "fixture");
  EXPECT_EQ(field_of("command: pressure"), "<none>");
}

TEST(Config, PotentialReferences) {
  RunConfig c;
  EXPECT_EQ(resolve_potential(c, "const:2.5", "phi").value, 2.5);
  const auto t = resolve_potential(c, "table:0.5,1,2", "psi");
  EXPECT_EQ(t.rows.size(), 3u);
  EXPECT_TRUE(t.strictly_positive);
  EXPECT_TRUE(resolve_potential(c, "one", "psi").strictly_positive);
  // Declared flags reach the potential's preconditions.
  c.potentials["neg"] = PotentialDecl{"table", 0.0, 1, {{{1}, -1.0}, {{2}, 1.0}}, false, true, std::nullopt};
  const auto p = build_potential(c, "neg", "psi");
  EXPECT_TRUE(p.flags().strictly_positive);
  EXPECT_THROW(p.at(1), PreconditionError);
}

TEST(Run, FullShiftAndDeterminism) {
  RunConfig c;
  c.shift.n = 2;
  const Report a = run(c);
  const Report b = run(c);
  EXPECT_NEAR(a.payload["result"]["value"].get<double>(), std::log(2.0), 1e-9);
  EXPECT_EQ(a.payload.dump(), b.payload.dump());

  RunConfig loops;
  loops.command = "loops";
  loops.shift.n = 3;
  loops.numeric.max_len = 7;
  loops.collection.kind = "periodic-at";
  const auto one = run(loops).payload.dump();
  loops.threads = 3;
  EXPECT_EQ(run(loops).payload.dump(), one);
}

TEST(Run, InfinitiesSerializeAsStrings) {
  EXPECT_EQ(number(kInf), "inf");
  EXPECT_EQ(number(-kInf), "-inf");
  EXPECT_TRUE(number(std::nan("")).is_null());
  const Report r = run(find_fixture("renewal-window")->config);
  EXPECT_TRUE(r.divergent);
  EXPECT_EQ(r.payload["result"]["value"], "inf");
  EXPECT_TRUE(r.payload["result"].contains("certificate"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(shell("pressure --shift full:2 --psi one").code, 0);
  EXPECT_EQ(shell("pressure --trunc 0").code, 2);
  EXPECT_EQ(shell("pressure --method bogus").code, 2);
  EXPECT_EQ(shell("pressure --phi nonsense").code, 2);
  EXPECT_EQ(shell("group-ext --group free:2 --variant nobacktrack").code, 2);
  EXPECT_EQ(shell("pressure --fixture renewal-window").code, 4);
  EXPECT_EQ(shell("pressure --fixture renewal-window --allow-infinite").code, 0);
  EXPECT_EQ(shell("loops --shift full:3 --at 1 --max-len 40 --counts-only").code, 3);
}

TEST(Cli, JsonAndCsvOutputs) {
  const auto g = shell("gurevich --fixture alpha-farey --max-len 2000 --trunc 2000 --json");
  ASSERT_EQ(g.code, 0);
  const auto doc = nlohmann::json::parse(g.out);
  EXPECT_EQ(doc["meta"]["version"], kVersion);
  EXPECT_EQ(doc["meta"]["config_hash"].get<std::string>().size(), 16u);
  EXPECT_NEAR(doc["result"]["value"].get<double>(), 1.0, 1e-3);

  const auto csv = shell("group-ext --group z^1 --nmax 40 --format csv");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("n,log_count,rate\n", 0), 0u);
  EXPECT_EQ(shell("flow --fixture unit-suspension --format csv").code, 2);

  const auto fixtures = shell("fixtures --json");
  const auto cat = nlohmann::json::parse(fixtures.out);
  bool has_z = false;
  for (const auto& f : cat) has_z = has_z || f["name"] == "z-srw";
  EXPECT_TRUE(has_z);
}

TEST(Cli, MethodAliases) {
  EXPECT_EQ(parse_config("method: pseudo\n").method, "pseudo-inverse");
  EXPECT_EQ(parse_config("method: exhaust\n").method, "exhaustion");
  const auto full = nlohmann::json::parse(shell("pressure --shift full:2 --method auto").out);
  EXPECT_EQ(full["method_selected"], "pseudo-inverse");
  EXPECT_NEAR(full["result"]["value"].get<double>(), std::log(2.0), 1e-9);
  const auto renewal = shell("pressure --shift renewal --trunc 64 --psi alpha-farey --method auto --t-grid 1,2");
  EXPECT_EQ(renewal.code, 4);
  EXPECT_EQ(nlohmann::json::parse(renewal.out)["method_selected"], "window");
}
