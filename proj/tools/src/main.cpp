#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "config.hpp"
#include "fixtures.hpp"
#include "ipress/error.hpp"
#include "run.hpp"
#include "selftest.hpp"

namespace {

using namespace ipress;
using namespace ipress::cli;

enum Exit { kOk = 0, kSelftestFailed = 1, kInvalid = 2, kNumeric = 3, kDivergent = 4 };

struct Flags {
  std::optional<std::string> config, fixture, format, shift;
  std::optional<std::string> phi, psi, collection, method;
  std::optional<std::size_t> trunc, max_len, nmax, length_cap;
  std::optional<double> eta, t_max, tolerance;
  std::vector<double> t_grid;
  std::vector<std::size_t> sizes;
  std::optional<Symbol> at;
  std::optional<std::string> group, variant, tau, delta_g;
  std::optional<unsigned> threads;
  bool json = false;
  bool allow_infinite = false;
  bool counts_only = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Symbol> parse_symbols(const std::string& text, const std::string& field) {
  std::vector<Symbol> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long long v = std::stoll(item);
      if (v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<Symbol>(v));
    } catch (const std::exception&) {
      throw ValidationError(field, "bad symbol '" + item + "'");
    }
  }
  return out;
}

// all | periodic | periodic-at:A | starting-in:S,.. | bridges:S,..:T,..
CollectionDecl parse_collection(const std::string& text) {
  CollectionDecl d;
  const auto colon = text.find(':');
  d.kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (d.kind == "periodic-at") {
    const auto s = parse_symbols(rest, "collection");
    if (s.size() != 1) throw ValidationError("collection", "periodic-at needs one symbol");
    d.anchor = s[0];
  } else if (d.kind == "starting-in") {
    d.start = parse_symbols(rest, "collection");
  } else if (d.kind == "bridges") {
    const auto split = rest.find(':');
    if (split == std::string::npos) throw ValidationError("collection", "expected bridges:S,..:T,..");
    d.start = parse_symbols(rest.substr(0, split), "collection");
    d.terminal = parse_symbols(rest.substr(split + 1), "collection");
  } else if (!rest.empty()) {
    throw ValidationError("collection", "'" + d.kind + "' takes no symbols");
  }
  return d;
}

ShiftDecl parse_shift(const std::string& text) {
  ShiftDecl d;
  if (text == "renewal") {
    d.family = "renewal";
  } else if (text.rfind("full:", 0) == 0) {
    d.family = "full";
    try {
      d.n = std::stoul(text.substr(5));
    } catch (const std::exception&) {
      throw ValidationError("shift", "bad size in '" + text + "'");
    }
  } else {
    throw ValidationError("shift", "expected full:N or renewal");
  }
  return d;
}

RunConfig assemble(const std::string& command, const Flags& f) {
  RunConfig c;
  if (f.fixture) {
    const Fixture* fx = find_fixture(*f.fixture);
    if (!fx) throw ValidationError("fixture", "unknown fixture '" + *f.fixture + "'");
    c = fx->config;
    if (f.config) overlay_config(c, read_file(*f.config));
  } else if (f.config) {
    c = parse_config(read_file(*f.config));
  }
  c.command = command;
  if (f.shift) c.shift = parse_shift(*f.shift);
  if (f.phi) c.phi = *f.phi;
  if (f.psi) c.psi = *f.psi;
  if (f.collection) c.collection = parse_collection(*f.collection);
  if (f.method) c.method = canonical_method(*f.method);
  if (f.trunc) c.numeric.trunc = *f.trunc;
  if (f.max_len) c.numeric.max_len = *f.max_len;
  if (f.length_cap) c.numeric.length_cap = *f.length_cap;
  if (f.eta) c.numeric.eta = *f.eta;
  if (f.t_max) c.numeric.t_max = *f.t_max;
  if (f.tolerance) c.numeric.tolerance = *f.tolerance;
  if (!f.t_grid.empty()) c.numeric.t_grid = f.t_grid;
  if (!f.sizes.empty()) c.numeric.sizes = f.sizes;
  if (f.at) {
    if (command == "flow") {
      c.flow.at = *f.at;
    } else {
      if (c.collection.kind != "bridges") c.collection.kind = "periodic-at";
      c.collection.anchor = *f.at;
    }
  }
  if (command == "gurevich" && c.collection.kind != "periodic-at") {
    c.collection.kind = "periodic-at";
  }
  if (f.group) c.group.model = *f.group;
  if (f.variant) c.group.variant = *f.variant;
  if (f.nmax) c.group.nmax = *f.nmax;
  if (f.tau) c.flow.tau = *f.tau;
  if (f.delta_g) c.flow.delta_g = *f.delta_g;
  if (f.threads) c.threads = *f.threads;
  if (f.counts_only) c.counts_only = true;
  if (f.json) c.output = "json";
  if (f.format) c.output = *f.format;
  return c;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "YAML run configuration");
  sub->add_option("--fixture", f.fixture, "seed the configuration from a built-in fixture");
  sub->add_option("--shift", f.shift, "full:N or renewal");
  sub->add_option("--trunc", f.trunc, "retain the first N symbols");
  sub->add_option("--tolerance", f.tolerance, "root tolerance");
  sub->add_option("--threads", f.threads, "worker threads for loop enumeration");
  sub->add_flag("--json", f.json, "JSON output (default)");
  sub->add_option("--format", f.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_flag("--allow-infinite", f.allow_infinite, "exit 0 on a divergence verdict");
}

int report_error(const std::exception& e, const char* type, const std::string& field, bool json, int code) {
  std::cerr << "error: " << e.what() << '\n';
  if (json) {
    nlohmann::json doc = {{"error", {{"type", type}, {"message", e.what()}}}};
    if (!field.empty()) doc["error"]["field"] = field;
    std::cout << doc.dump(2) << '\n';
  }
  return code;
}

int execute(const std::string& command, const Flags& f) {
  bool json = true;
  try {
    const RunConfig c = assemble(command, f);
    json = c.output == "json";
    const auto t0 = std::chrono::steady_clock::now();
    const Report rep = run(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << render(rep, c, wall);
    if (rep.divergent && !f.allow_infinite) return kDivergent;
    return kOk;
  } catch (const ValidationError& e) {
    return report_error(e, "validation", e.field(), json, kInvalid);
  } catch (const DomainError& e) {
    return report_error(e, "domain", "", json, kInvalid);
  } catch (const PreconditionError& e) {
    return report_error(e, "precondition", "", json, kInvalid);
  } catch (const ModeError& e) {
    return report_error(e, "mode", "", json, kInvalid);
  } catch (const ConvergenceError& e) {
    return report_error(e, "convergence", "", json, kNumeric);
  } catch (const ResourceError& e) {
    return report_error(e, "resource", "", json, kNumeric);
  } catch (const std::exception& e) {
    return report_error(e, "internal", "", json, kNumeric);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induced pressure of countable Markov shifts"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Flags f;

  auto* pressure = app.add_subcommand("pressure", "induced pressure P_psi(phi, C)");
  add_common(pressure, f);
  pressure->add_option("--phi", f.phi, "potential phi");
  pressure->add_option("--psi", f.psi, "potential psi");
  pressure->add_option("--collection", f.collection, "all | periodic | periodic-at:A | starting-in:S,.. | bridges:S,..:T,..");
  pressure->add_option("--method", f.method, "estimator")
      ->check(CLI::IsMember({"pseudo-inverse", "pseudo", "window", "critical-exponent", "exhaustion", "exhaust",
                             "loop-route", "auto"}));
  pressure->add_option("--eta", f.eta, "window width");
  pressure->add_option("--t-grid", f.t_grid, "window upper ends")->delimiter(',');
  pressure->add_option("--t-max,--tmax", f.t_max, "largest T for the critical exponent");
  pressure->add_option("--length-cap", f.length_cap, "longest word in a window");
  pressure->add_option("--sizes", f.sizes, "truncation sizes for exhaustion")->delimiter(',');
  pressure->add_option("--max-len", f.max_len, "loop cap for the loop route");
  pressure->add_option("--at", f.at, "anchor symbol");

  auto* gurevich = app.add_subcommand("gurevich", "loop pressure at a symbol");
  add_common(gurevich, f);
  gurevich->add_option("--phi", f.phi, "potential phi");
  gurevich->add_option("--psi", f.psi, "potential psi");
  gurevich->add_option("--at", f.at, "anchor symbol");
  gurevich->add_option("--max-len", f.max_len, "loop cap");

  auto* loops = app.add_subcommand("loops", "simple loop inventory");
  add_common(loops, f);
  loops->add_option("--at", f.at, "anchor symbol");
  loops->add_option("--collection", f.collection, "periodic-at:A or bridges:S,..:T,..");
  loops->add_option("--max-len", f.max_len, "loop cap");
  loops->add_flag("--counts-only", f.counts_only, "omit the loops themselves");

  auto* group = app.add_subcommand("group-ext", "group extensions and the amenability gap");
  add_common(group, f);
  group->add_option("--group", f.group, "z^d | free:k | file:TABLE");
  group->add_option("--variant", f.variant, "plain or nobacktrack")->check(CLI::IsMember({"plain", "nobacktrack"}));
  group->add_option("--nmax", f.nmax, "longest path length");

  auto* flow = app.add_subcommand("flow", "pressure of a suspension flow");
  add_common(flow, f);
  flow->add_option("--tau", f.tau, "roof function");
  flow->add_option("--delta-g", f.delta_g, "fiber integral of g");
  flow->add_option("--at", f.at, "base symbol");
  flow->add_option("--max-len", f.max_len, "loop cap");

  auto* fixtures = app.add_subcommand("fixtures", "list built-in fixtures");
  fixtures->add_flag("--json", f.json, "JSON output");

  auto* self = app.add_subcommand("selftest", "property suite and golden values");
  unsigned seeds = 50;
  self->add_option("--seeds", seeds, "random fixtures for the property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  if (fixtures->parsed()) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& fx : fixture_catalog()) {
      nlohmann::json expected = nlohmann::json::array();
      for (const auto& e : fx.expected) {
        nlohmann::json item = {{"quantity", e.quantity}};
        if (e.relation.empty()) {
          item["value"] = number(e.value);
          item["display"] = e.display;
        } else {
          item["relation"] = e.relation;
        }
        expected.push_back(item);
      }
      doc.push_back({{"name", fx.name},
                     {"description", fx.description},
                     {"reference", fx.reference},
                     {"command", fx.config.command},
                     {"expected", expected}});
    }
    if (f.json) {
      std::cout << doc.dump(2) << '\n';
    } else {
      for (const auto& fx : doc) {
        std::cout << fx["name"].get<std::string>() << " (" << fx["command"].get<std::string>() << ")\n  "
                  << fx["description"].get<std::string>() << "\n";
        for (const auto& e : fx["expected"]) {
          std::cout << "  " << e["quantity"].get<std::string>() << ": "
                    << (e.contains("relation") ? e["relation"].get<std::string>() : e["display"].get<std::string>())
                    << '\n';
        }
      }
    }
    return kOk;
  }

  if (self->parsed()) {
    bool ok = true;
    for (const auto& line : selftest(seeds)) {
      std::cout << (line.passed ? "PASS " : "FAIL ") << line.name << ": " << line.detail << '\n';
      ok = ok && line.passed;
    }
    return ok ? kOk : kSelftestFailed;
  }

  for (auto* sub : app.get_subcommands()) return execute(sub->get_name(), f);
  return kInvalid;
}
