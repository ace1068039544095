#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "ipress/error.hpp"

namespace ipress::cli {

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

template <typename T>
T as(const YAML::Node& node, const std::string& path, const char* expected) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ValidationError(path, std::string("expected ") + expected);
  }
}

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ValidationError(path, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = as<std::string>(kv.first, path, "a string key");
    if (!ok.count(key)) throw ValidationError(join(path, key), "unknown field");
  }
}

template <typename T>
std::vector<T> as_list(const YAML::Node& node, const std::string& path, const char* expected) {
  if (!node.IsSequence()) throw ValidationError(path, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(as<T>(node[i], path + "[" + std::to_string(i) + "]", expected));
  }
  return out;
}

std::size_t as_count(const YAML::Node& node, const std::string& path) {
  const auto v = as<long long>(node, path, "an integer");
  if (v < 0) throw ValidationError(path, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

Symbol as_symbol(const YAML::Node& node, const std::string& path) {
  const auto v = as<long long>(node, path, "a symbol (positive integer)");
  if (v < 1) throw ValidationError(path, "symbols are positive integers");
  return static_cast<Symbol>(v);
}

std::vector<Symbol> as_symbols(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ValidationError(path, "expected a list of symbols");
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as_symbol(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

PotentialDecl parse_potential(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"kind", "value", "depth", "rows", "values", "nonnegative", "strictly_positive", "lower_bound"});
  PotentialDecl p;
  if (node["kind"]) p.kind = as<std::string>(node["kind"], join(path, "kind"), "a string");
  if (node["value"]) p.value = as<double>(node["value"], join(path, "value"), "a number");
  if (node["depth"]) p.depth = as_count(node["depth"], join(path, "depth"));
  if (node["values"]) {
    const auto vals = as_list<double>(node["values"], join(path, "values"), "a number");
    p.kind = "table";
    p.depth = 1;
    p.rows.clear();
    for (std::size_t i = 0; i < vals.size(); ++i) p.rows.push_back({{static_cast<Symbol>(i + 1)}, vals[i]});
  }
  if (node["rows"]) {
    const auto rows = node["rows"];
    const std::string rp = join(path, "rows");
    if (!rows.IsSequence()) throw ValidationError(rp, "expected a list of [symbols..., value] rows");
    p.rows.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string ip = rp + "[" + std::to_string(i) + "]";
      if (!rows[i].IsSequence() || rows[i].size() < 2) throw ValidationError(ip, "expected [symbols..., value]");
      std::vector<Symbol> tuple;
      for (std::size_t j = 0; j + 1 < rows[i].size(); ++j) tuple.push_back(as_symbol(rows[i][j], ip));
      p.rows.push_back({tuple, as<double>(rows[i][rows[i].size() - 1], ip, "a number")});
    }
  }
  if (node["nonnegative"]) p.nonnegative = as<bool>(node["nonnegative"], join(path, "nonnegative"), "a boolean");
  if (node["strictly_positive"]) {
    p.strictly_positive = as<bool>(node["strictly_positive"], join(path, "strictly_positive"), "a boolean");
  }
  if (node["lower_bound"]) p.lower_bound = as<double>(node["lower_bound"], join(path, "lower_bound"), "a number");
  return p;
}

void apply(RunConfig& c, const YAML::Node& root) {
  if (!root || root.IsNull()) return;
  check_keys(root, "", {"command", "fixture", "shift", "potentials", "phi", "psi", "collection", "method", "numeric",
                        "group", "flow", "output", "threads", "counts_only"});
  if (root["command"]) c.command = as<std::string>(root["command"], "command", "a string");
  if (root["shift"]) {
    const auto n = root["shift"];
    check_keys(n, "shift", {"family", "n", "matrix"});
    if (n["family"]) c.shift.family = as<std::string>(n["family"], "shift.family", "a string");
    if (n["n"]) c.shift.n = as_count(n["n"], "shift.n");
    if (n["matrix"]) {
      const auto m = n["matrix"];
      if (!m.IsSequence()) throw ValidationError("shift.matrix", "expected a list of rows");
      c.shift.matrix.clear();
      for (std::size_t i = 0; i < m.size(); ++i) {
        c.shift.matrix.push_back(as_list<int>(m[i], "shift.matrix[" + std::to_string(i) + "]", "0 or 1"));
      }
    }
  }
  if (root["potentials"]) {
    const auto n = root["potentials"];
    if (!n.IsMap()) throw ValidationError("potentials", "expected a mapping of names to declarations");
    for (const auto& kv : n) {
      const auto name = as<std::string>(kv.first, "potentials", "a string key");
      c.potentials[name] = parse_potential(kv.second, "potentials." + name);
    }
  }
  if (root["phi"]) c.phi = as<std::string>(root["phi"], "phi", "a potential reference");
  if (root["psi"]) c.psi = as<std::string>(root["psi"], "psi", "a potential reference");
  if (root["collection"]) {
    const auto n = root["collection"];
    check_keys(n, "collection", {"kind", "anchor", "start", "terminal"});
    if (n["kind"]) c.collection.kind = as<std::string>(n["kind"], "collection.kind", "a string");
    if (n["anchor"]) c.collection.anchor = as_symbol(n["anchor"], "collection.anchor");
    if (n["start"]) c.collection.start = as_symbols(n["start"], "collection.start");
    if (n["terminal"]) c.collection.terminal = as_symbols(n["terminal"], "collection.terminal");
  }
  if (root["method"]) c.method = canonical_method(as<std::string>(root["method"], "method", "a string"));
  if (root["numeric"]) {
    const auto n = root["numeric"];
    check_keys(n, "numeric",
               {"trunc", "max_len", "eta", "t_grid", "t_max", "tolerance", "length_cap", "sizes", "tail"});
    auto& d = c.numeric;
    if (n["trunc"]) d.trunc = as_count(n["trunc"], "numeric.trunc");
    if (n["max_len"]) d.max_len = as_count(n["max_len"], "numeric.max_len");
    if (n["eta"]) d.eta = as<double>(n["eta"], "numeric.eta", "a number");
    if (n["t_grid"]) d.t_grid = as_list<double>(n["t_grid"], "numeric.t_grid", "a number");
    if (n["t_max"]) d.t_max = as<double>(n["t_max"], "numeric.t_max", "a number");
    if (n["tolerance"]) d.tolerance = as<double>(n["tolerance"], "numeric.tolerance", "a number");
    if (n["length_cap"]) d.length_cap = as_count(n["length_cap"], "numeric.length_cap");
    if (n["sizes"]) {
      d.sizes.clear();
      const auto s = n["sizes"];
      if (!s.IsSequence()) throw ValidationError("numeric.sizes", "expected a list");
      for (std::size_t i = 0; i < s.size(); ++i) d.sizes.push_back(as_count(s[i], "numeric.sizes[" + std::to_string(i) + "]"));
    }
    if (n["tail"]) {
      const auto t = n["tail"];
      if (t.IsNull()) {
        d.tail.reset();
      } else {
        check_keys(t, "numeric.tail", {"kind", "a0", "a1", "a2", "b_lo", "b_hi"});
        TailDecl td;
        if (t["kind"]) td.kind = as<std::string>(t["kind"], "numeric.tail.kind", "a string");
        if (t["a0"]) td.a0 = as<double>(t["a0"], "numeric.tail.a0", "a number");
        if (t["a1"]) td.a1 = as<double>(t["a1"], "numeric.tail.a1", "a number");
        if (t["a2"]) td.a2 = as<double>(t["a2"], "numeric.tail.a2", "a number");
        if (t["b_lo"]) td.b_lo = as<double>(t["b_lo"], "numeric.tail.b_lo", "a number");
        if (t["b_hi"]) td.b_hi = as<double>(t["b_hi"], "numeric.tail.b_hi", "a number");
        d.tail = td;
      }
    }
  }
  if (root["group"]) {
    const auto n = root["group"];
    check_keys(n, "group", {"model", "variant", "nmax"});
    if (n["model"]) c.group.model = as<std::string>(n["model"], "group.model", "a string");
    if (n["variant"]) c.group.variant = as<std::string>(n["variant"], "group.variant", "a string");
    if (n["nmax"]) c.group.nmax = as_count(n["nmax"], "group.nmax");
  }
  if (root["flow"]) {
    const auto n = root["flow"];
    check_keys(n, "flow", {"tau", "delta_g", "at"});
    if (n["tau"]) c.flow.tau = as<std::string>(n["tau"], "flow.tau", "a potential reference");
    if (n["delta_g"]) c.flow.delta_g = as<std::string>(n["delta_g"], "flow.delta_g", "a potential reference");
    if (n["at"]) c.flow.at = as_symbol(n["at"], "flow.at");
  }
  if (root["output"]) c.output = as<std::string>(root["output"], "output", "a string");
  if (root["threads"]) c.threads = static_cast<unsigned>(as_count(root["threads"], "threads"));
  if (root["counts_only"]) c.counts_only = as<bool>(root["counts_only"], "counts_only", "a boolean");
}

YAML::Node load(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError("", std::string("malformed configuration: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const YAML::Node root = load(text);
  RunConfig c;
  if (root && root.IsMap() && root["fixture"]) {
    const auto name = as<std::string>(root["fixture"], "fixture", "a fixture name");
    const Fixture* f = find_fixture(name);
    if (!f) throw ValidationError("fixture", "unknown fixture '" + name + "'");
    c = f->config;
  }
  apply(c, root);
  return c;
}

void overlay_config(RunConfig& config, const std::string& text) { apply(config, load(text)); }

// ---------------------------------------------------------------------------

namespace {

void emit_potential(YAML::Emitter& out, const PotentialDecl& p) {
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << p.kind;
  if (p.kind == "constant") out << YAML::Key << "value" << YAML::Value << p.value;
  if (p.kind == "table") {
    out << YAML::Key << "depth" << YAML::Value << p.depth;
    out << YAML::Key << "rows" << YAML::Value << YAML::BeginSeq;
    for (const auto& [tuple, v] : p.rows) {
      out << YAML::Flow << YAML::BeginSeq;
      for (Symbol s : tuple) out << s;
      out << v << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  if (p.nonnegative) out << YAML::Key << "nonnegative" << YAML::Value << true;
  if (p.strictly_positive) out << YAML::Key << "strictly_positive" << YAML::Value << true;
  if (p.lower_bound) out << YAML::Key << "lower_bound" << YAML::Value << *p.lower_bound;
  out << YAML::EndMap;
}

}  // namespace

std::string emit_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "command" << YAML::Value << c.command;
  if (c.fixture) out << YAML::Key << "fixture" << YAML::Value << *c.fixture;

  out << YAML::Key << "shift" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "family" << YAML::Value << c.shift.family;
  if (c.shift.family == "full") out << YAML::Key << "n" << YAML::Value << c.shift.n;
  if (c.shift.family == "matrix") {
    out << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : c.shift.matrix) out << YAML::Flow << row;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  if (!c.potentials.empty()) {
    out << YAML::Key << "potentials" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, p] : c.potentials) {
      out << YAML::Key << name << YAML::Value;
      emit_potential(out, p);
    }
    out << YAML::EndMap;
  }
  out << YAML::Key << "phi" << YAML::Value << c.phi;
  out << YAML::Key << "psi" << YAML::Value << c.psi;

  out << YAML::Key << "collection" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.collection.kind;
  if (c.collection.kind == "periodic-at") out << YAML::Key << "anchor" << YAML::Value << c.collection.anchor;
  if (c.collection.kind == "starting-in" || c.collection.kind == "bridges") {
    out << YAML::Key << "start" << YAML::Value << YAML::Flow << c.collection.start;
  }
  if (c.collection.kind == "bridges") out << YAML::Key << "terminal" << YAML::Value << YAML::Flow << c.collection.terminal;
  out << YAML::EndMap;

  out << YAML::Key << "method" << YAML::Value << c.method;

  const auto& d = c.numeric;
  out << YAML::Key << "numeric" << YAML::Value << YAML::BeginMap;
  if (d.trunc) out << YAML::Key << "trunc" << YAML::Value << *d.trunc;
  out << YAML::Key << "max_len" << YAML::Value << d.max_len;
  out << YAML::Key << "eta" << YAML::Value << d.eta;
  if (!d.t_grid.empty()) out << YAML::Key << "t_grid" << YAML::Value << YAML::Flow << d.t_grid;
  if (d.t_max) out << YAML::Key << "t_max" << YAML::Value << *d.t_max;
  out << YAML::Key << "tolerance" << YAML::Value << d.tolerance;
  out << YAML::Key << "length_cap" << YAML::Value << d.length_cap;
  if (!d.sizes.empty()) out << YAML::Key << "sizes" << YAML::Value << YAML::Flow << d.sizes;
  if (d.tail) {
    out << YAML::Key << "tail" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << d.tail->kind;
    if (d.tail->kind == "parametric") {
      out << YAML::Key << "a0" << YAML::Value << d.tail->a0;
      out << YAML::Key << "a1" << YAML::Value << d.tail->a1;
      out << YAML::Key << "a2" << YAML::Value << d.tail->a2;
      out << YAML::Key << "b_lo" << YAML::Value << d.tail->b_lo;
      out << YAML::Key << "b_hi" << YAML::Value << d.tail->b_hi;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "group" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "model" << YAML::Value << c.group.model;
  out << YAML::Key << "variant" << YAML::Value << c.group.variant;
  out << YAML::Key << "nmax" << YAML::Value << c.group.nmax;
  out << YAML::EndMap;

  out << YAML::Key << "flow" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tau" << YAML::Value << c.flow.tau;
  out << YAML::Key << "delta_g" << YAML::Value << c.flow.delta_g;
  if (c.flow.at) out << YAML::Key << "at" << YAML::Value << *c.flow.at;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << c.output;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::Key << "counts_only" << YAML::Value << c.counts_only;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

double parse_number(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(field, "'" + s + "' is not a number");
  }
}

}  // namespace

PotentialDecl resolve_potential(const RunConfig& config, const std::string& ref, const std::string& field) {
  if (auto it = config.potentials.find(ref); it != config.potentials.end()) return it->second;
  PotentialDecl p;
  if (ref == "zero") return p;
  if (ref == "one") {
    p.kind = "constant";
    p.value = 1.0;
    p.nonnegative = p.strictly_positive = true;
    p.lower_bound = 1.0;
    return p;
  }
  if (ref == "alpha-farey") {
    p.kind = "alpha-farey";
    return p;
  }
  if (ref == "neg-first") {
    p.kind = "first-symbol-negated";
    return p;
  }
  if (ref.rfind("const:", 0) == 0) {
    p.kind = "constant";
    p.value = parse_number(ref.substr(6), field);
    return p;
  }
  if (ref.rfind("table:", 0) == 0) {
    p.kind = "table";
    std::stringstream ss(ref.substr(6));
    std::string item;
    Symbol s = 1;
    bool positive = true;
    while (std::getline(ss, item, ',')) {
      const double v = parse_number(item, field);
      positive = positive && v > 0.0;
      p.rows.push_back({{s++}, v});
    }
    if (p.rows.empty()) throw ValidationError(field, "table potential needs at least one value");
    if (positive) p.nonnegative = p.strictly_positive = true;
    return p;
  }
  throw ValidationError(field, "unknown potential '" + ref + "'");
}

void validate(const RunConfig& c) {
  static const std::set<std::string> commands{"pressure", "gurevich", "loops", "group-ext", "flow"};
  if (!commands.count(c.command)) throw ValidationError("command", "unknown command '" + c.command + "'");
  static const std::set<std::string> families{"full", "renewal", "matrix"};
  if (!families.count(c.shift.family)) throw ValidationError("shift.family", "unknown family '" + c.shift.family + "'");
  if (c.shift.family == "full" && c.shift.n == 0) throw ValidationError("shift.n", "must be at least 1");
  if (c.shift.family == "matrix" && c.shift.matrix.empty()) throw ValidationError("shift.matrix", "is empty");
  for (const auto& [name, p] : c.potentials) {
    static const std::set<std::string> kinds{"zero", "constant", "alpha-farey", "first-symbol-negated", "table"};
    if (!kinds.count(p.kind)) throw ValidationError("potentials." + name + ".kind", "unknown kind '" + p.kind + "'");
    if (p.kind == "table" && p.rows.empty()) throw ValidationError("potentials." + name + ".rows", "is empty");
    for (const auto& row : p.rows) {
      if (row.first.size() != p.depth) {
        throw ValidationError("potentials." + name + ".rows", "row length does not match depth " + std::to_string(p.depth));
      }
    }
  }
  resolve_potential(c, c.phi, "phi");
  resolve_potential(c, c.psi, "psi");
  resolve_potential(c, c.flow.tau, "flow.tau");
  resolve_potential(c, c.flow.delta_g, "flow.delta_g");
  static const std::set<std::string> collections{"all", "periodic", "periodic-at", "starting-in", "bridges"};
  if (!collections.count(c.collection.kind)) {
    throw ValidationError("collection.kind", "unknown collection '" + c.collection.kind + "'");
  }
  if ((c.collection.kind == "starting-in" || c.collection.kind == "bridges") && c.collection.start.empty()) {
    throw ValidationError("collection.start", "needs at least one symbol");
  }
  if (c.collection.kind == "bridges" && c.collection.terminal.empty()) {
    throw ValidationError("collection.terminal", "needs at least one symbol");
  }
  static const std::set<std::string> methods{"pseudo-inverse", "window", "critical-exponent", "loop-route", "exhaustion",
                                             "auto"};
  if (!methods.count(c.method)) throw ValidationError("method", "unknown method '" + c.method + "'");
  const auto& d = c.numeric;
  if (d.trunc && *d.trunc == 0) throw ValidationError("numeric.trunc", "must be at least 1");
  if (d.max_len == 0) throw ValidationError("numeric.max_len", "must be at least 1");
  if (!(d.eta > 0.0)) throw ValidationError("numeric.eta", "must be positive");
  if (!std::is_sorted(d.t_grid.begin(), d.t_grid.end())) throw ValidationError("numeric.t_grid", "must be increasing");
  if (!(d.tolerance > 0.0)) throw ValidationError("numeric.tolerance", "must be positive");
  if (d.tail && d.tail->kind != "harmonic" && d.tail->kind != "parametric") {
    throw ValidationError("numeric.tail.kind", "unknown tail '" + d.tail->kind + "'");
  }
  if (c.method == "exhaustion" && c.command == "pressure" && d.sizes.empty()) {
    throw ValidationError("numeric.sizes", "exhaustion needs truncation sizes");
  }
  if (c.group.variant != "plain" && c.group.variant != "nobacktrack") {
    throw ValidationError("group.variant", "expected plain or nobacktrack");
  }
  static const std::set<std::string> outputs{"json", "csv", "text"};
  if (!outputs.count(c.output)) throw ValidationError("output", "expected json, csv or text");
}

std::string canonical_method(const std::string& name) {
  if (name == "pseudo") return "pseudo-inverse";
  if (name == "exhaust") return "exhaustion";
  return name;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : emit_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace ipress::cli
