#include "run.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ipress/error.hpp"
#include "ipress/flows.hpp"
#include "ipress/loops.hpp"

namespace ipress::cli {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

std::string csv_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

json word_json(const Word& w) { return w.symbols; }

SignFlags flags_of(const PotentialDecl& d) {
  SignFlags f;
  f.nonnegative = d.nonnegative;
  f.strictly_positive = d.strictly_positive;
  f.lower_bound = d.lower_bound;
  return f;
}

bool declares_flags(const PotentialDecl& d) { return d.nonnegative || d.strictly_positive || d.lower_bound; }

}  // namespace

json to_json(const PressureResult& r) {
  json out;
  out["value"] = number(r.value);
  out["method"] = to_string(r.method);
  out["lower"] = number(r.lower);
  out["upper"] = number(r.upper);
  out["finite"] = r.finite();
  const auto& d = r.diagnostics;
  out["diagnostics"] = {{"truncation_size", d.truncation_size},
                        {"max_word_length", d.max_word_length},
                        {"eta", number(d.eta)},
                        {"evaluations", d.evaluations},
                        {"perron_iterations", d.perron_iterations},
                        {"words_visited", d.words_visited},
                        {"loops", d.loops},
                        {"length_capped", d.length_capped},
                        {"residual", number(d.residual)},
                        {"note", d.note}};
  if (r.certificate) {
    const auto& c = *r.certificate;
    json sizes = json::array();
    for (auto n : c.truncation_sizes) sizes.push_back(n);
    out["certificate"] = {{"reason", c.reason},
                          {"window", {number(c.window_upper - c.eta), number(c.window_upper)}},
                          {"eta", number(c.eta)},
                          {"truncation_sizes", sizes},
                          {"log_sums", numbers(c.log_sums)},
                          {"witness", word_json(c.witness)}};
  }
  if (!r.sequence.empty()) {
    out["sequence"] = numbers(r.sequence);
    out["sequence_at"] = numbers(r.sequence_at);
  }
  return out;
}

// ---------------------------------------------------------------------------

ShiftSpec build_shift(const ShiftDecl& decl) {
  if (decl.family == "full") return ShiftSpec::full(decl.n);
  if (decl.family == "renewal") return ShiftSpec::renewal();
  if (decl.family == "matrix") return ShiftSpec::from_matrix(decl.matrix);
  throw ValidationError("shift.family", "unknown family '" + decl.family + "'");
}

Potential build_potential(const RunConfig& config, const std::string& ref, const std::string& field) {
  const PotentialDecl d = resolve_potential(config, ref, field);
  Potential p = Potential::zero();
  if (d.kind == "zero") {
    p = Potential::zero();
  } else if (d.kind == "constant") {
    p = Potential::constant(d.value);
  } else if (d.kind == "alpha-farey") {
    p = Potential::alpha_farey_geometric();
  } else if (d.kind == "first-symbol-negated") {
    p = Potential::first_symbol_negated();
  } else if (d.kind == "table") {
    p = Potential::from_table(d.depth, d.rows, flags_of(d), ref);
  } else {
    throw ValidationError(field, "unknown potential kind '" + d.kind + "'");
  }
  if (declares_flags(d) && d.kind != "table") {
    SignFlags f = p.flags();
    f.nonnegative = f.nonnegative || d.nonnegative;
    f.strictly_positive = f.strictly_positive || d.strictly_positive;
    if (d.lower_bound) f.lower_bound = d.lower_bound;
    p = p.with_flags(f);
  }
  return p;
}

WordCollection build_collection(const CollectionDecl& d) {
  if (d.kind == "all") return WordCollection::all();
  if (d.kind == "periodic") return WordCollection::periodic();
  if (d.kind == "periodic-at") return WordCollection::periodic_at(d.anchor);
  if (d.kind == "starting-in") return WordCollection::starting_in(d.start);
  if (d.kind == "bridges") return WordCollection::bridges(d.start, d.terminal);
  throw ValidationError("collection.kind", "unknown collection '" + d.kind + "'");
}

Truncation build_truncation(const RunConfig& config, const ShiftSpec& spec) {
  if (config.numeric.trunc) return truncate_prefix(spec, *config.numeric.trunc);
  if (!spec.is_finite()) throw ValidationError("numeric.trunc", "required for a countable alphabet");
  return truncate_all(spec);
}

GroupModel build_group(const std::string& model) {
  auto count = [&](const std::string& digits) -> std::size_t {
    try {
      std::size_t used = 0;
      const long v = std::stol(digits, &used);
      if (used != digits.size() || v < 1) throw std::invalid_argument(digits);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ValidationError("group.model", "bad count in '" + model + "'");
    }
  };
  if (model == "z") return GroupModel::z_power(1);
  if (model.rfind("z^", 0) == 0) return GroupModel::z_power(count(model.substr(2)));
  if (model.rfind("free:", 0) == 0) return GroupModel::free_group(count(model.substr(5)));
  if (model.rfind("file:", 0) == 0) {
    const std::string path = model.substr(5);
    std::ifstream in(path);
    if (!in) throw ValidationError("group.model", "cannot read '" + path + "'");
    std::stringstream text;
    text << in.rdbuf();
    return GroupModel::finite_table_from_text(text.str());
  }
  throw ValidationError("group.model", "expected z^d, free:k or file:PATH, got '" + model + "'");
}

ExtensionVariant build_variant(const std::string& variant) {
  if (variant == "plain") return ExtensionVariant::Plain;
  if (variant == "nobacktrack") return ExtensionVariant::NoBacktrack;
  throw ValidationError("group.variant", "expected plain or nobacktrack");
}

// ---------------------------------------------------------------------------

namespace {

json inventory_json(const LoopInventory& inv) {
  const char* kind = inv.kind() == LoopInventory::Kind::Explicit ? "explicit"
                     : inv.kind() == LoopInventory::Kind::Series ? "series"
                                                                  : "aggregated";
  return {{"kind", kind},
          {"collection", inv.collection().describe()},
          {"loops", inv.loop_count()},
          {"max_length", inv.max_length()},
          {"exhausted", inv.exhausted()},
          {"source", inv.source()}};
}

// The harmonic majorant encodes one loop of psi-length log(k(k+1)) and zero
// phi-weight per length k: loops at 1 on the renewal shift with phi = 0 and
// the geometric psi.
bool harmonic_tail_applies(const RunConfig& c, const Potential& phi, Symbol anchor) {
  return c.shift.family == "renewal" && anchor == 1 && c.psi == "alpha-farey" && phi.constant_value() &&
         *phi.constant_value() == 0.0;
}

LoopInventory gurevich_inventory(const RunConfig& c, const ShiftSpec& spec, const Truncation& trunc,
                                 Symbol anchor) {
  if (spec.is_finite()) return series_inventory(trunc, anchor, c.numeric.max_len);
  LoopOptions lo;
  lo.threads = c.threads;
  return enumerate_simple_loops(spec, WordCollection::periodic_at(anchor), trunc, c.numeric.max_len, lo);
}

PressureResult loop_route(const RunConfig& c, const ShiftSpec& spec, const Truncation& trunc,
                          const Potential& phi, const Potential& psi, Symbol anchor, json& extra) {
  const LoopInventory inv = gurevich_inventory(c, spec, trunc, anchor);
  LoopPressureOptions opt;
  opt.tolerance = c.numeric.tolerance;
  std::string tail_note;
  if (c.numeric.tail) {
    const auto& t = *c.numeric.tail;
    if (t.kind == "parametric") {
      opt.tail = TailMajorant::parametric(inv.max_length(), t.a0, t.a1, t.a2, t.b_lo, t.b_hi);
    } else if (harmonic_tail_applies(c, phi, anchor)) {
      opt.tail = TailMajorant::harmonic(inv.max_length());
    } else {
      tail_note = "harmonic tail does not apply to these potentials; omitted";
    }
  }
  PressureResult r = loop_pressure(inv, phi, psi, opt);
  if (!tail_note.empty()) r.diagnostics.note += (r.diagnostics.note.empty() ? "" : "; ") + tail_note;
  extra["inventory"] = inventory_json(inv);
  extra["anchor"] = anchor;
  return r;
}

void add_sequence_csv(Report& rep, const PressureResult& r, const char* label) {
  if (r.sequence.empty()) return;
  rep.csv_header = {label, "value"};
  for (std::size_t i = 0; i < r.sequence.size(); ++i) {
    rep.csv_rows.push_back({csv_number(r.sequence_at[i]), csv_number(r.sequence[i])});
  }
}

Report run_pressure(const RunConfig& c) {
  Report rep;
  const ShiftSpec spec = build_shift(c.shift);
  const Potential phi = build_potential(c, c.phi, "phi");
  const Potential psi = build_potential(c, c.psi, "psi");
  const WordCollection coll = build_collection(c.collection);
  json extra = json::object();
  PressureResult r;
  // auto: exact on finite shifts; on countable ones only the window route
  // can certify divergence.
  std::string method = c.method;
  if (method == "auto") {
    method = spec.is_finite() ? "pseudo-inverse" : "window";
    extra["method_selected"] = method;
  }
  if (method == "exhaustion") {
    std::vector<std::vector<Symbol>> sets;
    for (std::size_t n : c.numeric.sizes) sets.push_back(spec.first_symbols(n));
    ExhaustionOptions opt;
    opt.pseudo.tolerance = c.numeric.tolerance;
    r = exhaustion_sequence(spec, phi, psi, coll, sets, opt);
    add_sequence_csv(rep, r, "truncation");
  } else {
    const Truncation trunc = build_truncation(c, spec);
    if (method == "pseudo-inverse") {
      PseudoInverseOptions opt;
      opt.tolerance = c.numeric.tolerance;
      r = pseudo_inverse_pressure(trunc, phi, psi, coll, opt);
    } else if (method == "window") {
      WindowOptions opt;
      opt.eta = c.numeric.eta;
      opt.t_grid = c.numeric.t_grid;
      if (opt.t_grid.empty()) {
        for (int k = 1; k <= 8; ++k) opt.t_grid.push_back(k * c.numeric.eta);
      }
      opt.length_cap = c.numeric.length_cap;
      r = estimate_pressure_window(spec, phi, psi, coll, trunc, opt);
      add_sequence_csv(rep, r, "T");
    } else if (method == "critical-exponent") {
      const double t_max = c.numeric.t_max.value_or(16.0 * c.numeric.eta);
      r = critical_exponent(spec, phi, psi, coll, trunc, c.numeric.eta, t_max, c.numeric.length_cap);
      add_sequence_csv(rep, r, "T");
    } else {
      if (coll.kind() != WordCollection::Kind::PeriodicAt) {
        throw ValidationError("collection.kind", "the loop route needs periodic-at");
      }
      r = loop_route(c, spec, trunc, phi, psi, coll.anchor(), extra);
    }
  }
  rep.payload["result"] = to_json(r);
  for (auto& [k, v] : extra.items()) rep.payload[k] = v;
  rep.divergent = r.value == kInf;
  return rep;
}

Report run_gurevich(const RunConfig& c) {
  Report rep;
  const ShiftSpec spec = build_shift(c.shift);
  const Potential phi = build_potential(c, c.phi, "phi");
  const Potential psi = build_potential(c, c.psi, "psi");
  const Truncation trunc = build_truncation(c, spec);
  json extra = json::object();
  const PressureResult r = loop_route(c, spec, trunc, phi, psi, c.collection.anchor, extra);
  rep.payload["result"] = to_json(r);
  for (auto& [k, v] : extra.items()) rep.payload[k] = v;
  rep.divergent = r.value == kInf;
  return rep;
}

Report run_loops(const RunConfig& c) {
  Report rep;
  const ShiftSpec spec = build_shift(c.shift);
  const Truncation trunc = build_truncation(c, spec);
  WordCollection coll = build_collection(c.collection);
  if (coll.kind() != WordCollection::Kind::PeriodicAt && coll.kind() != WordCollection::Kind::Bridges) {
    coll = WordCollection::periodic_at(c.collection.anchor);
  }
  LoopOptions lo;
  lo.threads = c.threads;
  const LoopInventory inv = enumerate_simple_loops(spec, coll, trunc, c.numeric.max_len, lo);
  rep.payload["inventory"] = inventory_json(inv);
  json counts = json::array();
  rep.csv_header = {"length", "count", "complete"};
  for (std::size_t n = 1; n < inv.counts().size(); ++n) {
    if (inv.counts()[n] == 0) continue;
    counts.push_back({{"length", n}, {"count", inv.counts()[n]}, {"complete", bool(inv.complete()[n])}});
    rep.csv_rows.push_back({std::to_string(n), std::to_string(inv.counts()[n]), inv.complete()[n] ? "1" : "0"});
  }
  rep.payload["counts"] = counts;
  if (!c.counts_only) {
    json loops = json::array();
    for (const auto& rec : inv.loops()) loops.push_back({{"head", rec.head}, {"chain", rec.chain}});
    rep.payload["loops"] = loops;
  }
  return rep;
}

Report run_group(const RunConfig& c) {
  Report rep;
  const ExtensionShift ext(build_group(c.group.model), build_variant(c.group.variant));
  rep.payload["extension"] = ext.describe();
  const GapReport gap = pressure_gap(ext, c.group.nmax);
  json table = json::array();
  rep.csv_header = {"n", "log_count", "rate"};
  for (const auto& row : gap.table) {
    table.push_back({{"n", row.n}, {"log_count", number(row.log_count)}, {"rate", number(row.rate)}});
    rep.csv_rows.push_back({std::to_string(row.n), csv_number(row.log_count), csv_number(row.rate)});
  }
  rep.payload["gap"] = {{"full_pressure", number(gap.full_pressure)},
                        {"P_Cprime_estimate", number(gap.estimate)},
                        {"gap", number(gap.gap)},
                        {"slope", number(gap.slope)},
                        {"slope_se", number(gap.slope_se)},
                        {"gap_fit", number(gap.gap_fit)},
                        {"tolerance", number(gap.tolerance)},
                        {"verdict", to_string(gap.verdict)},
                        {"table", table}};
  if (ext.variant == ExtensionVariant::Plain) {
    const LoopInventory inv = bridge_inventory(ext, c.group.nmax);
    LoopPressureOptions opt;
    opt.tolerance = c.numeric.tolerance;
    const PressureResult r = loop_pressure(inv, Potential::zero(), Potential::constant(1.0), opt);
    rep.payload["loop_route"] = to_json(r);
    rep.payload["loop_route"]["inventory"] = inventory_json(inv);
  }
  if (ext.group.is_finite()) {
    const auto irr = check_finite_irreducibility(ext);
    rep.payload["irreducibility"] = {{"finite_state_space", irr.finite_state_space},
                                     {"finitely_irreducible", irr.finitely_irreducible},
                                     {"reachable_states", irr.reachable_states},
                                     {"connecting_words", irr.connecting_words},
                                     {"max_connector_length", irr.max_connector_length},
                                     {"detail", irr.detail}};
  }
  return rep;
}

Report run_flow(const RunConfig& c) {
  Report rep;
  const ShiftSpec spec = build_shift(c.shift);
  FlowSpec flow{spec, build_potential(c, c.flow.tau, "flow.tau"), build_potential(c, c.flow.delta_g, "flow.delta_g")};
  const Truncation trunc = build_truncation(c, spec);
  FlowOptions opt;
  opt.loop_cap = c.numeric.max_len;
  opt.at = c.flow.at;
  opt.loops.threads = c.threads;
  opt.pressure.tolerance = c.numeric.tolerance;
  const PressureResult r = flow_pressure(flow, trunc, opt);
  rep.payload["result"] = to_json(r);
  rep.divergent = r.value == kInf;
  return rep;
}

}  // namespace

Report run(const RunConfig& config) {
  validate(config);
  Report rep;
  if (config.command == "pressure") rep = run_pressure(config);
  else if (config.command == "gurevich") rep = run_gurevich(config);
  else if (config.command == "loops") rep = run_loops(config);
  else if (config.command == "group-ext") rep = run_group(config);
  else if (config.command == "flow") rep = run_flow(config);
  else throw ValidationError("command", "unknown command '" + config.command + "'");
  json payload = {{"command", config.command}};
  for (auto& [k, v] : rep.payload.items()) payload[k] = v;
  rep.payload = std::move(payload);
  return rep;
}

json envelope(const Report& report, const RunConfig& config, double wall_time_s) {
  json out;
  out["meta"] = {{"version", kVersion}, {"config_hash", config_hash(config)}, {"wall_time_s", wall_time_s}};
  for (auto& [k, v] : report.payload.items()) out[k] = v;
  out["divergent"] = report.divergent;
  return out;
}

std::string render(const Report& report, const RunConfig& config, double wall_time_s) {
  if (config.output == "csv") {
    if (report.csv_header.empty()) {
      throw ValidationError("output", "csv is available for sequence outputs only (gap tables, sequences, counts)");
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < report.csv_header.size(); ++i) os << (i ? "," : "") << report.csv_header[i];
    os << '\n';
    for (const auto& row : report.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return os.str();
  }
  const json doc = envelope(report, config, wall_time_s);
  if (config.output == "json") return doc.dump(2) + "\n";

  std::ostringstream os;
  os << "command: " << config.command << '\n';
  auto line = [&](const std::string& key, const json& v) {
    os << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  };
  for (const char* key : {"result", "loop_route"}) {
    if (!report.payload.contains(key)) continue;
    const auto& r = report.payload[key];
    const std::string prefix = std::string(key) == "result" ? "" : "loop route ";
    line(prefix + "value", r["value"]);
    const auto end = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    line(prefix + "bracket", "[" + end(r["lower"]) + ", " + end(r["upper"]) + "]");
    line(prefix + "method", r["method"]);
    if (r.contains("certificate")) line(prefix + "certificate", r["certificate"]["reason"]);
    if (!r["diagnostics"]["note"].get<std::string>().empty()) line(prefix + "note", r["diagnostics"]["note"]);
  }
  if (report.payload.contains("gap")) {
    const auto& g = report.payload["gap"];
    for (const char* k : {"full_pressure", "P_Cprime_estimate", "gap", "slope", "verdict"}) line(k, g[k]);
  }
  if (report.payload.contains("counts")) {
    for (const auto& row : report.payload["counts"]) {
      os << "length " << row["length"].get<std::size_t>() << ": " << row["count"].get<std::uint64_t>() << '\n';
    }
  }
  line("wall_time_s", doc["meta"]["wall_time_s"]);
  return os.str();
}

}  // namespace ipress::cli
