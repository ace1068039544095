#include "selftest.hpp"

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "ipress/properties.hpp"
#include "run.hpp"

namespace ipress::cli {

namespace {

double value_of(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>() == "inf" ? INFINITY : -INFINITY;
  return NAN;
}

std::string describe(double got, double want, double tol) {
  std::ostringstream os;
  os.precision(12);
  os << "got " << got << ", expected " << want << " within " << tol;
  return os.str();
}

SelftestLine golden(const std::string& name, double got, double want, double tol) {
  return {name, std::abs(got - want) <= tol, describe(got, want, tol)};
}

}  // namespace

std::vector<SelftestLine> selftest(unsigned seeds) {
  std::vector<SelftestLine> out;

  std::vector<std::vector<PropertyOutcome>> runs;
  for (unsigned s = 0; s < seeds; ++s) runs.push_back(run_property_suite(random_fixture(1000 + s)));
  for (const auto& o : merge_outcomes(runs)) {
    std::ostringstream os;
    os << o.checks << " checks, worst violation " << o.worst;
    if (!o.detail.empty()) os << "; " << o.detail;
    out.push_back({"property " + o.name, o.passed, os.str()});
  }

  for (const auto& f : fixture_catalog()) {
    try {
      const Report rep = run(f.config);
      const auto& p = rep.payload;
      if (f.name == "alpha-farey") {
        out.push_back(golden(f.name, value_of(p["result"]["value"]), f.expected[0].value, 1e-6));
        RunConfig c = f.config;
        c.psi = "one";
        const Report r2 = run(c);
        out.push_back(golden(f.name + " psi=1", value_of(r2.payload["result"]["value"]), f.expected[1].value, 1e-9));
      } else if (f.name == "renewal-phi") {
        RunConfig c = f.config;
        c.command = "gurevich";
        c.collection.kind = "periodic-at";
        c.collection.anchor = 1;
        const Report loops = run(c);
        out.push_back(golden(f.name + " all words vs loops at 1", value_of(p["result"]["value"]),
                             value_of(loops.payload["result"]["value"]), 0.01));
      } else if (f.name == "renewal-window") {
        const bool cert = p["result"].contains("certificate");
        out.push_back({f.name, rep.divergent && cert, rep.divergent ? "+inf with certificate" : "finite value"});
      } else if (f.config.command == "group-ext") {
        out.push_back(golden(f.name, value_of(p["gap"]["P_Cprime_estimate"]), f.expected[0].value, 0.01));
      } else {
        out.push_back(golden(f.name, value_of(p["result"]["value"]), f.expected[0].value, 1e-9));
      }
    } catch (const std::exception& e) {
      out.push_back({f.name, false, e.what()});
    }
  }
  return out;
}

}  // namespace ipress::cli
