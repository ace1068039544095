#include "fixtures.hpp"

#include <cmath>
#include <limits>

namespace ipress::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Fixture> build() {
  std::vector<Fixture> out;

  {
    Fixture f;
    f.name = "alpha-farey";
    f.description = "Renewal shift coding the harmonic alpha-Farey map; psi is the geometric potential "
                    "log|F'|, loops at the symbol 1 have psi-length log(k(k+1)).";
    f.reference = "harmonic alpha-Farey map with alpha_n = 1/n";
    auto& c = f.config;
    c.command = "gurevich";
    c.fixture = f.name;
    c.shift.family = "renewal";
    c.phi = "zero";
    c.psi = "alpha-farey";
    c.collection.kind = "periodic-at";
    c.collection.anchor = 1;
    c.method = "loop-route";
    c.numeric.trunc = 100'000;
    c.numeric.max_len = 100'000;
    c.numeric.tail = TailDecl{};
    f.expected = {{"P_psi(0, periodic at 1)", 1.0, "1", ""},
                  {"t(0) with psi = 1", std::log(2.0), "log 2", ""}};
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "renewal-phi";
    f.description = "Renewal shift with phi(w) = -w_1 and the geometric psi; all words and loops at 1 "
                    "give the same induced pressure.";
    f.reference = "renewal shift, first-symbol potential";
    auto& c = f.config;
    c.command = "pressure";
    c.fixture = f.name;
    c.shift.family = "renewal";
    c.phi = "neg-first";
    c.psi = "alpha-farey";
    c.collection.kind = "all";
    c.method = "pseudo-inverse";
    c.numeric.trunc = 200;
    c.numeric.max_len = 200;
    f.expected = {{"P_psi(phi, all words)", kNaN, "", "equals P_psi(phi, periodic at 1)"}};
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "renewal-window";
    f.description = "Renewal shift, phi = 0, geometric psi, all words: every psi-window holds "
                    "infinitely many words.";
    f.reference = "renewal shift, divergence of the full word collection";
    auto& c = f.config;
    c.command = "pressure";
    c.fixture = f.name;
    c.shift.family = "renewal";
    c.phi = "zero";
    c.psi = "alpha-farey";
    c.collection.kind = "all";
    c.method = "window";
    c.numeric.trunc = 64;
    c.numeric.t_grid = {1.0, 2.0};
    f.expected = {{"P_psi(0, all words)", std::numeric_limits<double>::infinity(), "+inf", ""}};
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "z-srw";
    f.description = "Z-extension of the full 2-shift (simple random walk on Z); closed paths grow like "
                    "binom(2n, n).";
    f.reference = "simple random walk on the integers";
    auto& c = f.config;
    c.command = "group-ext";
    c.fixture = f.name;
    c.group.model = "z^1";
    c.group.variant = "plain";
    c.group.nmax = 5000;
    f.expected = {{"P_1(0, closed paths)", std::log(2.0), "log 2", ""}, {"gap", 0.0, "0", ""}};
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "free-group-2";
    f.description = "Extension of the full 4-shift by the free group on two generators; return "
                    "probabilities decay like (sqrt 3 / 2)^n.";
    f.reference = "Kesten's spectral radius of the free group";
    auto& c = f.config;
    c.command = "group-ext";
    c.fixture = f.name;
    c.group.model = "free:2";
    c.group.variant = "plain";
    c.group.nmax = 2000;
    const double est = std::log(2.0 * std::sqrt(3.0));
    f.expected = {{"P_1(0, closed paths)", est, "log(2 sqrt 3)", ""},
                  {"gap", std::log(4.0) - est, "log(2 / sqrt 3)", ""}};
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "unit-suspension";
    f.description = "Suspension of the full 2-shift under the constant roof 1.";
    f.reference = "suspension flows, constant roof";
    auto& c = f.config;
    c.command = "flow";
    c.fixture = f.name;
    c.shift.family = "full";
    c.shift.n = 2;
    c.flow.tau = "one";
    c.flow.delta_g = "zero";
    f.expected = {{"h_top(flow)", std::log(2.0), "log 2", ""}};
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "full-shift-2";
    f.description = "Full 2-shift, phi = 0, psi = 1.";
    f.reference = "topological entropy of the full shift";
    auto& c = f.config;
    c.command = "pressure";
    c.fixture = f.name;
    c.shift.family = "full";
    c.shift.n = 2;
    c.phi = "zero";
    c.psi = "one";
    c.method = "pseudo-inverse";
    f.expected = {{"P_1(0, all words)", std::log(2.0), "log 2", ""}};
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

const std::vector<Fixture>& fixture_catalog() {
  static const std::vector<Fixture> catalog = build();
  return catalog;
}

const Fixture* find_fixture(const std::string& name) {
  for (const auto& f : fixture_catalog()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

}  // namespace ipress::cli
