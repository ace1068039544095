#include "ipress/flows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipress/error.hpp"
#include "ipress/transfer.hpp"

namespace ipress {

namespace {

bool irreducible(const Truncation& trunc) {
  const TransferGraph graph(trunc, 1);
  const auto comps = strongly_connected_components(graph);
  return comps.members.size() == 1 && comps.nontrivial[0];
}

PressureResult at_symbol(const FlowSpec& flow, const Truncation& trunc, Symbol a, const FlowOptions& options) {
  const LoopInventory inv =
      flow.base.is_finite()
          ? series_inventory(trunc, a, options.loop_cap)
          : enumerate_simple_loops(flow.base, WordCollection::periodic_at(a), trunc, options.loop_cap, options.loops);
  return loop_pressure(inv, flow.delta_g, flow.tau, options.pressure);
}

}  // namespace

PressureResult flow_pressure(const FlowSpec& flow, const Truncation& trunc, const FlowOptions& options) {
  if (!flow.tau.flags().strictly_positive) {
    throw PreconditionError("height function " + flow.tau.name() + " is not declared strictly positive");
  }
  if (trunc.empty()) throw DomainError("flow pressure needs a nonempty truncation");
  if (options.at && !trunc.retains(*options.at)) {
    throw DomainError("base symbol " + std::to_string(*options.at) + " is not in the truncation");
  }

  std::ostringstream note;
  PressureResult best;
  if (options.at || irreducible(trunc)) {
    const Symbol a = options.at ? *options.at : trunc.symbol(0);
    best = at_symbol(flow, trunc, a, options);
    note << "a=" << a;
    if (options.cross_check && flow.base.is_finite() && trunc.size() >= 2 && irreducible(trunc)) {
      const Symbol b = trunc.symbol(a == trunc.symbol(0) ? 1 : 0);
      const auto other = at_symbol(flow, trunc, b, options);
      note << "; cross-check a=" << b << " differs by " << std::abs(other.value - best.value);
    }
  } else {
    bool first = true;
    Symbol arg = 0;
    double lower = -kInf, upper = -kInf;
    for (Symbol a : trunc.retained()) {
      auto r = at_symbol(flow, trunc, a, options);
      lower = std::max(lower, r.lower);
      upper = std::max(upper, r.upper);
      if (first || r.value > best.value) {
        best = std::move(r);
        arg = a;
        first = false;
      }
    }
    best.lower = lower;
    best.upper = upper;
    note << "reducible truncation; max at a=" << arg;
  }
  best.diagnostics.note = best.diagnostics.note.empty() ? note.str() : best.diagnostics.note + "; " + note.str();
  return best;
}

PressureResult savchenko_entropy(const ShiftSpec& base, const Potential& tau, const Truncation& trunc,
                                 const FlowOptions& options) {
  return flow_pressure(FlowSpec{base, tau, Potential::zero()}, trunc, options);
}

}  // namespace ipress
