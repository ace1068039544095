#include "ipress/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"

namespace ipress {

namespace {

std::string tuple_string(std::span<const Symbol> t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ')';
  return os.str();
}

SignFlags flags_for_constant(double c) {
  SignFlags f;
  f.nonnegative = c >= 0.0;
  f.strictly_positive = c > 0.0;
  if (c > 0.0) f.lower_bound = c;
  return f;
}

}  // namespace

Potential::Potential(std::string name, std::size_t depth, Oracle value, SignFlags flags)
    : name_(std::move(name)),
      depth_(depth),
      value_(std::make_shared<const Oracle>(std::move(value))),
      flags_(flags) {
  if (depth_ == 0) throw DomainError("potential depth must be positive");
}

Potential Potential::zero() {
  Potential p("zero", 1, [](std::span<const Symbol>) { return 0.0; }, flags_for_constant(0.0));
  p.constant_ = 0.0;
  return p;
}

Potential Potential::constant(double c) {
  std::ostringstream name;
  name << "constant " << c;
  Potential p(name.str(), 1, [c](std::span<const Symbol>) { return c; }, flags_for_constant(c));
  p.constant_ = c;
  return p;
}

Potential Potential::alpha_farey_geometric() {
  SignFlags f;
  f.nonnegative = true;
  f.strictly_positive = true;
  return Potential(
      "alpha_farey_geometric", 1,
      [](std::span<const Symbol> t) {
        const Symbol n = t[0];
        if (n == 1) return std::log(2.0);
        const double x = static_cast<double>(n);
        return std::log1p(2.0 / (x - 1.0));  // log((n+1)/(n-1))
      },
      f);
}

Potential Potential::first_symbol_negated() {
  return Potential("first_symbol_negated", 1,
                   [](std::span<const Symbol> t) { return -static_cast<double>(t[0]); });
}

Potential Potential::from_table(std::size_t depth,
                                const std::vector<std::pair<std::vector<Symbol>, double>>& rows,
                                SignFlags flags, std::string name) {
  auto table = std::make_shared<std::map<std::vector<Symbol>, double>>();
  for (const auto& [tuple, value] : rows) {
    if (tuple.size() != depth) {
      throw DomainError("table row " + tuple_string(tuple) + " has length " +
                        std::to_string(tuple.size()) + ", expected depth " + std::to_string(depth));
    }
    if (!std::isfinite(value)) throw DomainError("table value for " + tuple_string(tuple) + " is not finite");
    (*table)[tuple] = value;
  }
  return Potential(
      std::move(name), depth,
      [table, depth](std::span<const Symbol> t) {
        std::vector<Symbol> key(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(depth));
        auto it = table->find(key);
        if (it == table->end()) throw DomainError("potential table has no row for " + tuple_string(key));
        return it->second;
      },
      flags);
}

Potential Potential::coboundary(const Potential& h) {
  const std::size_t d = h.depth();
  return Potential("coboundary(" + h.name() + ")", d + 1, [h, d](std::span<const Symbol> t) {
    return h(t.first(d)) - h(t.subspan(1, d));
  });
}

double Potential::operator()(std::span<const Symbol> tuple) const {
  if (tuple.size() < depth_) {
    throw DomainError("potential " + name_ + " of depth " + std::to_string(depth_) +
                      " evaluated on a tuple of length " + std::to_string(tuple.size()));
  }
  const double v = (*value_)(tuple.first(depth_));
  if (!std::isfinite(v)) {
    throw DomainError("potential " + name_ + " is not finite on " + tuple_string(tuple.first(depth_)));
  }
  if ((flags_.strictly_positive && !(v > 0.0)) || (flags_.nonnegative && v < 0.0) ||
      (flags_.lower_bound && v < *flags_.lower_bound)) {
    throw PreconditionError("declared sign flag of potential " + name_ + " violated at " +
                            tuple_string(tuple.first(depth_)));
  }
  return v;
}

Potential Potential::with_flags(SignFlags flags) const {
  Potential p = *this;
  p.flags_ = flags;
  return p;
}

Potential Potential::renamed(std::string name) const {
  Potential p = *this;
  p.name_ = std::move(name);
  return p;
}

Potential combine(const Potential& p1, const Potential& p2, std::pair<double, double> coeffs) {
  const auto [a, b] = coeffs;
  const std::size_t depth = std::max(p1.depth(), p2.depth());

  // Unchecked views of the inputs; the result carries its own flags.
  const Potential q1 = p1.with_flags({});
  const Potential q2 = p2.with_flags({});

  SignFlags f;
  const auto nonneg = [](const Potential& p) { return p.flags().nonnegative || p.flags().positive(); };
  if (a >= 0.0 && b >= 0.0 && nonneg(p1) && nonneg(p2)) {
    f.nonnegative = true;
    f.strictly_positive = (a > 0.0 && p1.flags().positive()) || (b > 0.0 && p2.flags().positive());
    const double lb1 = p1.flags().lower_bound.value_or(0.0);
    const double lb2 = p2.flags().lower_bound.value_or(0.0);
    const double lb = a * lb1 + b * lb2;
    if (lb > 0.0) f.lower_bound = lb;
  }

  std::ostringstream name;
  name << a << "*" << p1.name() << " + " << b << "*" << p2.name();
  Potential out(name.str(), depth,
                [q1, q2, a, b](std::span<const Symbol> t) {
                  double v = 0.0;
                  if (a != 0.0) v += a * q1(t);
                  if (b != 0.0) v += b * q2(t);
                  return v;
                },
                f);
  if (p1.constant_value() && p2.constant_value()) {
    out.constant_ = a * *p1.constant_value() + b * *p2.constant_value();
  }
  return out;
}

std::string to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::Exact: return "exact";
    case BoundaryMode::Sup: return "sup";
    case BoundaryMode::Inf: return "inf";
  }
  return "?";
}

BirkhoffSum birkhoff_sum(const Potential& p, const ShiftSpec& spec, std::span<const Symbol> w,
                         BoundaryMode mode, std::span<const Symbol> continuation,
                         const Truncation* trunc) {
  if (w.empty()) throw DomainError("Birkhoff sum over the empty word");
  std::vector<Symbol> ext(w.begin(), w.end());
  ext.insert(ext.end(), continuation.begin(), continuation.end());
  if (!is_admissible(spec, ext)) throw DomainError("word with continuation is not admissible");

  const std::size_t n = w.size();
  const std::size_t m = p.depth();
  const std::size_t missing = (m - 1 > continuation.size()) ? m - 1 - continuation.size() : 0;

  BirkhoffSum out;
  out.word.symbols.assign(w.begin(), w.end());

  auto sum_over = [&](const std::vector<Symbol>& seq) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += p(std::span<const Symbol>(seq).subspan(k, m));
    return s;
  };

  if (missing == 0) {
    out.value = sum_over(ext);
    out.boundary = BoundaryMode::Exact;
    return out;
  }

  if (trunc == nullptr) {
    throw ModeError("depth-" + std::to_string(m) + " Birkhoff sum needs " + std::to_string(missing) +
                    " lookahead symbols; pin a continuation or supply a truncation");
  }

  // Range over admissible completions of the missing lookahead inside trunc.
  double lo = kInf;
  double hi = -kInf;
  std::vector<Symbol> seq = ext;
  std::function<void(std::size_t)> extend = [&](std::size_t remaining) {
    if (remaining == 0) {
      const double s = sum_over(seq);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      return;
    }
    auto from = trunc->index_of(seq.back());
    if (!from) return;
    for (std::size_t j : trunc->successors(*from)) {
      seq.push_back(trunc->symbol(j));
      extend(remaining - 1);
      seq.pop_back();
    }
  };
  extend(missing);
  if (lo > hi) throw ModeError("no admissible completion of the word inside the truncation");

  switch (mode) {
    case BoundaryMode::Sup:
      out.value = hi;
      out.boundary = lo == hi ? BoundaryMode::Exact : BoundaryMode::Sup;
      break;
    case BoundaryMode::Inf:
      out.value = lo;
      out.boundary = lo == hi ? BoundaryMode::Exact : BoundaryMode::Inf;
      break;
    case BoundaryMode::Exact:
      if (lo != hi) throw ModeError("Birkhoff sum is not unique on the cylinder; use Sup or Inf");
      out.value = lo;
      out.boundary = BoundaryMode::Exact;
      break;
  }
  return out;
}

}  // namespace ipress
