#pragma once

// Induced pressure P_psi(phi, C): partition sums over psi-windows, the
// pseudo-inverse of the classical pressure on finite truncations, and
// exhaustion by increasing truncations.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ipress/potential.hpp"
#include "ipress/shift.hpp"
#include "ipress/transfer.hpp"

namespace ipress {

enum class Method { CriticalExponent, PseudoInverse, LoopRoute, Exhaustion };

std::string to_string(Method method);

/// Evidence attached to a +inf verdict.
struct DivergenceCertificate {
  std::string reason;
  double window_upper = 0.0;  ///< T of the witnessing window (T - eta, T]
  double eta = 0.0;
  std::vector<std::size_t> truncation_sizes;
  std::vector<double> log_sums;  ///< log window sum per truncation size
  Word witness;                  ///< window member reaching the largest symbol
};

struct Diagnostics {
  std::size_t truncation_size = 0;
  std::size_t max_word_length = 0;
  double eta = 0.0;
  std::size_t evaluations = 0;        ///< root-finder function evaluations
  std::size_t perron_iterations = 0;
  std::size_t words_visited = 0;
  std::size_t loops = 0;
  bool length_capped = false;         ///< some window member hit the length cap
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct PressureResult {
  double value = 0.0;
  Method method = Method::PseudoInverse;
  double lower = 0.0;
  double upper = 0.0;
  Diagnostics diagnostics;
  std::optional<DivergenceCertificate> certificate;
  /// Exhaustion: value per truncation. Window estimator: value per T.
  std::vector<double> sequence;
  std::vector<double> sequence_at;

  bool finite() const noexcept;
};

struct PseudoInverseOptions {
  double tolerance = 1e-10;  ///< absolute, in beta
  double center = 0.0;
  int max_expansions = 60;
  PerronOptions perron;
};

/// inf{beta : P_1(phi - beta psi, C) <= 0} on a finite truncation, where P_1 is
/// the log spectral radius over the components relevant to C. psi must be
/// strictly positive on every transition of the truncation.
PressureResult pseudo_inverse_pressure(const Truncation& trunc, const Potential& phi,
                                       const Potential& psi, const WordCollection& collection,
                                       const PseudoInverseOptions& options = {});

struct WindowOptions {
  double eta = 1.0;
  std::vector<double> t_grid;  ///< increasing window upper ends
  std::size_t length_cap = 64;
  std::size_t max_words = 50'000'000;
  /// Countable alphabets only: re-run on prefix truncations of size N, 2N,
  /// 4N, 8N and issue +inf when a window sum keeps growing.
  bool divergence_probe = true;
  double growth_ratio = 0.9;
  double overflow_threshold = 1e12;
};

/// Window partition sums: for each T in the grid, (1/T) log of the sum of
/// exp S_w phi over members w of the collection with S_w psi in (T - eta, T].
/// value is the maximum over the tail half of the grid; the bracket is (last
/// value, tail maximum). psi must be declared nonnegative.
PressureResult estimate_pressure_window(const ShiftSpec& spec, const Potential& phi,
                                        const Potential& psi, const WordCollection& collection,
                                        const Truncation& trunc, const WindowOptions& options);

/// Growth rate of the window sums over the grid T_k = k eta up to t_max,
/// from a least-squares slope of their logarithms on the tail half.
PressureResult critical_exponent(const ShiftSpec& spec, const Potential& phi, const Potential& psi,
                                 const WordCollection& collection, const Truncation& trunc,
                                 double eta, double t_max, std::size_t length_cap = 64,
                                 std::size_t max_words = 50'000'000);

struct ExhaustionOptions {
  PseudoInverseOptions pseudo;
  std::optional<double> upper_bound;  ///< from the loop route or an embedding
};

/// Pseudo-inverse pressures over increasing retained sets. value is the last
/// term and is a lower bound; the upper end is +inf unless supplied or the
/// last set exhausts a finite alphabet.
PressureResult exhaustion_sequence(const ShiftSpec& spec, const Potential& phi, const Potential& psi,
                                   const WordCollection& collection,
                                   const std::vector<std::vector<Symbol>>& retained_sets,
                                   const ExhaustionOptions& options = {});

/// Entropy and integrals of the Markov measure built from the Perron vectors
/// of exp(phi - beta psi) on the dominant component.
struct VariationalCheck {
  double beta = 0.0;
  double entropy = 0.0;
  double phi_integral = 0.0;
  double psi_integral = 0.0;
  double log_radius = 0.0;
  double residual = 0.0;  ///< entropy + phi_integral - beta psi_integral
};

VariationalCheck variational_check(const Truncation& trunc, const Potential& phi,
                                   const Potential& psi, double beta,
                                   const PerronOptions& options = {});

}  // namespace ipress
