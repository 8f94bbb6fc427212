#pragma once

#include <string>

#include "gridrisk/catalog.hpp"
#include "gridrisk/rational.hpp"

namespace gridrisk {

/// The three multiplicative risk factors, kept as exact rationals so scored
/// tables reproduce without tolerances.
struct RiskTriple {
  Rational p_threat;
  Rational p_vulnerability;
  Rational impact;

  friend bool operator==(const RiskTriple&, const RiskTriple&) = default;
};

namespace detail {

inline void check_component(const Rational& value, const char* label) {
  if (value < Rational(kScoreMin) || value > Rational(kScoreMax)) {
    throw RangeError(std::string(label) + " " + value.str() +
                     " out of range [0, 10]");
  }
}

}  // namespace detail

/// Risk factor: probability of threat x probability of vulnerability x
/// impact of vulnerability. Exact; range [0, 1000].
inline Rational physical_risk_score(const RiskTriple& t) {
  detail::check_component(t.p_threat, "p_threat");
  detail::check_component(t.p_vulnerability, "p_vulnerability");
  detail::check_component(t.impact, "impact");
  return t.p_threat * t.p_vulnerability * t.impact;
}

/// Mean of the five DREAD attributes, exact (denominator divides 5).
inline Rational dread_overall(const DreadScore& d) {
  Rational sum = Rational(d.damage.value()) + Rational(d.reproducibility.value()) +
                 Rational(d.exploitability.value()) +
                 Rational(d.affected_users.value()) +
                 Rational(d.discoverability.value());
  return sum / Rational(5);
}

/// Bridges the cyber model into the physical one:
///   p_threat        = mean(reproducibility, exploitability)
///   p_vulnerability = discoverability
///   impact          = mean(damage, affected users)
inline RiskTriple map_dread_to_triple(const DreadScore& d) {
  RiskTriple t;
  t.p_threat = (Rational(d.reproducibility.value()) +
                Rational(d.exploitability.value())) /
               Rational(2);
  t.p_vulnerability = Rational(d.discoverability.value());
  t.impact = (Rational(d.damage.value()) + Rational(d.affected_users.value())) /
             Rational(2);
  return t;
}

/// Rounds each component to the nearest integer, ties to even. Both the
/// exact and integerized triples are kept on register entries, so nothing
/// is lost to rounding.
inline RiskTriple integerize_triple(const RiskTriple& t) {
  detail::check_component(t.p_threat, "p_threat");
  detail::check_component(t.p_vulnerability, "p_vulnerability");
  detail::check_component(t.impact, "impact");
  return RiskTriple{
      Rational(round_half_even(t.p_threat)),
      Rational(round_half_even(t.p_vulnerability)),
      Rational(round_half_even(t.impact)),
  };
}

/// Ranking key used for cyber entries in the combined register: the mapped
/// triple, integerized, pushed through the risk-factor product. The DREAD
/// mean stays available as an auxiliary score.
inline Rational cyber_risk_score(const DreadScore& d) {
  return physical_risk_score(integerize_triple(map_dread_to_triple(d)));
}

inline std::string format_triple(const RiskTriple& t) {
  return "(" + format_decimal(t.p_threat) + ", " +
         format_decimal(t.p_vulnerability) + ", " + format_decimal(t.impact) +
         ")";
}

}  // namespace gridrisk
