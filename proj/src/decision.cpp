#include "deme/decision.hpp"

#include "deme/error.hpp"

namespace deme::decision {

void DecisionRule::validate() const {
  if (quorum > Rational{1, 1}) throw Error(ErrorCode::InvalidRule, "quorum must lie in [0, 1]");
  if (kind == RuleKind::Supermajority && (threshold <= Rational{1, 2} || threshold > Rational{1, 1})) {
    throw Error(ErrorCode::InvalidRule, "supermajority threshold must lie in (1/2, 1], got " + threshold.to_string());
  }
}

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::Majority: return "majority";
    case RuleKind::Supermajority: return "supermajority";
    case RuleKind::Unanimity: return "unanimity";
  }
  return "";
}

std::string_view to_string(Choice choice) {
  switch (choice) {
    case Choice::Yes: return "yes";
    case Choice::No: return "no";
    case Choice::Abstain: return "abstain";
  }
  return "";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Adopted: return "adopted";
    case Outcome::Rejected: return "rejected";
    case Outcome::QuorumNotMet: return "quorum_not_met";
  }
  return "";
}

std::string_view to_string(PollStatus status) {
  return status == PollStatus::Open ? "open" : "closed";
}

RuleKind parse_rule_kind(std::string_view text) {
  if (text == "majority") return RuleKind::Majority;
  if (text == "supermajority") return RuleKind::Supermajority;
  if (text == "unanimity") return RuleKind::Unanimity;
  throw Error(ErrorCode::InvalidRule, "unknown rule kind '" + std::string(text) + "'");
}

Choice parse_choice(std::string_view text) {
  if (text == "yes") return Choice::Yes;
  if (text == "no") return Choice::No;
  if (text == "abstain") return Choice::Abstain;
  throw Error(ErrorCode::BadRequest, "choice must be yes, no or abstain");
}

Outcome decide(const DecisionRule& rule, const Tally& tally) {
  using wide = unsigned __int128;
  // cast < ceil(quorum * eligible)  <=>  cast * den < quorum_num * eligible
  if (wide{tally.cast} * static_cast<wide>(rule.quorum.den()) <
      static_cast<wide>(rule.quorum.num()) * wide{tally.eligible_count}) {
    return Outcome::QuorumNotMet;
  }
  bool adopted = false;
  switch (rule.kind) {
    case RuleKind::Majority:
      adopted = tally.yes > tally.no;
      break;
    case RuleKind::Supermajority: {
      const wide decided = wide{tally.yes} + tally.no;
      adopted = decided > 0 && wide{tally.yes} * static_cast<wide>(rule.threshold.den()) >=
                                   static_cast<wide>(rule.threshold.num()) * decided;
      break;
    }
    case RuleKind::Unanimity:
      adopted = tally.no == 0 && tally.yes >= 1;
      break;
  }
  return adopted ? Outcome::Adopted : Outcome::Rejected;
}

Tally Poll::tally() const {
  Tally t;
  t.eligible_count = eligible.size();
  for (const auto& [member, choice] : votes) {
    switch (choice) {
      case Choice::Yes: ++t.yes; break;
      case Choice::No: ++t.no; break;
      case Choice::Abstain: ++t.abstain; break;
    }
    ++t.cast;
  }
  return t;
}

}  // namespace deme::decision
