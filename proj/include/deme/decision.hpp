#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "deme/rational.hpp"
#include "deme/timestamp.hpp"

// Polls over a document version and their evaluation under decision rules.
// Every comparison is done in exact integer arithmetic.
namespace deme::decision {

enum class RuleKind { Majority, Supermajority, Unanimity };

struct DecisionRule {
  RuleKind kind = RuleKind::Majority;
  /// Required yes share of yes + no, in (1/2, 1]. Supermajority only.
  Rational threshold{1, 1};
  /// Fraction of eligible members that must cast any vote, in [0, 1].
  Rational quorum{0, 1};

  static DecisionRule majority(Rational quorum = {0, 1}) { return {RuleKind::Majority, {1, 1}, quorum}; }
  static DecisionRule supermajority(Rational threshold, Rational quorum = {0, 1}) {
    return {RuleKind::Supermajority, threshold, quorum};
  }
  static DecisionRule unanimity(Rational quorum = {0, 1}) { return {RuleKind::Unanimity, {1, 1}, quorum}; }

  /// Throws Error(InvalidRule).
  void validate() const;

  friend bool operator==(const DecisionRule&, const DecisionRule&) = default;
};

enum class Choice { Yes, No, Abstain };
enum class Outcome { Adopted, Rejected, QuorumNotMet };
enum class PollStatus { Open, Closed };

std::string_view to_string(RuleKind kind);
std::string_view to_string(Choice choice);
std::string_view to_string(Outcome outcome);
std::string_view to_string(PollStatus status);
RuleKind parse_rule_kind(std::string_view text);
Choice parse_choice(std::string_view text);

struct Tally {
  std::uint64_t yes = 0;
  std::uint64_t no = 0;
  std::uint64_t abstain = 0;
  std::uint64_t cast = 0;
  std::uint64_t eligible_count = 0;

  friend bool operator==(const Tally&, const Tally&) = default;
};

/// Pure function of the rule and the counts. Abstentions count toward quorum
/// but never toward the yes/no comparison; a majority tie is rejected.
Outcome decide(const DecisionRule& rule, const Tally& tally);

struct Poll {
  std::string poll_id;
  std::string document_id;
  std::uint64_t version_number = 0;
  std::string question;
  DecisionRule rule;
  std::set<std::string> eligible;
  std::string opened_by;
  PollStatus status = PollStatus::Open;
  Timestamp created_at;
  /// Effective vote per member; a later vote replaces an earlier one.
  std::map<std::string, Choice> votes;

  Tally tally() const;
  Outcome outcome() const { return decide(rule, tally()); }
};

}  // namespace deme::decision
