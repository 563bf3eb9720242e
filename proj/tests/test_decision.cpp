#include "deme/decision.hpp"

#include <algorithm>
#include <random>

#include "deme/error.hpp"
#include "doctest.h"

using namespace deme;
using namespace deme::decision;

namespace {

Tally counts(std::uint64_t yes, std::uint64_t no, std::uint64_t abstain, std::uint64_t eligible) {
  return {yes, no, abstain, yes + no + abstain, eligible};
}

Poll make_poll(DecisionRule rule, int eligible) {
  Poll p;
  p.poll_id = "poll-1";
  p.rule = rule;
  for (int i = 0; i < eligible; ++i) p.eligible.insert("m" + std::to_string(i));
  return p;
}

}  // namespace

TEST_CASE("decide: worked examples") {
  CHECK(decide(DecisionRule::majority(), counts(3, 2, 0, 5)) == Outcome::Adopted);
  CHECK(decide(DecisionRule::supermajority({2, 3}), counts(4, 2, 0, 6)) == Outcome::Adopted);
  CHECK(decide(DecisionRule::unanimity(), counts(2, 0, 1, 3)) == Outcome::Adopted);
  CHECK(decide(DecisionRule::majority({1, 2}), counts(2, 1, 1, 10)) == Outcome::QuorumNotMet);
}

TEST_CASE("decide: edges") {
  SUBCASE("majority tie keeps the status quo") {
    CHECK(decide(DecisionRule::majority(), counts(2, 2, 0, 4)) == Outcome::Rejected);
  }
  SUBCASE("no votes") {
    CHECK(decide(DecisionRule::majority(), counts(0, 0, 0, 4)) == Outcome::Rejected);
    CHECK(decide(DecisionRule::supermajority({2, 3}), counts(0, 0, 3, 4)) == Outcome::Rejected);
    CHECK(decide(DecisionRule::unanimity(), counts(0, 0, 2, 4)) == Outcome::Rejected);
  }
  SUBCASE("supermajority just below the threshold") {
    CHECK(decide(DecisionRule::supermajority({2, 3}), counts(3, 2, 0, 5)) == Outcome::Rejected);
  }
  SUBCASE("unanimity is broken by a single no") {
    CHECK(decide(DecisionRule::unanimity(), counts(9, 1, 0, 10)) == Outcome::Rejected);
  }
  SUBCASE("quorum boundary and abstentions count toward it") {
    CHECK(decide(DecisionRule::majority({1, 2}), counts(3, 1, 1, 10)) == Outcome::Adopted);
    CHECK(decide(DecisionRule::majority({1, 3}), counts(1, 0, 0, 4)) == Outcome::QuorumNotMet);  // ceil(4/3)=2
    CHECK(decide(DecisionRule::majority({1, 3}), counts(1, 0, 1, 4)) == Outcome::Adopted);
    CHECK(decide(DecisionRule::majority({1, 1}), counts(4, 0, 0, 5)) == Outcome::QuorumNotMet);
  }
}

TEST_CASE("rule validation") {
  auto code = [](const DecisionRule& r) {
    try {
      r.validate();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadRequest;
  };
  CHECK(code(DecisionRule::supermajority(Rational::parse("0.4"))) == ErrorCode::InvalidRule);
  CHECK(code(DecisionRule::supermajority({1, 2})) == ErrorCode::InvalidRule);
  CHECK(code(DecisionRule::supermajority({3, 2})) == ErrorCode::InvalidRule);
  CHECK(code(DecisionRule::majority({5, 4})) == ErrorCode::InvalidRule);
  CHECK_NOTHROW(DecisionRule::supermajority({1, 1}).validate());
  CHECK_NOTHROW(DecisionRule::unanimity({1, 1}).validate());
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("2/3") == Rational{2, 3});
  CHECK(Rational::parse("4/6") == Rational{2, 3});
  CHECK(Rational::parse("0.5") == Rational{1, 2});
  CHECK(Rational::parse("1") == Rational{1, 1});
  CHECK(Rational::parse("0") == Rational{0, 1});
  CHECK(Rational::parse("2/3").to_string() == "2/3");
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("-1/2"), Error);
  CHECK_THROWS_AS(Rational::parse("abc"), Error);
  CHECK(Rational{2, 3} > Rational{1, 2});
}

TEST_CASE("tally counts effective votes with replacement") {
  auto p = make_poll(DecisionRule::majority(), 4);
  CHECK(p.tally() == Tally{0, 0, 0, 0, 4});
  p.votes["m0"] = Choice::Yes;
  p.votes["m1"] = Choice::Yes;
  p.votes["m2"] = Choice::No;
  p.votes["m3"] = Choice::Abstain;
  CHECK(p.tally() == Tally{2, 1, 1, 4, 4});
  auto q = make_poll(DecisionRule::majority(), 4);
  q.votes["m0"] = Choice::Yes;
  q.votes["m0"] = Choice::No;
  CHECK(q.tally() == Tally{0, 1, 0, 1, 4});
}

TEST_CASE("decide matches a float-free brute-force reading of the rules") {
  // Oracle: enumerate ceil by counting up, compare ratios by cross-multiplying.
  auto oracle = [](const DecisionRule& r, const Tally& t) {
    std::uint64_t needed = 0;
    while (needed * static_cast<std::uint64_t>(r.quorum.den()) <
           static_cast<std::uint64_t>(r.quorum.num()) * t.eligible_count) {
      ++needed;
    }
    if (t.cast < needed) return Outcome::QuorumNotMet;
    bool ok = false;
    if (r.kind == RuleKind::Majority) ok = t.yes > t.no;
    if (r.kind == RuleKind::Unanimity) ok = t.no == 0 && t.yes > 0;
    if (r.kind == RuleKind::Supermajority) {
      ok = t.yes + t.no > 0 && t.yes * static_cast<std::uint64_t>(r.threshold.den()) >=
                                   static_cast<std::uint64_t>(r.threshold.num()) * (t.yes + t.no);
    }
    return ok ? Outcome::Adopted : Outcome::Rejected;
  };
  const std::vector<DecisionRule> rules = {
      DecisionRule::majority(),           DecisionRule::majority({1, 2}),     DecisionRule::majority({2, 3}),
      DecisionRule::supermajority({2, 3}), DecisionRule::supermajority({3, 5}, {1, 4}),
      DecisionRule::supermajority({1, 1}), DecisionRule::unanimity(),          DecisionRule::unanimity({1, 1})};
  for (const auto& rule : rules) {
    for (std::uint64_t e = 1; e <= 7; ++e) {
      for (std::uint64_t y = 0; y <= e; ++y) {
        for (std::uint64_t n = 0; y + n <= e; ++n) {
          for (std::uint64_t a = 0; y + n + a <= e; ++a) {
            const auto t = counts(y, n, a, e);
            REQUIRE(decide(rule, t) == oracle(rule, t));
          }
        }
      }
    }
  }
}

TEST_CASE("raising a supermajority threshold never adopts more") {
  const std::vector<Rational> thresholds = {{51, 100}, {3, 5}, {2, 3}, {3, 4}, {9, 10}, {1, 1}};
  for (std::uint64_t y = 0; y <= 12; ++y) {
    for (std::uint64_t n = 0; n <= 12; ++n) {
      bool previously_adopted = true;
      for (const auto& t : thresholds) {
        const bool adopted = decide(DecisionRule::supermajority(t), counts(y, n, 0, 24)) == Outcome::Adopted;
        CHECK_FALSE((adopted && !previously_adopted));
        previously_adopted = adopted;
      }
    }
  }
}

TEST_CASE("vote arrival order does not change the outcome") {
  std::mt19937_64 rng(17);
  std::vector<std::pair<std::string, Choice>> votes;
  for (int i = 0; i < 9; ++i) votes.emplace_back("m" + std::to_string(i), static_cast<Choice>(rng() % 3));
  auto run = [&](const DecisionRule& rule) {
    auto p = make_poll(rule, 10);
    for (const auto& [m, c] : votes) p.votes[m] = c;
    return std::pair{p.tally(), p.outcome()};
  };
  for (const auto& rule : {DecisionRule::majority({1, 2}), DecisionRule::supermajority({2, 3}), DecisionRule::unanimity()}) {
    const auto baseline = run(rule);
    for (int shuffle = 0; shuffle < 200; ++shuffle) {
      std::shuffle(votes.begin(), votes.end(), rng);
      CHECK(run(rule) == baseline);
    }
  }
}
