#include <functional>
#include <random>
#include <set>

#include "deme/error.hpp"
#include "deme/service.hpp"
#include "deme/utf8.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace deme;
using deme::anchor::Span;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::BadRequest;
}

struct Fixture {
  testing::TempDir dir;
  Service service{dir.path(), testing::stepping_clock()};
  std::string alice = service.add_member("Alice");
  std::string bob = service.add_member("Bob");

  const model::Comment& comment(const std::string& id) {
    return service.read([&](const model::State& s) -> const model::Comment& { return s.comment(id); });
  }
  const model::Document& document(const std::string& id) {
    return service.read([&](const model::State& s) -> const model::Document& { return s.document(id); });
  }
};

void collect(const std::vector<model::ThreadNode>& nodes, std::vector<const model::Comment*>& out) {
  for (const auto& n : nodes) {
    out.push_back(n.comment);
    collect(n.replies, out);
  }
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "create_document") {
  const auto id = service.create_document("Charter", "We meet weekly.", alice);
  const auto& doc = document(id);
  REQUIRE(doc.versions.size() == 1);
  CHECK(doc.versions[0].version_number == 1);
  CHECK(doc.versions[0].body == "We meet weekly.");
  CHECK(doc.title == "Charter");

  CHECK(code_of([&] { service.create_document("Charter", "", alice); }) == ErrorCode::EmptyBody);
  CHECK(code_of([&] { service.create_document("  ", "x", alice); }) == ErrorCode::EmptyTitle);
  CHECK(code_of([&] { service.create_document("Charter", "x", "mem-999"); }) == ErrorCode::UnknownMember);
  CHECK(code_of([&] { service.create_document("Charter", "\xFF", alice); }) == ErrorCode::InvalidEncoding);
  CHECK(service.create_document("Charter", "x", alice) != service.create_document("Charter", "x", alice));
}

TEST_CASE_FIXTURE(Fixture, "add_version: identity edit changes nothing") {
  const auto doc = service.create_document("T", "hello world", alice);
  const auto c = service.add_comment(doc, Anchor::at(1, {6, 11}), "h", "", bob).comment_id;
  const auto outcome = service.add_version(doc, "hello world", alice);
  CHECK(outcome.version_number == 2);
  CHECK(outcome.obsoleted.empty());
  CHECK_FALSE(comment(c).pertinence.obsolete);
  CHECK(*comment(c).live_span == Span{6, 11});
}

TEST_CASE_FIXTURE(Fixture, "add_version: pure shift") {
  const auto doc = service.create_document("T", "hello world", alice);
  const auto c = service.add_comment(doc, Anchor::at(1, {6, 11}), "on world", "", bob).comment_id;
  service.add_version(doc, "oh hello world", alice);
  CHECK_FALSE(comment(c).pertinence.obsolete);
  CHECK(*comment(c).live_span == Span{9, 14});
}

TEST_CASE_FIXTURE(Fixture, "add_version: deleting the commented word obsoletes the comment") {
  const auto doc = service.create_document("T", "hello world", alice);
  const auto c = service.add_comment(doc, Anchor::at(1, {6, 11}), "on world", "", bob).comment_id;
  const auto outcome = service.add_version(doc, "hello", alice);
  REQUIRE(outcome.obsoleted.size() == 1);
  CHECK(outcome.obsoleted[0].comment_id == c);
  CHECK(comment(c).pertinence == model::Pertinence::obsoleted(2, anchor::ObsoleteReason::Deleted));
  CHECK_FALSE(comment(c).live_span.has_value());

  // Oracle: replay the computed script character by character; none of the
  // excerpt's characters survive, and the excerpt occurs nowhere in the new body.
  const auto script = anchor::diff(U"hello world", U"hello");
  CHECK(oracle::migrate({6, 11}, script).verdict == oracle::Verdict::Deleted);
  CHECK(std::string("hello").find("world") == std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "add_version errors") {
  const auto doc = service.create_document("T", "abc", alice);
  CHECK(code_of([&] { service.add_version("doc-404", "x", alice); }) == ErrorCode::UnknownDocument);
  CHECK(code_of([&] { service.add_version(doc, "", alice); }) == ErrorCode::EmptyBody);
}

TEST_CASE_FIXTURE(Fixture, "add_comment") {
  const auto doc = service.create_document("T", "0123456789", alice);

  const auto top = service.add_comment(doc, Anchor::whole_document(), "General", "Looks fine", alice);
  CHECK_FALSE(top.pertinence.obsolete);
  CHECK(comment(top.comment_id).depth == 0);

  const auto reply = service.add_comment(doc, Anchor::whole_document(), "Re: General", "", bob, top.comment_id);
  CHECK(comment(reply.comment_id).depth == 1);

  CHECK(code_of([&] { service.add_comment(doc, Anchor::at(1, {5, 50}), "h", "", bob); }) ==
        ErrorCode::SpanOutOfRange);
  CHECK(code_of([&] { service.add_comment(doc, Anchor::at(1, {3, 3}), "h", "", bob); }) == ErrorCode::InvalidSpan);
  CHECK(code_of([&] { service.add_comment(doc, Anchor::at(2, {0, 1}), "h", "", bob); }) ==
        ErrorCode::UnknownVersion);
  CHECK(code_of([&] { service.add_comment(doc, Anchor::whole_document(), "h", "", bob, "cmt-999"); }) ==
        ErrorCode::UnknownParent);
  CHECK(code_of([&] { service.add_comment(doc, Anchor::whole_document(), "", "body", bob); }) ==
        ErrorCode::EmptyHeader);
  CHECK(code_of([&] { service.add_comment("doc-404", Anchor::whole_document(), "h", "", bob); }) ==
        ErrorCode::UnknownDocument);

  const auto other = service.create_document("Other", "zzz", alice);
  CHECK(code_of([&] { service.add_comment(other, Anchor::whole_document(), "h", "", bob, top.comment_id); }) ==
        ErrorCode::CrossDocumentParent);
}

TEST_CASE_FIXTURE(Fixture, "comments on an older version are migrated at creation") {
  const auto doc = service.create_document("T", "alpha beta gamma", alice);
  service.add_version(doc, "alpha BETA gamma", alice);
  service.add_version(doc, "intro: alpha BETA gamma", alice);

  const auto survives = service.add_comment(doc, Anchor::at(1, {11, 16}), "gamma", "", bob);
  CHECK_FALSE(survives.pertinence.obsolete);
  CHECK(*comment(survives.comment_id).live_span == Span{18, 23});

  const auto lost = service.add_comment(doc, Anchor::at(1, {6, 10}), "beta", "", bob);
  CHECK(lost.pertinence == model::Pertinence::obsoleted(2, anchor::ObsoleteReason::Deleted));

  // Obsolete at creation: a later version must not revive it.
  service.add_version(doc, "alpha beta gamma", alice);
  CHECK(comment(lost.comment_id).pertinence.at_version == 2);
}

TEST_CASE_FIXTURE(Fixture, "spans count code points, not bytes") {
  const auto doc = service.create_document("T", "caf\xC3\xA9 \xF0\x9F\x98\x80 bar", alice);  // café 😀 bar
  const auto c = service.add_comment(doc, Anchor::at(1, {7, 10}), "bar", "", bob);
  CHECK(service.read([&](const model::State& s) { return s.excerpt(s.comment(c.comment_id)); }) == "bar");
  service.add_version(doc, "\xC3\xA9\xC3\xA9 caf\xC3\xA9 \xF0\x9F\x98\x80 bar", alice);  // "éé " prepended
  CHECK(*comment(c.comment_id).live_span == Span{10, 13});
}

TEST_CASE_FIXTURE(Fixture, "thread_tree") {
  const auto doc = service.create_document("T", "hello world", alice);
  CHECK(service.read([&](const model::State& s) { return s.thread_tree(doc).size(); }) == 0);

  const auto a = service.add_comment(doc, Anchor::at(1, {6, 11}), "a", "", alice).comment_id;
  const auto b = service.add_comment(doc, Anchor::whole_document(), "b", "", bob, a).comment_id;
  const auto c = service.add_comment(doc, Anchor::whole_document(), "c", "", bob).comment_id;
  service.add_version(doc, "hello", alice);  // a becomes obsolete
  const auto d = service.add_comment(doc, Anchor::whole_document(), "d", "", alice, a).comment_id;

  service.read([&](const model::State& s) {
    const auto forest = s.thread_tree(doc);
    REQUIRE(forest.size() == 2);
    CHECK(forest[0].comment->comment_id == a);
    CHECK(forest[0].comment->pertinence.obsolete);
    REQUIRE(forest[0].replies.size() == 2);
    CHECK(forest[0].replies[0].comment->comment_id == b);
    CHECK(forest[0].replies[1].comment->comment_id == d);
    CHECK(forest[1].comment->comment_id == c);
    CHECK(forest[1].replies.empty());
    return 0;
  });
  CHECK(code_of([&] { service.read([&](const model::State& s) { return s.thread_tree("doc-404").size(); }); }) ==
        ErrorCode::UnknownDocument);
}

TEST_CASE_FIXTURE(Fixture, "random histories keep the model invariants") {
  std::mt19937_64 rng(4242);
  const auto doc = service.create_document("T", "The committee shall meet every week to review proposals.", alice);
  std::map<std::string, model::Pertinence> seen;
  std::vector<std::string> ids;

  for (int round = 0; round < 12; ++round) {
    const auto& latest = document(doc).latest();
    const auto text = latest.text;
    for (int k = 0; k < 4; ++k) {
      std::optional<std::string> parent;
      if (!ids.empty() && rng() % 2) parent = ids[rng() % ids.size()];
      Anchor anchor = Anchor::whole_document();
      if (rng() % 4 != 0 && !text.empty()) {
        const std::size_t start = rng() % text.size();
        anchor = Anchor::at(latest.version_number, {start, std::min(text.size(), start + 1 + rng() % 10)});
      }
      ids.push_back(service.add_comment(doc, anchor, "h" + std::to_string(ids.size()), "", bob, parent).comment_id);
    }
    auto next = oracle::mutate(rng, text, 200);
    if (next.empty()) next = U"x";
    service.add_version(doc, utf8::encode(next), alice);

    service.read([&](const model::State& s) {
      const auto& d = s.document(doc);
      for (std::size_t i = 0; i < d.versions.size(); ++i) REQUIRE(d.versions[i].version_number == i + 1);

      std::vector<const model::Comment*> flat;
      collect(s.thread_tree(doc), flat);
      REQUIRE(flat.size() == ids.size());
      std::set<std::string> unique;
      for (const auto* c : flat) {
        unique.insert(c->comment_id);
        if (c->parent_id) REQUIRE(s.comment(*c->parent_id).created_at <= c->created_at);
        if (!c->anchor.is_span()) REQUIRE_FALSE(c->pertinence.obsolete);
        if (auto it = seen.find(c->comment_id); it != seen.end() && it->second.obsolete) {
          REQUIRE(c->pertinence == it->second);  // never revived, never re-stamped
        }
        seen[c->comment_id] = c->pertinence;
        if (c->live_span) {
          REQUIRE(utf8::encode(anchor::resolve_span(d.latest().text, *c->live_span)) == s.excerpt(*c));
        }
      }
      REQUIRE(unique.size() == ids.size());
      return 0;
    });
  }
}
