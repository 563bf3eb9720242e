#include "deme/anchor_engine.hpp"

#include <algorithm>
#include <vector>

#include "deme/error.hpp"
#include "deme/utf8.hpp"

namespace deme::anchor {

void validate_span(Span span, std::size_t length) {
  if (span.start >= span.end) {
    throw Error(ErrorCode::InvalidSpan, "span must satisfy start < end");
  }
  if (span.end > length) {
    throw Error(ErrorCode::SpanOutOfRange, "span [" + std::to_string(span.start) + "," +
                                               std::to_string(span.end) +
                                               ") exceeds text length " + std::to_string(length));
  }
}

std::size_t EditScript::edit_size() const noexcept {
  std::size_t n = 0;
  for (const auto& op : ops) n += op.kind == EditOp::Kind::Insert ? op.text.size() : op.length;
  return n;
}

void validate_script(const EditScript& script) {
  std::size_t last_position = 0;
  std::size_t delete_end = 0;  // end of the last delete seen
  std::size_t inserted = 0;
  std::size_t deleted = 0;
  for (const auto& op : script.ops) {
    if (op.position < last_position) throw Error(ErrorCode::InvalidScript, "edit ops are not sorted by position");
    if (op.position > script.old_length) throw Error(ErrorCode::InvalidScript, "edit op beyond old text");
    if (op.kind == EditOp::Kind::Insert) {
      if (op.text.empty()) throw Error(ErrorCode::InvalidScript, "empty insert");
      if (op.position < delete_end && op.position != last_position) {
        throw Error(ErrorCode::InvalidScript, "insert inside a deleted range");
      }
      inserted += op.text.size();
    } else {
      if (op.length == 0) throw Error(ErrorCode::InvalidScript, "empty delete");
      if (op.position < delete_end) throw Error(ErrorCode::InvalidScript, "overlapping deletes");
      if (op.length > script.old_length - op.position) throw Error(ErrorCode::InvalidScript, "delete beyond old text");
      delete_end = op.position + op.length;
      deleted += op.length;
    }
    last_position = op.position;
  }
  if (script.old_length + inserted - deleted != script.new_length) {
    throw Error(ErrorCode::InvalidScript, "new_length does not match the edit ops");
  }
}

namespace {

// Linear-space Myers: marks which code points of `a` are deleted and which of
// `b` are inserted. Unmarked code points form a longest common subsequence.
class Differ {
public:
  Differ(std::u32string_view a, std::u32string_view b)
    : a_(a), b_(b), deleted_(a.size(), false), inserted_(b.size(), false) {}

  void run() { compare(0, a_.size(), 0, b_.size()); }

  const std::vector<bool>& deleted() const { return deleted_; }
  const std::vector<bool>& inserted() const { return inserted_; }

private:
  void compare(std::size_t a_lo, std::size_t a_hi, std::size_t b_lo, std::size_t b_hi) {
    while (a_lo < a_hi && b_lo < b_hi && a_[a_lo] == b_[b_lo]) ++a_lo, ++b_lo;
    while (a_lo < a_hi && b_lo < b_hi && a_[a_hi - 1] == b_[b_hi - 1]) --a_hi, --b_hi;

    if (a_lo == a_hi) {
      std::fill(inserted_.begin() + b_lo, inserted_.begin() + b_hi, true);
      return;
    }
    if (b_lo == b_hi) {
      std::fill(deleted_.begin() + a_lo, deleted_.begin() + a_hi, true);
      return;
    }
    const auto [x, y] = middle(a_lo, a_hi, b_lo, b_hi);
    compare(a_lo, x, b_lo, y);
    compare(x, a_hi, y, b_hi);
  }

  // Split point on an optimal path, found where the forward and reverse
  // furthest-reaching D-paths meet. Both ranges are non-empty and share no
  // common prefix or suffix, so the split is always strictly inside.
  std::pair<std::size_t, std::size_t> middle(std::size_t a_lo, std::size_t a_hi, std::size_t b_lo,
                                             std::size_t b_hi) {
    const auto n = static_cast<long>(a_hi - a_lo);
    const auto m = static_cast<long>(b_hi - b_lo);
    const long max_d = (n + m + 1) / 2;
    const long offset = max_d;
    const long width = 2 * max_d + 2;
    forward_.assign(width, -1);
    reverse_.assign(width, -1);
    forward_[offset + 1] = 0;
    reverse_[offset + 1] = 0;
    const long delta = n - m;
    const bool odd = (delta % 2) != 0;
    long f_start = 0, f_end = 0, r_start = 0, r_end = 0;

    auto A = [&](long i) { return a_[a_lo + i]; };
    auto B = [&](long j) { return b_[b_lo + j]; };

    for (long d = 0; d < max_d; ++d) {
      for (long k = -d + f_start; k <= d - f_end; k += 2) {
        const long ki = offset + k;
        long x = (k == -d || (k != d && forward_[ki - 1] < forward_[ki + 1])) ? forward_[ki + 1]
                                                                            : forward_[ki - 1] + 1;
        long y = x - k;
        while (x < n && y < m && A(x) == B(y)) ++x, ++y;
        forward_[ki] = x;
        if (x > n) {
          f_end += 2;
        } else if (y > m) {
          f_start += 2;
        } else if (odd) {
          const long ri = offset + delta - k;
          if (ri >= 0 && ri < width && reverse_[ri] != -1 && x >= n - reverse_[ri]) {
            return {a_lo + x, b_lo + y};
          }
        }
      }
      for (long k = -d + r_start; k <= d - r_end; k += 2) {
        const long ki = offset + k;
        long x = (k == -d || (k != d && reverse_[ki - 1] < reverse_[ki + 1])) ? reverse_[ki + 1]
                                                                            : reverse_[ki - 1] + 1;
        long y = x - k;
        while (x < n && y < m && A(n - x - 1) == B(m - y - 1)) ++x, ++y;
        reverse_[ki] = x;
        if (x > n) {
          r_end += 2;
        } else if (y > m) {
          r_start += 2;
        } else if (!odd) {
          const long fi = offset + delta - k;
          if (fi >= 0 && fi < width && forward_[fi] != -1) {
            const long fx = forward_[fi];
            const long fy = fx - (delta - k);
            if (fx >= n - x) return {a_lo + fx, b_lo + fy};
          }
        }
      }
    }
    // Unreachable for non-empty inputs: the paths always meet by max_d.
    return {a_lo + n, b_lo};
  }

  std::u32string_view a_;
  std::u32string_view b_;
  std::vector<bool> deleted_;
  std::vector<bool> inserted_;
  std::vector<long> forward_;
  std::vector<long> reverse_;
};

}  // namespace

EditScript diff(std::u32string_view from, std::u32string_view to) {
  EditScript script;
  script.old_length = from.size();
  script.new_length = to.size();
  if (from == to) return script;

  Differ differ(from, to);
  differ.run();
  const auto& del = differ.deleted();
  const auto& ins = differ.inserted();

  std::size_t i = 0, j = 0;
  while (i < from.size() || j < to.size()) {
    if (i < from.size() && j < to.size() && !del[i] && !ins[j]) {
      ++i, ++j;
      continue;
    }
    const std::size_t start = i;
    while (i < from.size() && del[i]) ++i;
    const std::size_t ins_start = j;
    while (j < to.size() && ins[j]) ++j;
    if (i > start) script.ops.push_back(EditOp::erase(start, i - start));
    if (j > ins_start) script.ops.push_back(EditOp::insert(start, std::u32string(to.substr(ins_start, j - ins_start))));
  }
  return script;
}

EditScript diff_utf8(std::string_view from, std::string_view to) {
  return diff(utf8::decode(from), utf8::decode(to));
}

std::u32string apply_edits(std::u32string_view old, const EditScript& script) {
  if (old.size() != script.old_length) {
    throw Error(ErrorCode::LengthMismatch, "script expects " + std::to_string(script.old_length) +
                                               " code points, text has " + std::to_string(old.size()));
  }
  validate_script(script);
  std::u32string out;
  out.reserve(script.new_length);
  std::size_t cursor = 0;
  for (const auto& op : script.ops) {
    if (op.position > cursor) {
      out.append(old.substr(cursor, op.position - cursor));
      cursor = op.position;
    }
    if (op.kind == EditOp::Kind::Insert) {
      out.append(op.text);
    } else {
      cursor = op.position + op.length;
    }
  }
  out.append(old.substr(cursor));
  return out;
}

std::string apply_edits_utf8(std::string_view old, const EditScript& script) {
  return utf8::encode(apply_edits(utf8::decode(old), script));
}

MigrationResult migrate_span(Span span, const EditScript& script) {
  validate_span(span, script.old_length);
  validate_script(script);

  bool touched = false;
  long shift = 0;
  // Deletes are sorted and disjoint, so coverage is tracked as a running end.
  std::size_t covered_to = span.start;
  for (const auto& op : script.ops) {
    if (op.kind == EditOp::Kind::Insert) {
      if (op.position > span.start && op.position < span.end) touched = true;
      if (op.position <= span.start) shift += static_cast<long>(op.text.size());
      continue;
    }
    const std::size_t op_end = op.position + op.length;
    const bool overlaps = op.position < span.end && op_end > span.start;
    if (overlaps) {
      touched = true;
      if (op.position <= covered_to && op_end > covered_to) covered_to = op_end;
    } else if (op_end <= span.start) {
      shift -= static_cast<long>(op.length);
    }
  }
  if (touched) {
    return MigrationResult::obsolete(covered_to >= span.end ? ObsoleteReason::Deleted : ObsoleteReason::Modified);
  }
  const auto start = static_cast<std::size_t>(static_cast<long>(span.start) + shift);
  return MigrationResult::moved_to({start, start + span.size()});
}

std::u32string_view resolve_span(std::u32string_view body, Span span) {
  validate_span(span, body.size());
  return body.substr(span.start, span.size());
}

std::string resolve_span_utf8(std::string_view body, Span span) {
  const auto text = utf8::decode(body);
  return utf8::encode(resolve_span(text, span));
}

}  // namespace deme::anchor
