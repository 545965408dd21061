#include "sqhi/operation.hpp"

#include <cstring>
#include <string>

namespace sqhi {

using enum Mark;

namespace {

constexpr std::uint8_t mark_bit(Mark m) noexcept { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(m)); }

bool stable_end(const Cell& c) { return c.mark == kStable && c.next == kEmpty; }

bool empty_or_stable_end(const Cell& c) { return c.val == kEmpty || stable_end(c); }

// Help loop exit test: true while the scan must move on to the next cell.
bool keep_scanning(const Cell& cur, const Cell& nxt) {
  return nxt.mark != kStable && (cur.mark != kDeleting || nxt.mark != kDeleting || cur.next == nxt.val) &&
         (cur.mark != kInserting || cur.next != nxt.val) &&
         (cur.mark != kDeleting || nxt.val != kEmpty);
}

template <class T>
void put(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_cell(std::string& out, const Cell& c) {
  put(out, c.val);
  put(out, c.next);
  put(out, static_cast<std::uint8_t>(c.mark));
}

}  // namespace

Operation::Operation(OpKind kind, Key key, ProcessId process, Mutation mutation)
    : kind_(kind), key_(key), process_(process), mutation_(mutation) {
  Frame f;
  f.kind = kind == OpKind::kInsert   ? FrameKind::kInsert
           : kind == OpKind::kDelete ? FrameKind::kDelete
                                     : FrameKind::kLookup;
  stack_.reserve(4);
  stack_.push_back(f);
}

void Operation::request(Primitive prim, std::size_t cell, Site site, Cell value, DscLine line) {
  req_.prim = prim;
  req_.cell = static_cast<std::uint32_t>(cell);
  req_.value = value;
  req_.site = site;
  req_.line = line;
  req_.outer = stack_.size() == 1;
}

void Operation::call_help(std::size_t i) {
  Frame f;
  f.kind = FrameKind::kHelp;
  f.i = static_cast<std::uint32_t>(i);
  stack_.push_back(f);
}

void Operation::call_dsc(std::size_t i, const Cell& tup1, std::size_t j, const Cell& tup2,
                         DscLine line) {
  Frame f;
  f.kind = FrameKind::kDsc;
  f.i = static_cast<std::uint32_t>(i);
  f.j = static_cast<std::uint32_t>(j);
  f.tup1 = tup1;
  f.tup2 = tup2;
  f.line = line;
  stack_.push_back(f);
}

void Operation::call_propagate(std::size_t start, std::size_t j, std::uint8_t marks, bool own) {
  Frame f;
  f.first = own;
  f.kind = FrameKind::kPropagate;
  f.start = static_cast<std::uint32_t>(start % cells_);
  f.j = static_cast<std::uint32_t>(j % cells_);
  f.marks = marks;
  stack_.push_back(f);
}

void Operation::finish(bool value) {
  result_ = value;
  status_ = OpStatus::kDone;
  stack_.clear();
}

void Operation::ret(bool value) {
  ret_ = value;
  stack_.pop_back();
}

void Operation::restart(Frame& f, RestartCause cause, std::size_t cell) {
  ++restarts_;
  last_.restart = cause;
  last_.restart_cell = static_cast<std::uint32_t>(cell);
  f.pc = 0;
}

// Each run_* consumes the pending response at its pc, then executes local code
// until it issues the next primitive (returns true), pushes a callee or pops
// itself (returns false; the caller loop re-dispatches).
void Operation::advance(const HashFn& h) {
  while (status_ == OpStatus::kRunning) {
    Frame& f = stack_.back();
    bool issued = false;
    switch (f.kind) {
      case FrameKind::kInsert: issued = run_insert(f, h); break;
      case FrameKind::kDelete: issued = run_delete(f, h); break;
      case FrameKind::kLookup: issued = run_lookup(f, h); break;
      case FrameKind::kHelp: issued = run_help(f, h); break;
      case FrameKind::kDsc: issued = run_dsc(f); break;
      case FrameKind::kPropagate: issued = run_propagate(f, h); break;
    }
    if (issued) return;
  }
}

// pc: 0 start, 1 after first LL, 2 after loop-bottom LL, 3 after help,
// 4 after initial SC, 5 after propagate.
bool Operation::run_insert(Frame& f, const HashFn& h) {
  const std::size_t m = cells_;
  const Key v = key_;
  const std::size_t hv = h(v);
  for (;;) {
    switch (f.pc) {
      case 0:
        f.i = static_cast<std::uint32_t>((hv + m - 1) % m);
        f.first = true;
        request(Primitive::kLL, f.i, Site::kRead);
        f.pc = 1;
        return true;
      case 1:
        f.cur = resp_cell_;
        break;
      case 2:
        f.cur = resp_cell_;
        if (prio_greater(h, v, f.cur.val, f.i)) {
          restart(f, RestartCause::kInconsistentRead, f.i);
          continue;
        }
        break;
      case 3:
        request(Primitive::kLL, f.i, Site::kRead);
        f.pc = 2;
        return true;
      case 4:
        if (resp_ok_) {
          f.pc = 5;
          call_propagate(hv + m - 1, f.i, mark_bit(kInserting), true);
          return false;
        }
        restart(f, RestartCause::kFailedInitialWrite, f.i);
        continue;
      case 5:
        finish(true);
        return false;
    }
    // Loop body.
    const Cell c = f.cur;
    const std::size_t i = f.i;
    if (c.val == v || (c.next == v && (c.mark != kDeleting || !h.hashes_to(c.next, (i + 1) % m)))) {
      finish(false);
      return false;
    }
    if (c.mark != kStable) {
      f.pc = 3;
      call_help(i);
      return false;
    }
    if (c.next == kEmpty || prio_greater(h, v, c.next, (i + 1) % m)) {
      request(Primitive::kSC, i, Site::kInitialInsert, Cell{c.val, v, kInserting});
      f.pc = 4;
      return true;
    }
    f.i = static_cast<std::uint32_t>((i + 1) % m);
    if (!f.first && f.i == hv) {
      status_ = OpStatus::kTableFull;
      stack_.clear();
      return false;
    }
    f.first = false;
    request(Primitive::kLL, f.i, Site::kRead);
    f.pc = 2;
    return true;
  }
}

// Same pc layout as insert.
bool Operation::run_delete(Frame& f, const HashFn& h) {
  const std::size_t m = cells_;
  const Key v = key_;
  const std::size_t hv = h(v);
  for (;;) {
    switch (f.pc) {
      case 0:
        f.i = static_cast<std::uint32_t>((hv + m - 1) % m);
        f.first = true;
        request(Primitive::kLL, f.i, Site::kRead);
        f.pc = 1;
        return true;
      case 1:
        f.cur = resp_cell_;
        break;
      case 2:
        f.cur = resp_cell_;
        if (f.i != hv && prio_greater(h, v, f.cur.val, f.i)) {
          restart(f, RestartCause::kInconsistentRead, f.i);
          continue;
        }
        break;
      case 3:
        request(Primitive::kLL, f.i, Site::kRead);
        f.pc = 2;
        return true;
      case 4:
        if (resp_ok_) {
          f.pc = 5;
          call_propagate(hv + m - 1, f.i, mark_bit(kDeleting), true);
          return false;
        }
        restart(f, RestartCause::kFailedInitialWrite, f.i);
        continue;
      case 5:
        finish(true);
        return false;
    }
    const Cell c = f.cur;
    const std::size_t i = f.i;
    const std::size_t i1 = (i + 1) % m;
    if ((i == hv && prio_greater(h, v, c.val, i)) ||
        (prio_greater(h, c.val, v, i) && prio_greater(h, v, c.next, i1) &&
         (c.mark == kStable || !h.hashes_to(c.next, i1)))) {
      finish(false);
      return false;
    }
    if (c.mark != kStable) {
      f.pc = 3;
      call_help(i);
      return false;
    }
    if (c.val == v) {
      f.i = static_cast<std::uint32_t>((i + m - 1) % m);
      request(Primitive::kLL, f.i, Site::kRead);
      f.pc = 2;
      return true;
    }
    if (c.next == v) {
      request(Primitive::kSC, i, Site::kInitialDelete, Cell{c.val, v, kDeleting});
      f.pc = 4;
      return true;
    }
    f.i = static_cast<std::uint32_t>(i1);
    if (!f.first && f.i == hv) {
      finish(false);
      return false;
    }
    f.first = false;
    request(Primitive::kLL, f.i, Site::kRead);
    f.pc = 2;
    return true;
  }
}

// pc: 0 start, 1 after first LL, 2 after loop-bottom LL, 6 after LL(i+1) of the
// split check, 7 after its VL, 8 after help.
bool Operation::run_lookup(Frame& f, const HashFn& h) {
  const std::size_t m = cells_;
  const Key v = key_;
  const std::size_t hv = h(v);
  for (;;) {
    bool body = false;
    bool help_part = false;
    switch (f.pc) {
      case 0:
        f.i = static_cast<std::uint32_t>((hv + m - 1) % m);
        f.first = true;
        request(Primitive::kLL, f.i, Site::kRead);
        f.pc = 1;
        return true;
      case 1:
        f.cur = resp_cell_;
        body = true;
        break;
      case 2:
        f.cur = resp_cell_;
        if (f.i != hv && prio_greater(h, v, f.cur.val, f.i)) {
          restart(f, RestartCause::kInconsistentRead, f.i);
          continue;
        }
        body = true;
        break;
      case 6: {
        const Key b = f.cur.next;
        const Key c = resp_cell_.val;
        const std::size_t i1 = (f.i + 1) % m;
        if (prio_greater(h, b, v, f.i) && prio_greater(h, v, c, i1) && !h.hashes_to(b, i1)) {
          request(Primitive::kVL, f.i, Site::kValidate);
          f.pc = 7;
          return true;
        }
        help_part = true;
        break;
      }
      case 7:
        if (resp_ok_) {
          finish(false);
          return false;
        }
        help_part = true;
        break;
      case 8:
        break;
    }
    if (body) {
      const Cell c = f.cur;
      const std::size_t i = f.i;
      const std::size_t i1 = (i + 1) % m;
      if (c.val == v || (c.next == v && (c.mark != kDeleting || !h.hashes_to(c.next, i1)))) {
        finish(true);
        return false;
      }
      if ((i == hv && prio_greater(h, v, c.val, i)) ||
          (prio_greater(h, c.val, v, i) && prio_greater(h, v, c.next, i1) &&
           (c.mark == kStable || !h.hashes_to(c.next, i1)))) {
        finish(false);
        return false;
      }
      if (c.mark == kInserting) {
        request(Primitive::kLL, i1, Site::kRead);
        f.pc = 6;
        return true;
      }
      help_part = true;
    }
    if (help_part && f.cur.mark != kStable) {
      f.pc = 8;
      call_help(f.i);
      return false;
    }
    f.i = static_cast<std::uint32_t>((f.i + 1) % m);
    if (!f.first && f.i == hv) {
      finish(false);
      return false;
    }
    f.first = false;
    request(Primitive::kLL, f.i, Site::kRead);
    f.pc = 2;
    return true;
  }
}

// pc: 0 start, 1 after LL(i), 2 after LL(i+1), 3 after LL in the scan,
// 4/10 after VL(i) for I/D, 5/11 after LL(i-1), 6/12 after second VL(i),
// 7/13 after the unlock SC, 8 after the final write, 14 after the puncture DSC.
bool Operation::run_help(Frame& f, const HashFn& h) {
  const std::size_t m = cells_;
  enum class Next { kScan, kAfterScan, kInsertTail, kDeleteTail };
  Next next = Next::kScan;
  switch (f.pc) {
    case 0:
      request(Primitive::kLL, f.i, Site::kRead);
      f.pc = 1;
      return true;
    case 1:
      f.cur = resp_cell_;
      request(Primitive::kLL, (f.i + 1) % m, Site::kRead);
      f.pc = 2;
      return true;
    case 2:
      f.nxt = resp_cell_;
      if (f.cur.mark == kStable) {
        ret(false);
        return false;
      }
      f.scanned = 0;
      next = Next::kScan;
      break;
    case 3:
      f.nxt = resp_cell_;
      next = Next::kScan;
      break;
    case 4:
      if (!resp_ok_) {
        ret(false);
        return false;
      }
      request(Primitive::kLL, (f.i + m - 1) % m, Site::kRead);
      f.pc = 5;
      return true;
    case 5:
      f.pre = resp_cell_;
      if (f.pre.mark == kInserting && f.pre.next == f.cur.val) {
        request(Primitive::kVL, f.i, Site::kValidate);
        f.pc = 6;
        return true;
      }
      next = Next::kInsertTail;
      break;
    case 6:
      if (resp_ok_) {
        request(Primitive::kSC, (f.i + m - 1) % m, Site::kUnlockPrevInsert,
                Cell{f.pre.val, f.pre.next, kStable});
        f.pc = 7;
        return true;
      }
      next = Next::kInsertTail;
      break;
    case 7:
      next = Next::kInsertTail;
      break;
    case 8:
      ret(false);
      return false;
    case 10:
      if (!resp_ok_) {
        ret(false);
        return false;
      }
      request(Primitive::kLL, (f.i + m - 1) % m, Site::kRead);
      f.pc = 11;
      return true;
    case 11:
      f.pre = resp_cell_;
      if (f.pre.mark == kDeleting && f.pre.next != f.cur.val) {
        request(Primitive::kVL, f.i, Site::kValidate);
        f.pc = 12;
        return true;
      }
      next = Next::kDeleteTail;
      break;
    case 12:
      if (resp_ok_) {
        request(Primitive::kSC, (f.i + m - 1) % m, Site::kUnlockPrevDelete,
                Cell{f.pre.val, f.cur.val, kStable});
        f.pc = 13;
        return true;
      }
      next = Next::kDeleteTail;
      break;
    case 13:
      next = Next::kDeleteTail;
      break;
    case 14:
      if (ret_ && f.nxt.next != kEmpty) {
        f.pc = 8;
        call_propagate((f.i + 1) % m, (f.i + 2) % m, mark_bit(kInserting) | mark_bit(kDeleting), false);
        return false;
      }
      ret(false);
      return false;
  }

  if (next == Next::kScan) {
    if (keep_scanning(f.cur, f.nxt)) {
      f.cur = f.nxt;
      f.i = static_cast<std::uint32_t>((f.i + 1) % m);
      if (++f.scanned > m) {
        throw ScanBoundExceeded("help_op scanned " + std::to_string(f.scanned) +
                                " cells without finding a place to act");
      }
      request(Primitive::kLL, (f.i + 1) % m, Site::kRead);
      f.pc = 3;
      return true;
    }
    if (f.cur.mark == kInserting) {
      request(Primitive::kVL, f.i, Site::kValidate);
      f.pc = 4;
      return true;
    }
    if (f.cur.mark == kDeleting) {
      request(Primitive::kVL, f.i, Site::kValidate);
      f.pc = 10;
      return true;
    }
    ret(false);
    return false;
  }

  const std::size_t i = f.i;
  const std::size_t i1 = (i + 1) % m;
  const Key a = f.cur.val;
  const Key b = f.cur.next;
  const Key c = f.nxt.val;
  const Key d = f.nxt.next;

  if (next == Next::kInsertTail) {
    if (prio_greater(h, c, b, i1) && kind_ != OpKind::kLookup) {
      status_ = OpStatus::kTableFull;
      stack_.clear();
      return false;
    }
    f.pc = 8;
    if (b == c) {
      request(Primitive::kSC, i, Site::kReleaseInsert, Cell{a, b, kStable});
      return true;
    }
    if (c == kEmpty) {
      call_dsc(i1, Cell{b, d, kStable}, i, Cell{a, b, kStable}, DscLine::kInsertEnd);
    } else {
      call_dsc(i1, Cell{b, c, kInserting}, i, Cell{a, b, kStable}, DscLine::kInsertShift);
    }
    return false;
  }

  // Delete tail.
  if (c == kEmpty || f.nxt.mark == kDeleting) {
    const Key keep = mutation_ == Mutation::kStaleReleaseLookahead ? b : c;
    request(Primitive::kSC, i, Site::kReleaseDelete, Cell{a, keep, kStable});
    f.pc = 8;
    return true;
  }
  if (f.nxt.mark == kStable) {
    if (d != kEmpty && !h.hashes_to(d, (i + 2) % m)) {
      f.pc = 8;
      call_dsc(i1, Cell{d, d, kDeleting}, i, Cell{a, d, kStable}, DscLine::kDeleteShift);
      return false;
    }
    if (kind_ != OpKind::kLookup) {
      f.pc = 14;
      call_dsc(i1, Cell{kEmpty, d, kStable}, i, Cell{a, kEmpty, kStable}, DscLine::kDeletePuncture);
      return false;
    }
  }
  ret(false);
  return false;
}

// pc: 0 first SC, 1 after it, 2 after second SC, 3 after LL on failure,
// 4 after recovery SC.
bool Operation::run_dsc(Frame& f) {
  switch (f.pc) {
    case 0:
      request(Primitive::kSC, f.i, Site::kDscFirst, f.tup1, f.line);
      f.pc = 1;
      return true;
    case 1:
      if (resp_ok_) {
        if (mutation_ == Mutation::kSkipDscSecondSc) {
          ret(true);
          return false;
        }
        request(Primitive::kSC, f.j, Site::kDscSecond, f.tup2, f.line);
        f.pc = 2;
        return true;
      }
      request(Primitive::kLL, f.i, Site::kRead);
      f.pc = 3;
      return true;
    case 2:
      ret(true);
      return false;
    case 3:
      if (resp_cell_.val == f.tup1.val && mutation_ != Mutation::kSkipDscRecover) {
        request(Primitive::kSC, f.j, Site::kDscRecover, f.tup2, f.line);
        f.pc = 4;
        return true;
      }
      ret(false);
      return false;
    default:
      ret(false);
      return false;
  }
}

// pc: 0 read A[j], 1 after it, 2 after help, 3 after re-read.
//
// Insert and delete pass h(v) - 1 as the wraparound guard and set `first`.
// Their initial cell may hold an empty value slot (the new or deleted element
// sits in its home cell after an empty one), so the empty-value stop test is
// skipped for that cell; otherwise the loop would end there and leave the
// operation unstable in the next cell with nobody to finish it. Passing h(v)
// as the guard would do the same whenever the initial cell is h(v) - 1.
bool Operation::run_propagate(Frame& f, const HashFn& h) {
  const std::size_t m = cells_;
  (void)h;
  for (;;) {
    switch (f.pc) {
      case 0:
        request(Primitive::kLL, f.j, Site::kRead);
        f.pc = 1;
        return true;
      case 1:
        f.cur = resp_cell_;
        f.saved = f.cur;
        break;
      case 2:
        f.saved = f.cur;
        request(Primitive::kLL, f.j, Site::kRead);
        f.pc = 3;
        return true;
      case 3:
        f.cur = resp_cell_;
        break;
    }
    if (f.cur == f.saved && (f.marks & mark_bit(f.cur.mark)) != 0) {
      f.pc = 2;
      call_help(f.j);
      return false;
    }
    f.j = static_cast<std::uint32_t>((f.j + 1) % m);
    const bool stop = f.first ? stable_end(f.cur) : empty_or_stable_end(f.cur);
    f.first = false;
    if (stop || f.j == f.start) {
      ret(false);
      return false;
    }
    f.pc = 0;
  }
}

void Operation::encode(std::string& out) const {
  put(out, static_cast<std::uint8_t>(status_));
  put(out, static_cast<std::uint8_t>(started_));
  put(out, static_cast<std::uint32_t>(stack_.size()));
  for (const Frame& f : stack_) {
    put(out, static_cast<std::uint8_t>(f.kind));
    put(out, f.pc);
    put(out, f.marks);
    put(out, static_cast<std::uint8_t>(f.first));
    put(out, static_cast<std::uint8_t>(f.line));
    put(out, f.i);
    put(out, f.j);
    put(out, f.start);
    put(out, f.scanned);
    put_cell(out, f.cur);
    put_cell(out, f.nxt);
    put_cell(out, f.pre);
    put_cell(out, f.saved);
    put_cell(out, f.tup1);
    put_cell(out, f.tup2);
  }
  if (status_ == OpStatus::kRunning && started_) {
    put(out, static_cast<std::uint8_t>(req_.prim));
    put(out, req_.cell);
    put_cell(out, req_.value);
  }
}

}  // namespace sqhi
