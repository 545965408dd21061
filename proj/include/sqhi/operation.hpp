#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sqhi/hash.hpp"
#include "sqhi/priority.hpp"
#include "sqhi/types.hpp"

namespace sqhi {

enum class OpStatus : std::uint8_t { kRunning, kDone, kTableFull };

enum class Primitive : std::uint8_t { kLL, kVL, kSC };

/// Which line of the algorithm issued a primitive. The explorer uses it to
/// attribute unstable cells to operations.
enum class Site : std::uint8_t {
  kRead,
  kValidate,
  kInitialInsert,     // SC <a, v, I> publishing an insert
  kInitialDelete,     // SC <a, v, D> publishing a delete
  kUnlockPrevInsert,  // SC <x, y, S> on the predecessor during an insert step
  kUnlockPrevDelete,  // SC <x, a, S> on the predecessor during a delete step
  kReleaseInsert,     // SC <a, b, S> when the next cell already carries the insert
  kReleaseDelete,     // SC <a, c, S> when the delete already moved on or ended
  kDscFirst,          // first SC of a two-cell write (the successor cell)
  kDscSecond,         // second SC after a successful first one
  kDscRecover,        // second SC after someone else did the first one
};

/// The four two-cell writes that move an operation into the next cell.
enum class DscLine : std::uint8_t { kNone, kInsertEnd, kInsertShift, kDeleteShift, kDeletePuncture };

enum class RestartCause : std::uint8_t { kNone, kFailedInitialWrite, kInconsistentRead };

/// Deliberate defects for validating the checkers. Never set in production.
enum class Mutation : std::uint8_t {
  kNone,
  kSkipDscSecondSc,
  kSkipDscRecover,
  kStaleReleaseLookahead,
};

struct Request {
  Primitive prim = Primitive::kLL;
  std::uint32_t cell = 0;
  Cell value;  // SC only
  Site site = Site::kRead;
  DscLine line = DscLine::kNone;
  bool outer = false;  // issued by the insert/delete/lookup body, not a helper
};

/// What the most recent step() did.
struct Access {
  Request req;
  Cell read;        // LL result
  bool ok = false;  // VL / SC outcome
  RestartCause restart = RestartCause::kNone;
  std::uint32_t restart_cell = 0;  // cell whose read triggered the restart
};

/// An in-flight insert, delete or lookup, decomposed so that every step()
/// performs exactly one LL, VL or SC. Local computation between primitives is
/// folded into the step that precedes it.
///
/// The machine owns no pointers: the memory backend and hash function are
/// passed to every step, which makes machines plain values that can be copied,
/// compared and hashed by the schedule explorer.
class Operation {
 public:
  Operation(OpKind kind, Key key, ProcessId process, Mutation mutation = Mutation::kNone);

  template <class Memory>
  void step(Memory& mem, const HashFn& h);

  /// Steps until the operation terminates.
  template <class Memory>
  OpStatus run(Memory& mem, const HashFn& h) {
    while (status_ == OpStatus::kRunning) step(mem, h);
    return status_;
  }

  OpStatus status() const noexcept { return status_; }
  bool done() const noexcept { return status_ != OpStatus::kRunning; }
  bool result() const noexcept { return result_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint32_t restarts() const noexcept { return restarts_; }
  OpKind kind() const noexcept { return kind_; }
  Key key() const noexcept { return key_; }
  ProcessId process() const noexcept { return process_; }
  const Access& last_access() const noexcept { return last_; }
  /// Next primitive to be issued; valid while running and after the first step.
  const Request& pending() const noexcept { return req_; }
  std::size_t depth() const noexcept { return stack_.size(); }

  /// Appends a byte encoding of the control state (frames and status). Step
  /// counters and diagnostics are excluded.
  void encode(std::string& out) const;

 private:
  enum class FrameKind : std::uint8_t { kInsert, kDelete, kLookup, kHelp, kDsc, kPropagate };

  struct Frame {
    FrameKind kind{};
    std::uint8_t pc = 0;
    std::uint8_t marks = 0;  // propagate: bit per Mark value
    bool first = false;
    DscLine line = DscLine::kNone;
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    std::uint32_t start = 0;
    std::uint32_t scanned = 0;
    Cell cur;    // <a, b, M> / <a, b, M1>
    Cell nxt;    // <c, d, M2>
    Cell pre;    // <x, y, M3>
    Cell saved;  // propagate: prev
    Cell tup1;
    Cell tup2;
  };

  void advance(const HashFn& h);
  bool run_search(Frame& f, const HashFn& h);
  bool run_insert(Frame& f, const HashFn& h);
  bool run_delete(Frame& f, const HashFn& h);
  bool run_lookup(Frame& f, const HashFn& h);
  bool run_help(Frame& f, const HashFn& h);
  bool run_dsc(Frame& f);
  bool run_propagate(Frame& f, const HashFn& h);

  void request(Primitive prim, std::size_t cell, Site site, Cell value = {},
               DscLine line = DscLine::kNone);
  void call_help(std::size_t i);
  void call_dsc(std::size_t i, const Cell& tup1, std::size_t j, const Cell& tup2, DscLine line);
  void call_propagate(std::size_t start, std::size_t j, std::uint8_t marks, bool own);
  void finish(bool value);
  void ret(bool value);
  void restart(Frame& f, RestartCause cause, std::size_t cell);

  std::vector<Frame> stack_;
  Request req_;
  Access last_;
  Cell resp_cell_;
  bool resp_ok_ = false;
  bool ret_ = false;

  OpKind kind_;
  Key key_;
  ProcessId process_;
  Mutation mutation_;
  OpStatus status_ = OpStatus::kRunning;
  bool result_ = false;
  bool started_ = false;
  std::uint32_t cells_ = 0;
  std::uint64_t steps_ = 0;
  std::uint32_t restarts_ = 0;
};

/// Thrown when help_op's forward scan covers the whole table without finding
/// a place to act, which the algorithm rules out while an empty cell exists.
class ScanBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Memory>
void Operation::step(Memory& mem, const HashFn& h) {
  if (status_ != OpStatus::kRunning) return;
  if (!started_) {
    started_ = true;
    cells_ = static_cast<std::uint32_t>(h.cells());
    advance(h);
    if (status_ != OpStatus::kRunning) return;
  }
  last_ = Access{};
  last_.req = req_;
  switch (req_.prim) {
    case Primitive::kLL:
      resp_cell_ = mem.ll(process_, req_.cell);
      last_.read = resp_cell_;
      break;
    case Primitive::kVL:
      resp_ok_ = mem.vl(process_, req_.cell);
      last_.ok = resp_ok_;
      break;
    case Primitive::kSC:
      resp_ok_ = mem.sc(process_, req_.cell, req_.value);
      last_.ok = resp_ok_;
      break;
  }
  ++steps_;
  advance(h);
}

}  // namespace sqhi
