#pragma once

#include <cstdint>
#include <vector>

#include "sqhi/hash.hpp"
#include "sqhi/llsc_memory.hpp"
#include "sqhi/operation.hpp"

namespace sqhi {

struct OpOutcome {
  OpStatus status = OpStatus::kDone;
  bool value = false;
  std::uint64_t steps = 0;
  std::uint32_t restarts = 0;
};

/// Runs operations to completion against a memory backend. On AtomicMemory
/// distinct threads may call run() concurrently as long as each uses its own
/// process id.
template <class Memory>
class HashTable {
 public:
  HashTable(Memory& mem, const HashFn& h) : mem_(mem), h_(h) {}

  OpOutcome run(OpKind kind, Key key, ProcessId p) {
    Operation op(kind, key, p);
    op.run(mem_, h_);
    return {op.status(), op.result(), op.steps(), op.restarts()};
  }

  bool insert(Key key, ProcessId p = 0) { return unwrap(run(OpKind::kInsert, key, p)); }
  bool erase(Key key, ProcessId p = 0) { return unwrap(run(OpKind::kDelete, key, p)); }
  bool contains(Key key, ProcessId p = 0) { return unwrap(run(OpKind::kLookup, key, p)); }

  std::vector<Cell> snapshot() const { return mem_.snapshot(); }
  const HashFn& hash() const noexcept { return h_; }
  Memory& memory() noexcept { return mem_; }

 private:
  static bool unwrap(const OpOutcome& o) {
    if (o.status == OpStatus::kTableFull) throw TableFull();
    return o.value;
  }

  Memory& mem_;
  const HashFn& h_;
};

}  // namespace sqhi
