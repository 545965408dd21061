#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqhi/types.hpp"

namespace sqhi {

struct Event {
  enum class Type : std::uint8_t { kInvoke, kRespond };
  Type type = Type::kInvoke;
  ProcessId process = 0;
  OpKind kind = OpKind::kLookup;  // invoke only
  Key key = 0;                    // invoke only
  bool value = false;             // respond only

  static Event invoke(ProcessId p, OpKind k, Key key) { return {Type::kInvoke, p, k, key, false}; }
  static Event respond(ProcessId p, bool v) { return {Type::kRespond, p, OpKind::kLookup, 0, v}; }
};

using History = std::vector<Event>;

/// Per-process alternation of invoke/respond, starting with an invoke.
bool well_formed(const History& h, std::size_t processes);

/// Wing & Gong style search over all linearizations that respect real-time
/// order, memoized on (linearized set, abstract state). Pending operations may
/// be linearized with any result or dropped. Keys must be below 64 and the
/// history may hold at most 64 operations.
bool linearizable(const History& h, std::uint64_t initial_state = 0);

/// Incremental linearizability check for a history that is revealed one event
/// at a time. Keeps every reachable configuration (abstract state, which
/// pending operations already took effect and with what result) closed under
/// linearizing pending operations. An empty configuration set means the
/// history prefix has no linearization.
class LinTracker {
 public:
  static constexpr std::size_t kMaxProcesses = 8;

  struct Config {
    std::uint64_t state = 0;
    std::uint8_t linearized = 0;
    std::uint8_t results = 0;
    friend auto operator<=>(const Config&, const Config&) = default;
  };

  LinTracker(std::size_t processes, std::uint64_t initial_state);

  void invoke(ProcessId p, OpKind kind, Key key);
  /// Returns false if the response leaves no consistent configuration.
  bool respond(ProcessId p, bool value);

  bool ok() const noexcept { return !configs_.empty(); }
  const std::vector<Config>& configs() const noexcept { return configs_; }
  /// Abstract states reachable with no pending operation linearized.
  std::vector<std::uint64_t> committed_states() const;
  void encode(std::string& out) const;

 private:
  struct Pending {
    bool active = false;
    OpKind kind = OpKind::kLookup;
    Key key = 0;
  };

  void close();

  std::vector<Pending> pending_;
  std::vector<Config> configs_;
};

}  // namespace sqhi
