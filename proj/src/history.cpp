#include "sqhi/history.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "sqhi/canonical.hpp"

namespace sqhi {

bool well_formed(const History& h, std::size_t processes) {
  std::vector<bool> open(processes, false);
  for (const Event& e : h) {
    if (e.process >= processes) return false;
    const bool invoke = e.type == Event::Type::kInvoke;
    if (invoke == open[e.process]) return false;
    open[e.process] = invoke;
  }
  return true;
}

namespace {

struct OpRecord {
  OpKind kind;
  Key key;
  std::size_t invoked;
  std::size_t responded;  // SIZE_MAX while pending
  bool value;
};

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.first * 0x9E3779B97F4A7C15ull ^ p.second);
  }
};

class Search {
 public:
  explicit Search(std::vector<OpRecord> ops) : ops_(std::move(ops)) {
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (ops_[i].responded != SIZE_MAX) required_ |= std::uint64_t{1} << i;
    }
  }

  bool run(std::uint64_t done, std::uint64_t state) {
    if ((done & required_) == required_) return true;
    if (!seen_.insert({done, state}).second) return false;
    // The earliest response among unlinearized completed ops bounds which ops
    // may go next.
    std::size_t horizon = SIZE_MAX;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (!(done >> i & 1)) horizon = std::min(horizon, ops_[i].responded);
    }
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (done >> i & 1) continue;
      const OpRecord& o = ops_[i];
      if (o.invoked > horizon) continue;
      const auto [next, value] = seq_apply(state, o.kind, o.key);
      if (o.responded != SIZE_MAX && value != o.value) continue;
      if (run(done | std::uint64_t{1} << i, next)) return true;
    }
    return false;
  }

 private:
  std::vector<OpRecord> ops_;
  std::uint64_t required_ = 0;
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> seen_;
};

}  // namespace

bool linearizable(const History& h, std::uint64_t initial_state) {
  std::vector<OpRecord> ops;
  std::vector<std::size_t> open;
  for (std::size_t t = 0; t < h.size(); ++t) {
    const Event& e = h[t];
    if (e.process >= open.size()) open.resize(e.process + 1, SIZE_MAX);
    if (e.type == Event::Type::kInvoke) {
      if (e.key >= 64) throw std::invalid_argument("linearizable: key out of range");
      open[e.process] = ops.size();
      ops.push_back({e.kind, e.key, t, SIZE_MAX, false});
    } else {
      if (open[e.process] == SIZE_MAX) throw std::invalid_argument("response without invocation");
      ops[open[e.process]].responded = t;
      ops[open[e.process]].value = e.value;
      open[e.process] = SIZE_MAX;
    }
  }
  if (ops.size() > 64) throw std::invalid_argument("linearizable: more than 64 operations");
  Search s(std::move(ops));
  return s.run(0, initial_state);
}

// ---------------------------------------------------------------------------

LinTracker::LinTracker(std::size_t processes, std::uint64_t initial_state)
    : pending_(processes), configs_{Config{initial_state, 0, 0}} {
  if (processes > kMaxProcesses) throw std::invalid_argument("LinTracker: too many processes");
}

void LinTracker::invoke(ProcessId p, OpKind kind, Key key) {
  if (pending_.at(p).active) throw std::logic_error("LinTracker: process already has a pending op");
  pending_[p] = {true, kind, key};
  close();
}

bool LinTracker::respond(ProcessId p, bool value) {
  if (!pending_.at(p).active) throw std::logic_error("LinTracker: response without invocation");
  const std::uint8_t bit = static_cast<std::uint8_t>(1u << p);
  std::vector<Config> kept;
  for (Config c : configs_) {
    if (!(c.linearized & bit)) continue;
    if (((c.results & bit) != 0) != value) continue;
    c.linearized &= static_cast<std::uint8_t>(~bit);
    c.results &= static_cast<std::uint8_t>(~bit);
    kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  configs_ = std::move(kept);
  pending_[p].active = false;
  return ok();
}

void LinTracker::close() {
  std::set<Config> all(configs_.begin(), configs_.end());
  std::vector<Config> work(configs_.begin(), configs_.end());
  while (!work.empty()) {
    const Config c = work.back();
    work.pop_back();
    for (std::size_t p = 0; p < pending_.size(); ++p) {
      const std::uint8_t bit = static_cast<std::uint8_t>(1u << p);
      if (!pending_[p].active || (c.linearized & bit)) continue;
      const auto [next, value] = seq_apply(c.state, pending_[p].kind, pending_[p].key);
      Config d{next, static_cast<std::uint8_t>(c.linearized | bit),
               static_cast<std::uint8_t>(value ? c.results | bit : c.results)};
      if (all.insert(d).second) work.push_back(d);
    }
  }
  configs_.assign(all.begin(), all.end());
}

std::vector<std::uint64_t> LinTracker::committed_states() const {
  std::vector<std::uint64_t> out;
  for (const Config& c : configs_) {
    if (c.linearized == 0) out.push_back(c.state);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void LinTracker::encode(std::string& out) const {
  for (const Pending& p : pending_) {
    out.push_back(static_cast<char>(p.active));
  }
  const std::uint32_t n = static_cast<std::uint32_t>(configs_.size());
  out.append(reinterpret_cast<const char*>(&n), sizeof n);
  for (const Config& c : configs_) {
    out.append(reinterpret_cast<const char*>(&c.state), sizeof c.state);
    out.push_back(static_cast<char>(c.linearized));
    out.push_back(static_cast<char>(c.results));
  }
}

}  // namespace sqhi
