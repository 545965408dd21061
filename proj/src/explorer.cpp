#include "sqhi/explorer.hpp"

#include <algorithm>
#include <cstring>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "sqhi/canonical.hpp"

namespace sqhi {

std::size_t Scenario::op_count() const {
  std::size_t n = 0;
  for (const auto& p : programs) n += p.size();
  return n;
}

namespace {

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

std::uint64_t mask_of(const std::vector<Key>& keys) {
  std::uint64_t s = 0;
  for (Key k : keys) {
    if (k >= 64) throw std::invalid_argument("scenario keys must be below 64");
    s |= bit(k);
  }
  return s;
}

}  // namespace

World::World(const Scenario& sc, AuditSet audits, bool record_history)
    : sc_(&sc),
      audits_(audits),
      record_(record_history),
      mem_(sc.hash.cells(), sc.processes()),
      procs_(sc.processes()),
      ghost_(sc.hash.cells(), sc.op_count()),
      lin_(sc.processes(), mask_of(sc.initial)),
      progress_(sc.processes(), 0),
      initial_state_(mask_of(sc.initial)) {
  if (sc.hash.cells() > 64) throw std::invalid_argument("explorer supports at most 64 cells");
  if (sc.hash.universe() > 64) throw std::invalid_argument("explorer supports universes up to 64");
  mem_.load(canonical(sc.initial, sc.hash).cells());
  std::uint32_t id = 1;
  for (const auto& prog : sc.programs) {
    first_id_.push_back(id);
    id += static_cast<std::uint32_t>(prog.size());
  }
}

std::vector<ProcessId> World::enabled() const {
  std::vector<ProcessId> out;
  for (ProcessId p = 0; p < procs_.size(); ++p) {
    if (procs_[p].op || procs_[p].next < sc_->programs[p].size()) out.push_back(p);
  }
  return out;
}

bool World::finished() const { return enabled().empty(); }

bool World::state_quiescent() const {
  for (const Proc& p : procs_) {
    if (p.op && p.op->kind() != OpKind::kLookup) return false;
  }
  return true;
}

std::optional<Violation> World::update_ghost(const Access& a, std::uint32_t op_id) {
  if (a.req.prim != Primitive::kSC || !a.ok) return std::nullopt;
  const std::size_t m = mem_.size();
  const std::size_t cell = a.req.cell;
  const Mark mark = a.req.value.mark;
  switch (a.req.site) {
    case Site::kInitialInsert:
    case Site::kInitialDelete:
      ghost_.tag[cell] = op_id;
      ghost_.ops[op_id].initial = static_cast<std::uint32_t>(cell);
      return std::nullopt;
    case Site::kDscFirst: {
      const std::uint32_t src = ghost_.tag[(cell + m - 1) % m];
      if (src == Ghost::kNone) {
        return Violation{"ghost.untagged-propagation", cell, "propagation out of a stable cell"};
      }
      if (ghost_.propagated(src, cell)) {
        return Violation{"single-propagation", cell,
                         "operation " + std::to_string(src) + " propagated into cell " +
                             std::to_string(cell) + " twice"};
      }
      ghost_.ops[src].propagated |= bit(cell);
      ghost_.tag[cell] = mark == Mark::kStable ? Ghost::kNone : src;
      return std::nullopt;
    }
    default:
      if (mark != Mark::kStable) {
        return Violation{"ghost.unexpected-unstable-write", cell, to_string(a.req.value)};
      }
      ghost_.tag[cell] = Ghost::kNone;
      return std::nullopt;
  }
}

std::optional<Violation> World::audit_memory() {
  ++stats_.audits;
  const std::vector<Cell>& cells = mem_.snapshot();
  const HashFn& h = sc_->hash;
  if (audits_.invariants) {
    if (auto v = check_ordering_invariant(cells, h)) return v;
    if (auto v = check_stable_unstable(cells, h, audits_.ghost ? &ghost_ : nullptr)) return v;
    if (audits_.monotone) {
      if (auto v = check_monotone_priority(cells, h)) return v;
    }
  }
  if (audits_.presence) {
    if (auto v = check_presence(cells, h, ghost_)) return v;
  }
  return std::nullopt;
}

std::optional<Violation> World::audit_quiescent() {
  if (!audits_.sqhi || !state_quiescent()) return std::nullopt;
  ++stats_.quiescent_checks;
  const std::vector<Cell> cells = mem_.snapshot();
  std::vector<std::uint64_t> states;
  for (const auto& c : lin_.configs()) states.push_back(c.state);
  for (std::uint64_t s : states) {
    if (check_sqhi(cells, sc_->hash, s)) return std::nullopt;
  }
  std::string d = "memory:";
  for (const Cell& c : cells) d += " " + to_string(c);
  return Violation{"sqhi", 0, d};
}

std::optional<Violation> World::audit_initial() {
  if (auto v = audit_memory()) return v;
  return audit_quiescent();
}

std::optional<Violation> World::step(ProcessId p, bool& completed) {
  completed = false;
  Proc& pr = procs_.at(p);
  if (!pr.op) {
    if (pr.next >= sc_->programs[p].size()) throw std::logic_error("step on a finished process");
    const ProgramOp& po = sc_->programs[p][pr.next];
    pr.op.emplace(po.kind, po.key, p, sc_->mutation);
    pr.op_id = first_id_[p] + pr.next;
    ghost_.ops[pr.op_id].key = po.key;
    progress_[p] = 0;
    lin_.invoke(p, po.kind, po.key);
    if (record_) history_.push_back(Event::invoke(p, po.kind, po.key));
  }

  try {
    pr.op->step(mem_, sc_->hash);
  } catch (const std::exception& e) {
    return Violation{"exception", 0, e.what()};
  }
  ++stats_.steps;
  const Access& a = pr.op->last_access();

  if (a.req.prim == Primitive::kSC && a.ok) {
    // Before its initial write every SC an operation makes is help, so any
    // successful SC counts as progress by some other operation.
    std::fill(progress_.begin(), progress_.end(), 1);
  }
  if (a.restart != RestartCause::kNone) {
    ++stats_.restarts;
    if (progress_[p]) ++stats_.blamed_restarts;
    if (audits_.restart_blame && !progress_[p]) {
      return Violation{"restart-blame", a.restart_cell,
                       std::string(to_string(pr.op->kind())) + " " + std::to_string(pr.op->key()) +
                           " (process " + std::to_string(p) + ") restarted at cell " +
                           std::to_string(a.restart_cell) +
                           " although nothing was written since it started"};
    }
    progress_[p] = 0;
  }

  if (auto v = update_ghost(a, pr.op_id)) return v;
  if (a.req.prim == Primitive::kSC && a.ok) {
    if (auto v = audit_memory()) return v;
  }

  if (pr.op->status() == OpStatus::kTableFull) {
    return Violation{"table-full", 0, "operation aborted although an empty cell exists"};
  }
  if (pr.op->done()) {
    completed = true;
    ++stats_.completed_ops;
    const bool value = pr.op->result();
    if (record_) history_.push_back(Event::respond(p, value));
    const bool ok = lin_.respond(p, value);
    pr.op.reset();
    ++pr.next;
    if (audits_.linearizability && !ok) {
      return Violation{"linearizability", 0,
                       "process " + std::to_string(p) + " returned " + (value ? "true" : "false") +
                           " with no consistent linearization"};
    }
  }
  return audit_quiescent();
}

namespace {

template <class T>
void put(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

}  // namespace

void World::encode(std::string& out) const {
  for (const Cell& c : mem_.cells()) {
    put(out, c.val);
    put(out, c.next);
    put(out, static_cast<std::uint8_t>(c.mark));
  }
  for (ProcessId p = 0; p < procs_.size(); ++p) {
    std::uint64_t links = 0;
    for (std::size_t i = 0; i < mem_.size(); ++i) {
      if (mem_.link_valid(p, i)) links |= bit(i);
    }
    put(out, links);
    put(out, procs_[p].next);
    put(out, static_cast<std::uint8_t>(procs_[p].op.has_value()));
    if (procs_[p].op) procs_[p].op->encode(out);
    if (audits_.restart_blame) put(out, progress_[p]);
  }
  for (std::uint32_t t : ghost_.tag) put(out, t);
  for (const auto& o : ghost_.ops) {
    put(out, o.initial);
    put(out, o.propagated);
  }
  lin_.encode(out);
}

// ---------------------------------------------------------------------------

namespace {

struct Digest {
  std::uint64_t a;
  std::uint64_t b;
  bool operator==(const Digest&) const = default;
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept { return d.a ^ (d.b << 1); }
};

// Two independent 64-bit hashes: FNV-1a and a word-wise multiply-mix.
Digest digest(const std::string& s) {
  std::uint64_t a = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    a ^= c;
    a *= 0x100000001b3ull;
  }
  std::uint64_t b = 0x9E3779B97F4A7C15ull ^ s.size();
  std::size_t i = 0;
  for (; i + 8 <= s.size(); i += 8) {
    std::uint64_t w;
    std::memcpy(&w, s.data() + i, 8);
    b ^= w;
    b *= 0xBF58476D1CE4E5B9ull;
    b ^= b >> 31;
  }
  for (; i < s.size(); ++i) {
    b ^= static_cast<unsigned char>(s[i]);
    b *= 0x94D049BB133111EBull;
    b ^= b >> 29;
  }
  return {a, b};
}

struct Found {
  Violation v;
};

class Dfs {
 public:
  Dfs(const Scenario& sc, AuditSet audits, std::uint64_t limit)
      : sc_(sc), audits_(audits), limit_(limit) {}

  Report run() {
    World w(sc_, audits_, true);
    try {
      if (auto v = w.audit_initial()) throw Found{*v};
      visit(w);
    } catch (const Found& f) {
      report_.ok = false;
      report_.violation = f.v;
      report_.schedule = path_;
      report_.history = last_history_;
      report_.snapshot = last_snapshot_;
    }
    report_.states = nodes_.size();
    report_.stats = totals_;
    return report_;
  }

 private:
  struct Node {
    std::uint32_t longest = 0;
    bool open = true;
  };

  // Longest run of steps from `w` on which no operation completes.
  std::uint32_t visit(const World& w) {
    std::string enc;
    w.encode(enc);
    const Digest d = digest(enc);
    if (auto it = nodes_.find(d); it != nodes_.end()) {
      if (it->second.open) {
        last_history_ = w.history();
        last_snapshot_ = w.snapshot();
        throw Found{Violation{"lock-freedom", 0,
                              "cycle of steps on which no operation completes"}};
      }
      return it->second.longest;
    }
    if (nodes_.size() >= limit_) {
      throw Found{Violation{"state-limit", 0, "exploration exceeded the state budget"}};
    }
    nodes_.emplace(d, Node{});
    std::uint32_t longest = 0;
    for (ProcessId p : w.enabled()) {
      World next = w;
      bool completed = false;
      path_.push_back(p);
      const auto v = next.step(p, completed);
      accumulate(next.stats(), w.stats());
      if (v) {
        last_history_ = next.history();
        last_snapshot_ = next.snapshot();
        throw Found{*v};
      }
      const std::uint32_t below = visit(next);
      const std::uint32_t l = completed ? 0 : 1 + below;
      longest = std::max(longest, l);
      path_.pop_back();
    }
    Node& n = nodes_[d];
    n.open = false;
    n.longest = longest;
    report_.max_completion_free = std::max<std::uint64_t>(report_.max_completion_free, longest);
    return longest;
  }

  void accumulate(const Stats& after, const Stats& before) {
    totals_.steps += after.steps - before.steps;
    totals_.completed_ops += after.completed_ops - before.completed_ops;
    totals_.quiescent_checks += after.quiescent_checks - before.quiescent_checks;
    totals_.restarts += after.restarts - before.restarts;
    totals_.blamed_restarts += after.blamed_restarts - before.blamed_restarts;
    totals_.audits += after.audits - before.audits;
  }

  const Scenario& sc_;
  AuditSet audits_;
  std::uint64_t limit_;
  std::unordered_map<Digest, Node, DigestHash> nodes_;
  std::vector<ProcessId> path_;
  History last_history_;
  std::vector<Cell> last_snapshot_;
  Report report_;
  Stats totals_;
};

void add(Stats& into, const Stats& s) {
  into.steps += s.steps;
  into.completed_ops += s.completed_ops;
  into.quiescent_checks += s.quiescent_checks;
  into.restarts += s.restarts;
  into.blamed_restarts += s.blamed_restarts;
  into.audits += s.audits;
}

bool fail(Report& r, const World& w, Violation v, std::vector<ProcessId> schedule) {
  r.ok = false;
  r.violation = std::move(v);
  r.schedule = std::move(schedule);
  r.history = w.history();
  r.snapshot = w.snapshot();
  return false;
}

// Runs to completion from `w`, choosing processes with `pick`. Returns false
// (and fills `r`) on a violation.
template <class Pick>
bool drive(World& w, std::vector<ProcessId>& schedule, Report& r, std::uint64_t cap, Pick pick) {
  std::uint64_t since_completion = 0;
  while (!w.finished()) {
    const std::vector<ProcessId> en = w.enabled();
    const ProcessId p = pick(en);
    schedule.push_back(p);
    bool completed = false;
    if (auto v = w.step(p, completed)) return fail(r, w, *v, schedule);
    since_completion = completed ? 0 : since_completion + 1;
    r.max_completion_free = std::max(r.max_completion_free, since_completion);
    if (since_completion > cap) {
      return fail(r, w,
                  Violation{"lock-freedom", 0,
                            std::to_string(cap) + " steps without a completed operation"},
                  schedule);
    }
  }
  if (!linearizable(w.history(), w.initial_state())) {
    return fail(r, w, Violation{"linearizability.search", 0, "history has no linearization"},
                schedule);
  }
  return true;
}

}  // namespace

Report explore_exhaustive(const Scenario& sc, AuditSet audits, std::uint64_t state_limit) {
  return Dfs(sc, audits, state_limit).run();
}

Report explore_random(const Scenario& sc, std::uint64_t first_seed, std::uint64_t count,
                      AuditSet audits, std::uint64_t step_cap) {
  Report r;
  for (std::uint64_t s = first_seed; s < first_seed + count; ++s) {
    World w(sc, audits, true);
    std::mt19937_64 rng(s);
    std::vector<ProcessId> schedule;
    ++r.schedules;
    r.seed = s;
    if (auto v = w.audit_initial()) {
      fail(r, w, *v, schedule);
      return r;
    }
    const bool ok = drive(w, schedule, r, step_cap, [&](const std::vector<ProcessId>& en) {
      return en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
    });
    add(r.stats, w.stats());
    if (!ok) return r;
    r.schedule = std::move(schedule);
    r.history = w.history();
    r.snapshot = w.snapshot();
  }
  return r;
}

Report run_scripted(const Scenario& sc, const std::vector<ProcessId>& schedule, AuditSet audits) {
  Report r;
  World w(sc, audits, true);
  std::vector<ProcessId> done;
  if (auto v = w.audit_initial()) {
    fail(r, w, *v, done);
    return r;
  }
  for (ProcessId p : schedule) {
    const auto en = w.enabled();
    if (std::find(en.begin(), en.end(), p) == en.end()) continue;
    done.push_back(p);
    bool completed = false;
    if (auto v = w.step(p, completed)) {
      fail(r, w, *v, done);
      r.stats = w.stats();
      return r;
    }
  }
  std::size_t turn = 0;
  if (drive(w, done, r, 200'000, [&](const std::vector<ProcessId>& en) { return en[turn++ % en.size()]; })) {
    r.history = w.history();
    r.snapshot = w.snapshot();
    r.schedule = done;
  }
  r.stats = w.stats();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json key_json(Key k) { return k == kEmpty ? nlohmann::json(nullptr) : nlohmann::json(k); }

}  // namespace

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::kNone: return "none";
    case Mutation::kSkipDscSecondSc: return "skip-dsc-second-sc";
    case Mutation::kSkipDscRecover: return "skip-dsc-recover";
    case Mutation::kStaleReleaseLookahead: return "stale-release-lookahead";
  }
  return "none";
}

Mutation mutation_from(const std::string& s) {
  for (Mutation m : {Mutation::kNone, Mutation::kSkipDscSecondSc, Mutation::kSkipDscRecover,
                     Mutation::kStaleReleaseLookahead}) {
    if (s == mutation_name(m)) return m;
  }
  throw std::invalid_argument("unknown mutation " + s);
}

namespace {

OpKind kind_from(const std::string& s) {
  if (s == "insert") return OpKind::kInsert;
  if (s == "delete") return OpKind::kDelete;
  if (s == "lookup") return OpKind::kLookup;
  throw std::invalid_argument("unknown operation " + s);
}

}  // namespace

nlohmann::json to_json(const Scenario& sc) {
  nlohmann::json progs = nlohmann::json::array();
  for (const auto& prog : sc.programs) {
    nlohmann::json ops = nlohmann::json::array();
    for (const ProgramOp& op : prog) ops.push_back({{"op", to_string(op.kind)}, {"key", op.key}});
    progs.push_back(ops);
  }
  const auto t = sc.hash.table();
  return {{"name", sc.name},
          {"m", sc.hash.cells()},
          {"u", sc.hash.universe()},
          {"hash", std::vector<std::uint32_t>(t.begin(), t.end())},
          {"initial", sc.initial},
          {"programs", progs},
          {"mutation", mutation_name(sc.mutation)}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc{j.value("name", std::string()),
              HashFn::from_table(j.at("m").get<std::size_t>(),
                                 j.at("hash").get<std::vector<std::uint32_t>>()),
              j.at("initial").get<std::vector<Key>>(),
              {},
              mutation_from(j.value("mutation", std::string("none")))};
  for (const auto& prog : j.at("programs")) {
    std::vector<ProgramOp> ops;
    for (const auto& op : prog) ops.push_back({kind_from(op.at("op")), op.at("key").get<Key>()});
    sc.programs.push_back(std::move(ops));
  }
  return sc;
}

nlohmann::json snapshot_json(const std::vector<Cell>& cells) {
  nlohmann::json out = nlohmann::json::array();
  for (const Cell& c : cells) {
    out.push_back({{"val", key_json(c.val)},
                   {"next", key_json(c.next)},
                   {"mark", std::string(1, mark_char(c.mark))}});
  }
  return out;
}

nlohmann::json history_json(const History& h) {
  nlohmann::json out = nlohmann::json::array();
  for (const Event& e : h) {
    if (e.type == Event::Type::kInvoke) {
      out.push_back({{"type", "invoke"}, {"process", e.process}, {"op", to_string(e.kind)}, {"key", e.key}});
    } else {
      out.push_back({{"type", "respond"}, {"process", e.process}, {"value", e.value}});
    }
  }
  return out;
}

nlohmann::json report_json(const Scenario& sc, const Report& r) {
  nlohmann::json j{{"config", to_json(sc)},
                   {"seed", r.seed},
                   {"schedule", r.schedule},
                   {"events", history_json(r.history)},
                   {"snapshot", snapshot_json(r.snapshot)},
                   {"ok", r.ok}};
  if (r.violation) {
    j["violation"] = {{"check", r.violation->check},
                      {"cell", r.violation->cell},
                      {"detail", r.violation->detail}};
  }
  return j;
}

}  // namespace sqhi
