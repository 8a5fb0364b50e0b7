#include "homeo/protocol/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <queue>
#include <tuple>

#include "homeo/lang/eval.hpp"
#include "homeo/treaty/lookahead.hpp"
#include "homeo/treaty/treaty.hpp"

namespace homeo::protocol {

Violator vote_winner(const std::vector<Violator>& violators) {
  if (violators.empty()) throw InputError("vote needs at least one violator");
  return *std::min_element(violators.begin(), violators.end(), [](const Violator& a, const Violator& b) {
    return std::tie(a.time_us, a.site, a.seq) < std::tie(b.time_us, b.site, b.seq);
  });
}

namespace {

using Us = std::int64_t;
using lang::Database;
using lang::ObjectId;

Us to_us(double ms) { return std::llround(ms * 1000.0); }

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  x ^= x >> 31;
  x *= 0xBF58476D1CE4E5B9ULL;
  return x ^ (x >> 29);
}

enum class Ev { Arrive, End, Notice, Snapshot, Install, WinnerDone };

struct Event {
  Us time;
  SiteId site;
  std::uint64_t seq;
  Ev kind;
  std::size_t a = 0;  // client, request or cleanup
};

struct Later {
  bool operator()(const Event& x, const Event& y) const {
    return std::tie(x.time, x.site, x.seq) > std::tie(y.time, y.site, y.seq);
  }
};

struct Req {
  std::uint64_t id = 0;
  SiteId site = 1;
  std::size_t client = 0;
  Request request;
  std::vector<std::size_t> comps;
  std::vector<ObjectId> footprint;
  Us first_start = -1;
  Us attempt_start = 0;
  bool synced = false;
  std::size_t locks_missing = 0;
};

struct RoundState {
  bool started = false;
  int no = 0;
  treaty::GlobalTreaty gt;
  std::vector<treaty::LocalTreatyTemplate> templates;  // index site - 1
  treaty::TreatyConfiguration config;
  std::vector<std::vector<ObjectId>> site_objects;  // objects in each site's clauses
  std::vector<ObjectId> gt_objects;
  int cleanup = -1;
  std::vector<int> blocked;  // per site
};

struct Cleanup {
  std::vector<std::size_t> comps;
  std::size_t winner = 0;
  SiteId coord = 1;
  Us t_v = 0;
  int pending = 0;
  std::vector<char> blocked, entered, deferred;
  TraceRecord record;
};

struct SiteState {
  std::deque<std::size_t> queue;
  std::vector<std::size_t> deferred;  // cleanups waiting for the running transaction
  std::optional<std::size_t> busy;
  Database local;
};

class Engine {
 public:
  Engine(const SimConfig& cfg, const Compiled& c)
      : cfg_(cfg), c_(c), K_(c.scenario().placement.sites), rtt_(to_us(cfg.rtt_ms)), half_(rtt_ / 2),
        service_(std::max<Us>(1, to_us(cfg.service_ms))), budget_(to_us(cfg.solver_budget)),
        duration_(std::llround(cfg.duration_s * 1e6)) {
    if (K_ != cfg.sites) throw ConfigError("scenario and configuration disagree on the number of sites");
    sites_.resize(K_ + 1);
    rounds_.resize(c.components().size());
    row_of_.assign(c.instance_count(), nullptr);
    for (auto& r : rounds_) r.blocked.assign(K_ + 1, 0);
    homeo_ = cfg.mode == Mode::Homeostasis || cfg.mode == Mode::Opt;
  }

  SimResult run();

 private:
  const SimConfig& cfg_;
  const Compiled& c_;
  const int K_;
  const Us rtt_, half_, service_, budget_, duration_;
  bool homeo_ = true;

  Us now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t commit_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::vector<SiteState> sites_;
  std::vector<std::vector<std::mt19937_64>> rngs_;
  std::vector<Req> reqs_;
  std::vector<RoundState> rounds_;
  std::vector<const analysis::Row*> row_of_;
  std::vector<Cleanup> cleanups_;
  Database synced_;   // frozen objects and round-start copies (homeostasis, opt)
  Database logical_;  // 2pc
  std::map<ObjectId, std::deque<std::size_t>> locks_;
  SimResult result_;

  void at(Us t, SiteId site, Ev kind, std::size_t a) { events_.push(Event{t, site, seq_++, kind, a}); }
  void arrive(SiteId s, std::size_t client);
  void try_start(SiteId s);
  bool startable(SiteId s, const Req& r) const;
  void end(SiteId s, std::size_t id);
  void end_local(SiteId s, Req& r);
  void end_2pc(SiteId s, Req& r);
  void end_homeo(SiteId s, std::size_t id);
  void next_request(const Req& r) { at(now_, r.site, Ev::Arrive, r.client); }
  TraceRecord record(const Req& r, Outcome o, std::vector<std::int64_t> log);

  // homeostasis
  // Returns the solver steps spent; step_limit caps sampling plus search.
  // Sampling is charged once per solver invocation, tracked by sampled.
  std::uint64_t begin_round(std::size_t comp, std::uint64_t step_limit, bool& sampled);
  std::int64_t view(SiteId s, const ObjectId& x) const {
    auto o = c_.owner(x);
    return o && *o == s ? sites_[s].local.get(x) : synced_.get(x);
  }
  std::int64_t logical_value(const ObjectId& x) const;
  void block(std::size_t cl, SiteId s);
  void enter(std::size_t cl, SiteId s);
  void send(std::size_t cl, SiteId s);
  void snapshot_arrived(std::size_t cl);
  void sync(std::size_t cl);
  void install(std::size_t cl, SiteId s);
  void check_treaties(const Req& r);

  // 2pc
  void acquire(std::size_t id);
  void granted(std::size_t id);
};

std::int64_t Engine::logical_value(const ObjectId& x) const {
  if (auto o = c_.owner(x)) return sites_[*o].local.get(x);
  std::int64_t v = synced_.get(x);
  for (const auto& d : c_.schema().deltas_of(x)) v = checked_add(v, sites_[*c_.owner(d)].local.get(d));
  return v;
}

TraceRecord Engine::record(const Req& r, Outcome o, std::vector<std::int64_t> log) {
  TraceRecord t;
  t.txn_id = r.id;
  t.site = r.site;
  t.round = homeo_ && !r.comps.empty() ? rounds_[r.comps.front()].no : 0;
  t.start_us = r.first_start;
  t.end_us = now_;
  t.outcome = o;
  t.synced = r.synced;
  if (committed(o)) t.commit_seq = ++commit_seq_;
  t.txn = r.request.txn;
  t.params = r.request.params;
  t.log = std::move(log);
  return t;
}

void Engine::arrive(SiteId s, std::size_t client) {
  if (now_ >= duration_) return;
  Req r;
  r.id = reqs_.size() + 1;
  r.site = s;
  r.client = client;
  r.request = c_.scenario().sample(s, rngs_[s][client]);
  std::set<std::size_t> comps;
  std::set<ObjectId> fp;
  for (std::size_t p : r.request.parts) {
    if (p >= c_.instance_count()) throw InputError("request names a missing instance");
    const CompiledInstance& in = c_.instance(p);
    if (in.home != s) throw NotHome("instance '" + in.name + "' requested away from its home site");
    comps.insert(in.component);
    fp.insert(in.footprint.begin(), in.footprint.end());
  }
  r.comps.assign(comps.begin(), comps.end());
  r.footprint.assign(fp.begin(), fp.end());
  reqs_.push_back(std::move(r));
  sites_[s].queue.push_back(reqs_.size() - 1);
  try_start(s);
}

bool Engine::startable(SiteId s, const Req& r) const {
  if (!homeo_) return true;
  for (std::size_t c : r.comps)
    if (rounds_[c].blocked[s] > 0) return false;
  return true;
}

void Engine::try_start(SiteId s) {
  SiteState& st = sites_[s];
  if (st.busy) return;
  auto it = std::find_if(st.queue.begin(), st.queue.end(), [&](std::size_t id) { return startable(s, reqs_[id]); });
  if (it == st.queue.end()) return;
  std::size_t id = *it;
  st.queue.erase(it);
  Req& r = reqs_[id];
  st.busy = id;
  r.attempt_start = now_;
  if (r.first_start < 0) r.first_start = now_;
  if (homeo_)
    for (std::size_t c : r.comps)
      if (!rounds_[c].started) {
        bool sampled = false;
        begin_round(c, static_cast<std::uint64_t>(budget_ / 100), sampled);
      }
  if (cfg_.mode == Mode::TwoPC)
    acquire(id);
  else
    at(now_ + service_, s, Ev::End, id);
}

void Engine::end(SiteId s, std::size_t id) {
  Req& r = reqs_[id];
  switch (cfg_.mode) {
    case Mode::Local: end_local(s, r); break;
    case Mode::TwoPC: end_2pc(s, r); break;
    default: end_homeo(s, id); return;
  }
  sites_[s].busy.reset();
  next_request(r);
  try_start(s);
}

void Engine::end_local(SiteId s, Req& r) {
  std::vector<std::int64_t> log;
  lang::exec_in_place(c_.program(r.request.txn, r.request.params).body, {}, {}, sites_[s].local, log);
  result_.trace.records.push_back(record(r, Outcome::CommittedLocal, std::move(log)));
}

// 2PC: the home site coordinates and holds its execution slot for the whole
// transaction; conflicting transactions queue on per-object locks.
void Engine::acquire(std::size_t id) {
  Req& r = reqs_[id];
  r.locks_missing = 0;
  for (const auto& x : r.footprint) {
    auto& q = locks_[x];
    q.push_back(id);
    if (q.front() != id) ++r.locks_missing;
  }
  if (r.locks_missing == 0) granted(id);
}

void Engine::granted(std::size_t id) {
  Us t = now_ + service_ + (K_ > 1 ? 2 * rtt_ : 0);
  at(t, reqs_[id].site, Ev::End, id);
  if (K_ > 1) result_.messages += 4 * static_cast<std::uint64_t>(K_ - 1);
}

void Engine::end_2pc(SiteId, Req& r) {
  std::vector<std::int64_t> log;
  lang::exec_in_place(c_.program(r.request.txn, r.request.params).body, {}, {}, logical_, log);
  r.synced = K_ > 1;
  result_.trace.records.push_back(record(r, Outcome::Committed2PC, std::move(log)));
  for (const auto& x : r.footprint) {
    auto& q = locks_[x];
    q.pop_front();
    if (!q.empty()) {
      Req& w = reqs_[q.front()];
      if (--w.locks_missing == 0) granted(q.front());
    }
  }
}

std::uint64_t Engine::begin_round(std::size_t comp, std::uint64_t step_limit, bool& sampled) {
  const Component& cp = c_.components()[comp];
  RoundState& rs = rounds_[comp];
  rs.started = true;
  ++result_.rounds;
  Database d;
  for (const auto& x : cp.objects) d.set(x, synced_.get(x));

  analysis::Guard psi;
  std::vector<treaty::SiteBody> bodies;
  std::map<std::string, const analysis::SymbolicTable*> tables;
  for (std::size_t m : cp.members) {
    const CompiledInstance& in = c_.instance(m);
    row_of_[m] = &analysis::lookup(in.table, d);
    psi = analysis::conjoin(psi, row_of_[m]->guard);
    bodies.push_back({in.home, row_of_[m]->body});
    tables[in.name] = &in.table;
  }
  std::set<ObjectId> frozen(cp.frozen.begin(), cp.frozen.end());
  rs.gt = treaty::freeze(treaty::preprocess(analysis::simplify_guard(psi), d), frozen, d);
  rs.templates = treaty::make_templates(rs.gt, c_.treaty_placement());
  rs.templates = treaty::pin_remote_reads(bodies, c_.treaty_placement(), rs.templates);

  std::uint64_t steps = 0;
  const std::uint64_t sampling =
      sampled ? 0 : static_cast<std::uint64_t>(cfg_.lookahead) * static_cast<std::uint64_t>(cfg_.cost_factor);
  if (cfg_.mode == Mode::Opt) {
    rs.config = treaty::equal_split_config(rs.templates, rs.gt, d);
  } else if (cfg_.lookahead == 0 || sampling >= step_limit) {
    // No time left to look ahead: the default configuration is the incumbent.
    rs.config = treaty::default_config(rs.templates, rs.gt, d);
  } else {
    treaty::WorkloadModel model;
    for (std::size_t m : cp.members) {
      double w = c_.scenario().instances[m].weight;
      if (w > 0) model.entries.push_back({c_.instance(m).name, w, nullptr});
    }
    if (model.entries.empty())
      for (std::size_t m : cp.members) model.entries.push_back({c_.instance(m).name, 1.0, nullptr});
    treaty::Step step = [&tables](const std::string& txn, const std::vector<std::int64_t>&, const Database& db) {
      const analysis::Row& row = analysis::lookup(*tables.at(txn), db);
      Database out = db;
      std::vector<std::int64_t> log;
      lang::exec_in_place(row.body, {}, {}, out, log);
      return out;
    };
    auto runs = treaty::sample_executions(model, step, d, cfg_.lookahead, cfg_.cost_factor,
                                          mix(cfg_.seed, mix(comp, static_cast<std::uint64_t>(rs.no))));
    auto groups = treaty::soft_constraints(rs.templates, runs);
    auto opt = treaty::optimize_config(rs.templates, rs.gt, d, groups, step_limit - sampling);
    rs.config = opt.config;
    steps = sampling + opt.steps;
    sampled = true;
  }
  if (cfg_.fault == Fault::BreakH1) {
    // Hand every site three more units than the treaty allows.
    for (const auto& t : rs.templates)
      for (const auto& cl : t.clauses)
        if (cl.origin && cl.op != treaty::Op::Eq) rs.config.assignment[cl.config_var] -= 3 * cl.sign;
  }
  if (!treaty::check_valid(rs.templates, rs.config, rs.gt, d)) ++result_.invalid_configs;

  rs.site_objects.assign(K_ + 1, {});
  for (const auto& t : rs.templates) {
    std::set<ObjectId> objs;
    for (const auto& cl : t.clauses)
      for (const auto& [x, k] : cl.terms) objs.insert(x);
    rs.site_objects[t.site].assign(objs.begin(), objs.end());
  }
  std::set<ObjectId> gobjs;
  for (const auto& cl : rs.gt.clauses)
    for (const auto& [x, k] : cl.terms) gobjs.insert(x);
  rs.gt_objects.assign(gobjs.begin(), gobjs.end());
  return steps;
}

void Engine::check_treaties(const Req& r) {
  for (std::size_t c : r.comps) {
    const RoundState& rs = rounds_[c];
    Database d;
    for (const auto& x : rs.gt_objects) d.set(x, logical_value(x));
    if (!treaty::holds(rs.gt, d)) {
      ++result_.treaty_breaches;
      return;
    }
  }
}

void Engine::end_homeo(SiteId s, std::size_t id) {
  Req& r = reqs_[id];
  SiteState& st = sites_[s];
  Database w;
  for (std::size_t p : r.request.parts)
    for (const auto& x : c_.instance(p).touched) w.set(x, view(s, x));
  for (std::size_t c : r.comps)
    for (const auto& x : rounds_[c].site_objects[s]) w.set(x, view(s, x));

  std::vector<std::int64_t> log;
  bool ok = true;
  for (std::size_t p : r.request.parts) {
    const CompiledInstance& in = c_.instance(p);
    lang::exec_in_place(row_of_[p]->body, {}, {}, w, log);
    const RoundState& rs = rounds_[in.component];
    if (!treaty::holds(rs.templates[s - 1], rs.config, w)) {
      ok = false;
      break;
    }
  }
  st.busy.reset();

  if (ok) {
    for (const auto& [x, v] : w.entries())
      if (v != view(s, x)) {
        auto o = c_.owner(x);
        if (!o || *o != s) throw std::logic_error("local execution wrote remote object '" + x + "'");
        st.local.set(x, v);
      }
    result_.trace.records.push_back(record(r, r.synced ? Outcome::Retried : Outcome::CommittedLocal, std::move(log)));
    check_treaties(r);
    next_request(r);
  } else {
    std::vector<std::size_t> active;
    for (std::size_t c : r.comps)
      if (rounds_[c].cleanup >= 0) active.push_back(static_cast<std::size_t>(rounds_[c].cleanup));
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    if (!active.empty()) {
      // Lost the vote to an earlier violator; rerun after its cleanup.
      r.synced = true;
      TraceRecord t = record(r, Outcome::AbortedLoser, {});
      t.start_us = r.attempt_start;
      result_.trace.records.push_back(std::move(t));
      ++result_.metrics.loser_attempts;
      st.queue.push_front(id);
      // It holds the component back but only broadcasts once the winner's notice arrives.
      for (std::size_t cl : active) block(cl, s);
    } else {
      std::size_t cl = cleanups_.size();
      cleanups_.emplace_back();
      Cleanup& c = cleanups_.back();
      c.comps = r.comps;
      c.winner = id;
      c.coord = s;
      c.t_v = now_;
      c.pending = K_;
      c.blocked.assign(K_ + 1, 0);
      c.entered.assign(K_ + 1, 0);
      c.deferred.assign(K_ + 1, 0);
      r.synced = true;
      for (std::size_t comp : c.comps) rounds_[comp].cleanup = static_cast<int>(cl);
      enter(cl, s);
      for (SiteId j = 1; j <= K_; ++j)
        if (j != s) {
          ++result_.messages;
          at(now_ + half_, j, Ev::Notice, cl);
        }
    }
  }

  // Snapshots held back for this transaction can go now.
  std::vector<std::size_t> held = std::move(st.deferred);
  st.deferred.clear();
  for (std::size_t cl : held) {
    cleanups_[cl].deferred[s] = 0;
    send(cl, s);
  }
  try_start(s);
}

void Engine::block(std::size_t cl, SiteId s) {
  Cleanup& c = cleanups_[cl];
  if (c.blocked[s]) return;
  c.blocked[s] = 1;
  for (std::size_t comp : c.comps) ++rounds_[comp].blocked[s];
}

void Engine::enter(std::size_t cl, SiteId s) {
  Cleanup& c = cleanups_[cl];
  block(cl, s);
  if (c.entered[s]) return;
  c.entered[s] = 1;
  const SiteState& st = sites_[s];
  if (st.busy) {
    const Req& b = reqs_[*st.busy];
    for (std::size_t comp : b.comps)
      if (std::find(c.comps.begin(), c.comps.end(), comp) != c.comps.end()) {
        c.deferred[s] = 1;
        sites_[s].deferred.push_back(cl);
        return;
      }
  }
  send(cl, s);
}

void Engine::send(std::size_t cl, SiteId s) {
  if (s == cleanups_[cl].coord) {
    snapshot_arrived(cl);
  } else {
    ++result_.messages;
    at(now_ + half_, cleanups_[cl].coord, Ev::Snapshot, cl);
  }
}

void Engine::snapshot_arrived(std::size_t cl) {
  if (--cleanups_[cl].pending == 0) sync(cl);
}

void Engine::sync(std::size_t cl) {
  Cleanup& c = cleanups_[cl];
  // Fold deltas into base values and refresh round-start copies.
  std::set<ObjectId> objs;
  for (std::size_t comp : c.comps) {
    const Component& cp = c_.components()[comp];
    objs.insert(cp.objects.begin(), cp.objects.end());
  }
  Database w;
  for (const auto& x : objs)
    if (!c_.is_delta(x)) w.set(x, logical_value(x));
  for (const auto& x : objs)
    if (c_.is_delta(x)) sites_[*c_.owner(x)].local.set(x, 0);

  // The winner runs at every site against the synchronized state.
  Req& r = reqs_[c.winner];
  std::vector<std::int64_t> log;
  for (std::size_t p : r.request.parts) lang::exec_in_place(c_.instance(p).original.body, {}, {}, w, log);
  for (const auto& [x, v] : w.entries()) {
    synced_.set(x, v);
    if (auto o = c_.owner(x)) sites_[*o].local.set(x, v);
  }
  c.record = record(r, Outcome::ViolationWinner, std::move(log));

  // The solver gets what is left of the overhead budget after the winner's
  // own service time and any wait for a deferred snapshot; 100 us per step.
  Us waited = now_ - c.t_v - (K_ > 1 ? rtt_ : 0);
  std::uint64_t allowance = static_cast<std::uint64_t>(std::max<Us>(0, budget_ - service_ - waited) / 100);
  std::uint64_t steps = 0;
  bool sampled = false;
  for (std::size_t comp : c.comps) {
    rounds_[comp].cleanup = -1;
    ++rounds_[comp].no;
    steps += begin_round(comp, allowance - std::min(steps, allowance), sampled);
  }
  Us solve = cfg_.mode == Mode::Homeostasis ? static_cast<Us>(steps) * 100 : 0;
  for (SiteId j = 1; j <= K_; ++j) {
    if (j != c.coord) result_.messages += 2;  // new treaty out, acknowledgment back
    at(now_ + solve + (j == c.coord ? 0 : half_), j, Ev::Install, cl);
  }
  at(now_ + solve + (K_ > 1 ? rtt_ : 0), c.coord, Ev::WinnerDone, cl);
}

void Engine::install(std::size_t cl, SiteId s) {
  for (std::size_t comp : cleanups_[cl].comps) --rounds_[comp].blocked[s];
  try_start(s);
}

SimResult Engine::run() {
  const Scenario& sc = c_.scenario();
  synced_ = sc.initial;
  logical_ = sc.initial;
  for (SiteId s = 1; s <= K_; ++s) sites_[s].local = cfg_.mode == Mode::Local ? sc.initial : Database{};
  if (homeo_)
    for (const auto& [x, v] : sc.initial.entries())
      if (auto o = c_.owner(x)) sites_[*o].local.set(x, v);

  rngs_.resize(K_ + 1);
  for (SiteId s = 1; s <= K_; ++s)
    for (int k = 0; k < cfg_.clients_per_site; ++k) {
      std::seed_seq seq{cfg_.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(k)};
      rngs_[s].emplace_back(seq);
      at(0, s, Ev::Arrive, static_cast<std::size_t>(k));
    }

  while (!events_.empty()) {
    Event e = events_.top();
    events_.pop();
    now_ = e.time;
    switch (e.kind) {
      case Ev::Arrive: arrive(e.site, e.a); break;
      case Ev::End: end(e.site, e.a); break;
      case Ev::Notice: enter(e.a, e.site); break;
      case Ev::Snapshot: snapshot_arrived(e.a); break;
      case Ev::Install: install(e.a, e.site); break;
      case Ev::WinnerDone: {
        Cleanup& c = cleanups_[e.a];
        c.record.end_us = now_;
        result_.trace.records.push_back(c.record);
        next_request(reqs_[c.winner]);
        break;
      }
    }
  }

  for (SiteId s = 1; s <= K_; ++s)
    if (!sites_[s].queue.empty() || sites_[s].busy) throw IncompleteRound("run ended with queued transactions");

  std::set<ObjectId> objs;
  for (const auto& [x, v] : sc.initial.entries()) objs.insert(x);
  for (const auto& x : c_.logical_objects()) objs.insert(x);
  for (const auto& x : objs) {
    if (c_.is_delta(x)) continue;
    std::int64_t v = 0;
    switch (cfg_.mode) {
      case Mode::TwoPC: v = logical_.get(x); break;
      case Mode::Local: v = sites_[1].local.get(x); break;
      default: v = logical_value(x);
    }
    result_.final_db.set(x, v);
  }
  std::uint64_t losers = result_.metrics.loser_attempts;
  result_.metrics = compute_metrics(result_.trace, cfg_);
  result_.metrics.loser_attempts = losers;
  return std::move(result_);
}

}  // namespace

SimResult simulate(const SimConfig& cfg, const Compiled& compiled) {
  validate(cfg);
  Engine e(cfg, compiled);
  return e.run();
}

SimResult simulate(const SimConfig& cfg, const Scenario& scenario) {
  Compiled compiled(scenario);
  return simulate(cfg, compiled);
}

}  // namespace homeo::protocol
