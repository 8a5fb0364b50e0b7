#include "homeo/protocol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace homeo::protocol {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::CommittedLocal: return "committed-local";
    case Outcome::ViolationWinner: return "violation-winner";
    case Outcome::AbortedLoser: return "aborted-loser";
    case Outcome::Retried: return "retried";
    case Outcome::Committed2PC: return "committed-2pc";
  }
  return "?";
}

bool committed(Outcome o) { return o != Outcome::AbortedLoser; }

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

Metrics compute_metrics(const SimTrace& trace, const SimConfig& cfg) {
  Metrics m;
  const auto lo = static_cast<std::int64_t>(std::llround(cfg.warmup_s * 1e6));
  const auto hi = static_cast<std::int64_t>(std::llround(cfg.duration_s * 1e6));
  std::vector<double> lat, win;
  std::set<std::uint64_t> lost;  // requests that lost a vote before finishing
  for (const auto& r : trace.records)
    if (r.outcome == Outcome::AbortedLoser) lost.insert(r.txn_id);
  for (const auto& r : trace.records) {
    if (r.end_us < lo || r.end_us >= hi) continue;
    if (!committed(r.outcome)) {
      ++m.loser_attempts;
      continue;
    }
    double ms = static_cast<double>(r.end_us - r.start_us) / 1000.0;
    ++m.committed;
    if (r.synced) ++m.synced;
    if (r.outcome == Outcome::ViolationWinner) {
      ++m.winners;
      if (!lost.count(r.txn_id)) win.push_back(ms);
    }
    lat.push_back(ms);
  }
  std::sort(lat.begin(), lat.end());
  std::sort(win.begin(), win.end());
  m.p50_ms = percentile(lat, 50);
  m.p90_ms = percentile(lat, 90);
  m.p95_ms = percentile(lat, 95);
  m.p99_ms = percentile(lat, 99);
  if (!win.empty()) {
    m.min_winner_latency_ms = win.front();
    m.max_winner_latency_ms = win.back();
  }
  m.throughput_per_site = static_cast<double>(m.committed) / (cfg.duration_s - cfg.warmup_s) / cfg.sites;
  m.sync_ratio = m.committed ? static_cast<double>(m.synced) / static_cast<double>(m.committed) : 0;
  return m;
}

namespace {

std::string ms(std::int64_t us) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(us / 1000),
                static_cast<long long>(us % 1000));
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const SimTrace& trace) {
  out << "txn_id,site,round,start_ms,end_ms,outcome,synced\n";
  for (const auto& r : trace.records)
    out << r.txn_id << ',' << r.site << ',' << r.round << ',' << ms(r.start_us) << ',' << ms(r.end_us) << ','
        << to_string(r.outcome) << ',' << (r.synced ? 1 : 0) << '\n';
}

std::string summary_text(const Metrics& m) {
  std::ostringstream o;
  o << "throughput_per_site=" << fixed(m.throughput_per_site, 3) << "\n"
    << "p50_ms=" << fixed(m.p50_ms, 3) << "\n"
    << "p90_ms=" << fixed(m.p90_ms, 3) << "\n"
    << "p95_ms=" << fixed(m.p95_ms, 3) << "\n"
    << "p99_ms=" << fixed(m.p99_ms, 3) << "\n"
    << "sync_ratio=" << fixed(m.sync_ratio, 6) << "\n"
    << "committed=" << m.committed << "\n"
    << "violations=" << m.winners << "\n"
    << "loser_attempts=" << m.loser_attempts << "\n";
  return o.str();
}

}  // namespace homeo::protocol
