#include "homeo/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "homeo/analysis/table.hpp"
#include "homeo/harness/files.hpp"
#include "homeo/lang/desugar.hpp"
#include "homeo/protocol/oracle.hpp"
#include "homeo/protocol/simulator.hpp"
#include "homeo/rewrite/delta.hpp"
#include "homeo/treaty/lookahead.hpp"
#include "homeo/treaty/treaty.hpp"
#include "homeo/workload/microbench.hpp"

namespace homeo::harness {

namespace {

std::vector<lang::Transaction> load_all(const std::vector<std::string>& files) {
  if (files.empty()) throw InputError("no transaction files given");
  std::vector<lang::Transaction> out;
  for (const auto& f : files) out.push_back(load_transaction(f));
  return out;
}

std::vector<std::int64_t> parse_values(const std::string& list) {
  std::vector<std::int64_t> out;
  for (const auto& v : split(list, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(v, &used));
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw InputError("'" + v + "' is not an integer");
    }
  }
  return out;
}

std::pair<std::string, std::string> key_value(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected KEY=VALUE, got '" + arg + "'");
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

int report(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  return kUsage;
}

std::string fixed(double v, int digits) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

}  // namespace

std::string analyze(const AnalyzeOptions& o) {
  std::vector<lang::Transaction> txns = load_all(o.files);
  if (o.replicated) {
    if (o.placement.empty()) throw InputError("--replicated needs --placement");
    Placement p = parse_placement(read_file(o.placement));
    rewrite::DeltaSchema schema = rewrite::make_delta_schema(txns, p);
    for (auto& t : txns)
      t = rewrite::simplify_remote_reads(rewrite::delta_transform(t, p.home_of(t.name), p, schema));
  }
  std::vector<analysis::SymbolicTable> tables;
  for (const auto& t : txns) tables.push_back(analysis::build_table(t));
  if (tables.size() == 1) return analysis::dump(tables[0]);
  return analysis::dump(analysis::build_joint_table(tables));
}

std::string treaty(const TreatyOptions& o) {
  std::vector<lang::Transaction> txns = load_all(o.files);
  if (o.placement.empty() || o.db.empty()) throw InputError("treaty needs --placement and --db");
  Placement placement = parse_placement(read_file(o.placement));
  lang::Database db = parse_database(read_file(o.db));

  std::map<std::string, std::vector<std::int64_t>> bound;
  for (const auto& b : o.binds) {
    auto [name, list] = key_value(b);
    bound[name] = parse_values(list);
  }
  std::vector<analysis::SymbolicTable> tables;
  std::vector<std::vector<std::int64_t>> params;
  for (auto& t : txns) {
    auto it = bound.find(t.name);
    if (it != bound.end()) {
      std::string name = t.name;
      t = lang::specialize(t, it->second);
      t.name = name;
    } else if (!t.params.empty()) {
      throw InputError("transaction '" + t.name + "' has parameters; bind them with --bind " + t.name + "=...");
    }
    tables.push_back(analysis::build_table(t));
    params.emplace_back();
  }
  analysis::JointSymbolicTable joint = analysis::build_joint_table(tables);
  const analysis::JointRow& row = analysis::lookup(joint, db, params);

  treaty::GlobalTreaty gt = treaty::freeze(treaty::preprocess(analysis::simplify_guard(row.guard), db),
                                           placement.replicated, db);
  std::vector<treaty::SiteBody> bodies;
  for (std::size_t i = 0; i < joint.members.size(); ++i)
    bodies.push_back({placement.home_of(joint.members[i]), row.bodies[i]});
  auto templates = treaty::make_templates(gt, placement);
  templates = treaty::pin_remote_reads(bodies, placement, templates);

  std::vector<std::vector<lang::Database>> runs;
  if (!o.sequences.empty()) {
    treaty::Step step = treaty::joint_step(joint);
    for (const auto& s : o.sequences) runs.push_back(treaty::execute_sequence(step, split(s, ','), db));
  } else if (!o.model.empty()) {
    if (o.lookahead < 1 || o.samples < 1) throw InputError("--lookahead and --samples must be positive");
    treaty::WorkloadModel model = parse_model(read_file(o.model));
    runs = treaty::sample_executions(model, joint, db, o.lookahead, o.samples, o.seed);
  }
  auto groups = treaty::soft_constraints(templates, runs);
  treaty::OptimizeResult r = runs.empty() ? treaty::OptimizeResult{treaty::default_config(templates, gt, db), {}, 0}
                                          : treaty::optimize_config(templates, gt, db, groups, o.budget);

  std::ostringstream out;
  out << "global: " << (gt.clauses.empty() ? "true" : treaty::to_string(gt)) << "\n";
  for (const auto& t : templates)
    for (const auto& c : t.clauses) out << "template " << t.site << ": " << treaty::to_string(c) << "\n";
  for (const auto& [var, v] : r.config.assignment) out << "config: " << var << " = " << v << "\n";
  for (const auto& t : templates)
    for (const auto& c : t.clauses)
      out << "local " << t.site << ": "
          << treaty::to_string(c, c.config_var.empty() ? 0 : r.config.assignment.at(c.config_var)) << "\n";
  if (!runs.empty()) out << "satisfied: " << r.satisfied.size() << "/" << groups.size() << "\n";
  out << "valid: " << (treaty::check_valid(templates, r.config, gt, db) ? "yes" : "no") << "\n";
  return out.str();
}

SweepSpec parse_sweep(const std::string& arg) {
  auto [key, list] = key_value(arg);
  SweepSpec s{key, split(list, ',')};
  protocol::SimConfig probe;
  for (const auto& v : s.values) protocol::set_key(probe, key, v);  // rejects unknown keys and bad values
  return s;
}

std::vector<std::pair<std::string, protocol::SimConfig>> expand(const protocol::SimConfig& base,
                                                                const std::vector<SweepSpec>& sweeps) {
  std::vector<std::pair<std::string, protocol::SimConfig>> runs{{"", base}};
  for (const auto& s : sweeps) {
    std::vector<std::pair<std::string, protocol::SimConfig>> next;
    for (const auto& [label, cfg] : runs)
      for (const auto& v : s.values) {
        protocol::SimConfig c = cfg;
        protocol::set_key(c, s.key, v);
        protocol::validate(c);
        next.push_back({label + (label.empty() ? "" : "_") + s.key + "=" + v, c});
      }
    runs = std::move(next);
  }
  if (sweeps.empty()) {
    protocol::validate(base);
    runs[0].first = "run";
  }
  return runs;
}

RunReport run_microbench(const std::string& label, const protocol::SimConfig& cfg) {
  RunReport rep{label, cfg, {}, {}, false, true, {}};
  protocol::Scenario sc = workload::microbench_scenario(cfg);
  protocol::Compiled compiled(sc);
  protocol::SimResult res = protocol::simulate(cfg, compiled);
  rep.metrics = res.metrics;
  std::ostringstream csv;
  protocol::write_csv(csv, res.trace);
  rep.csv = csv.str();
  if (cfg.mode != protocol::Mode::Local) {
    auto v = protocol::check_equivalence(res.trace, compiled, sc.initial, res.final_db);
    rep.oracle_checked = true;
    rep.oracle_ok = v.ok;
    rep.oracle_detail = v.detail;
  }
  return rep;
}

std::vector<RunReport> run_all(const std::vector<std::pair<std::string, protocol::SimConfig>>& runs,
                               unsigned threads) {
  std::vector<RunReport> out(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < runs.size();) {
      try {
        out[i] = run_microbench(runs[i].first, runs[i].second);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(runs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  try {
    out << analyze(o);
    return kOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int cmd_treaty(const TreatyOptions& o, std::ostream& out, std::ostream& err) {
  try {
    out << treaty(o);
    return kOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, protocol::SimConfig>> runs;
  try {
    protocol::SimConfig base;
    if (!o.config.empty()) base = protocol::parse_sim_config(read_file(o.config));
    for (const auto& s : o.sets) {
      auto [k, v] = key_value(s);
      protocol::set_key(base, k, v);
    }
    if (o.seed) base.seed = *o.seed;
    std::vector<SweepSpec> sweeps;
    for (const auto& s : o.sweeps) sweeps.push_back(parse_sweep(s));
    runs = expand(base, sweeps);
    if (!o.out.empty()) std::filesystem::create_directories(o.out);
  } catch (const std::exception& e) {
    return report(e, err);
  }

  std::vector<RunReport> reports;
  try {
    reports = run_all(runs, o.threads);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }

  int code = kOk;
  std::ostringstream table;
  table << "label,mode,throughput_per_site,p50_ms,p99_ms,sync_ratio,committed,oracle\n";
  for (const auto& r : reports) {
    std::string oracle = !r.oracle_checked ? "skipped" : r.oracle_ok ? "ok" : "mismatch";
    table << r.label << ',' << protocol::to_string(r.config.mode) << ',' << fixed(r.metrics.throughput_per_site, 3)
          << ',' << fixed(r.metrics.p50_ms, 3) << ',' << fixed(r.metrics.p99_ms, 3) << ','
          << fixed(r.metrics.sync_ratio, 6) << ',' << r.metrics.committed << ',' << oracle << '\n';
    if (!r.oracle_ok) {
      err << r.label << ": serial oracle mismatch: " << r.oracle_detail << "\n";
      code = kCheckFailed;
    }
    if (o.out.empty()) continue;
    std::filesystem::path dir(o.out);
    std::ofstream(dir / (r.label + ".csv"), std::ios::binary) << r.csv;
    std::ofstream(dir / (r.label + ".summary.txt"), std::ios::binary)
        << protocol::to_text(r.config) << protocol::summary_text(r.metrics) << "oracle=" << oracle << "\n";
  }
  out << table.str();
  if (!o.out.empty()) std::ofstream(std::filesystem::path(o.out) / "summary.csv", std::ios::binary) << table.str();
  return code;
}

}  // namespace homeo::harness
