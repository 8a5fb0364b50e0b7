#include "homeo/harness/files.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "homeo/lang/desugar.hpp"
#include "homeo/lang/parser.hpp"

namespace homeo::harness {

namespace {

// Non-empty lines with comments stripped, split on whitespace.
std::vector<std::pair<int, std::vector<std::string>>> tokenized_lines(const std::string& text) {
  std::vector<std::pair<int, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ws(line);
    std::vector<std::string> words;
    for (std::string w; ws >> w;) words.push_back(w);
    if (!words.empty()) out.push_back({no, std::move(words)});
  }
  return out;
}

template <class T>
T number(const std::string& s, int line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw InputError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  return v;
}

[[noreturn]] void bad_line(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lang::Transaction load_transaction(const std::string& path) {
  std::string text = read_file(path);
  try {
    return lang::desugar_arrays(lang::parse(text, std::filesystem::path(path).stem().string()));
  } catch (const Error& e) {
    std::string msg = e.what();
    msg.erase(0, e.kind().size() + 2);
    throw Error(e.kind(), path + ": " + msg);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

Placement parse_placement(const std::string& text) {
  Placement p;
  for (const auto& [no, w] : tokenized_lines(text)) {
    if (w[0] == "sites" && w.size() == 2) {
      p.sites = number<int>(w[1], no);
      if (p.sites < 1) bad_line(no, "need at least one site");
    } else if (w[0] == "loc" && w.size() == 3) {
      p.loc[w[1]] = number<SiteId>(w[2], no);
    } else if (w[0] == "home" && w.size() == 3) {
      p.home[w[1]] = number<SiteId>(w[2], no);
    } else if (w[0] == "replicated" && w.size() >= 2) {
      p.replicated.insert(w.begin() + 1, w.end());
    } else {
      bad_line(no, "expected 'sites N', 'loc OBJ SITE', 'home TXN SITE' or 'replicated OBJ...'");
    }
  }
  auto check = [&](const auto& m, const char* what) {
    for (const auto& [name, s] : m)
      if (s < 1 || s > p.sites)
        throw InputError(std::string(what) + " '" + name + "' is placed at site " + std::to_string(s) + " of " +
                         std::to_string(p.sites));
  };
  check(p.loc, "object");
  check(p.home, "transaction");
  return p;
}

lang::Database parse_database(const std::string& text) {
  lang::Database db;
  for (const auto& [no, w] : tokenized_lines(text)) {
    if (w.size() != 3 || w[1] != "=") bad_line(no, "expected 'OBJ = VALUE'");
    db.set(w[0], number<std::int64_t>(w[2], no));
  }
  return db;
}

treaty::WorkloadModel parse_model(const std::string& text) {
  treaty::WorkloadModel m;
  for (const auto& [no, w] : tokenized_lines(text)) {
    if (w.size() < 2) bad_line(no, "expected 'TXN WEIGHT [LO:HI ...]'");
    treaty::WorkloadEntry e;
    e.txn = w[0];
    e.weight = number<double>(w[1], no);
    if (!(e.weight > 0)) bad_line(no, "weight must be positive");
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (std::size_t i = 2; i < w.size(); ++i) {
      auto parts = split(w[i], ':');
      if (parts.size() != 2) bad_line(no, "parameter range '" + w[i] + "' is not LO:HI");
      auto lo = number<std::int64_t>(parts[0], no), hi = number<std::int64_t>(parts[1], no);
      if (lo > hi) bad_line(no, "empty parameter range '" + w[i] + "'");
      ranges.push_back({lo, hi});
    }
    if (!ranges.empty())
      e.params = [ranges](std::mt19937_64& rng) {
        std::vector<std::int64_t> ps;
        for (auto [lo, hi] : ranges) ps.push_back(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
        return ps;
      };
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace homeo::harness
