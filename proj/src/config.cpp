#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "conelap/errors.hpp"
#include "conelap/scenarios.hpp"

namespace conelap {

namespace {

const std::set<std::string, std::less<>> kConeKeys{"p", "q", "rp", "rq"};
const std::set<std::string, std::less<>> kRawKeys{"a_bar", "b_bar", "n"};
const std::set<std::string, std::less<>> kSharedKeys{"alpha", "Q", "name"};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(std::string_view origin, int line, const std::string& what) {
  std::ostringstream msg;
  msg << origin << ":" << line << ": " << what;
  throw InvalidInput(msg.str());
}

double number(std::string_view origin, const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail(origin, e.line, "value of '" + key + "' is not a finite number: '" + e.value + "'");
  }
  return v;
}

int integer(std::string_view origin, const std::string& key, const Entry& e) {
  int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    fail(origin, e.line, "value of '" + key + "' is not an integer: '" + e.value + "'");
  }
  return v;
}

}  // namespace

Scenario parse_config(std::string_view text, std::string_view origin) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(origin, line_no, "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (value.empty()) fail(origin, line_no, "empty value for '" + key + "'");
    if (!kConeKeys.count(key) && !kRawKeys.count(key) && !kSharedKeys.count(key)) {
      fail(origin, line_no, "unknown key '" + key + "'");
    }
    if (entries.count(key)) fail(origin, line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }

  bool has_cone = false;
  bool has_raw = false;
  for (const auto& [key, e] : entries) {
    has_cone = has_cone || kConeKeys.count(key) > 0;
    has_raw = has_raw || kRawKeys.count(key) > 0;
  }
  if (has_cone && has_raw) {
    throw InvalidInput(std::string(origin) +
                       ": ambiguous config, both cone keys (p, q, rp, rq) and raw keys (a_bar, b_bar, n) present");
  }
  if (!has_cone && !has_raw) {
    throw InvalidInput(std::string(origin) + ": config needs either p, q, rp, rq or a_bar, b_bar, n");
  }

  const auto require = [&](const char* key) -> const Entry& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw InvalidInput(std::string(origin) + ": missing key '" + key + "'");
    return it->second;
  };

  Scenario sc;
  sc.source = ScenarioSource::UserConfig;
  const auto name_it = entries.find("name");
  sc.name = name_it != entries.end() ? name_it->second.value : std::string(origin);

  const double alpha = number(origin, "alpha", require("alpha"));
  const double Q = number(origin, "Q", require("Q"));
  if (has_cone) {
    ConeForm form;
    form.cone = make_cone(integer(origin, "p", require("p")), integer(origin, "q", require("q")),
                          number(origin, "rp", require("rp")), number(origin, "rq", require("rq")));
    form.alpha = alpha;
    form.Q = Q;
    sc.params = form;
  } else {
    RawForm form{number(origin, "a_bar", require("a_bar")), number(origin, "b_bar", require("b_bar")), Q,
                 alpha, integer(origin, "n", require("n"))};
    sc.params = form;
  }
  // Enforce the DynParams invariants (alpha range, b_bar sign) at load time.
  scenario_dyn_params(sc);
  return sc;
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace conelap
