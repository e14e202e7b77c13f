#include "fldx/driver/config.hpp"

#include <regex>
#include <sstream>

namespace fldx {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

Rational number(const std::string &text, const std::string &what) {
  try {
    return Rational::parse(trim(text));
  } catch (const std::exception &) {
    throw UsageError("bad number '" + trim(text) + "' in " + what);
  }
}

RInterval range(const std::string &text, const std::string &what) {
  const std::string t = trim(text);
  if (t.empty())
    throw UsageError("empty range in " + what);
  if (t.front() != '[') {
    Rational v = number(t, what);
    return RInterval(v);
  }
  if (t.back() != ']')
    throw UsageError("unterminated range in " + what);
  const std::string body = t.substr(1, t.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string::npos)
    throw UsageError("range needs two bounds in " + what);
  Rational lo = number(body.substr(0, comma), what);
  Rational hi = number(body.substr(comma + 1), what);
  if (lo > hi)
    throw UsageError("empty range in " + what);
  return RInterval(lo, hi);
}

} // namespace

void AnalysisConfig::validate() const {
  if (subdiv < 1)
    throw UsageError("subdivision count must be at least 1");
  if (exec.path_budget < 1)
    throw UsageError("path budget must be at least 1");
  if (exec.threshold < Rational(0) || exec.threshold > Rational(1))
    throw UsageError("threshold must lie in [0, 1]");
  if (exec.max_syms < 1)
    throw UsageError("noise symbol limit must be at least 1");
}

FloatFormat parse_format(const std::string &text) {
  const std::string t = trim(text);
  if (t == "binary32")
    return FloatFormat::binary32();
  if (t == "binary64")
    return FloatFormat::binary64();
  if (t == "toy")
    return FloatFormat::toy();
  static const std::regex custom(R"(custom:\s*(\d+)\s*,\s*(\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*)");
  std::smatch m;
  if (std::regex_match(t, m, custom)) {
    try {
      return FloatFormat::custom(std::stol(m[1]), std::stol(m[2]), std::stol(m[3]), std::stol(m[4]));
    } catch (const std::exception &e) {
      throw UsageError("bad format '" + t + "': " + e.what());
    }
  }
  throw UsageError("unknown format '" + t + "'");
}

std::pair<std::string, InputSpec> parse_input(const std::string &text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw UsageError("input '" + text + "' needs the form name=range");
  const std::string name = trim(text.substr(0, eq));
  static const std::regex ident(R"([A-Za-z_]\w*)");
  if (!std::regex_match(name, ident))
    throw UsageError("bad input name '" + name + "'");
  const std::string rest = text.substr(eq + 1);
  const auto tilde = rest.find('~');
  InputSpec spec{range(rest.substr(0, tilde), "input " + name), std::nullopt};
  if (tilde != std::string::npos) {
    const std::string e = trim(rest.substr(tilde + 1));
    if (!e.empty() && e.front() == '[') {
      spec.err = range(e, "error of " + name);
    } else {
      Rational w = number(e, "error of " + name);
      if (w < Rational(0))
        throw UsageError("negative error width for " + name);
      spec.err = RInterval(-w, w);
    }
  }
  return {name, spec};
}

std::vector<Scenario> scenarios_of(const std::string &source) {
  std::vector<Scenario> out;
  static const std::regex line(R"(Scenario([^:\n]*):([^\n]*))");
  for (auto it = std::sregex_iterator(source.begin(), source.end(), line); it != std::sregex_iterator(); ++it) {
    Scenario s;
    s.label = trim((*it)[1]);
    std::string specs = (*it)[2];
    // A trailing comment terminator is not part of the list.
    if (auto end = specs.find("*/"); end != std::string::npos)
      specs = specs.substr(0, end);
    std::stringstream ss(specs);
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!trim(item).empty())
        s.inputs.insert(parse_input(item));
    if (s.label.empty())
      s.label = "scenario " + std::to_string(out.size() + 1);
    out.push_back(std::move(s));
  }
  return out;
}

Scenario pick_scenario(const std::string &source, const std::string &key) {
  auto all = scenarios_of(source);
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].label == key || std::to_string(i + 1) == key)
      return all[i];
  throw UsageError("no scenario '" + key + "'");
}

} // namespace fldx
