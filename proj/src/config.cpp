#include "polaron/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polaron {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("parse_number: empty value");
  const std::size_t slash = t.find('/');
  if (slash != std::string::npos) {
    const double num = parse_number(t.substr(0, slash));
    const double den = parse_number(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_number: zero denominator");
    return num / den;
  }
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_number: not a number: '" + t + "'");
  }
  if (used != t.size())
    throw std::invalid_argument("parse_number: trailing junk in '" + t + "'");
  return v;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Config Config::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fromString(buf.str());
}

Config Config::fromString(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: bad section header at line " +
                                    std::to_string(lineNo));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: missing '=' at line " +
                                  std::to_string(lineNo));
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: empty key at line " +
                                  std::to_string(lineNo));
    if (!section.empty()) key = section + "." + key;
    cfg.kv_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

void Config::applyOverride(const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must look like key=value: '" + spec +
                                "'");
  kv_[trim(spec.substr(0, eq))] = trim(spec.substr(eq + 1));
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::str(const std::string& key,
                        const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::number(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return parse_number(it->second);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config key '" + key + "': " + e.what());
  }
}

long Config::integer(const std::string& key, long fallback) const {
  const double v = number(key, static_cast<double>(fallback));
  const long r = std::lround(v);
  if (static_cast<double>(r) != v)
    throw std::invalid_argument("config key '" + key + "' is not an integer");
  return r;
}

std::uint64_t Config::uinteger(const std::string& key,
                               std::uint64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string t = it->second;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "' is not an unsigned integer: '" + t + "'");
  }
}

bool Config::flag(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::string t = it->second;
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw std::invalid_argument("config key '" + key + "' is not a boolean: '" +
                              it->second + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return {};
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(parse_number(item));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
  return out;
}

std::string Config::canonical() const {
  std::ostringstream out;
  for (const auto& [k, v] : kv_) out << k << "=" << v << "\n";
  return out.str();
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

}  // namespace polaron
