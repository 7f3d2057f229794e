#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polaron {

// Flat key=value configuration with [section] grouping. Sections become key
// prefixes ("mcmc.alpha"), '#' starts a comment, numeric values accept
// fraction literals like "1/256", and list values are comma-separated.
class Config {
 public:
  Config() = default;

  static Config fromFile(const std::string& path);
  static Config fromString(const std::string& text);

  void set(const std::string& key, const std::string& value);
  // "key=value" or "section.key=value", as passed to --override.
  void applyOverride(const std::string& spec);

  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;  // empty if absent

  // Sorted "key=value" lines; the reproducibility hash is FNV-1a over this.
  std::string canonical() const;
  std::uint64_t hash() const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Fraction-aware scalar parse ("0.25", "1/256", "1e-3"); throws on garbage.
double parse_number(const std::string& text);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace polaron
