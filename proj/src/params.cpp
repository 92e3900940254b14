#include "supermag/params.hpp"

#include <cstdlib>
#include <cmath>
#include <numeric>

#include "supermag/errors.hpp"

namespace supermag {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view key, std::string_view text) {
  // Accept simple fractions such as 3/2, as in the figure parameter lists.
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return parse_number(key, trim(text.substr(0, slash))) /
           parse_number(key, trim(text.substr(slash + 1)));
  }
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "cannot parse value '" + buf + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& SystemParams::keys() {
  static const std::vector<std::string> k{"u1", "u2", "u3", "bz", "bp", "bs", "bq", "bl", "a", "n", "m"};
  return k;
}

double SystemParams::get(std::string_view key) const {
  if (key == "u1") return u1;
  if (key == "u2") return u2;
  if (key == "u3") return u3;
  if (key == "bz") return bz;
  if (key == "bp") return bp;
  if (key == "bs") return bs;
  if (key == "bq") return bq;
  if (key == "bl") return bl;
  if (key == "a") return a;
  if (key == "n") return n;
  if (key == "m") return m;
  throw ConfigError(std::string(key), "unknown parameter");
}

void SystemParams::set(std::string_view key, double value) {
  if (key == "n" || key == "m") {
    if (value != std::floor(value) || value < 1.0) {
      throw ConfigError(std::string(key), "must be a positive integer");
    }
    (key == "n" ? n : m) = static_cast<int>(value);
    return;
  }
  if (key == "u1") u1 = value;
  else if (key == "u2") u2 = value;
  else if (key == "u3") u3 = value;
  else if (key == "bz") bz = value;
  else if (key == "bp") bp = value;
  else if (key == "bs") bs = value;
  else if (key == "bq") bq = value;
  else if (key == "bl") bl = value;
  else if (key == "a") a = value;
  else throw ConfigError(std::string(key), "unknown parameter");
}

SystemParams SystemParams::parse(std::string_view text, SystemParams base) {
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(item), "expected key=value");
    }
    std::string_view key = trim(item.substr(0, eq));
    base.set(key, parse_number(key, trim(item.substr(eq + 1))));
  }
  return base;
}

SystemParams SystemParams::parse(std::string_view text) { return parse(text, SystemParams{}); }

void SystemParams::normalize_resonance() {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (m < 1) throw ConfigError("m", "must be >= 1");
  int g = std::gcd(n, m);
  n /= g;
  m /= g;
}

nlohmann::json SystemParams::to_json() const {
  return {{"u1", u1}, {"u2", u2}, {"u3", u3}, {"bz", bz}, {"bp", bp}, {"bs", bs},
          {"bq", bq}, {"bl", bl}, {"a", a},   {"n", n},   {"m", m}};
}

}  // namespace supermag
