#ifndef SUPERMAG_PARAMS_HPP
#define SUPERMAG_PARAMS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace supermag {

// Strengths of the scalar potential (u1..u3) and magnetic field (bz, bp, bs,
// bq, bl), the spheroidal scale a, and resonance indices n, m.
struct SystemParams {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  double bz = 0.0;
  double bp = 0.0;
  double bs = 0.0;
  double bq = 0.0;
  double bl = 0.0;
  double a = 1.0;
  int n = 1;
  int m = 1;

  static const std::vector<std::string>& keys();

  double get(std::string_view key) const;
  // Throws ConfigError for unknown keys or non-integral n, m.
  void set(std::string_view key, double value);

  // "k=v,k=v", spaces allowed. Throws ConfigError naming the offending key.
  static SystemParams parse(std::string_view text, SystemParams base);
  static SystemParams parse(std::string_view text);

  // Reduces n/m to lowest terms; throws ConfigError when n or m < 1.
  void normalize_resonance();

  nlohmann::json to_json() const;
};

}  // namespace supermag

#endif  // SUPERMAG_PARAMS_HPP
