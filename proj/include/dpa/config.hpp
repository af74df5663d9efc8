#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpa/fv_oracle.hpp"
#include "dpa/model.hpp"
#include "dpa/solver.hpp"
#include "dpa/variational.hpp"

namespace dpa {

class ConfigError : public std::runtime_error {
 public:
  /// line is 0 for errors that are not tied to a line (overrides, defaults).
  ConfigError(std::size_t line, std::string key, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Flat key = value document. '#' starts a comment; later assignments
/// replace earlier ones.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(const std::string& text);
  static KeyValueDoc load(const std::filesystem::path& path);

  /// Applies "key=value"; the entry is marked as an override (line 0).
  void set_override(const std::string& assignment);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string string(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  std::optional<double> maybe_number(const std::string& key) const;

  /// Keys that no reader asked for.
  std::vector<std::string> unused() const;
  std::size_t line_of(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  const Entry* find(const std::string& key) const;
  std::map<std::string, Entry> entries_;
  mutable std::map<std::string, bool> used_;
};

struct EntropyConfig {
  /// Multiples of the mobility cap.
  std::vector<double> c_fractions{0.25, 0.5, 0.75};
  double tolerance = 1e-2;
};

struct FvConfig {
  double dx = 1e-3;
  double a = -2.0;
  double b = 2.0;
  Boundary boundary = Boundary::ZeroFlux;
};

struct RunConfig {
  ProblemSpec problem;
  std::size_t N = 200;
  IntegrateOptions integrate;
  bool edb = true;
  bool bv = true;
  bool h1 = true;
  bool w1 = true;
  EnergyRange energy_range = EnergyRange::AllParticles;
  EntropyConfig entropy;
  FvConfig fv;
  /// Output frames for oracle comparison and refinement studies.
  std::size_t compare_intervals = 10;
  std::filesystem::path out_dir = "out";
};

/// Builds a validated RunConfig. Throws ConfigError for unknown kinds,
/// malformed values, N < 2, t_end <= 0, or unknown keys.
RunConfig build_config(const KeyValueDoc& doc);

}  // namespace dpa
