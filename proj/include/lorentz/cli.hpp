#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/metrics.hpp"

namespace lorentz {

/// Malformed or unsupported configuration (exit code 2).
class ConfigError : public LorentzError {
 public:
  using LorentzError::LorentzError;
};

/// Domain variant plus parameters; unused fields keep their defaults.
struct DomainSpec {
  std::string type;  // ConeFuture, HalfSpaceFuture, Diamond, StableConeComplement, SpacelikeSlab, Bonsante, EuclideanBall
  int dim = 2;       // event size n+1
  std::vector<double> a, b, apex, origin, normal, center;
  double eps = 0.0;
  double h = 1.0;
  double radius = 1.0;
  int l = 0;
  bool operator==(const DomainSpec&) const = default;
};

struct SamplerConfig {
  std::vector<double> scales{1, 2, 4, 8, 16};
  int quadruples = 2000;
  int pool = 48;
  double rho_div = 4.0;
  double r_mul = 1.0;
  double power = 1.0;
  std::vector<double> center;  // empty: domain center
  bool operator==(const SamplerConfig&) const = default;
};

struct OutputPaths {
  std::string csv;
  std::string svg;  // empty: no SVG
  bool operator==(const OutputPaths&) const = default;
};

struct ExperimentConfig {
  int version = 1;
  std::string experiment;  // distance, compare, hyperbolicity, acausality, thinness, validate
  DomainSpec domain;
  std::vector<std::array<std::vector<double>, 2>> pairs;
  Mesh mesh;
  double qh_h = 0.05;
  SamplerConfig sampler;
  int teeth = 4;
  std::uint64_t seed = 42;
  std::string level = "fast";
  OutputPaths outputs;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Strict parse: unknown fields, wrong types and version != 1 throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& c);

/// Throws DomainError for invalid parameters.
std::unique_ptr<Domain> make_domain(const DomainSpec& spec);

struct ResultRow {
  std::string experiment;
  std::string domain;
  std::string metric;
  std::string kind;
  std::vector<Event> points;  // up to four: x, y, z, w
  double value = 0.0;
  std::string mesh;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

std::string csv_header();
std::string csv_line(const ResultRow& r);

struct RunResult {
  std::vector<ResultRow> rows;
  int exit_code = 0;
  std::string message;
  std::string svg;  // empty unless requested and the domain is 1+1
};

/// Executes the experiment without touching the filesystem.
RunResult run_experiment(const ExperimentConfig& c);

/// Parses, runs and writes the declared outputs under out_dir; returns the exit code.
int run_config_file(const std::string& path, const std::string& out_dir,
                    const std::optional<std::uint64_t>& seed, const std::string& expected_experiment,
                    std::string* message = nullptr);

}  // namespace lorentz
