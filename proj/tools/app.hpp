#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fopid/gl_simulator.hpp"
#include "fopid/metrics.hpp"
#include "fopid/polynomial.hpp"
#include "fopid/pso.hpp"
#include "fopid/tuner.hpp"

namespace fopid::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

/// Invalid job input. The message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct NamedController {
  std::string label;
  ControllerParams params;
};

enum class JobMode { Fractional, Integer, Both };

struct JobConfig {
  std::string name = "job";
  FractionalTransferFunction plant{FractionalPolynomial::constant(1.0),
                                   FractionalPolynomial::constant(1.0)};
  DesignSpec spec = DampingFrequency{};
  JobMode mode = JobMode::Both;
  ParameterBounds bounds{};
  pso::PsoConfig pso{};
  gl::SimConfig sim{};
  bool open_loop = false;
  std::vector<NamedController> controllers;
  std::filesystem::path output_dir = "fopid_out";
};

JobConfig parse_job(const nlohmann::json& doc);
/// Reads and parses a JSON job file; ConfigError on any problem.
JobConfig load_job(const std::filesystem::path& path);

JobMode parse_mode(const std::string& text);
std::string to_string(JobMode mode);

/// Controllers listed in a tune report ("results") or a bare "controllers"
/// document.
std::vector<NamedController> load_controllers(const std::filesystem::path& path);

struct CliOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> mode;
  std::optional<std::filesystem::path> params;
};

int run_tune(const CliOptions& options, std::ostream& out, std::ostream& err);
int run_simulate(const CliOptions& options, std::ostream& out, std::ostream& err);
int run_verify(const CliOptions& options, std::ostream& out, std::ostream& err);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// "t,y" header and one row per sample.
std::string response_csv(const gl::StepResponse& response);
/// Inverse of response_csv; returns (times, samples).
std::pair<std::vector<double>, std::vector<double>> parse_response_csv(const std::string& text);

/// 64-bit FNV-1a, hex encoded. Used to fingerprint inputs in manifests.
std::string fingerprint(const std::string& bytes);

}  // namespace fopid::app
