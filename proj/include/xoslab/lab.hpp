#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "xoslab/construction.hpp"

namespace xoslab::lab {

using Json = nlohmann::ordered_json;

struct ExperimentConfig {
  std::size_t m = 160;
  std::size_t n = 4;
  double eps = 0.01;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  Variant variant = Variant::Nu;
  std::string protocol = "trivial";
  std::string output_path;
  /// Worker threads; 0 picks the hardware concurrency. Results never depend on it.
  std::size_t workers = 0;
};

/// Throws std::invalid_argument unless 16 | m, n ≥ 1, 0 < eps < 1/4 and trials ≥ 1.
void validate(const ExperimentConfig& cfg);
Json to_json(const ExperimentConfig& cfg);

enum class Status { Pass, Fail, Info };

struct Check {
  std::string name;
  /// Info checks are reported but never fail a report.
  Status status = Status::Info;
  Json measured = Json::object();
  Json thresholds = Json::object();
};

struct Report {
  std::string experiment;
  Json config = Json::object();
  /// Exact constants the checks were evaluated against, as "p/q" strings.
  Json golden = Json::object();
  std::vector<Check> checks;
  /// Wall time; only serialized when set, so default reports stay byte-stable.
  double runtime_seconds = -1;

  bool passed() const;
  const Check* find(const std::string& name) const;
  Json to_json() const;
  std::string dump() const;
};

/// Per-trial stream: trial t of experiment `kind` under `seed`.
RngStream trial_stream(std::uint64_t seed, std::uint64_t kind, std::uint64_t trial);

Report verify_concentration(const ExperimentConfig& cfg);
Report verify_theta_recovery(const ExperimentConfig& cfg);
/// ν against ν′ with cfg.trials draws each.
Report verify_nu_equivalence(const ExperimentConfig& cfg);
/// The same battery between arbitrary sample sources. Equal (variant, seed)
/// pairs give identical samples and zero two-sample statistics.
Report compare_samples(const ExperimentConfig& cfg, Variant left, std::uint64_t left_seed, Variant right,
                       std::uint64_t right_seed);
Report verify_info(const ExperimentConfig& cfg);
Report run_protocol(const ExperimentConfig& cfg);

/// JSON instance format: hex sets with item 0 in the low bit of the first
/// byte, 1-based i_star.
Json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);
/// Throws std::invalid_argument on malformed JSON or when the instance
/// violates an invariant; the message names the failing check.
Instance parse_instance(const std::string& text);
Instance instance_from_json(const Json& j);

/// The n = 1, m = 16 instance built from the reference configuration, θ = 1.
Instance reference_instance();

}  // namespace xoslab::lab
