#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dirquant/distributions.hpp"
#include "dirquant/hypothesis_tests.hpp"

namespace dirquant {

inline constexpr std::uint64_t kDefaultBaseSeed = 1;

/// One Monte Carlo study. Replication r draws from its own stream seeded
/// with derive_seed(base_seed, r), so results do not depend on `threads`.
struct ExperimentDesign {
  std::string id = "custom";
  std::variant<KentParams, VmfParams> distribution = VmfParams(UnitVector::basis(3, 2), 0.0);
  std::size_t n = 200;
  std::size_t replications = 200;
  std::uint64_t base_seed = kDefaultBaseSeed;
  std::vector<double> taus{0.25, 0.5, 0.75};
  double trim_tau = 0.25;
  double alpha = 0.05;
  std::size_t histogram_bins = 36;
  unsigned threads = 1;  // execution only; never part of the results

  void validate() const;
};

// Kent designs with mu = e_3, A = diag(beta, -beta, 0):
// l=1 (5, 2), l=2 (7, 3), l=3 (10, 4), l=4 (12, 5); n = 200.
ExperimentDesign kent_design(int l, std::size_t replications = 200,
                             std::uint64_t base_seed = kDefaultBaseSeed);

struct QuantileRecord {
  double tau;
  double c;      // circular quantile around mu_hat
  double c_g;    // quantile of the transformed projections
  double minor;  // minor c^E = cos(r s_min)
  double major;  // major c^E = cos(r s_max)
};

struct WatsonResult {
  double statistic;
  double p_value;
};

struct ReplicationRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd mu_hat;
  int median_iterations = 0;
  Eigen::VectorXd tangent_eigenvalues;  // descending
  std::vector<QuantileRecord> quantiles;
  std::optional<WatsonResult> watson_raw;  // d = 3 only
  std::optional<WatsonResult> watson_transformed;
  // Points at mu_hat (the median can sit on an observation) have no
  // longitude and are left out of both Watson tests.
  std::size_t pole_points = 0;
  std::size_t trim_removed_circular = 0;
  std::size_t trim_removed_elliptical = 0;
  double acceptance_rate = 1.0;  // Kent rejection sampler; 1 for vMF
  std::vector<double> raw_longitudes;          // kept only to bin them
  std::vector<double> transformed_longitudes;  // likewise
};

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator; 0 for a single value
};

struct QuantileAggregate {
  double tau;
  Moments c;
  Moments c_g;
  Moments minor;
  Moments major;
  Moments minor_minus_major;
  double sandwich_fraction;  // share of replications with major <= c <= minor
};

struct ReplicationAggregate {
  std::vector<QuantileAggregate> quantiles;
  double raw_rejection_rate = 0.0;          // p < alpha
  double transformed_rejection_rate = 0.0;  // p < alpha
  double raw_rejection_rate_01 = 0.0;       // p < 0.01
  double sandwich_fraction = 0.0;           // over all replications and taus
  Moments trim_removed_circular;
  Moments trim_removed_elliptical;
  Moments acceptance_rate;
  // Pooled longitude counts over [0, 2 pi) in histogram_bins equal bins.
  std::vector<std::size_t> raw_longitude_histogram;
  std::vector<std::size_t> transformed_longitude_histogram;
};

struct ReplicationReport {
  ExperimentDesign design;
  std::vector<ReplicationRecord> records;  // sorted by index
  ReplicationAggregate aggregate;
};

// Tolerance for the sandwich comparison major <= c <= minor.
inline constexpr double kSandwichSlack = 1e-12;

Moments moments(const std::vector<double>& values);

ReplicationRecord run_replication(const ExperimentDesign& design, std::size_t index);
ReplicationAggregate aggregate(const ExperimentDesign& design,
                               const std::vector<ReplicationRecord>& records);
// Errors are rethrown with the replication index attached.
ReplicationReport run_design(const ExperimentDesign& design);

/// Synthetic fibre-style goodness-of-fit study: vMF(e_3, kappa0) with a
/// fixed share round(contamination n) of points replaced by draws uniform
/// on the cap theta in [pi/3, pi/2]. Each replication runs the quartile test
/// against vMF(kappa0) and the exponential tail check before and after a
/// circular trim at trim_tau around e_3.
struct GofWorkflowConfig {
  std::size_t n = 500;
  double kappa0 = 9.0;
  double contamination = 0.15;
  double trim_tau = 0.15;
  std::size_t replications = 1000;
  std::uint64_t base_seed = kDefaultBaseSeed;
  double alpha = 0.05;
  std::size_t histogram_bins = 20;  // 1 - cos(theta) over [0, 1]
  unsigned threads = 1;

  void validate() const;
};

struct GofRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t contaminated = 0;
  std::size_t trimmed = 0;
  TestReport gof_pre;
  TestReport gof_post;
  TestReport tail_pre;
  TestReport tail_post;
};

struct GofWorkflowReport {
  GofWorkflowConfig config;
  std::vector<GofRecord> records;
  double pre_rejection_rate = 0.0;
  double post_rejection_rate = 0.0;
  Moments trimmed;
  Moments tail_distance_pre;
  Moments tail_distance_post;
  // Pooled counts of 1 - cos(theta); the last entry counts values above 1.
  std::vector<std::size_t> tail_histogram_pre;
  std::vector<std::size_t> tail_histogram_post;
};

GofWorkflowReport run_gof_workflow(const GofWorkflowConfig& config);

// Contaminated sample of the workflow (exposed for tests and the CLI).
DirectionalSample contaminated_vmf_sample(std::size_t n, double kappa0, double contamination,
                                          RandomStream& rng);

/// Config files: either a JSON object or `key = value` lines ('#' starts a
/// comment). Keys: mode (design | gof), design (1..4), id, distribution
/// (kent | vmf), kappa, beta, mu, major_axis, n, replications, base_seed,
/// taus, trim_tau, alpha, histogram_bins, threads, kappa0, contamination.
/// Unknown keys and malformed values raise kInvalidArgument.
using ReplicateConfig = std::variant<ExperimentDesign, GofWorkflowConfig>;
ReplicateConfig parse_replicate_config(std::string_view text);

// JSON documents and per-replication CSV tables. Floating-point values in
// CSV use 17 significant digits; JSON uses the shortest representation that
// reads back to the same double.
std::string to_json(const ReplicationReport& report);
std::string to_csv(const ReplicationReport& report);
std::string to_json(const GofWorkflowReport& report);
std::string to_csv(const GofWorkflowReport& report);

}  // namespace dirquant
