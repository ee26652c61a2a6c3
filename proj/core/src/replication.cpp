#include "dirquant/replication.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "dirquant/error.hpp"
#include "dirquant/estimation.hpp"
#include "dirquant/quantile_depth.hpp"

namespace dirquant {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
// is handled exactly once and results go to caller-owned slots, so the
// outcome does not depend on scheduling. The failure with the lowest index
// is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      std::string msg = "replication " + std::to_string(i) + ": " + e.message();
      throw Error(e.kind(), msg, e.index());
    }
  }
}

double fraction(std::size_t hits, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

std::size_t angle_bin(double phi, std::size_t bins) {
  const auto b = static_cast<std::size_t>(std::floor(phi / kTwoPi * static_cast<double>(bins)));
  return std::min(b, bins - 1);
}

bool sandwiched(const QuantileRecord& q) {
  return q.major <= q.c + kSandwichSlack && q.c <= q.minor + kSandwichSlack;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

void ExperimentDesign::validate() const {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "design: n must be at least 1");
  if (replications < 1) throw Error(ErrorKind::kInvalidArgument, "design: replications must be >= 1");
  if (taus.empty()) throw Error(ErrorKind::kInvalidArgument, "design: no quantile levels");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::kInvalidArgument, "design: tau outside (0, 1)");
  }
  if (!(trim_tau > 0.0 && trim_tau < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "design: trim_tau outside (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::kInvalidArgument, "design: alpha outside (0, 1)");
  if (histogram_bins < 1) throw Error(ErrorKind::kInvalidArgument, "design: histogram_bins must be >= 1");
}

ExperimentDesign kent_design(int l, std::size_t replications, std::uint64_t base_seed) {
  static constexpr double kKappa[] = {5.0, 7.0, 10.0, 12.0};
  static constexpr double kBeta[] = {2.0, 3.0, 4.0, 5.0};
  if (l < 1 || l > 4) throw Error(ErrorKind::kInvalidArgument, "Kent designs are numbered 1 to 4");
  ExperimentDesign d;
  d.id = "l" + std::to_string(l);
  d.distribution = KentParams::canonical(kKappa[l - 1], kBeta[l - 1]);
  d.n = 200;
  d.replications = replications;
  d.base_seed = base_seed;
  return d;
}

Moments moments(const std::vector<double>& values) {
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd =
      values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return {mean, sd};
}

ReplicationRecord run_replication(const ExperimentDesign& design, std::size_t index) {
  ReplicationRecord rec;
  rec.index = index;
  rec.seed = derive_seed(design.base_seed, index);
  RandomStream rng(rec.seed);

  const DirectionalSample sample = std::visit(
      [&](const auto& p) -> DirectionalSample {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, KentParams>) {
          SamplerStats stats;
          DirectionalSample s = kent_sample(p, design.n, rng, &stats);
          rec.acceptance_rate = stats.acceptance_rate();
          return s;
        } else {
          return vmf_sample(p, design.n, rng);
        }
      },
      design.distribution);

  const FisherMedian med = fisher_median(sample);
  const UnitVector& mu_hat = med.direction;
  rec.mu_hat = mu_hat.coords();
  rec.median_iterations = med.iterations;

  const MahalanobisTransform t = fit_transform(sample, mu_hat);
  rec.tangent_eigenvalues = t.tangent_eigenvalues();
  const DirectionalSample moved = apply_forward(t, sample);
  const std::vector<double> raw_proj = sample.projections(mu_hat);
  const std::vector<double> moved_proj = moved.projections(mu_hat);

  for (double tau : design.taus) {
    const double c = projection_quantile(raw_proj, tau);
    const double c_g = projection_quantile(moved_proj, tau);
    const SemiAxes axes = contour_semiaxes(t, c_g);
    rec.quantiles.push_back({tau, c, c_g, axes.minor_c, axes.major_c});
  }

  if (sample.dim() == 3) {
    DirectionalSample raw_off(3), moved_off(3);
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if (raw_proj[i] >= 1.0 - kPoleTolerance || moved_proj[i] >= 1.0 - kPoleTolerance) {
        ++rec.pole_points;
        continue;
      }
      raw_off.push_back(sample[i]);
      moved_off.push_back(moved[i]);
    }
    rec.raw_longitudes = longitudes(raw_off, mu_hat);
    rec.transformed_longitudes = longitudes(moved_off, mu_hat);
    const TestReport raw = watson_u2(rec.raw_longitudes);
    const TestReport tr = watson_u2(rec.transformed_longitudes);
    rec.watson_raw = WatsonResult{raw.statistic, raw.p_value};
    rec.watson_transformed = WatsonResult{tr.statistic, tr.p_value};
  }

  const double c_trim = projection_quantile(raw_proj, design.trim_tau);
  const double cg_trim = projection_quantile(moved_proj, design.trim_tau);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (raw_proj[i] < c_trim) ++rec.trim_removed_circular;
    if (moved_proj[i] < cg_trim) ++rec.trim_removed_elliptical;
  }
  return rec;
}

ReplicationAggregate aggregate(const ExperimentDesign& design,
                               const std::vector<ReplicationRecord>& records) {
  ReplicationAggregate agg;
  const std::size_t reps = records.size();
  std::size_t sandwich_hits = 0;
  std::size_t sandwich_total = 0;
  for (std::size_t j = 0; j < design.taus.size(); ++j) {
    std::vector<double> c, cg, minor, major, gap;
    std::size_t hits = 0;
    for (const auto& r : records) {
      const QuantileRecord& q = r.quantiles.at(j);
      c.push_back(q.c);
      cg.push_back(q.c_g);
      minor.push_back(q.minor);
      major.push_back(q.major);
      gap.push_back(q.minor - q.major);
      if (sandwiched(q)) ++hits;
    }
    sandwich_hits += hits;
    sandwich_total += reps;
    agg.quantiles.push_back({design.taus[j], moments(c), moments(cg), moments(minor),
                             moments(major), moments(gap), fraction(hits, reps)});
  }
  agg.sandwich_fraction = fraction(sandwich_hits, sandwich_total);

  std::size_t raw_rej = 0, tr_rej = 0, raw_rej01 = 0, tested = 0;
  std::vector<double> trim_c, trim_e, accept;
  agg.raw_longitude_histogram.assign(design.histogram_bins, 0);
  agg.transformed_longitude_histogram.assign(design.histogram_bins, 0);
  for (const auto& r : records) {
    if (r.watson_raw && r.watson_transformed) {
      ++tested;
      if (r.watson_raw->p_value < design.alpha) ++raw_rej;
      if (r.watson_raw->p_value < 0.01) ++raw_rej01;
      if (r.watson_transformed->p_value < design.alpha) ++tr_rej;
    }
    for (double phi : r.raw_longitudes) {
      ++agg.raw_longitude_histogram[angle_bin(phi, design.histogram_bins)];
    }
    for (double phi : r.transformed_longitudes) {
      ++agg.transformed_longitude_histogram[angle_bin(phi, design.histogram_bins)];
    }
    trim_c.push_back(static_cast<double>(r.trim_removed_circular));
    trim_e.push_back(static_cast<double>(r.trim_removed_elliptical));
    accept.push_back(r.acceptance_rate);
  }
  agg.raw_rejection_rate = fraction(raw_rej, tested);
  agg.raw_rejection_rate_01 = fraction(raw_rej01, tested);
  agg.transformed_rejection_rate = fraction(tr_rej, tested);
  agg.trim_removed_circular = moments(trim_c);
  agg.trim_removed_elliptical = moments(trim_e);
  agg.acceptance_rate = moments(accept);
  return agg;
}

ReplicationReport run_design(const ExperimentDesign& design) {
  design.validate();
  ReplicationReport report{design, {}, {}};
  report.records.resize(design.replications);
  parallel_for(design.replications, design.threads,
               [&](std::size_t r) { report.records[r] = run_replication(design, r); });
  report.aggregate = aggregate(design, report.records);
  return report;
}

// ---------------------------------------------------------------------------

void GofWorkflowConfig::validate() const {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "workflow: n must be at least 1");
  if (replications < 1) throw Error(ErrorKind::kInvalidArgument, "workflow: replications must be >= 1");
  if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) {
    throw Error(ErrorKind::kInvalidArgument, "workflow: kappa0 must be positive");
  }
  if (!(contamination >= 0.0 && contamination < 0.5)) {
    throw Error(ErrorKind::kInvalidArgument, "workflow: contamination outside [0, 0.5)");
  }
  if (!(trim_tau > 0.0 && trim_tau < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "workflow: trim_tau outside (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::kInvalidArgument, "workflow: alpha outside (0, 1)");
  if (histogram_bins < 1) throw Error(ErrorKind::kInvalidArgument, "workflow: histogram_bins must be >= 1");
}

DirectionalSample contaminated_vmf_sample(std::size_t n, double kappa0, double contamination,
                                          RandomStream& rng) {
  if (!(contamination >= 0.0 && contamination < 0.5)) {
    throw Error(ErrorKind::kInvalidArgument, "contamination outside [0, 0.5)");
  }
  const auto outliers = static_cast<std::size_t>(std::llround(contamination * static_cast<double>(n)));
  const UnitVector pole = UnitVector::basis(3, 2);
  DirectionalSample s = vmf_sample(VmfParams(pole, kappa0), n - outliers, rng);
  s.reserve(n);
  for (std::size_t i = 0; i < outliers; ++i) {
    // Area-uniform on theta in [pi/3, pi/2]: cos(theta) uniform on [0, 1/2].
    const double t = 0.5 * rng.uniform();
    const double phi = kTwoPi * rng.uniform();
    const double r = std::sqrt(1.0 - t * t);
    s.push_back(UnitVector::normalized(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), t)));
  }
  s.set_source("contaminated vMF");
  return s;
}

GofWorkflowReport run_gof_workflow(const GofWorkflowConfig& config) {
  config.validate();
  const UnitVector pole = UnitVector::basis(3, 2);
  const ProjectionLaw law0 = ProjectionLaw::von_mises_fisher(3, config.kappa0);
  GofWorkflowReport report;
  report.config = config;
  report.records.resize(config.replications);
  std::vector<std::vector<double>> tails_pre(config.replications);
  std::vector<std::vector<double>> tails_post(config.replications);

  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    GofRecord& rec = report.records[r];
    rec.index = r;
    rec.seed = derive_seed(config.base_seed, r);
    RandomStream rng(rec.seed);
    const DirectionalSample sample =
        contaminated_vmf_sample(config.n, config.kappa0, config.contamination, rng);
    rec.contaminated = static_cast<std::size_t>(
        std::llround(config.contamination * static_cast<double>(config.n)));
    const TrimResult trimmed = trim(sample, circular_quantile(sample, pole, config.trim_tau));
    rec.trimmed = trimmed.removed.size();
    rec.gof_pre = gof_quartile_test(sample, pole, law0);
    rec.gof_post = gof_quartile_test(trimmed.kept, pole, law0);
    rec.tail_pre = exp_tail_check(sample, pole, config.kappa0);
    rec.tail_post = exp_tail_check(trimmed.kept, pole, config.kappa0);
    for (const auto& x : sample) tails_pre[r].push_back(1.0 - x.dot(pole));
    for (const auto& x : trimmed.kept) tails_post[r].push_back(1.0 - x.dot(pole));
  });

  const std::size_t bins = config.histogram_bins;
  auto bin_into = [bins](std::vector<std::size_t>& h, double v) {
    if (v > 1.0) {
      ++h[bins];
      return;
    }
    const auto b = static_cast<std::size_t>(std::floor(std::max(v, 0.0) * static_cast<double>(bins)));
    ++h[std::min(b, bins - 1)];
  };
  report.tail_histogram_pre.assign(bins + 1, 0);
  report.tail_histogram_post.assign(bins + 1, 0);
  std::size_t pre_rej = 0, post_rej = 0;
  std::vector<double> trimmed, d_pre, d_post;
  for (std::size_t r = 0; r < config.replications; ++r) {
    const GofRecord& rec = report.records[r];
    if (rec.gof_pre.p_value < config.alpha) ++pre_rej;
    if (rec.gof_post.p_value < config.alpha) ++post_rej;
    trimmed.push_back(static_cast<double>(rec.trimmed));
    d_pre.push_back(rec.tail_pre.statistic);
    d_post.push_back(rec.tail_post.statistic);
    for (double v : tails_pre[r]) bin_into(report.tail_histogram_pre, v);
    for (double v : tails_post[r]) bin_into(report.tail_histogram_post, v);
  }
  report.pre_rejection_rate = fraction(pre_rej, config.replications);
  report.post_rejection_rate = fraction(post_rej, config.replications);
  report.trimmed = moments(trimmed);
  report.tail_distance_pre = moments(d_pre);
  report.tail_distance_post = moments(d_post);
  return report;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string trim_ws(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::kInvalidArgument, "config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim_ws(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, "not a number");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string t = trim_ws(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    bad_value(key, "not a non-negative integer");
  }
  return v;
}

// Uniform view over JSON objects and key = value files (whose values are
// kept as strings).
class ConfigReader {
 public:
  explicit ConfigReader(json obj) : obj_(std::move(obj)) {}

  bool has(const std::string& key) const { return obj_.contains(key); }

  std::string text(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) bad_value(key, "expected a string");
    return trim_ws(v.get<std::string>());
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_double(key, v.get<std::string>());
    bad_value(key, "expected a number");
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = get(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) bad_value(key, "must not be negative");
    if (v.is_string()) return parse_u64(key, v.get<std::string>());
    bad_value(key, "expected a non-negative integer");
  }

  std::vector<double> list(const std::string& key) {
    const json& v = get(key);
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) bad_value(key, "expected numbers");
        out.push_back(e.get<double>());
      }
    } else if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    } else if (v.is_number()) {
      out.push_back(v.get<double>());
    } else {
      bad_value(key, "expected a list of numbers");
    }
    if (out.empty()) bad_value(key, "empty list");
    return out;
  }

  void reject_unused() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!used_.contains(k)) throw Error(ErrorKind::kInvalidArgument, "unknown config key '" + k + "'");
    }
  }

 private:
  const json& get(const std::string& key) {
    used_.insert(key);
    return obj_.at(key);
  }

  json obj_;
  std::set<std::string> used_;
};

json parse_key_values(std::string_view text) {
  json obj = json::object();
  std::size_t line_no = 0;
  std::stringstream ss{std::string(text)};
  std::string line;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim_ws(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim_ws(std::string_view(t).substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "config line " + std::to_string(line_no) + ": empty key");
    }
    if (obj.contains(key)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    obj[key] = trim_ws(std::string_view(t).substr(eq + 1));
  }
  return obj;
}

UnitVector parse_direction(ConfigReader& r, const std::string& key) {
  const std::vector<double> v = r.list(key);
  if (v.size() < 2) bad_value(key, "direction needs at least two coordinates");
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  if (!(x.norm() > 0.0) || !x.allFinite()) bad_value(key, "direction must be nonzero");
  return UnitVector::normalized(x);
}

std::size_t parse_count(ConfigReader& r, const std::string& key) {
  return static_cast<std::size_t>(r.unsigned_integer(key));
}

}  // namespace

ReplicateConfig parse_replicate_config(std::string_view text) {
  const std::string body = trim_ws(text);
  json obj;
  if (!body.empty() && body.front() == '{') {
    try {
      obj = json::parse(body);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kInvalidArgument, std::string("config JSON: ") + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorKind::kInvalidArgument, "config JSON must be an object");
  } else {
    obj = parse_key_values(text);
  }
  ConfigReader r(std::move(obj));

  const std::string mode = r.has("mode") ? r.text("mode") : "design";
  if (mode == "gof") {
    GofWorkflowConfig c;
    if (r.has("n")) c.n = parse_count(r, "n");
    if (r.has("kappa0")) c.kappa0 = r.number("kappa0");
    if (r.has("contamination")) c.contamination = r.number("contamination");
    if (r.has("trim_tau")) c.trim_tau = r.number("trim_tau");
    if (r.has("replications")) c.replications = parse_count(r, "replications");
    if (r.has("base_seed")) c.base_seed = r.unsigned_integer("base_seed");
    if (r.has("alpha")) c.alpha = r.number("alpha");
    if (r.has("histogram_bins")) c.histogram_bins = parse_count(r, "histogram_bins");
    if (r.has("threads")) c.threads = static_cast<unsigned>(r.unsigned_integer("threads"));
    r.reject_unused();
    c.validate();
    return c;
  }
  if (mode != "design") bad_value("mode", "expected 'design' or 'gof'");

  ExperimentDesign d;
  if (r.has("design")) {
    const std::uint64_t l = r.unsigned_integer("design");
    if (l < 1 || l > 4) bad_value("design", "Kent designs are numbered 1 to 4");
    d = kent_design(static_cast<int>(l));
  } else if (!r.has("distribution")) {
    throw Error(ErrorKind::kInvalidArgument, "config needs 'design' or 'distribution'");
  }
  if (r.has("distribution")) {
    const std::string family = r.text("distribution");
    const UnitVector mu = r.has("mu") ? parse_direction(r, "mu") : UnitVector::basis(3, 2);
    if (!r.has("kappa")) bad_value("kappa", "required with 'distribution'");
    const double kappa = r.number("kappa");
    if (family == "kent") {
      if (!r.has("beta")) bad_value("beta", "required for the Kent distribution");
      const double beta = r.number("beta");
      const UnitVector axis =
          r.has("major_axis") ? parse_direction(r, "major_axis") : UnitVector::basis(3, 0);
      if (mu.dim() != 3 || axis.dim() != 3) bad_value("mu", "Kent directions are 3-dimensional");
      d.distribution = KentParams::with_axes(mu, axis.coords(), kappa, beta);
    } else if (family == "vmf") {
      d.distribution = VmfParams(mu, kappa);
    } else {
      bad_value("distribution", "expected 'kent' or 'vmf'");
    }
    if (!r.has("id")) d.id = family;
  }
  if (r.has("id")) d.id = r.text("id");
  if (r.has("n")) d.n = parse_count(r, "n");
  if (r.has("replications")) d.replications = parse_count(r, "replications");
  if (r.has("base_seed")) d.base_seed = r.unsigned_integer("base_seed");
  if (r.has("taus")) d.taus = r.list("taus");
  if (r.has("trim_tau")) d.trim_tau = r.number("trim_tau");
  if (r.has("alpha")) d.alpha = r.number("alpha");
  if (r.has("histogram_bins")) d.histogram_bins = parse_count(r, "histogram_bins");
  if (r.has("threads")) d.threads = static_cast<unsigned>(r.unsigned_integer("threads"));
  r.reject_unused();
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string tau_label(double tau) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", tau);
  return buf;
}

json moments_json(const Moments& m) { return json{{"mean", m.mean}, {"sd", m.sd}}; }

json report_json(const TestReport& r) {
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  return json{{"method", std::string(to_string(r.method))},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"n", r.n},
              {"approximate", r.approximate},
              {"details", details},
              {"warnings", r.warnings}};
}

json distribution_json(const std::variant<KentParams, VmfParams>& dist) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, KentParams>) {
          json shape = json::array();
          for (int i = 0; i < 3; ++i) {
            shape.push_back({p.shape()(i, 0), p.shape()(i, 1), p.shape()(i, 2)});
          }
          return json{{"family", "kent"},
                      {"mu", to_vector(p.mu().coords())},
                      {"kappa", p.kappa()},
                      {"shape", shape}};
        } else {
          return json{{"family", "vmf"}, {"mu", to_vector(p.mu.coords())}, {"kappa", p.kappa}};
        }
      },
      dist);
}

json watson_json(const std::optional<WatsonResult>& w) {
  if (!w) return nullptr;
  return json{{"statistic", w->statistic}, {"p_value", w->p_value}};
}

}  // namespace

std::string to_json(const ReplicationReport& report) {
  const ExperimentDesign& d = report.design;
  json design{{"id", d.id},
              {"distribution", distribution_json(d.distribution)},
              {"n", d.n},
              {"replications", d.replications},
              {"base_seed", d.base_seed},
              {"seed_derivation", "splitmix64(base_seed xor replication_index)"},
              {"taus", d.taus},
              {"trim_tau", d.trim_tau},
              {"alpha", d.alpha},
              {"histogram_bins", d.histogram_bins}};

  const ReplicationAggregate& a = report.aggregate;
  json quantiles = json::array();
  for (const auto& q : a.quantiles) {
    quantiles.push_back(json{{"tau", q.tau},
                             {"c", moments_json(q.c)},
                             {"c_g", moments_json(q.c_g)},
                             {"minor", moments_json(q.minor)},
                             {"major", moments_json(q.major)},
                             {"minor_minus_major", moments_json(q.minor_minus_major)},
                             {"sandwich_fraction", q.sandwich_fraction}});
  }
  json agg{{"quantiles", quantiles},
           {"watson_raw_rejection_rate", a.raw_rejection_rate},
           {"watson_raw_rejection_rate_01", a.raw_rejection_rate_01},
           {"watson_transformed_rejection_rate", a.transformed_rejection_rate},
           {"sandwich_fraction", a.sandwich_fraction},
           {"trim_removed_circular", moments_json(a.trim_removed_circular)},
           {"trim_removed_elliptical", moments_json(a.trim_removed_elliptical)},
           {"acceptance_rate", moments_json(a.acceptance_rate)},
           {"raw_longitude_histogram", a.raw_longitude_histogram},
           {"transformed_longitude_histogram", a.transformed_longitude_histogram}};

  json records = json::array();
  for (const auto& r : report.records) {
    json qs = json::array();
    for (const auto& q : r.quantiles) {
      qs.push_back(json{{"tau", q.tau}, {"c", q.c}, {"c_g", q.c_g}, {"minor", q.minor},
                        {"major", q.major}});
    }
    records.push_back(json{{"index", r.index},
                           {"seed", r.seed},
                           {"mu_hat", to_vector(r.mu_hat)},
                           {"median_iterations", r.median_iterations},
                           {"tangent_eigenvalues", to_vector(r.tangent_eigenvalues)},
                           {"quantiles", qs},
                           {"watson_raw", watson_json(r.watson_raw)},
                           {"watson_transformed", watson_json(r.watson_transformed)},
                           {"pole_points", r.pole_points},
                           {"trim_removed_circular", r.trim_removed_circular},
                           {"trim_removed_elliptical", r.trim_removed_elliptical},
                           {"acceptance_rate", r.acceptance_rate}});
  }
  json doc{{"kind", "replication_report"}, {"design", design}, {"aggregate", agg},
           {"records", records}};
  return doc.dump(2) + "\n";
}

std::string to_csv(const ReplicationReport& report) {
  const ExperimentDesign& d = report.design;
  const int dim = std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, KentParams>) {
          return 3;
        } else {
          return p.mu.dim();
        }
      },
      d.distribution);
  std::string out = "index,seed";
  for (int k = 0; k < dim; ++k) out += ",mu_hat_" + std::to_string(k + 1);
  for (double tau : d.taus) {
    const std::string t = tau_label(tau);
    out += ",c_" + t + ",c_g_" + t + ",minor_" + t + ",major_" + t;
  }
  out += ",watson_raw_u2,watson_raw_p,watson_transformed_u2,watson_transformed_p";
  out += ",trim_removed_circular,trim_removed_elliptical,acceptance_rate\n";
  auto opt = [](const std::optional<WatsonResult>& w, bool p) {
    return w ? g17(p ? w->p_value : w->statistic) : std::string();
  };
  for (const auto& r : report.records) {
    out += std::to_string(r.index) + "," + std::to_string(r.seed);
    for (int k = 0; k < dim; ++k) out += "," + g17(r.mu_hat[k]);
    for (const auto& q : r.quantiles) {
      out += "," + g17(q.c) + "," + g17(q.c_g) + "," + g17(q.minor) + "," + g17(q.major);
    }
    out += "," + opt(r.watson_raw, false) + "," + opt(r.watson_raw, true);
    out += "," + opt(r.watson_transformed, false) + "," + opt(r.watson_transformed, true);
    out += "," + std::to_string(r.trim_removed_circular) + "," +
           std::to_string(r.trim_removed_elliptical) + "," + g17(r.acceptance_rate) + "\n";
  }
  return out;
}

std::string to_json(const GofWorkflowReport& report) {
  const GofWorkflowConfig& c = report.config;
  json config{{"n", c.n},
              {"kappa0", c.kappa0},
              {"contamination", c.contamination},
              {"trim_tau", c.trim_tau},
              {"replications", c.replications},
              {"base_seed", c.base_seed},
              {"seed_derivation", "splitmix64(base_seed xor replication_index)"},
              {"alpha", c.alpha},
              {"histogram_bins", c.histogram_bins},
              {"contamination_model", "cos(theta) uniform on [0, 0.5], uniform longitude"}};
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back(json{{"index", r.index},
                           {"seed", r.seed},
                           {"contaminated", r.contaminated},
                           {"trimmed", r.trimmed},
                           {"gof_pre", report_json(r.gof_pre)},
                           {"gof_post", report_json(r.gof_post)},
                           {"tail_pre", report_json(r.tail_pre)},
                           {"tail_post", report_json(r.tail_post)}});
  }
  json agg{{"gof_pre_rejection_rate", report.pre_rejection_rate},
           {"gof_post_rejection_rate", report.post_rejection_rate},
           {"trimmed", moments_json(report.trimmed)},
           {"tail_distance_pre", moments_json(report.tail_distance_pre)},
           {"tail_distance_post", moments_json(report.tail_distance_post)},
           {"tail_histogram_pre", report.tail_histogram_pre},
           {"tail_histogram_post", report.tail_histogram_post}};
  json doc{{"kind", "gof_workflow_report"}, {"config", config}, {"aggregate", agg},
           {"records", records}};
  return doc.dump(2) + "\n";
}

std::string to_csv(const GofWorkflowReport& report) {
  std::string out =
      "index,seed,contaminated,trimmed,gof_pre_q,gof_pre_p,gof_post_q,gof_post_p,"
      "tail_pre_d,tail_pre_p,tail_post_d,tail_post_p\n";
  for (const auto& r : report.records) {
    out += std::to_string(r.index) + "," + std::to_string(r.seed) + "," +
           std::to_string(r.contaminated) + "," + std::to_string(r.trimmed) + "," +
           g17(r.gof_pre.statistic) + "," + g17(r.gof_pre.p_value) + "," +
           g17(r.gof_post.statistic) + "," + g17(r.gof_post.p_value) + "," +
           g17(r.tail_pre.statistic) + "," + g17(r.tail_pre.p_value) + "," +
           g17(r.tail_post.statistic) + "," + g17(r.tail_post.p_value) + "\n";
  }
  return out;
}

}  // namespace dirquant
