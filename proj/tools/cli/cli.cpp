#include "cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cli/dataset.hpp"
#include "dirquant/distributions.hpp"
#include "dirquant/error.hpp"
#include "dirquant/estimation.hpp"
#include "dirquant/hypothesis_tests.hpp"
#include "dirquant/quantile_depth.hpp"
#include "dirquant/random.hpp"
#include "dirquant/replication.hpp"

namespace dirquant::cli {

namespace {

using nlohmann::json;

// Failure of a test's own preconditions (exit code 5).
class TestPreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputFlags {
  std::string path;
  bool spherical = false;
  std::vector<double> fold;
  std::string out;
};

struct AnalyzeFlags {
  std::vector<double> taus{0.25, 0.5, 0.75};
  std::string kind = "both";
  std::size_t contour_points = 100;
  bool depth = false;
};

struct TrimFlags {
  double tau = 0.25;
  std::string kind = "circular";
  std::string kept_out;
};

struct TestFlags {
  bool watson = false;
  bool transformed = false;
  std::optional<double> gof;
  std::string dist = "vmf";
  std::vector<double> taus{0.25, 0.5, 0.75};
  std::optional<double> exptail;
  std::vector<double> mu;
};

struct SimulateFlags {
  std::string dist = "vmf";
  double kappa = 1.0;
  double beta = 0.0;
  int dim = 3;
  std::vector<double> mu;
  std::vector<double> major_axis;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::string out;
};

struct ReplicateFlags {
  std::string config;
  std::string json_out;
  std::string csv_out;
  std::optional<unsigned> threads;
};

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json vec_json(const UnitVector& v) { return vec_json(v.coords()); }

json polyline_json(const ContourPolyline& p) {
  json pts = json::array();
  for (const auto& x : p.points) pts.push_back(vec_json(x));
  return pts;
}

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

UnitVector direction_arg(const std::vector<double>& v, const char* flag) {
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  if (v.size() < 2 || !x.allFinite() || !(x.norm() > 0.0)) {
    throw InputError(std::string(flag) + " needs a nonzero vector of at least two coordinates");
  }
  return UnitVector::normalized(x);
}

DirectionalSample load(const InputFlags& in) {
  DirectionalSample s = read_dataset(in.path, DatasetOptions{in.spherical});
  if (!in.fold.empty()) {
    const UnitVector pole = direction_arg(in.fold, "--fold");
    if (pole.dim() != s.dim()) throw InputError("--fold dimension does not match the dataset");
    s = hemisphere_fold(s, pole);
  }
  return s;
}

json input_parameters(const InputFlags& in) {
  json p{{"input", in.path}, {"spherical", in.spherical}};
  p["fold"] = in.fold.empty() ? json(nullptr) : json(in.fold);
  return p;
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

void check_taus(const std::vector<double>& taus) {
  if (taus.empty()) throw InputError("--taus needs at least one level");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) throw InputError("quantile levels must lie in (0, 1)");
  }
}

json median_json(const FisherMedian& m) {
  return json{{"direction", vec_json(m.direction)},
              {"objective", m.objective},
              {"iterations", m.iterations},
              {"converged", m.converged}};
}

int cmd_median(const InputFlags& in, std::ostream& out) {
  const DirectionalSample s = load(in);
  const FisherMedian m = fisher_median(s);
  json doc{{"command", "median"}, {"parameters", input_parameters(in)}, {"n", s.size()},
           {"mu_hat", vec_json(m.direction)}, {"median", median_json(m)}};
  if (s.hemisphere_folded()) {
    const std::vector<double> p = s.projections(direction_arg(in.fold, "--fold"));
    doc["min_fold_projection"] = *std::min_element(p.begin(), p.end());
  }
  emit(doc, in.out, out);
  return kExitOk;
}

int cmd_analyze(const InputFlags& in, const AnalyzeFlags& f, std::ostream& out) {
  check_taus(f.taus);
  if (f.kind != "circular" && f.kind != "elliptical" && f.kind != "both") {
    throw InputError("--kind must be circular, elliptical or both");
  }
  const DirectionalSample s = load(in);
  const FisherMedian m = fisher_median(s);
  const UnitVector& mu = m.direction;
  const bool circular = f.kind != "elliptical";
  const bool elliptical = f.kind != "circular";
  const bool polylines = s.dim() == 3 && f.contour_points > 0;

  std::optional<MahalanobisTransform> t;
  if (elliptical) t = fit_transform(s, mu);

  json params = input_parameters(in);
  params["taus"] = f.taus;
  params["kind"] = f.kind;
  params["contour_points"] = f.contour_points;
  json doc{{"command", "analyze"}, {"parameters", params}, {"n", s.size()},
           {"mu_hat", vec_json(mu)}, {"median", median_json(m)}};

  json quantiles = json::array();
  json contours = json::array();
  json gaps = json::array();
  const std::vector<double> raw = s.projections(mu);
  std::vector<double> moved;
  if (t) moved = apply_forward(*t, s).projections(mu);
  for (double tau : f.taus) {
    json q{{"tau", tau}};
    const double c = projection_quantile(raw, tau);
    if (circular) q["c"] = c;
    if (t) {
      const double cg = projection_quantile(moved, tau);
      const SemiAxes axes = contour_semiaxes(*t, cg);
      q["c_g"] = cg;
      q["minor"] = axes.minor_c;
      q["major"] = axes.major_c;
      gaps.push_back(json{{"tau", tau}, {"minor_minus_major", axes.minor_c - axes.major_c}});
      if (polylines) {
        contours.push_back(json{{"tau", tau}, {"kind", "elliptical"}, {"level", cg},
                                {"points", polyline_json(elliptical_contour(*t, cg, f.contour_points, true))}});
      }
    }
    if (circular && polylines) {
      contours.push_back(json{{"tau", tau}, {"kind", "circular"}, {"level", c},
                              {"points", polyline_json(circular_contour(mu, c, f.contour_points, true))}});
    }
    quantiles.push_back(q);
  }
  doc["quantiles"] = quantiles;
  doc["contours"] = contours;
  if (t) {
    const Eigen::VectorXd& ev = t->tangent_eigenvalues();
    doc["transform"] = json{{"tangent_eigenvalues", vec_json(ev)},
                            {"inverse_singular_values", vec_json(t->inverse_singular_values())},
                            {"is_identity", t->is_identity()}};
    doc["ellipticity"] = json{{"eigenvalue_ratio", ev[0] / ev[ev.size() - 1]}, {"gaps", gaps}};
  }
  if (f.depth) {
    json depth = json::object();
    if (circular) {
      const ProjectionDepth pd(raw, mu);
      json a = json::array();
      for (const auto& x : s) a.push_back(pd.depth(x));
      depth["amhd"] = a;
    }
    if (t) {
      const ProjectionDepth pd(moved, mu);
      json e = json::array();
      for (double p : moved) e.push_back(pd.depth_at(p));
      depth["emhd"] = e;
    }
    doc["depth"] = depth;
  }
  emit(doc, in.out, out);
  return kExitOk;
}

int cmd_trim(const InputFlags& in, const TrimFlags& f, std::ostream& out) {
  if (!(f.tau > 0.0 && f.tau < 1.0)) throw InputError("--tau must lie in (0, 1)");
  if (f.kind != "circular" && f.kind != "elliptical") {
    throw InputError("--kind must be circular or elliptical");
  }
  const DirectionalSample s = load(in);
  const FisherMedian m = fisher_median(s);
  const QuantileSummary q = f.kind == "circular"
                                ? circular_quantile(s, m.direction, f.tau)
                                : elliptical_projection_quantile(s, fit_transform(s, m.direction), f.tau);
  const TrimResult r = trim(s, q);
  if (!f.kept_out.empty()) write_file(f.kept_out, format_dataset(r.kept));

  json params = input_parameters(in);
  params["tau"] = f.tau;
  params["kind"] = f.kind;
  params["kept_out"] = f.kept_out.empty() ? json(nullptr) : json(f.kept_out);
  json doc{{"command", "trim"}, {"parameters", params}, {"n", s.size()},
           {"mu_hat", vec_json(m.direction)}, {"level", q.c},
           {"kept_count", r.kept.size()}, {"removed_count", r.removed.size()},
           {"removed_indices", r.removed_indices}};
  emit(doc, in.out, out);
  return kExitOk;
}

template <typename Fn>
auto precondition(Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kRankDeficient:
      case ErrorKind::kConvergenceFailure:
      case ErrorKind::kDegenerateSample:
        throw;
      default:
        throw TestPreconditionError(e.what());
    }
  }
}

int cmd_test(const InputFlags& in, const TestFlags& f, std::ostream& out) {
  if (!f.watson && !f.gof && !f.exptail) throw InputError("choose at least one of --watson, --gof, --exptail");
  if (f.gof) {
    if (f.dist != "vmf") throw InputError("--dist: only vmf is supported");
    check_taus(f.taus);
  }
  const DirectionalSample s = load(in);
  const FisherMedian m = fisher_median(s);
  const UnitVector mu = f.mu.empty() ? m.direction : direction_arg(f.mu, "--mu");
  if (mu.dim() != s.dim()) throw InputError("--mu dimension does not match the dataset");

  json params = input_parameters(in);
  params["watson"] = f.watson;
  params["transformed"] = f.transformed;
  params["gof"] = f.gof ? json(*f.gof) : json(nullptr);
  params["dist"] = f.dist;
  params["taus"] = f.taus;
  params["exptail"] = f.exptail ? json(*f.exptail) : json(nullptr);
  json doc{{"command", "test"}, {"parameters", params}, {"n", s.size()},
           {"mu_hat", vec_json(m.direction)}, {"pole", vec_json(mu)}};
  json tests = json::array();

  if (f.watson) {
    const TestReport r = precondition([&] {
      if (f.transformed) {
        const MahalanobisTransform t = fit_transform(s, mu);
        return watson_u2(longitudes(apply_forward(t, s), mu));
      }
      return watson_u2(longitudes(s, mu));
    });
    json j = report_json(r);
    j["longitudes"] = f.transformed ? "transformed" : "raw";
    tests.push_back(j);
  }
  if (f.gof) {
    const double kappa0 = *f.gof;
    const TestReport r = precondition([&] {
      if (!(kappa0 >= 0.0) || !std::isfinite(kappa0)) {
        throw Error(ErrorKind::kInvalidArgument, "--gof needs kappa0 >= 0");
      }
      const ProjectionLaw law = ProjectionLaw::von_mises_fisher(s.dim(), kappa0);
      return gof_quartile_test(s, mu, law, f.taus);
    });
    json j = report_json(r);
    j["null"] = json{{"dist", f.dist}, {"kappa", kappa0}};
    tests.push_back(j);
  }
  if (f.exptail) {
    const double kappa = *f.exptail;
    tests.push_back(report_json(precondition([&] { return exp_tail_check(s, mu, kappa); })));
  }
  doc["tests"] = tests;
  emit(doc, in.out, out);
  return kExitOk;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  if (f.n < 1) throw InputError("--n must be at least 1");
  RandomStream rng(f.seed);
  DirectionalSample s(f.dim);
  std::string header;
  try {
    if (f.dist == "uniform") {
      s = uniform_sphere_sample(f.dim, f.n, rng);
      header = "uniform dim=" + std::to_string(f.dim);
    } else if (f.dist == "vmf") {
      const UnitVector mu = f.mu.empty() ? UnitVector::basis(f.dim, f.dim - 1) : direction_arg(f.mu, "--mu");
      s = vmf_sample(VmfParams(mu, f.kappa), f.n, rng);
      header = "vmf kappa=" + json(f.kappa).dump();
    } else if (f.dist == "kent") {
      const UnitVector mu = f.mu.empty() ? UnitVector::basis(3, 2) : direction_arg(f.mu, "--mu");
      const UnitVector axis =
          f.major_axis.empty() ? UnitVector::basis(3, 0) : direction_arg(f.major_axis, "--major-axis");
      if (mu.dim() != 3 || axis.dim() != 3) throw InputError("Kent directions are 3-dimensional");
      s = kent_sample(KentParams::with_axes(mu, axis.coords(), f.kappa, f.beta), f.n, rng);
      header = "kent kappa=" + json(f.kappa).dump() + " beta=" + json(f.beta).dump();
    } else {
      throw InputError("--dist must be vmf, kent or uniform");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidArgument) throw InputError(e.what());
    throw;
  }
  header += " n=" + std::to_string(f.n) + " seed=" + std::to_string(f.seed);
  const std::string text = format_dataset(s, header);
  if (f.out.empty()) {
    out << text;
  } else {
    write_file(f.out, text);
  }
  return kExitOk;
}

int cmd_replicate(const ReplicateFlags& f, std::ostream& out) {
  ReplicateConfig config = [&] {
    try {
      return parse_replicate_config(read_file(f.config));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }();
  std::string json_text, csv_text;
  if (auto* d = std::get_if<ExperimentDesign>(&config)) {
    if (f.threads) d->threads = *f.threads;
    const ReplicationReport r = run_design(*d);
    json_text = to_json(r);
    csv_text = to_csv(r);
  } else {
    auto& g = std::get<GofWorkflowConfig>(config);
    if (f.threads) g.threads = *f.threads;
    const GofWorkflowReport r = run_gof_workflow(g);
    json_text = to_json(r);
    csv_text = to_csv(r);
  }
  if (f.json_out.empty()) {
    out << json_text;
  } else {
    write_file(f.json_out, json_text);
  }
  if (!f.csv_out.empty()) write_file(f.csv_out, csv_text);
  return kExitOk;
}

void add_input(CLI::App* sub, InputFlags& in) {
  sub->add_option("input", in.path, "CSV dataset")->required();
  sub->add_flag("--spherical", in.spherical, "rows are theta,phi in radians");
  sub->add_option("--fold", in.fold, "fold axial data onto the hemisphere around x,y,z")->delimiter(',');
  sub->add_option("-o,--out", in.out, "write the JSON result here instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantiles, depth contours and tests for directional data"};
  app.name("dirquant");
  app.require_subcommand(1);

  InputFlags in;
  AnalyzeFlags af;
  TrimFlags tf;
  TestFlags xf;
  SimulateFlags sf;
  ReplicateFlags rf;

  CLI::App* median = app.add_subcommand("median", "Fisher spherical median");
  add_input(median, in);

  CLI::App* analyze = app.add_subcommand("analyze", "projection quantiles and depth contours");
  add_input(analyze, in);
  analyze->add_option("--taus", af.taus, "quantile levels")->delimiter(',');
  analyze->add_option("--kind", af.kind, "circular, elliptical or both");
  analyze->add_option("--contour-points", af.contour_points, "points per contour polyline");
  analyze->add_flag("--depth", af.depth, "emit the depth of every observation");

  CLI::App* trim_cmd = app.add_subcommand("trim", "remove points below a depth contour");
  add_input(trim_cmd, in);
  trim_cmd->add_option("--tau", tf.tau, "quantile level of the contour");
  trim_cmd->add_option("--kind", tf.kind, "circular or elliptical");
  trim_cmd->add_option("--kept-out", tf.kept_out, "write the kept rows as CSV");

  CLI::App* test = app.add_subcommand("test", "uniformity and goodness-of-fit tests");
  add_input(test, in);
  test->add_flag("--watson", xf.watson, "Watson U2 test on longitudes around the pole");
  test->add_flag("--transformed", xf.transformed, "use Mahalanobis-transformed longitudes");
  test->add_option("--gof", xf.gof, "quartile test against vMF(kappa0)");
  test->add_option("--dist", xf.dist, "null family for --gof (vmf)");
  test->add_option("--taus", xf.taus, "quantile levels for --gof")->delimiter(',');
  test->add_option("--exptail", xf.exptail, "Kolmogorov check of 1 - cos(theta) against Exp(kappa)");
  test->add_option("--mu", xf.mu, "pole x,y,z (default: the Fisher median)")->delimiter(',');

  CLI::App* simulate = app.add_subcommand("simulate", "draw a synthetic dataset");
  simulate->add_option("--dist", sf.dist, "vmf, kent or uniform");
  simulate->add_option("--kappa", sf.kappa, "concentration");
  simulate->add_option("--beta", sf.beta, "Kent ovalness");
  simulate->add_option("--dim", sf.dim, "ambient dimension (vmf, uniform)");
  simulate->add_option("--mu", sf.mu, "mean direction")->delimiter(',');
  simulate->add_option("--major-axis", sf.major_axis, "Kent major axis")->delimiter(',');
  simulate->add_option("--n", sf.n, "sample size");
  simulate->add_option("--seed", sf.seed, "random seed");
  simulate->add_option("-o,--out", sf.out, "output CSV (default stdout)");

  CLI::App* replicate = app.add_subcommand("replicate", "run a Monte Carlo study from a config file");
  replicate->add_option("config", rf.config, "key = value or JSON config")->required();
  replicate->add_option("--json", rf.json_out, "JSON report path (default stdout)");
  replicate->add_option("--csv", rf.csv_out, "per-replication CSV path");
  replicate->add_option("--threads", rf.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (median->parsed()) return cmd_median(in, out);
    if (analyze->parsed()) return cmd_analyze(in, af, out);
    if (trim_cmd->parsed()) return cmd_trim(in, tf, out);
    if (test->parsed()) return cmd_test(in, xf, out);
    if (simulate->parsed()) return cmd_simulate(sf, out);
    if (replicate->parsed()) return cmd_replicate(rf, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const TestPreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitTestPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kInvalidArgument: return kExitInput;
      case ErrorKind::kRankDeficient: return kExitRankDeficient;
      default: return kExitEstimator;
    }
  }
  return kExitInput;
}

}  // namespace dirquant::cli
