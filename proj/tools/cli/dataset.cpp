#include "cli/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace dirquant::cli {

namespace {

constexpr std::size_t kReportedLines = 10;

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_fields(std::string_view line, std::vector<double>& out) {
  out.clear();
  while (true) {
    const auto comma = line.find(',');
    const std::string_view field = strip(line.substr(0, comma));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
      return false;
    }
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    line.remove_prefix(comma + 1);
  }
}

}  // namespace

DirectionalSample parse_dataset(std::string_view text, const DatasetOptions& options,
                                const std::string& source) {
  std::vector<UnitVector> points;
  std::vector<std::string> problems;
  std::size_t bad_lines = 0;
  int dim = 0;
  std::size_t line_no = 0;
  std::vector<double> fields;
  auto complain = [&](std::size_t line, const std::string& what) {
    ++bad_lines;
    if (problems.size() < kReportedLines) problems.push_back("line " + std::to_string(line) + ": " + what);
  };

  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    const std::string_view line = strip(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!parse_fields(line, fields)) {
      complain(line_no, "expected comma-separated numbers");
      continue;
    }
    Eigen::VectorXd x;
    if (options.spherical) {
      if (fields.size() != 2) {
        complain(line_no, "expected two columns (theta, phi)");
        continue;
      }
      const double st = std::sin(fields[0]);
      x = Eigen::Vector3d(st * std::cos(fields[1]), st * std::sin(fields[1]), std::cos(fields[0]));
    } else {
      if (fields.size() < 2) {
        complain(line_no, "expected at least two coordinates");
        continue;
      }
      x = Eigen::Map<const Eigen::VectorXd>(fields.data(), static_cast<Eigen::Index>(fields.size()));
    }
    if (dim == 0) dim = static_cast<int>(x.size());
    if (x.size() != dim) {
      complain(line_no, "expected " + std::to_string(dim) + " columns");
      continue;
    }
    const double norm = x.norm();
    if (!(std::abs(norm - 1.0) <= options.norm_tolerance)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "norm %.6g is not within %g of 1", norm, options.norm_tolerance);
      complain(line_no, buf);
      continue;
    }
    points.push_back(UnitVector::normalized(x));
  }

  if (bad_lines > 0) {
    std::string msg = std::to_string(bad_lines) + " invalid row(s)";
    if (!source.empty()) msg += " in " + source;
    for (const auto& p : problems) msg += "\n  " + p;
    if (bad_lines > problems.size()) msg += "\n  ...";
    throw InputError(msg);
  }
  if (points.empty()) throw InputError("dataset has no observations" + (source.empty() ? "" : ": " + source));
  return DirectionalSample(std::move(points), source);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("write failed: " + path);
}

DirectionalSample read_dataset(const std::string& path, const DatasetOptions& options) {
  return parse_dataset(read_file(path), options, path);
}

std::string format_dataset(const DirectionalSample& sample, std::string_view header) {
  std::string out;
  if (!header.empty()) {
    out += "# ";
    out += header;
    out += "\n";
  }
  char buf[40];
  for (const UnitVector& x : sample) {
    for (int k = 0; k < x.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", x[k]);
      if (k > 0) out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace dirquant::cli
