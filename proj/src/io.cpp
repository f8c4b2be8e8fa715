#include "charpath/io.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>
#include "json.hpp"

#include "charpath/errors.hpp"

namespace charpath {

namespace {

nlohmann::json time_json(const TimePoint& t) {
  if (t.exact) return fmt::format("{}/{}", t.exact->num, t.exact->den);
  return t.value;
}

}  // namespace

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // drop negative zero
  return fmt::format("{:.17g}", x);
}

std::string to_string(Parity parity) { return parity == Parity::odd ? "odd" : "even"; }

void write_path_csv(std::ostream& out, std::span<const double> t, std::span<const cplx> values) {
  if (t.size() != values.size()) throw GridMismatch("time and value arrays differ in length");
  out << "t,re,im\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    out << format_real(t[i]) << ',' << format_real(values[i].real()) << ',' << format_real(values[i].imag()) << '\n';
}

void write_path_svg(std::ostream& out, std::span<const cplx> values) {
  if (values.empty()) throw InvalidArgument("cannot draw an empty path");
  double xmin = values[0].real(), xmax = xmin;
  double ymin = -values[0].imag(), ymax = ymin;
  for (const auto& v : values) {
    xmin = std::min(xmin, v.real());
    xmax = std::max(xmax, v.real());
    ymin = std::min(ymin, -v.imag());
    ymax = std::max(ymax, -v.imag());
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  if (span == 0.0) span = 1.0;
  const double margin = 0.05 * span;
  const double w = (xmax - xmin) + 2 * margin;
  const double h = (ymax - ymin) + 2 * margin;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
                     format_real(xmin - margin), format_real(ymin - margin), format_real(w), format_real(h));
  out << fmt::format("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"{}\" points=\"",
                     format_real(0.005 * span));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << format_real(values[i].real()) << ',' << format_real(-values[i].imag());
  }
  out << "\"/>\n</svg>\n";
}

void write_tail_csv(std::ostream& out, const TailCurve& curve) {
  out << "tau,prob,stderr\n";
  for (std::size_t i = 0; i < curve.taus.size(); ++i)
    out << format_real(curve.taus[i]) << ',' << format_real(curve.probs[i]) << ',' << format_real(curve.stderrs[i])
        << '\n';
}

void write_increment_csv(std::ostream& out, const IncrementReport& report) {
  out << "s,t,moment4\n";
  for (std::size_t i = 0; i < report.pairs.size(); ++i)
    out << format_real(report.pairs[i].first) << ',' << format_real(report.pairs[i].second) << ','
        << format_real(report.fourth_moments[i]) << '\n';
}

std::string increment_json(const IncrementReport& report) {
  nlohmann::json j;
  j["q"] = report.q;
  j["slope"] = report.slope;
  j["pairs"] = report.pairs.size();
  return j.dump(2);
}

std::string moment_json(const MomentSpec& spec, const MomentResult& result) {
  nlohmann::ordered_json j;
  if (result.q) j["q"] = *result.q;
  j["k"] = spec.k();
  auto ts = nlohmann::json::array();
  for (const auto& t : spec.t) ts.push_back(time_json(t));
  j["t"] = ts;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["parity"] = to_string(spec.parity);
  j["method"] = to_string(result.method);
  j["re"] = result.value.real();
  j["im"] = result.value.imag();
  j["error_estimate"] = result.error_estimate;
  if (result.truncation)
    j["truncation"] = *result.truncation;
  else
    j["truncation"] = nullptr;
  return j.dump(2);
}

std::string ensemble_manifest(const SeriesSpec& spec, std::uint64_t seed, std::size_t count) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  auto streams = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) streams.push_back(i);
  j["streams"] = streams;
  j["parity"] = to_string(spec.form);
  nlohmann::ordered_json trunc;
  trunc["kind"] = spec.truncation.kind == Truncation::Kind::symmetric ? "symmetric" : "smooth";
  trunc["terms"] = spec.truncation.terms;
  if (spec.truncation.kind == Truncation::Kind::smooth) trunc["smooth_bound"] = spec.truncation.smooth_bound;
  j["truncation"] = trunc;
  nlohmann::ordered_json grid;
  grid["kind"] = spec.grid.kind() == GridKind::uniform ? "uniform"
                 : spec.grid.kind() == GridKind::vertex ? "vertex"
                                                        : "points";
  grid["size"] = spec.grid.size();
  j["grid"] = grid;
  j["mixer-id"] = kMixerId;
  return j.dump(2);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << contents;
    if (!f) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace charpath
