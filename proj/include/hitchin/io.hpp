#pragma once

#include "hitchin/error.hpp"
#include "hitchin/group.hpp"
#include "hitchin/planar.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace hitchin {

using Json = nlohmann::json;

/// Representation file: {"rank": n, "generators": [[row-major entries] x 4], "meta": {...}}.
template <int N>
Json rep_to_json(const SurfaceRep<N>& rep, const Json& meta = Json::object()) {
  Json gens = Json::array();
  for (const auto& g : rep.generators()) {
    Json row = Json::array();
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) row.push_back(g(i, j));
    }
    gens.push_back(row);
  }
  return Json{{"rank", N}, {"generators", gens}, {"meta", meta}};
}

template <int N>
SurfaceRep<N> rep_from_json(const Json& j, const Tolerances& tol = default_tolerances()) {
  if (!j.contains("rank") || !j.contains("generators")) fail(ErrorCode::InvalidInput, "rep JSON lacks rank or generators");
  if (j.at("rank").get<int>() != N) fail(ErrorCode::InvalidInput, "rep JSON has rank " + j.at("rank").dump());
  const auto& gens = j.at("generators");
  if (!gens.is_array() || gens.size() != 4) fail(ErrorCode::InvalidInput, "rep JSON needs 4 generators");
  std::array<Eigen::Matrix<double, N, N>, 4> m;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& row = gens.at(k);
    if (!row.is_array() || row.size() != static_cast<std::size_t>(N * N)) {
      fail(ErrorCode::InvalidInput, "generator has the wrong number of entries");
    }
    for (int i = 0; i < N; ++i) {
      for (int c = 0; c < N; ++c) m[k](i, c) = row.at(static_cast<std::size_t>(i * N + c)).template get<double>();
    }
  }
  return SurfaceRep<N>(m, tol);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

/// 64-bit FNV-1a of a string, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// CSV text with a "# config_hash=..." comment line followed by the header.
class CsvWriter {
 public:
  CsvWriter(const std::string& config_hash, const std::vector<std::string>& header) {
    out_ << "# config_hash=" << config_hash << "\n";
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << "\n";
  }

  std::string str() const { return out_.str(); }
  void save(const std::string& path) const { write_text_file(path, str()); }

 private:
  std::ostringstream out_;
};

/// Shortest round-trip text for a double.
inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

/// Minimal SVG canvas mapping a data box onto a fixed pixel square.
class SvgCanvas {
 public:
  SvgCanvas(double xmin, double xmax, double ymin, double ymax, int size = 480)
      : xmin_(xmin), ymin_(ymin), size_(size) {
    span_ = std::max(xmax - xmin, ymax - ymin);
    if (!(span_ > 0)) span_ = 1.0;
  }

  static SvgCanvas fit(const std::vector<Polygon>& polys, int size = 480) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& p : polys) {
      for (const auto& v : p) {
        x0 = std::min(x0, v.x());
        x1 = std::max(x1, v.x());
        y0 = std::min(y0, v.y());
        y1 = std::max(y1, v.y());
      }
    }
    if (!std::isfinite(x0)) return SvgCanvas(-1, 1, -1, 1, size);
    const double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-12});
    return SvgCanvas(x0 - pad, x1 + pad, y0 - pad, y1 + pad, size);
  }

  void polyline(const Polygon& p, const std::string& color, bool closed, double width = 1.0) {
    body_ << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << width << "\" points=\"";
    for (std::size_t k = 0; k < p.size(); ++k) body_ << (k ? " " : "") << px(p[k].x()) << "," << py(p[k].y());
    body_ << "\"/>\n";
  }

  void dot(const Vec2& v, const std::string& color, double r = 3.0) {
    body_ << "<circle cx=\"" << px(v.x()) << "\" cy=\"" << py(v.y()) << "\" r=\"" << r << "\" fill=\"" << color
          << "\"/>\n";
  }

  void text(const Vec2& v, const std::string& s) {
    body_ << "<text x=\"" << px(v.x()) << "\" y=\"" << py(v.y()) << "\" font-size=\"12\">" << s << "</text>\n";
  }

  std::string str() const {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ << "\" height=\"" << size_
      << "\" viewBox=\"0 0 " << size_ << " " << size_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
    return s.str();
  }

  void save(const std::string& path) const { write_text_file(path, str()); }

 private:
  std::string px(double x) const { return rounded((x - xmin_) / span_ * size_); }
  std::string py(double y) const { return rounded(size_ - (y - ymin_) / span_ * size_); }
  static std::string rounded(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
  }

  double xmin_;
  double ymin_;
  double span_;
  int size_;
  std::ostringstream body_;
};

}  // namespace hitchin
