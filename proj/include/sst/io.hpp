#pragma once

// Plain-text file formats: landmark files, dataset manifests, PGA model
// files, blade definitions, wireframes (section files or OBJ), CSV and a
// minimal SVG line plot. Numbers are written in shortest round-trip form
// so that save/load is bit-identical. Every write goes to a temporary file
// in the target directory and is renamed into place.

#include "sst/blade.hpp"
#include "sst/error.hpp"
#include "sst/intersect.hpp"
#include "sst/shape.hpp"
#include "sst/stats.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unistd.h>
#include <variant>
#include <vector>

namespace sst {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- numbers

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

/// Splits on whitespace and commas.
inline std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double number(const std::string& tok, const std::string& where) {
  const auto v = parse_double(tok);
  if (!v || !std::isfinite(*v)) throw InputError(where + ": expected a finite number, got '" + tok + "'");
  return *v;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

inline void write_rows(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace detail

// ------------------------------------------------------------ atomic write

/// Writes `content` to a sibling temporary file, then renames it over `path`.
inline void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

// ---------------------------------------------------------- landmark files

struct LandmarkFile {
  std::string name;
  LandmarkShape shape;
};

/// Parses "x y" lines. Lines starting with '#' are comments, except the
/// directives "# closed" and "# open"; the first non-comment line may be a
/// free-text name. Without a directive or `closed` override the curve is
/// closed exactly when the first and last landmarks coincide.
inline LandmarkFile parse_landmarks(const std::string& text, const std::string& source,
                                    std::optional<bool> closed = std::nullopt) {
  LandmarkFile out;
  std::vector<Vector2> pts;
  std::optional<bool> directive;
  bool first_data = true;
  int line_no = 0;
  for (const auto& raw : detail::lines_of(text)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = detail::trim(std::string_view(line).substr(1));
      if (body == "closed") directive = true;
      if (body == "open") directive = false;
      continue;
    }
    const auto toks = detail::tokens(line);
    std::optional<double> x, y;
    if (toks.size() == 2) {
      x = parse_double(toks[0]);
      y = parse_double(toks[1]);
    }
    if (!x || !y) {
      if (first_data) {
        out.name = line;
        first_data = false;
        continue;
      }
      throw InputError(source + ":" + std::to_string(line_no) + ": expected two numbers");
    }
    first_data = false;
    pts.emplace_back(*x, *y);
  }
  MatrixN2 x(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  bool is_closed = x.rows() > 1 && x.row(0) == x.row(x.rows() - 1);
  if (directive) is_closed = *directive;
  if (closed) is_closed = *closed;
  try {
    out.shape = LandmarkShape(std::move(x), is_closed);
  } catch (const Error& e) {
    throw InputError(source + ": " + e.what());
  }
  return out;
}

inline LandmarkFile read_landmarks(const fs::path& path, std::optional<bool> closed = std::nullopt) {
  return parse_landmarks(detail::read_text(path), path.string(), closed);
}

inline std::string format_landmarks(const MatrixN2& x, bool closed, const std::string& name = {}) {
  std::ostringstream out;
  out << (closed ? "# closed\n" : "# open\n");
  if (!name.empty()) out << name << '\n';
  detail::write_rows(out, x);
  return out.str();
}

inline void write_landmarks(const fs::path& path, const LandmarkShape& shape,
                            const std::string& name = {}) {
  write_atomic(path, format_landmarks(shape.x(), shape.closed(), name));
}

// ---------------------------------------------------------------- manifest

struct ManifestEntry {
  fs::path path;
  std::string label;
  double weight = 1.0;
};

/// One "path,label[,weight]" per line; relative paths resolve against the
/// manifest's directory.
inline std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::vector<ManifestEntry> out;
  int line_no = 0;
  for (const auto& raw : detail::lines_of(detail::read_text(path))) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty()) {
      throw InputError(where + ": expected path,label[,weight]");
    }
    ManifestEntry e;
    e.path = fs::path(fields[0]).is_absolute() ? fs::path(fields[0]) : base / fields[0];
    e.label = fields[1];
    if (fields.size() == 3) {
      e.weight = detail::number(fields[2], where);
      if (!(e.weight > 0.0)) throw InputError(where + ": weight must be positive");
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw InputError(path.string() + ": manifest lists no shapes");
  return out;
}

/// Paths are written relative to the manifest directory when possible.
inline void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::ostringstream out;
  out << "# path,label,weight\n";
  for (const auto& e : entries) {
    fs::path p = e.path;
    if (p.is_absolute() == base.is_absolute()) {
      const fs::path rel = p.lexically_relative(base);
      if (!rel.empty()) p = rel;
    }
    out << p.generic_string() << ',' << e.label;
    if (e.weight != 1.0) out << ',' << format_double(e.weight);
    out << '\n';
  }
  write_atomic(path, out.str());
}

// -------------------------------------------------------------- model file

using AnyPgaModel =
    std::variant<PgaModel<GrassmannSpace>, PgaModel<SpdSpace>, PgaModel<ProductSpace>>;

struct ModelFile {
  AnyPgaModel pga;
  std::optional<MeanScale> scale;
  CoordinateDomain domain;
  bool closed = false;  // whether the training shapes were closed curves
};

namespace detail {

template <class Model>
struct space_of;
template <class Space>
struct space_of<PgaModel<Space>> {
  using type = Space;
};

inline void put_matrix(std::ostream& out, const std::string& key, const Matrix& m) {
  out << "matrix " << key << ' ' << m.rows() << ' ' << m.cols() << '\n';
  write_rows(out, m);
}

class ModelReader {
 public:
  ModelReader(std::vector<std::string> lines, std::string source)
      : lines_(std::move(lines)), source_(std::move(source)) {}

  std::vector<std::string> next() {
    while (pos_ < lines_.size()) {
      const std::string line = trim(lines_[pos_++]);
      if (line.empty() || line.front() == '#') continue;
      return tokens(line);
    }
    throw InputError(source_ + ": unexpected end of model file");
  }

  std::string where() const { return source_ + ":" + std::to_string(pos_); }

  std::vector<std::string> expect(const std::string& key, std::size_t count) {
    auto toks = next();
    if (toks.empty() || toks[0] != key || toks.size() != count + 1) {
      throw InputError(where() + ": expected '" + key + "' with " + std::to_string(count) +
                       " value(s)");
    }
    return toks;
  }

  double scalar(const std::string& key) { return number(expect(key, 1)[1], where()); }

  Eigen::Index index(const std::string& key) {
    const double v = scalar(key);
    if (v < 0 || v != std::floor(v)) throw InputError(where() + ": " + key + " must be a count");
    return static_cast<Eigen::Index>(v);
  }

  Matrix matrix(const std::string& key) {
    const auto head = expect("matrix", 3);
    if (head[1] != key) throw InputError(where() + ": expected matrix '" + key + "'");
    const double rows = number(head[2], where());
    const double cols = number(head[3], where());
    if (rows < 0 || cols < 0) throw InputError(where() + ": negative matrix size");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto row = next();
      if (static_cast<Eigen::Index>(row.size()) != m.cols()) {
        throw InputError(where() + ": matrix '" + key + "' row has wrong length");
      }
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = number(row[static_cast<std::size_t>(j)], where());
    }
    return m;
  }

 private:
  std::vector<std::string> lines_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ManifoldKind model_kind(const AnyPgaModel& m) {
  return std::visit(
      [](const auto& p) { return detail::space_of<std::decay_t<decltype(p)>>::type::kind; }, m);
}

inline std::string format_model(const ModelFile& file) {
  std::ostringstream out;
  out << "sst-model 1\n";
  std::visit(
      [&](const auto& m) {
        constexpr ManifoldKind kind = detail::space_of<std::decay_t<decltype(m)>>::type::kind;
        out << "manifold " << to_string(kind) << '\n';
        out << "n " << m.n << "\nr " << m.r << "\nsamples " << m.samples << '\n';
        out << "epsilon " << format_double(m.epsilon) << '\n';
        out << "iterations " << m.iterations << '\n';
        out << "gradient_norm " << format_double(m.gradient_norm) << '\n';
        out << "radius " << format_double(m.radius) << '\n';
        if constexpr (kind == ManifoldKind::grassmann) {
          detail::put_matrix(out, "mean", m.mean.rep());
        } else if constexpr (kind == ManifoldKind::spd) {
          detail::put_matrix(out, "mean_spd", m.mean.matrix());
        } else {
          detail::put_matrix(out, "mean", m.mean.g.rep());
          detail::put_matrix(out, "mean_spd", m.mean.p.matrix());
        }
        detail::put_matrix(out, "basis", m.basis);
        detail::put_matrix(out, "eigenvalues", m.eigenvalues.transpose());
        detail::put_matrix(out, "coords", m.coords);
      },
      file.pga);
  if (file.scale) {
    out << "mean_scale "
        << (file.scale->kind == MeanScaleKind::extrinsic_gl2 ? "extrinsic_gl2" : "intrinsic_spd")
        << '\n';
    detail::put_matrix(out, "m_bar", file.scale->m_bar);
  } else {
    out << "mean_scale none\n";
  }
  detail::put_matrix(out, "domain_lo", file.domain.lo.transpose());
  detail::put_matrix(out, "domain_hi", file.domain.hi.transpose());
  out << "domain_radius " << format_double(file.domain.radius) << '\n';
  out << "closed " << (file.closed ? 1 : 0) << '\n';
  return out.str();
}

inline ModelFile parse_model(const std::string& text, const std::string& source) {
  detail::ModelReader rd(detail::lines_of(text), source);
  const auto magic = rd.expect("sst-model", 1);
  if (magic[1] != "1") throw InputError(source + ": unsupported model version " + magic[1]);
  const std::string kind = rd.expect("manifold", 1)[1];

  auto fill = [&](auto& m) {
    m.n = rd.index("n");
    m.r = rd.index("r");
    m.samples = rd.index("samples");
    m.epsilon = rd.scalar("epsilon");
    m.iterations = static_cast<int>(rd.index("iterations"));
    m.gradient_norm = rd.scalar("gradient_norm");
    m.radius = rd.scalar("radius");
  };
  auto grass = [&](const Matrix& rep) {
    try {
      return GrassmannPoint::from_orthonormal(rep);
    } catch (const Error& e) {
      throw InputError(source + ": " + e.what());
    }
  };
  auto spd = [&](const Matrix& p) {
    if (p.rows() != 2 || p.cols() != 2) throw InputError(source + ": mean_spd must be 2 x 2");
    try {
      return SpdMatrix(p);
    } catch (const Error& e) {
      throw InputError(source + ": " + e.what());
    }
  };
  auto finish = [&](auto& m) {
    m.basis = rd.matrix("basis");
    const Matrix ev = rd.matrix("eigenvalues");
    m.eigenvalues = ev.transpose();
    m.coords = rd.matrix("coords");
    if (m.basis.cols() != m.r || m.eigenvalues.size() != m.r || m.coords.rows() != m.r ||
        m.coords.cols() != m.samples) {
      throw InputError(source + ": model block sizes disagree with r and samples");
    }
  };

  ModelFile file;
  if (kind == "grassmann") {
    PgaModel<GrassmannSpace> m;
    fill(m);
    m.mean = grass(rd.matrix("mean"));
    finish(m);
    if (m.basis.rows() != 2 * m.n || m.mean.n() != m.n) throw InputError(source + ": size mismatch");
    file.pga = std::move(m);
  } else if (kind == "spd") {
    PgaModel<SpdSpace> m;
    fill(m);
    m.mean = spd(rd.matrix("mean_spd"));
    finish(m);
    if (m.basis.rows() != 3) throw InputError(source + ": size mismatch");
    file.pga = std::move(m);
  } else if (kind == "product") {
    PgaModel<ProductSpace> m;
    fill(m);
    m.mean.g = grass(rd.matrix("mean"));
    m.mean.p = spd(rd.matrix("mean_spd"));
    finish(m);
    if (m.basis.rows() != 2 * m.n + 3 || m.mean.g.n() != m.n) {
      throw InputError(source + ": size mismatch");
    }
    file.pga = std::move(m);
  } else {
    throw InputError(source + ": unknown manifold '" + kind + "'");
  }

  const std::string scale = rd.expect("mean_scale", 1)[1];
  if (scale != "none") {
    MeanScale ms;
    if (scale == "extrinsic_gl2") {
      ms.kind = MeanScaleKind::extrinsic_gl2;
    } else if (scale == "intrinsic_spd") {
      ms.kind = MeanScaleKind::intrinsic_spd;
    } else {
      throw InputError(source + ": unknown mean scale '" + scale + "'");
    }
    const Matrix m = rd.matrix("m_bar");
    if (m.rows() != 2 || m.cols() != 2) throw InputError(source + ": m_bar must be 2 x 2");
    ms.m_bar = m;
    file.scale = ms;
  }
  file.domain.lo = rd.matrix("domain_lo").transpose();
  file.domain.hi = rd.matrix("domain_hi").transpose();
  file.domain.radius = rd.scalar("domain_radius");
  const Eigen::Index closed = rd.index("closed");
  if (closed > 1) throw InputError(source + ": closed must be 0 or 1");
  file.closed = closed == 1;
  return file;
}

inline void save_model(const fs::path& path, const ModelFile& file) {
  write_atomic(path, format_model(file));
}

inline ModelFile load_model(const fs::path& path) {
  return parse_model(detail::read_text(path), path.string());
}

// -------------------------------------------------------- blade definition

/// Keywords, one per line ('#' comments):
///   span_length L
///   station eta path [M11 M12 M21 M22 b1 b2]
///   bend eta x y z
/// Station paths resolve against the definition file's directory.
inline BladeDefinition read_blade_definition(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  BladeDefinition def;
  int line_no = 0;
  for (const auto& raw : detail::lines_of(detail::read_text(path))) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto toks = detail::tokens(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (toks[0] == "span_length" && toks.size() == 2) {
      def.span_length = detail::number(toks[1], where);
    } else if (toks[0] == "station" && (toks.size() == 3 || toks.size() == 9)) {
      BladeStation st;
      st.eta = detail::number(toks[1], where);
      const fs::path p = fs::path(toks[2]).is_absolute() ? fs::path(toks[2]) : base / toks[2];
      st.shape = read_landmarks(p).shape;
      if (toks.size() == 9) {
        double v[6];
        for (int i = 0; i < 6; ++i) v[i] = detail::number(toks[static_cast<std::size_t>(3 + i)], where);
        Matrix2 m;
        m << v[0], v[1], v[2], v[3];
        try {
          st.placement = AffineFactor(m, Vector2(v[4], v[5]));
        } catch (const Error& e) {
          throw InputError(where + ": " + e.what());
        }
      }
      def.stations.push_back(std::move(st));
    } else if (toks[0] == "bend" && toks.size() == 5) {
      def.bend.eta.push_back(detail::number(toks[1], where));
      def.bend.points.emplace_back(detail::number(toks[2], where), detail::number(toks[3], where),
                                   detail::number(toks[4], where));
    } else {
      throw InputError(where + ": unrecognized line '" + line + "'");
    }
  }
  if (def.stations.empty()) throw InputError(path.string() + ": no stations");
  return def;
}

// --------------------------------------------------------------- wireframe

inline std::string format_section(const Section3& s) {
  std::ostringstream out;
  out << "# eta " << format_double(s.eta) << '\n';
  detail::write_rows(out, s.x);
  return out.str();
}

/// Writes section_XXXX.dat files ("x y z" rows) and index.csv (file,eta).
inline void write_wireframe_sections(const fs::path& dir, const Wireframe& wf) {
  std::ostringstream index;
  index << "file,eta\n";
  for (std::size_t k = 0; k < wf.sections.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "section_%04zu.dat", k);
    write_atomic(dir / name, format_section(wf.sections[k]));
    index << name << ',' << format_double(wf.sections[k].eta) << '\n';
  }
  write_atomic(dir / "index.csv", index.str());
}

/// Lofted surface: vertices section by section, quads between adjacent
/// sections. Closed sections wrap around unless the endpoint is repeated.
inline std::string format_obj(const Wireframe& wf) {
  std::ostringstream out;
  out << "# sections " << wf.sections.size() << '\n';
  if (wf.sections.empty()) return out.str();
  const Eigen::Index n = wf.sections.front().x.rows();
  for (const auto& s : wf.sections) {
    if (s.x.rows() != n) throw ContractError("wireframe sections differ in landmark count");
    for (Eigen::Index i = 0; i < n; ++i) {
      out << "v " << format_double(s.x(i, 0)) << ' ' << format_double(s.x(i, 1)) << ' '
          << format_double(s.x(i, 2)) << '\n';
    }
  }
  const auto& first = wf.sections.front().x;
  const bool repeats =
      n > 1 && nearly_equal_rows(first, first.row(0).transpose(), first.row(n - 1).transpose());
  const Eigen::Index edges = (wf.closed && !repeats) ? n : n - 1;
  for (std::size_t k = 0; k + 1 < wf.sections.size(); ++k) {
    const auto a = static_cast<Eigen::Index>(k) * n + 1;
    const Eigen::Index b = a + n;
    for (Eigen::Index i = 0; i < edges; ++i) {
      const Eigen::Index j = (i + 1) % n;
      out << "f " << a + i << ' ' << a + j << ' ' << b + j << ' ' << b + i << '\n';
    }
  }
  return out.str();
}

inline void write_obj(const fs::path& path, const Wireframe& wf) { write_atomic(path, format_obj(wf)); }

// --------------------------------------------------------------------- CSV

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
    columns_ = header.size();
  }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw ContractError("CSV row has wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    row(fields);
  }

  std::string str() const { return out_.str(); }
  void save(const fs::path& path) const { write_atomic(path, str()); }

 private:
  std::ostringstream out_;
  std::size_t columns_ = 0;
};

// --------------------------------------------------------------------- SVG

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

/// Standalone SVG with log10 axes. Nonpositive values are skipped.
inline std::string svg_loglog(const std::vector<PlotSeries>& series, const std::string& title,
                              const std::string& xlabel, const std::string& ylabel) {
  constexpr double w = 640, h = 480, ml = 80, mr = 160, mt = 40, mb = 60;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  x0 = std::floor(x0), x1 = std::ceil(x1), y0 = std::floor(y0), y1 = std::ceil(y1);
  if (x1 == x0) x1 += 1;
  if (y1 == y0) y1 += 1;
  auto px = [&](double lx) { return ml + (lx - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double ly) { return h - mb - (ly - y0) / (y1 - y0) * (h - mt - mb); };
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  };
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << esc(title)
      << "</text>\n";
  out << "<g stroke=\"#ccc\" font-size=\"11\">\n";
  for (double d = x0; d <= x1; d += 1) {
    out << "<line x1=\"" << px(d) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(d) << "\" y2=\""
        << py(y1) << "\"/>\n<text x=\"" << px(d) << "\" y=\"" << h - mb + 18
        << "\" text-anchor=\"middle\" stroke=\"none\">1e" << d << "</text>\n";
  }
  for (double d = y0; d <= y1; d += 1) {
    out << "<line x1=\"" << px(x0) << "\" y1=\"" << py(d) << "\" x2=\"" << px(x1) << "\" y2=\""
        << py(d) << "\"/>\n<text x=\"" << ml - 8 << "\" y=\"" << py(d) + 4
        << "\" text-anchor=\"end\" stroke=\"none\">1e" << d << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 16 << "\" text-anchor=\"middle\">"
      << esc(xlabel) << "</text>\n";
  out << "<text transform=\"translate(20," << (mt + h - mb) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << esc(ylabel) << "</text>\n";
  double ly = mt + 10;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      out << px(std::log10(s.x[i])) << ',' << py(std::log10(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 30 << "\" y2=\""
        << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n<text x=\"" << w - mr + 36
        << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << esc(s.label) << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sst
