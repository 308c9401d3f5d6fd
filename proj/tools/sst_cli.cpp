// Command-line front end for the separable shape tensor library.

#include "sst/blade.hpp"
#include "sst/convergence.hpp"
#include "sst/cst.hpp"
#include "sst/io.hpp"
#include "sst/preprocess.hpp"
#include "sst/stats.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>

namespace {

using namespace sst;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitGuard = 4;

class GuardFailure : public Error {
 public:
  using Error::Error;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string numbered(const std::string& stem, std::size_t k, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%04zu", k);
  return stem + buf + ext;
}

Vector parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& tok : detail::split(text, ',')) values.push_back(detail::number(tok, what));
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

SplineKind spline_kind(const std::string& s) { return s == "pchip" ? SplineKind::pchip : SplineKind::cubic; }

Sampling sampling_kind(const std::string& s) {
  return s == "cosine" ? Sampling::cosine : Sampling::uniform_arclength;
}

const std::map<std::string, std::string> kSplineNames = {{"cubic", "cubic"}, {"pchip", "pchip"}};
const std::map<std::string, std::string> kSamplingNames = {{"uniform", "uniform"},
                                                           {"cosine", "cosine"}};

// ------------------------------------------------------------- preprocess

struct PreprocessArgs {
  std::string input, out, spline = "cubic", sampling = "uniform";
  Eigen::Index n = 401;
  bool check = false;
  bool force = false;
};

int run_preprocess(const PreprocessArgs& a) {
  const auto entries = read_manifest(a.input);
  PreprocessConfig cfg;
  cfg.n = a.n;
  cfg.spline = spline_kind(a.spline);
  cfg.sampling = sampling_kind(a.sampling);
  cfg.check_intersection = a.check;
  const fs::path out(a.out);
  std::vector<ManifestEntry> written;
  CsvWriter report({"file", "label", "n_in", "gauge_in", "n_out", "gauge_out", "mean_spacing_out"});
  int failures = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    try {
      const LandmarkFile in = read_landmarks(e.path);
      // A shape already at n is left alone so that preprocessing is idempotent.
      const LandmarkShape refined = (in.shape.n() == a.n && !a.force) ? in.shape : refine(in.shape, cfg);
      if (cfg.check_intersection && self_intersects(refined)) {
        throw DegeneracyError("shape self-intersects");
      }
      const std::string name = numbered(e.path.stem().string(), k, ".dat");
      write_landmarks(out / name, refined, in.name);
      written.push_back({out / name, e.label, e.weight});
      report.row({name, e.label, std::to_string(in.shape.n()), format_double(landmark_gauge(in.shape.x())),
                  std::to_string(refined.n()), format_double(landmark_gauge(refined.x())),
                  format_double(mean_segment(refined.x()))});
    } catch (const Error& err) {
      std::cerr << "error: " << e.path.string() << ": " << err.what() << '\n';
      ++failures;
    }
  }
  if (!written.empty()) {
    write_manifest(out / "manifest.csv", written);
    report.save(out / "gauges.csv");
  }
  std::cout << "refined " << written.size() << " of " << entries.size() << " shapes\n";
  return failures == 0 ? kExitOk : kExitInput;
}

// -------------------------------------------------------------------- fit

struct FitArgs {
  std::string input, out, manifold = "grassmann", variant = "gl2", scale = "extrinsic";
  Eigen::Index rank = 4;
  double epsilon = 1e-8;
  Eigen::Index refine_n = 0;
  int max_iter = 200;
};

std::vector<LandmarkShape> load_shapes(const std::vector<ManifestEntry>& entries, Eigen::Index refine_n) {
  std::vector<LandmarkShape> shapes;
  PreprocessConfig cfg;
  cfg.n = refine_n;
  for (const auto& e : entries) {
    LandmarkShape s = read_landmarks(e.path).shape;
    if (refine_n > 0) s = refine(s, cfg);
    if (!shapes.empty() && s.n() != shapes.front().n()) {
      throw InputError(e.path.string() + " has " + std::to_string(s.n()) + " landmarks, expected " +
                       std::to_string(shapes.front().n()) + " (use --refine)");
    }
    shapes.push_back(std::move(s));
  }
  return shapes;
}

template <class Space>
void write_fit_tables(const std::string& out, const PgaModel<Space>& m) {
  CsvWriter ev({"index", "eigenvalue", "cumulative_fraction"});
  const double total = m.eigenvalues.sum();
  double run = 0.0;
  for (Eigen::Index i = 0; i < m.eigenvalues.size(); ++i) {
    run += m.eigenvalues(i);
    ev.row(std::vector<double>{static_cast<double>(i + 1), m.eigenvalues(i), total > 0 ? run / total : 0.0});
  }
  ev.save(out + ".eigenvalues.csv");
  std::vector<std::string> header = {"sample"};
  for (Eigen::Index i = 0; i < m.r; ++i) header.push_back("t" + std::to_string(i + 1));
  CsvWriter coords(header);
  for (Eigen::Index k = 0; k < m.coords.cols(); ++k) {
    std::vector<double> row = {static_cast<double>(k)};
    for (Eigen::Index i = 0; i < m.r; ++i) row.push_back(m.coords(i, k));
    coords.row(row);
  }
  coords.save(out + ".coords.csv");
}

int run_fit(const FitArgs& a) {
  const auto entries = read_manifest(a.input);
  const auto shapes = load_shapes(entries, a.refine_n);
  if (shapes.size() < 2) throw InputError("fit needs at least two shapes");
  const bool product = a.manifold == "product";
  const LaVariant variant = (product || a.variant == "polar") ? LaVariant::polar : LaVariant::gl2;
  std::vector<SeparableShape> seps;
  for (const auto& s : shapes) seps.push_back(la_standardize(s, variant));
  std::vector<AffineFactor> factors;
  for (const auto& s : seps) factors.push_back(s.affine);

  ModelFile file;
  file.closed = shapes.front().closed();
  const auto start = std::chrono::steady_clock::now();
  if (product) {
    std::vector<ProductPoint> pts;
    for (const auto& s : seps) pts.push_back({s.grass, SpdMatrix(s.affine.m)});
    auto m = pga_fit<ProductSpace>(pts, a.epsilon, a.rank, a.max_iter);
    file.domain = sample_domain(m.coords);
    write_fit_tables(a.out, m);
    file.pga = std::move(m);
  } else {
    std::vector<GrassmannPoint> pts;
    for (const auto& s : seps) pts.push_back(s.grass);
    auto m = pga_fit<GrassmannSpace>(pts, a.epsilon, a.rank, a.max_iter);
    file.domain = sample_domain(m.coords);
    write_fit_tables(a.out, m);
    file.pga = std::move(m);
  }
  const double secs = seconds_since(start);
  file.scale = mean_scale(factors, a.scale == "intrinsic" ? MeanScaleKind::intrinsic_spd
                                                          : MeanScaleKind::extrinsic_gl2);
  save_model(a.out, file);
  std::visit(
      [&](const auto& m) {
        std::cout << "fitted " << to_string(model_kind(file.pga)) << " model: N = " << m.samples
                  << ", n = " << m.n << ", r = " << m.r << ", Karcher iterations = " << m.iterations
                  << ", gradient norm = " << format_double(m.gradient_norm) << '\n';
        std::cout << "eigenvalues:";
        for (Eigen::Index i = 0; i < m.eigenvalues.size(); ++i) std::cout << ' ' << format_double(m.eigenvalues(i));
        std::cout << '\n';
      },
      file.pga);
  std::cerr << "fit time " << secs << " s\n";
  return kExitOk;
}

// ----------------------------------------------------------------- sample

struct SampleArgs {
  std::string model, coeffs, sweep, scale = "mean", out;
  int count = 4;
  int samples = 20;
  std::uint64_t seed = 1;
  bool strict = false;
};

Matrix2 sample_scale(const SampleArgs& a, const ModelFile& file) {
  if (a.scale == "mean") {
    if (!file.scale) throw InputError("model has no mean scale; use --scale none or l4:...");
    return file.scale->m_bar;
  }
  if (a.scale == "none") return Matrix2::Identity();
  if (a.scale.rfind("l4:", 0) == 0) {
    const Vector l = parse_vector(a.scale.substr(3), "--scale");
    if (l.size() != 4) throw InputError("--scale l4 needs four values");
    return l4_matrix({l(0), l(1), l(2), l(3)});
  }
  throw InputError("unknown --scale '" + a.scale + "'");
}

int run_sample(const SampleArgs& a) {
  const ModelFile file = load_model(a.model);
  const Eigen::Index r = std::visit([](const auto& m) { return m.r; }, file.pga);
  if (model_kind(file.pga) == ManifoldKind::spd) throw InputError("sample needs a shape model");
  const Matrix2 scale = sample_scale(a, file);

  struct Job {
    int sweep;
    int index;
    Vector t;
  };
  std::vector<Job> jobs;
  if (!a.coeffs.empty()) {
    const Vector t = parse_vector(a.coeffs, "--coeffs");
    if (t.size() != r) throw InputError("--coeffs needs " + std::to_string(r) + " values");
    jobs.push_back({0, 0, t});
  } else if (a.sweep == "corner-to-corner") {
    if (a.count < 1 || a.samples < 2) throw InputError("sweeps need --count >= 1 and --samples >= 2");
    Rng rng(a.seed);
    for (int s = 0; s < a.count; ++s) {
      Vector c0(r), c1(r);
      for (Eigen::Index i = 0; i < r; ++i) {
        const bool up = rng.uniform() < 0.5;
        c0(i) = up ? file.domain.hi(i) : file.domain.lo(i);
        c1(i) = up ? file.domain.lo(i) : file.domain.hi(i);
      }
      for (int j = 0; j < a.samples; ++j) {
        const double u = static_cast<double>(j) / (a.samples - 1);
        jobs.push_back({s, j, c0 + u * (c1 - c0)});
      }
    }
  } else {
    throw InputError("give --coeffs or --sweep corner-to-corner");
  }

  const fs::path out(a.out);
  std::vector<std::string> header = {"file", "sweep", "index"};
  for (Eigen::Index i = 0; i < r; ++i) header.push_back("t" + std::to_string(i + 1));
  header.push_back("self_intersects");
  CsvWriter table(header);
  int bad = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    MatrixN2 x;
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, PgaModel<GrassmannSpace>>) {
            x = generate(m, jobs[k].t).rep() * scale;
          } else if constexpr (std::is_same_v<M, PgaModel<ProductSpace>>) {
            const ProductPoint p = generate(m, jobs[k].t);
            x = p.g.rep() * (a.scale == "mean" ? p.p.matrix() : scale);
          }
        },
        file.pga);
    const bool closed = file.closed;
    const bool hit = self_intersects(x, closed);
    bad += hit ? 1 : 0;
    const std::string name = numbered("sample", k, ".dat");
    write_atomic(out / name, format_landmarks(x, closed));
    std::vector<std::string> row = {name, std::to_string(jobs[k].sweep), std::to_string(jobs[k].index)};
    for (Eigen::Index i = 0; i < r; ++i) row.push_back(format_double(jobs[k].t(i)));
    row.push_back(hit ? "1" : "0");
    table.row(row);
  }
  table.save(out / "samples.csv");
  std::cout << "generated " << jobs.size() << " shapes, " << bad << " failed the self-intersection guard\n";
  if (bad > 0 && a.strict) throw GuardFailure(std::to_string(bad) + " generated shapes self-intersect");
  return kExitOk;
}

// ------------------------------------------------------------------- dist

struct DistArgs {
  std::string a, b, space = "grassmann", metric = "frobenius";
};

int run_dist(const DistArgs& a) {
  const LandmarkShape sa = read_landmarks(a.a).shape;
  const LandmarkShape sb = read_landmarks(a.b).shape;
  if (sa.n() != sb.n()) throw InputError("shapes have different landmark counts");
  double d = 0.0;
  if (a.space == "grassmann") {
    const auto metric = a.metric == "angle-sum" ? GrassmannMetric::angle_sum : GrassmannMetric::frobenius;
    d = gr_distance(la_standardize(sa).grass, la_standardize(sb).grass, metric);
  } else if (a.space == "spd") {
    d = spd_distance(SpdMatrix(la_standardize(sa, LaVariant::polar).affine.m),
                     SpdMatrix(la_standardize(sb, LaVariant::polar).affine.m));
  } else {
    d = (sa.x() - sb.x()).norm();
  }
  std::cout << format_double(d) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ blade

struct BladeArgs {
  std::string blade, model, coeffs, out, variant = "gl2", order = "tip-to-root", format = "sections";
  std::string scale = "station";
  std::vector<double> etas;
  int sections = 100;
  Eigen::Index refine_n = 0;
  bool proper = false;
};

BladeModel load_blade(const BladeArgs& a) {
  BladeOptions opts;
  opts.variant = a.variant == "product" ? BladeVariant::product_spd : BladeVariant::gl2_schedule;
  opts.order = a.order == "root-to-tip" ? ClusterOrder::root_to_tip : ClusterOrder::tip_to_root;
  opts.proper_rotations = a.proper;
  if (a.refine_n > 0) {
    opts.refine = true;
    opts.preprocess.n = a.refine_n;
  }
  return build_blade(read_blade_definition(a.blade), opts);
}

void report_warnings(const BladeModel& m) {
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
}

void save_wireframe(const BladeArgs& a, const Wireframe& wf) {
  if (a.format == "obj") {
    write_obj(a.out, wf);
  } else {
    write_wireframe_sections(a.out, wf);
  }
}

int run_blade_build(const BladeArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const BladeModel m = load_blade(a);
  const double secs = seconds_since(start);
  report_warnings(m);
  CsvWriter table({"station", "eta", "t", "m11", "m12", "m21", "m22", "b1", "b2", "rotation_angle"});
  for (std::size_t k = 0; k < m.reps.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const AffineFactor& f = m.affine[k];
    const Matrix2& r = m.rotations[k];
    table.row(std::vector<double>{static_cast<double>(k), m.eta(i), m.t(i), f.m(0, 0), f.m(0, 1), f.m(1, 0),
                                  f.m(1, 1), f.b(0), f.b(1), std::atan2(r(1, 0), r(0, 0))});
  }
  table.save(a.out);
  std::cout << "built blade: " << m.reps.size() << " stations, n = " << m.n()
            << ", total Grassmann length " << format_double(m.t(m.t.size() - 1)) << '\n';
  std::cerr << "build time " << secs << " s\n";
  return kExitOk;
}

int run_blade_eval(const BladeArgs& a) {
  const BladeModel m = load_blade(a);
  report_warnings(m);
  if (a.etas.empty()) throw InputError("blade eval needs --eta");
  const fs::path out(a.out);
  for (std::size_t k = 0; k < a.etas.size(); ++k) {
    const LandmarkShape s = evaluate_blade(m, a.etas[k]);
    const fs::path path = a.etas.size() == 1 ? out : out / numbered("section", k, ".dat");
    write_landmarks(path, s, "eta " + format_double(a.etas[k]));
  }
  return kExitOk;
}

int run_blade_wireframe(const BladeArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const BladeModel m = load_blade(a);
  const Wireframe wf = emit_wireframe(m, static_cast<std::size_t>(a.sections));
  const double secs = seconds_since(start);
  report_warnings(m);
  save_wireframe(a, wf);
  std::cout << "wireframe: " << wf.sections.size() << " sections of " << m.n() << " landmarks\n";
  std::cerr << "build + wireframe time " << secs << " s\n";
  return kExitOk;
}

int run_blade_deform(const BladeArgs& a) {
  const ModelFile file = load_model(a.model);
  const auto* pga = std::get_if<PgaModel<GrassmannSpace>>(&file.pga);
  if (!pga) throw InputError("blade deform needs a Grassmann model");
  const Vector t = a.coeffs.empty() ? Vector::Zero(pga->r) : parse_vector(a.coeffs, "--coeffs");
  if (t.size() != pga->r) throw InputError("--coeffs needs " + std::to_string(pga->r) + " values");
  std::optional<MeanScale> scale;
  if (a.scale == "mean") {
    if (!file.scale) throw InputError("model has no mean scale");
    scale = file.scale;
  }
  const auto start = std::chrono::steady_clock::now();
  const BladeModel m = load_blade(a);
  const BladeModel deformed = consistent_deform(m, *pga, t, scale);
  const Wireframe wf = emit_wireframe(deformed, static_cast<std::size_t>(a.sections));
  const double secs = seconds_since(start);
  report_warnings(deformed);
  int bad = 0;
  for (const auto& s : wf.sections) {
    if (self_intersects(evaluate_blade(deformed, s.eta))) ++bad;
  }
  save_wireframe(a, wf);
  std::cout << "deformed wireframe: " << wf.sections.size() << " sections, " << bad
            << " failed the self-intersection guard\n";
  std::cerr << "deform time " << secs << " s\n";
  return kExitOk;
}

// ------------------------------------------------------------ convergence

struct ConvergenceArgs {
  int trials = 100;
  Eigen::Index n_ref = 2000;
  std::string nc_list = "20,40,80,160,320", out = "convergence", spline = "cubic";
  std::uint64_t seed = 1;
  bool open = false;
};

int run_convergence_cmd(const ConvergenceArgs& a) {
  ConvergenceOptions opts;
  opts.trials = a.trials;
  opts.n_ref = a.n_ref;
  opts.seed = a.seed;
  opts.spline = spline_kind(a.spline);
  opts.periodic = !a.open;
  opts.nc_list.clear();
  const Vector nc = parse_vector(a.nc_list, "--nc-list");
  for (Eigen::Index i = 0; i < nc.size(); ++i) {
    if (nc(i) != std::floor(nc(i))) throw InputError("--nc-list entries must be integers");
    opts.nc_list.push_back(static_cast<Eigen::Index>(nc(i)));
  }
  const auto start = std::chrono::steady_clock::now();
  const ConvergenceReport rep = run_convergence(opts);
  const double secs = seconds_since(start);

  CsvWriter csv({"n_c", "gauge_mean", "gauge_max", "euclid_mean", "euclid_max", "euclid_median",
                 "grass_mean", "grass_max", "grass_median"});
  PlotSeries grass{"Grassmann angle sum (mean)", {}, {}, "#1f77b4"};
  PlotSeries grass_max{"Grassmann angle sum (max)", {}, {}, "#aec7e8"};
  PlotSeries euclid{"max landmark error (mean)", {}, {}, "#d62728"};
  for (const auto& r : rep.rows) {
    csv.row(std::vector<double>{static_cast<double>(r.n_c), r.gauge_mean, r.gauge_max, r.euclid_mean,
                                r.euclid_max, r.euclid_median, r.grass_mean, r.grass_max, r.grass_median});
    for (auto* s : {&grass, &grass_max, &euclid}) s->x.push_back(r.gauge_max);
    grass.y.push_back(r.grass_mean);
    grass_max.y.push_back(r.grass_max);
    euclid.y.push_back(r.euclid_mean);
  }
  csv.save(a.out + ".csv");
  write_atomic(a.out + ".svg",
               svg_loglog({grass, grass_max, euclid}, "Refinement convergence", "landmark gauge", "error"));
  std::cout << "trials " << rep.trials << " (skipped " << rep.skipped << ")\n";
  std::cout << "slope grassmann vs mean gauge " << format_double(rep.slope_grass_vs_mean_gauge) << '\n';
  std::cout << "slope grassmann vs max gauge " << format_double(rep.slope_grass_vs_max_gauge) << '\n';
  std::cout << "slope euclidean vs mean gauge " << format_double(rep.slope_euclid_vs_mean_gauge) << '\n';
  std::cout << "slope euclidean vs max gauge " << format_double(rep.slope_euclid_vs_max_gauge) << '\n';
  std::cerr << "convergence time " << secs << " s\n";
  return kExitOk;
}

// ---------------------------------------------------------------- cst-gen

struct CstGenArgs {
  int count = 100;
  std::string range = "0:0.45", sampling = "cosine", out, perturb;
  Eigen::Index nc = 201;
  std::uint64_t seed = 1;
  double frac = 0.2;
  int nominals = 0;
};

std::vector<CstAirfoil> read_nominals(const fs::path& path) {
  std::vector<CstAirfoil> out;
  int line_no = 0;
  for (const auto& raw : detail::lines_of(detail::read_text(path))) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto toks = detail::tokens(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (toks.size() != 18) throw InputError(where + ": expected 9 upper and 9 lower coefficients");
    CstAirfoil a;
    for (std::size_t i = 0; i < 9; ++i) {
      a.upper[i] = detail::number(toks[i], where);
      a.lower[i] = detail::number(toks[9 + i], where);
    }
    out.push_back(a);
  }
  if (out.empty()) throw InputError(path.string() + ": no nominal airfoils");
  return out;
}

int run_cst_gen(const CstGenArgs& a) {
  const auto colon = a.range.find(':');
  if (colon == std::string::npos) throw InputError("--coeff-range must look like lo:hi");
  const double lo = detail::number(a.range.substr(0, colon), "--coeff-range");
  const double hi = detail::number(a.range.substr(colon + 1), "--coeff-range");
  if (!(lo >= 0.0 && hi > lo)) throw InputError("--coeff-range needs 0 <= lo < hi");
  if (a.count < 1) throw InputError("--count must be positive");
  const Sampling sampling = sampling_kind(a.sampling);
  Rng rng(a.seed);

  std::vector<CstAirfoil> coeffs;
  std::vector<std::string> labels;
  std::vector<LandmarkShape> shapes;
  int resampled = 0;
  constexpr int kMaxAttempts = 100;
  auto draw = [&](auto make, const std::string& label) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) throw DegeneracyError("could not draw a valid airfoil");
      const CstAirfoil c = make();
      try {
        LandmarkShape s = cst_airfoil(c, a.nc, sampling);
        if (self_intersects(s)) {
          ++resampled;
          continue;
        }
        coeffs.push_back(c);
        labels.push_back(label);
        shapes.push_back(std::move(s));
        return;
      } catch (const DegeneracyError&) {
        ++resampled;
      }
    }
  };

  std::vector<CstAirfoil> nominals;
  if (!a.perturb.empty()) {
    nominals = read_nominals(a.perturb);
  } else if (a.nominals > 0) {
    EnsembleOptions opts;
    opts.nominal_count = a.nominals;
    opts.per_nominal = a.count;
    opts.frac = a.frac;
    opts.nominal_lo = lo;
    opts.nominal_hi = hi;
    opts.n_c = a.nc;
    opts.sampling = sampling;
    CstEnsemble e = synthetic_ensemble(rng, opts);
    coeffs = e.coefficients;
    for (int l : e.labels) labels.push_back("nominal" + std::to_string(l));
    shapes = std::move(e.shapes);
    resampled = e.resampled;
  }
  if (!a.perturb.empty()) {
    for (std::size_t k = 0; k < nominals.size(); ++k) {
      for (int j = 0; j < a.count; ++j) {
        draw([&] { return perturb_cst(nominals[k], a.frac, rng); }, "nominal" + std::to_string(k));
      }
    }
  } else if (a.nominals == 0) {
    for (int j = 0; j < a.count; ++j) draw([&] { return random_cst(rng, lo, hi); }, "uniform");
  }

  const fs::path out(a.out);
  std::vector<ManifestEntry> manifest;
  std::vector<std::string> header = {"file", "label"};
  for (int i = 0; i < 9; ++i) header.push_back("upper" + std::to_string(i));
  for (int i = 0; i < 9; ++i) header.push_back("lower" + std::to_string(i));
  CsvWriter table(header);
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const std::string name = numbered("cst", k, ".dat");
    write_landmarks(out / name, shapes[k]);
    manifest.push_back({out / name, labels[k], 1.0});
    std::vector<std::string> row = {name, labels[k]};
    for (double c : coeffs[k].upper) row.push_back(format_double(c));
    for (double c : coeffs[k].lower) row.push_back(format_double(c));
    table.row(row);
  }
  write_manifest(out / "manifest.csv", manifest);
  table.save(out / "coefficients.csv");
  std::cout << "generated " << shapes.size() << " airfoils (" << resampled << " resampled)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separable shape tensors for airfoils and blades"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sst 1.0");

  PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand("preprocess", "Spline-refine every shape in a manifest to n landmarks");
  cmd_pre->add_option("--input", pre.input, "Manifest (path,label[,weight] per line)")->required();
  cmd_pre->add_option("--n", pre.n, "Landmarks after refinement")->check(CLI::Range(3, 10000000));
  cmd_pre->add_option("--spline", pre.spline)->transform(CLI::CheckedTransformer(kSplineNames));
  cmd_pre->add_option("--sampling", pre.sampling)->transform(CLI::CheckedTransformer(kSamplingNames));
  cmd_pre->add_flag("--check-intersection", pre.check, "Reject refined shapes that self-intersect");
  cmd_pre->add_flag("--force", pre.force, "Refine shapes that already have n landmarks");
  cmd_pre->add_option("--out", pre.out, "Output directory (refined files, manifest.csv, gauges.csv)")->required();
  cmd_pre->footer("gauges.csv columns: file,label,n_in,gauge_in,n_out,gauge_out,mean_spacing_out");

  FitArgs fit;
  auto* cmd_fit = app.add_subcommand("fit", "Karcher mean and PGA over a shape manifest");
  cmd_fit->add_option("--input", fit.input, "Manifest; weights are carried but not used")->required();
  cmd_fit->add_option("--manifold", fit.manifold)->check(CLI::IsMember({"grassmann", "product"}));
  cmd_fit->add_option("--rank", fit.rank, "Number of principal directions r");
  cmd_fit->add_option("--epsilon", fit.epsilon, "Karcher gradient tolerance");
  cmd_fit->add_option("--max-iter", fit.max_iter);
  cmd_fit->add_option("--variant", fit.variant, "LA standardization")->check(CLI::IsMember({"gl2", "polar"}));
  cmd_fit->add_option("--mean-scale", fit.scale)->check(CLI::IsMember({"extrinsic", "intrinsic"}));
  cmd_fit->add_option("--refine", fit.refine_n, "Refine every shape to this n first");
  cmd_fit->add_option("--out", fit.out, "Model file; tables go to <out>.eigenvalues.csv and <out>.coords.csv")
      ->required();
  cmd_fit->footer(
      "eigenvalues.csv columns: index,eigenvalue,cumulative_fraction\n"
      "coords.csv columns: sample,t1..tr");

  SampleArgs smp;
  auto* cmd_smp = app.add_subcommand("sample", "Generate shapes from normal coordinates of a model");
  cmd_smp->add_option("--model", smp.model)->required();
  auto* opt_coeffs = cmd_smp->add_option("--coeffs", smp.coeffs, "Comma-separated t1,...,tr");
  cmd_smp->add_option("--sweep", smp.sweep)->check(CLI::IsMember({"corner-to-corner"}))->excludes(opt_coeffs);
  cmd_smp->add_option("--count", smp.count, "Number of sweeps");
  cmd_smp->add_option("--samples", smp.samples, "Shapes per sweep");
  cmd_smp->add_option("--seed", smp.seed);
  cmd_smp->add_option("--scale", smp.scale, "mean | none | l4:l1,l2,l3,l4");
  cmd_smp->add_flag("--strict", smp.strict, "Exit 4 if any generated shape self-intersects");
  cmd_smp->add_option("--out", smp.out, "Output directory (sample files and samples.csv)")->required();
  cmd_smp->footer("samples.csv columns: file,sweep,index,t1..tr,self_intersects");

  DistArgs dst;
  auto* cmd_dst = app.add_subcommand("dist", "Distance between two landmark files");
  cmd_dst->add_option("--a", dst.a)->required();
  cmd_dst->add_option("--b", dst.b)->required();
  cmd_dst->add_option("--space", dst.space)->check(CLI::IsMember({"grassmann", "spd", "euclidean"}));
  cmd_dst->add_option("--metric", dst.metric)->check(CLI::IsMember({"frobenius", "angle-sum"}));

  BladeArgs bl;
  auto* cmd_blade = app.add_subcommand("blade", "Blade interpolation and deformation");
  cmd_blade->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--blade", bl.blade, "Blade definition file")->required();
    c->add_option("--variant", bl.variant)->check(CLI::IsMember({"gl2", "product"}));
    c->add_option("--order", bl.order)->check(CLI::IsMember({"tip-to-root", "root-to-tip"}));
    c->add_flag("--proper", bl.proper, "Restrict Procrustes alignment to rotations");
    c->add_option("--refine", bl.refine_n, "Refine every station to this n first");
  };
  auto* cmd_build = cmd_blade->add_subcommand("build", "Fit the interpolant and write a station table");
  add_common(cmd_build);
  cmd_build->add_option("--out", bl.out, "Station CSV")->required();
  cmd_build->footer("columns: station,eta,t,m11,m12,m21,m22,b1,b2,rotation_angle");
  auto* cmd_eval = cmd_blade->add_subcommand("eval", "Evaluate sections at given eta values");
  add_common(cmd_eval);
  cmd_eval->add_option("--eta", bl.etas)->required();
  cmd_eval->add_option("--out", bl.out, "File for one eta, directory for several")->required();
  auto* cmd_wire = cmd_blade->add_subcommand("wireframe", "Emit equally spaced sections in 3D");
  add_common(cmd_wire);
  cmd_wire->add_option("--sections", bl.sections)->check(CLI::Range(2, 1000000));
  cmd_wire->add_option("--format", bl.format)->check(CLI::IsMember({"sections", "obj"}));
  cmd_wire->add_option("--out", bl.out, "Directory (sections) or .obj file")->required();
  auto* cmd_def = cmd_blade->add_subcommand("deform", "Apply one PGA deformation to every station");
  add_common(cmd_def);
  cmd_def->add_option("--model", bl.model)->required();
  cmd_def->add_option("--coeffs", bl.coeffs, "Comma-separated t1,...,tr (default zero)");
  cmd_def->add_option("--scale", bl.scale, "station | mean")->check(CLI::IsMember({"station", "mean"}));
  cmd_def->add_option("--sections", bl.sections)->check(CLI::Range(2, 1000000));
  cmd_def->add_option("--format", bl.format)->check(CLI::IsMember({"sections", "obj"}));
  cmd_def->add_option("--out", bl.out, "Directory (sections) or .obj file")->required();

  ConvergenceArgs cv;
  auto* cmd_cv = app.add_subcommand("convergence", "Refinement convergence experiment on random CST airfoils");
  cmd_cv->add_option("--trials", cv.trials);
  cmd_cv->add_option("--n-ref", cv.n_ref);
  cmd_cv->add_option("--nc-list", cv.nc_list, "Comma-separated, strictly increasing");
  cmd_cv->add_option("--seed", cv.seed);
  cmd_cv->add_option("--spline", cv.spline)->transform(CLI::CheckedTransformer(kSplineNames));
  cmd_cv->add_flag("--open", cv.open, "Fit the coarse airfoil as an open curve");
  cmd_cv->add_option("--out", cv.out, "Output prefix for <out>.csv and <out>.svg");
  cmd_cv->footer(
      "CSV columns: n_c,gauge_mean,gauge_max,euclid_mean,euclid_max,euclid_median,"
      "grass_mean,grass_max,grass_median");

  CstGenArgs cg;
  auto* cmd_cg = app.add_subcommand("cst-gen", "Synthetic CST airfoil dataset");
  cmd_cg->add_option("--count", cg.count, "Shapes (per nominal in perturbation modes)");
  cmd_cg->add_option("--coeff-range", cg.range, "lo:hi for uniform draws and random nominals");
  cmd_cg->add_option("--nc", cg.nc, "Landmarks per airfoil")->check(CLI::Range(3, 10000000));
  cmd_cg->add_option("--sampling", cg.sampling)->transform(CLI::CheckedTransformer(kSamplingNames));
  cmd_cg->add_option("--seed", cg.seed);
  auto* opt_perturb = cmd_cg->add_option("--perturb", cg.perturb, "Nominal coefficient file (18 numbers per line)");
  cmd_cg->add_option("--nominals", cg.nominals, "Draw this many random nominals and perturb them")
      ->excludes(opt_perturb);
  cmd_cg->add_option("--frac", cg.frac, "Relative perturbation size")->check(CLI::Range(0.0, 1.0));
  cmd_cg->add_option("--out", cg.out, "Output directory (shapes, manifest.csv, coefficients.csv)")->required();
  cmd_cg->footer("coefficients.csv columns: file,label,upper0..upper8,lower0..lower8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*cmd_pre) return run_preprocess(pre);
    if (*cmd_fit) return run_fit(fit);
    if (*cmd_smp) return run_sample(smp);
    if (*cmd_dst) return run_dist(dst);
    if (*cmd_build) return run_blade_build(bl);
    if (*cmd_eval) return run_blade_eval(bl);
    if (*cmd_wire) return run_blade_wireframe(bl);
    if (*cmd_def) return run_blade_deform(bl);
    if (*cmd_cv) return run_convergence_cmd(cv);
    if (*cmd_cg) return run_cst_gen(cg);
  } catch (const GuardFailure& e) {
    std::cerr << "guard failure: " << e.what() << '\n';
    return kExitGuard;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NeighborhoodError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
