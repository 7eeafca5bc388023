// Batch front-end: builds representations, runs scans, writes CSV and SVG.
#include "hitchin/hitchin.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

namespace {

using namespace hitchin;

struct RunConfig {
  std::string rep_path;
  int max_word_len = 4;
  int leaf_samples = 128;
  std::array<double, 4> base_angles{0.4, 2.0, 3.6, 5.2};
  Tolerances tolerances;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  // Command parameters.
  std::string kind = "fuchsian";
  double eps = 0.1;
  std::array<double, 4> direction{1, 0, 0, -1};
  int leaf_count = 8;
  std::string word = "a1";
  bool scan = false;
  int iterations = 20;
  double exponent = 0.5;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, double*> tolerance_fields(Tolerances& t) {
  return {{"incidence", &t.incidence}, {"eigen", &t.eigen},         {"gap", &t.gap},
          {"general_position", &t.general_position}, {"det", &t.det}, {"angle_dedup", &t.angle_dedup},
          {"relator", &t.relator}};
}

Json config_to_json(RunConfig c) {
  Json tol = Json::object();
  for (const auto& [name, ptr] : tolerance_fields(c.tolerances)) tol[name] = *ptr;
  return Json{{"rep", c.rep_path},          {"max_len", c.max_word_len},   {"samples", c.leaf_samples},
              {"base_angles", c.base_angles}, {"tolerances", tol},         {"out", c.output_dir},
              {"seed", c.seed},             {"kind", c.kind},              {"eps", c.eps},
              {"direction", c.direction},   {"leaf_count", c.leaf_count},  {"word", c.word},
              {"scan", c.scan},             {"iterations", c.iterations},  {"exponent", c.exponent}};
}

void apply_json(RunConfig& c, const Json& j) {
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "rep") c.rep_path = v.get<std::string>();
      else if (key == "max_len") c.max_word_len = v.get<int>();
      else if (key == "samples") c.leaf_samples = v.get<int>();
      else if (key == "base_angles") c.base_angles = v.get<std::array<double, 4>>();
      else if (key == "out") c.output_dir = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "kind") c.kind = v.get<std::string>();
      else if (key == "eps") c.eps = v.get<double>();
      else if (key == "direction") c.direction = v.get<std::array<double, 4>>();
      else if (key == "leaf_count") c.leaf_count = v.get<int>();
      else if (key == "word") c.word = v.get<std::string>();
      else if (key == "scan") c.scan = v.get<bool>();
      else if (key == "iterations") c.iterations = v.get<int>();
      else if (key == "exponent") c.exponent = v.get<double>();
      else if (key == "tolerances") {
        auto fields = tolerance_fields(c.tolerances);
        for (const auto& [name, tv] : v.items()) {
          auto it = fields.find(name);
          if (it == fields.end()) throw UsageError("unknown tolerance '" + name + "'");
          *it->second = tv.get<double>();
        }
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

void validate(RunConfig& c) {
  for (const auto& [name, ptr] : tolerance_fields(c.tolerances)) {
    if (!(*ptr > 0)) throw UsageError("tolerance '" + name + "' must be positive");
  }
  if (c.leaf_samples < 16) throw UsageError("samples must be at least 16");
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (angle_gap(c.base_angles[i], c.base_angles[j]) <= c.tolerances.angle_dedup) {
        throw UsageError("base angles must be pairwise distinct");
      }
    }
  }
  if (c.max_word_len < 1) throw UsageError("max-len must be at least 1");
  if (c.leaf_count < 2) throw UsageError("leaf-count must be at least 2");
  if (c.iterations < 0) throw UsageError("iterations must be nonnegative");
}

std::string config_hash(const RunConfig& c, const std::string& command) {
  // The output location does not change the results.
  Json j = config_to_json(c);
  j.erase("out");
  return fnv1a_hex(command + "\n" + j.dump());
}

std::filesystem::path prepare_out(const RunConfig& c) {
  std::filesystem::path dir(c.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::InvalidInput, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

Rep4 load_rep(const RunConfig& c) {
  if (c.rep_path.empty()) return lift_principal(fuchsian_octagon_rep(), c.tolerances);
  return rep_from_json<4>(read_json_file(c.rep_path), c.tolerances);
}

int cmd_build_rep(const RunConfig& c) {
  Rep4 rep = lift_principal(fuchsian_octagon_rep(), c.tolerances);
  Json meta{{"kind", c.kind}};
  if (c.kind == "bent") {
    const Vec4 d(c.direction[0], c.direction[1], c.direction[2], c.direction[3]);
    rep = bend(rep, separating_curve(), d, c.eps, c.tolerances);
    meta["eps"] = c.eps;
    meta["direction"] = c.direction;
  } else if (c.kind != "fuchsian") {
    throw UsageError("kind must be fuchsian or bent");
  }
  std::string path = c.output_dir;
  if (std::filesystem::is_directory(path)) path = (std::filesystem::path(path) / "rep.json").string();
  write_text_file(path, rep_to_json(rep, meta).dump(2) + "\n");
  std::cout << "wrote " << path << " relator_residual=" << rep.relator_residual() << "\n";
  return 0;
}

std::array<std::size_t, 4> base_indices(const FlagTable& table, const RunConfig& c) {
  std::array<std::size_t, 4> base{};
  for (std::size_t i = 0; i < 4; ++i) base[i] = table.nearest(c.base_angles[i]);
  return base;
}

/// Leaf indices near evenly spaced angles, skipping base and repeated indices.
std::vector<std::size_t> leaf_indices(const FlagTable& table, const std::array<std::size_t, 4>& base, int count) {
  std::vector<std::size_t> xs;
  for (int k = 0; k < count; ++k) {
    std::size_t x = table.nearest(0.15 + k * kTwoPi / count);
    while (std::find(base.begin(), base.end(), x) != base.end() || std::find(xs.begin(), xs.end(), x) != xs.end()) {
      x = (x + 1) % table.size();
    }
    xs.push_back(x);
  }
  return xs;
}

void write_flags(const FlagTable& table, const std::string& hash, const std::filesystem::path& path) {
  std::vector<std::string> header{"angle", "word"};
  for (const char* p : {"xi1_", "xi2a_", "xi2b_", "xi3_"}) {
    for (int i = 0; i < 4; ++i) header.push_back(p + std::to_string(i));
  }
  CsvWriter csv(hash, header);
  for (const auto& e : table.entries()) {
    std::vector<std::string> row{fmt(e.point.angle), e.point.word ? e.point.word->str() : ""};
    for (int i = 0; i < 4; ++i) row.push_back(fmt(e.flag.p1[i]));
    for (int col = 0; col < 2; ++col) {
      for (int i = 0; i < 4; ++i) row.push_back(fmt(e.flag.p2.basis()(i, col)));
    }
    for (int i = 0; i < 4; ++i) row.push_back(fmt(e.flag.p3[i]));
    csv.row(row);
  }
  csv.save(path.string());
}

int cmd_leaves(const RunConfig& c) {
  const Rep4 rep = load_rep(c);
  const auto dir = prepare_out(c);
  const std::string hash = config_hash(c, "leaves");
  const FlagTable table = build_flag_table(rep, fuchsian_octagon_rep(), c.max_word_len, c.tolerances);
  const auto base = base_indices(table, c);
  const auto xs = leaf_indices(table, base, c.leaf_count);
  const auto leaves = normalized_leaves(table, xs, base, static_cast<std::size_t>(c.leaf_samples));
  const auto charts = default_charts();

  write_flags(table, hash, dir / "flags.csv");
  std::vector<Polygon> all;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    const auto& nl = leaves[k];
    CsvWriter csv(hash, {"y_angle", "px", "py", "pz", "chart_x", "chart_y"});
    for (std::size_t i = 0; i < nl.source.boundary.size(); ++i) {
      const auto& s = nl.source.boundary[i];
      const Vec3 q = nl.plane_basis.transpose() * s.point.coords();
      csv.row({fmt(s.angle), fmt(q.x()), fmt(q.y()), fmt(q.z()), fmt(nl.chart_polygon[i].x()),
               fmt(nl.chart_polygon[i].y())});
    }
    csv.save((dir / ("leaf_" + std::to_string(k) + ".csv")).string());
    const Polygon hull = convex_hull(nl.chart_polygon);
    SvgCanvas svg = SvgCanvas::fit({hull});
    svg.polyline(hull, "black", true, 1.5);
    for (const auto& f : nl.frame_images) svg.dot(AffineChart2(charts[nl.chart])(f), "red");
    svg.save((dir / ("leaf_" + std::to_string(k) + ".svg")).string());
    all.push_back(hull);
  }

  std::vector<std::string> header{"leaf", "angle", "chart"};
  for (std::size_t j = 0; j < leaves.size(); ++j) header.push_back("d" + std::to_string(j));
  CsvWriter matrix(hash, header);
  double worst = 0.0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), fmt(leaves[i].source.x.angle), std::to_string(leaves[i].chart)};
    for (std::size_t j = 0; j < leaves.size(); ++j) {
      const double d = i == j ? 0.0 : leaf_distance(leaves[i], leaves[j]);
      if (i != j) worst = std::max(worst, d);
      row.push_back(fmt(d));
    }
    matrix.row(row);
  }
  matrix.save((dir / "leaf_distances.csv").string());

  SvgCanvas overlay = SvgCanvas::fit(all);
  for (const auto& p : all) overlay.polyline(p, "steelblue", true);
  overlay.save((dir / "leaves.svg").string());

  const auto gp = check_general_position(table, 1000, c.seed);
  std::cout << "leaves=" << leaves.size() << " table=" << table.size() << " max_offdiag_hausdorff=" << worst
            << " general_position_failures=" << gp.failures << "/" << gp.tested << "\n";
  return 0;
}

/// Barycentric position of the simple-root coordinates of a direction.
Vec2 chamber_point(const Vec4& d) {
  const double g1 = d(0) - d(1), g2 = d(1) - d(2), g3 = d(2) - d(3);
  const double s = g1 + g2 + g3;
  const Vec2 v1(0, 0), v2(1, 0), v3(0.5, std::sqrt(3.0) / 2);
  return (g1 * v1 + g2 * v2 + g3 * v3) / s;
}

int cmd_spectra(const RunConfig& c) {
  const Rep4 rep = load_rep(c);
  // Resource guard first, before any output is written.
  if (reduced_word_count(c.max_word_len) > kWordLimit) enumerate_words(c.max_word_len);
  const auto dir = prepare_out(c);
  const std::string hash = config_hash(c, "spectra");
  const SpectraScan scan = spectra_scan(rep, c.max_word_len, c.tolerances);

  CsvWriter csv(hash, {"word", "l1", "l2", "l3", "l4", "eq1_residual", "eq1_normalized", "ratio1", "ratio2",
                       "witness"});
  double max_eq1 = 0.0, max_norm = 0.0, max_ratio_dev = 0.0;
  for (const auto& r : scan.records) {
    const Vec4& l = r.lambda_vec;
    csv.row({r.word.str(), fmt(l(0)), fmt(l(1)), fmt(l(2)), fmt(l(3)), fmt(r.eq1_residual), fmt(r.eq1_normalized),
             fmt(r.ellipse_ratios.first), fmt(r.ellipse_ratios.second), fmt(r.witness)});
    max_eq1 = std::max(max_eq1, std::abs(r.eq1_residual));
    max_norm = std::max(max_norm, std::abs(r.eq1_normalized));
    max_ratio_dev = std::max({max_ratio_dev, std::abs(r.ellipse_ratios.first - 2.0),
                              std::abs(r.ellipse_ratios.second - 2.0)});
  }
  csv.save((dir / "spectra.csv").string());

  const ConeSampleSet cone = cone_from_records(scan.records);
  CsvWriter cone_csv(hash, {"word", "d1", "d2", "d3", "d4"});
  SvgCanvas svg(-0.05, 1.05, -0.05, 1.05);
  const Vec2 v2(1, 0), v3(0.5, std::sqrt(3.0) / 2);
  svg.polyline({Vec2(0, 0), v2, v3}, "black", true);
  for (std::size_t k = 0; k < cone.directions.size(); ++k) {
    const Vec4& d = cone.directions[k];
    cone_csv.row({cone.source_words[k].str(), fmt(d(0)), fmt(d(1)), fmt(d(2)), fmt(d(3))});
    svg.dot(chamber_point(d), "steelblue", 1.5);
  }
  cone_csv.save((dir / "cone.csv").string());
  svg.save((dir / "cone.svg").string());

  const ConeDimension dim = cone_dimension(cone);
  std::cout << "records=" << scan.records.size() << " skipped=" << scan.skipped << " max_abs_eq1=" << max_eq1
            << " max_eq1_normalized=" << max_norm << " max_ratio_deviation=" << max_ratio_dev
            << " cone_rank=" << dim.rank << "\n";
  return 0;
}

std::vector<std::string> fit_row(const std::string& word, const std::string& point, double exact,
                                 const ModelFit& f) {
  const double rel = std::abs(f.alpha_hat - exact) / exact;
  return {word, point, fmt(exact), fmt(f.alpha_hat), fmt(rel), fmt(f.r_squared), fmt(f.window_r),
          std::to_string(f.window_count)};
}

int cmd_model_fit(const RunConfig& c) {
  const Rep4 rep = load_rep(c);
  const Word w = Word::parse(c.word).reduced();
  if (w.empty()) fail(ErrorCode::InvalidInput, "identity word has no fixed points");
  const auto dir = prepare_out(c);
  const std::string hash = config_hash(c, "model-fit");
  const FlagTable table = build_flag_table(rep, fuchsian_octagon_rep(), c.max_word_len, c.tolerances);

  const ModelFit at_plus = fit_at_attracting_point(rep, table, w);
  const ModellingReport report = modelling_constraint_check(rep, &table, w);
  CsvWriter csv(hash, {"word", "point", "alpha_exact", "alpha_hat", "rel_error", "r_squared", "window_r",
                       "window_count"});
  csv.row(fit_row(w.str(), "gamma_plus", *at_plus.alpha_exact, at_plus));
  csv.row(fit_row(w.str(), "constraint_plus", report.alpha_plus_exact, *report.fit_plus));
  csv.row(fit_row(w.str(), "constraint_minus", report.alpha_minus_exact, *report.fit_minus));
  csv.save((dir / "model_fit.csv").string());
  std::cout << "word=" << w.str() << " alpha_exact=" << *at_plus.alpha_exact << " alpha_hat=" << at_plus.alpha_hat
            << " constraint_exact=" << report.alpha_plus_exact << "/" << report.alpha_minus_exact << "\n";

  if (c.scan) {
    CsvWriter scan(hash, {"word", "alpha_plus", "alpha_minus", "mismatch"});
    double worst = 0.0;
    std::string worst_word = "e";
    for (const Word& v : enumerate_words(c.max_word_len)) {
      try {
        const ModellingReport r = modelling_constraint_check(rep, nullptr, v);
        scan.row({v.str(), fmt(r.alpha_plus_exact), fmt(r.alpha_minus_exact), fmt(r.mismatch())});
        if (r.mismatch() > worst) {
          worst = r.mismatch();
          worst_word = v.str();
        }
      } catch (const GeometryError& e) {
        if (e.code() != ErrorCode::NotLoxodromic && e.code() != ErrorCode::DegenerateGap) throw;
      }
    }
    scan.save((dir / "model_scan.csv").string());
    std::cout << "max_mismatch=" << worst << " at " << worst_word << "\n";
  }
  return 0;
}

int cmd_benzecri(const RunConfig& c) {
  const auto dir = prepare_out(c);
  const std::string hash = config_hash(c, "benzecri-demo");
  const BenzecriSetup setup = benzecri_default_setup(c.iterations, 0.25, 25.0, c.exponent);
  const auto seq = benzecri_iterate(setup.half, setup.ellipse, setup.a, c.iterations, setup.chart);

  CsvWriter csv(hash, {"k", "hausdorff"});
  for (std::size_t k = 0; k < seq.size(); ++k) csv.row({std::to_string(k), fmt(seq[k])});
  csv.save((dir / "benzecri.csv").string());

  const AffineChart2 chart(setup.chart);
  auto charted = [&](const std::vector<Vec3>& pts) {
    Polygon p;
    for (const auto& q : pts) p.push_back(chart(q));
    return convex_hull(p);
  };
  const Polygon goal = charted(setup.ellipse);
  SvgCanvas svg = SvgCanvas::fit({goal});
  svg.polyline(goal, "black", true, 1.5);
  std::vector<Vec3> cur = setup.half;
  for (int k = 0; k <= c.iterations; ++k) {
    if (k == 0 || k == 1 || k == 2 || k == 4 || k == 8 || k == c.iterations) svg.polyline(charted(cur), "crimson", true);
    for (auto& q : cur) q = setup.a * q;
  }
  svg.save((dir / "benzecri.svg").string());
  std::cout << "iterations=" << c.iterations << " first=" << seq.front() << " last=" << seq.back() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on rank-4 surface group representations"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, rep_path, out, word, kind;
  int max_len = 0, samples = 0, leaf_count = 0, iterations = 0;
  std::uint64_t seed = 0;
  double eps = 0.0, exponent = 0.0;
  std::vector<double> direction;
  bool scan = false;

  app.add_option("--config", config_path, "JSON run configuration");
  auto* o_rep = app.add_option("--rep", rep_path, "representation JSON (default: lifted Fuchsian)");
  auto* o_len = app.add_option("--max-len", max_len, "maximal word length");
  auto* o_samples = app.add_option("--samples", samples, "boundary samples per leaf");
  auto* o_out = app.add_option("--out", out, "output directory (build-rep: output file)");
  auto* o_seed = app.add_option("--seed", seed, "random seed");

  auto* build = app.add_subcommand("build-rep", "write a representation JSON");
  auto* o_kind = build->add_option("--kind", kind, "fuchsian or bent");
  auto* o_eps = build->add_option("--eps", eps, "bending amount");
  auto* o_dir = build->add_option("--direction", direction, "bending direction, four reals summing to 0")
                    ->expected(4)
                    ->delimiter(',');
  auto* leaves = app.add_subcommand("leaves", "normalized leaves and their distances");
  auto* o_count = leaves->add_option("--leaf-count", leaf_count, "number of leaves");
  auto* spectra = app.add_subcommand("spectra", "Jordan projections and limit cone");
  auto* model = app.add_subcommand("model-fit", "local exponent fits at fixed points");
  auto* o_word = model->add_option("--word", word, "group word such as a1 or a1B2");
  auto* o_scan = model->add_flag("--scan", scan, "scan all words for exponent mismatches");
  auto* benz = app.add_subcommand("benzecri-demo", "Hausdorff convergence of iterated half-ellipse");
  auto* o_iter = benz->add_option("--iterations", iterations, "number of iterations");
  auto* o_exp = benz->add_option("--exponent", exponent, "A = diag(e^s, 1, e^-s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config " + config_path);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      apply_json(c, j);
    }
    if (o_rep->count()) c.rep_path = rep_path;
    if (o_len->count()) c.max_word_len = max_len;
    if (o_samples->count()) c.leaf_samples = samples;
    if (o_out->count()) c.output_dir = out;
    if (o_seed->count()) c.seed = seed;
    if (o_kind->count()) c.kind = kind;
    if (o_eps->count()) c.eps = eps;
    if (o_dir->count()) std::copy(direction.begin(), direction.end(), c.direction.begin());
    if (o_count->count()) c.leaf_count = leaf_count;
    if (o_word->count()) c.word = word;
    if (o_scan->count()) c.scan = scan;
    if (o_iter->count()) c.iterations = iterations;
    if (o_exp->count()) c.exponent = exponent;
    validate(c);

    if (build->parsed()) return cmd_build_rep(c);
    if (leaves->parsed()) return cmd_leaves(c);
    if (spectra->parsed()) return cmd_spectra(c);
    if (model->parsed()) return cmd_model_fit(c);
    if (benz->parsed()) return cmd_benzecri(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
