#include "posespace/cli.hpp"
#include "posespace/io.hpp"
#include "posespace/mesh.hpp"
#include "posespace/metric.hpp"
#include "posespace/modeseek.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace posespace {

int
exit_code_for(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::SymmetryMismatch:
      return kExitSymmetryMismatch;
    case ErrorKind::EmptyInput:
      return kExitEmpty;
    case ErrorKind::NoUniqueProjection:
    case ErrorKind::NoConsistentTuple:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

namespace {

int
parse_order(const std::string& text, const std::string& spec)
{
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    fail(ErrorKind::InvalidInput, "bad order in symmetry spec '" + spec + "'");
  return n;
}

Vec3
parse_vec3(const std::string& text, const char* what)
{
  std::istringstream in(text);
  std::string field;
  std::vector<double> v;
  while (std::getline(in, field, ',')) {
    char* end = nullptr;
    double x = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0' || !std::isfinite(x))
      fail(ErrorKind::InvalidInput, std::string("bad ") + what + " '" + text + "'");
    v.push_back(x);
  }
  if (v.size() != 3)
    fail(ErrorKind::InvalidInput, std::string(what) + " needs 3 components");
  return { v[0], v[1], v[2] };
}

std::string
fmt(double v, int precision = 6)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string
pose_text(const Pose& p)
{
  UnitQuaternion q = matrix_to_quat(p.rotation());
  std::ostringstream s;
  s << std::setprecision(6) << "q=(" << q.w << ", " << q.x << ", " << q.y
    << ", " << q.z << ") t=(" << p.translation().x() << ", "
    << p.translation().y() << ", " << p.translation().z() << ")";
  return s.str();
}

std::optional<double>
parse_radius(const std::string& text)
{
  if (text == "auto")
    return std::nullopt;
  char* end = nullptr;
  double r = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0')
    fail(ErrorKind::InvalidInput, "radius must be 'auto' or a number");
  if (!(r > 0.0) || !std::isfinite(r))
    fail(ErrorKind::InvalidInput, "radius must be positive");
  return r;
}

std::string
write_to_string(void (*writer)(std::ostream&, const ObjectModel&),
                const ObjectModel& model)
{
  std::ostringstream s;
  writer(s, model);
  return s.str();
}

void
report_radius(std::ostream& out, const ObjectModel& model, const RadiusChoice& r)
{
  out << "radius " << fmt(r.radius, 9) << " (T = " << fmt(model.separation(), 9)
      << ")\n";
  if (r.exceeds_half_separation)
    out << "warning: radius >= T/2; neighborhoods may hold two "
           "representatives of one pose (deduplicated per pose)\n";
  else if (r.exceeds_quarter_separation)
    out << "warning: radius >= T/4; averaging inside a neighborhood may "
           "be inconsistent\n";
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs
{
  std::string mesh;
  std::string symmetry;
  std::string axis;
  std::string axis_point;
  double tolerance = 0.01;
  std::string out;
};

int
cmd_analyze_mesh(const AnalyzeArgs& a, std::ostream& out)
{
  std::optional<Vec3> axis;
  if (!a.axis.empty())
    axis = parse_vec3(a.axis, "axis");
  Symmetry sym = parse_symmetry_spec(a.symmetry, axis);
  if (!a.axis_point.empty())
    sym.axis_point = parse_vec3(a.axis_point, "axis point");
  if (!(a.tolerance > 0.0))
    fail(ErrorKind::InvalidInput, "tolerance must be positive");

  ObjData obj = read_obj(a.mesh);
  CanonicalizeOptions opts;
  opts.symmetry_tolerance = a.tolerance;
  ObjectModel model = sym.dimension() == 2
                        ? canonicalize_frame(obj.polyline_mesh(), sym, opts)
                        : canonicalize_frame(obj.triangle_mesh(), sym, opts);

  out << "symmetry " << to_string(model.kind()) << "\n";
  out << (model.dimension() == 2 ? "length " : "area ")
      << fmt(model.surface_area(), 12) << "\n";
  out << "lambda eigenvalues";
  for (double e : model.lambda_eigenvalues())
    out << " " << fmt(e, 12);
  out << "\n";
  out << "lambda_r " << fmt(model.lambda_r(), 12) << "\n";
  if (model.dimension() == 3)
    out << "lambda_z " << fmt(model.lambda_z(), 12) << "\n";
  out << "lambda " << fmt(model.lambda(), 12) << "\n";
  out << "T " << fmt(model.separation(), 12) << "\n";
  out << "symmetry residual " << fmt(model.symmetry_residual(), 6) << "\n";
  if (!a.out.empty()) {
    write_text_file(a.out, write_to_string(write_model_json, model));
    out << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

struct DistanceArgs
{
  std::string model;
  std::string pose_a;
  std::string pose_b;
  std::string oracle_mesh;
  std::size_t samples = 100000;
  std::size_t steps = 720;
  std::uint64_t seed = 0;
};

int
cmd_distance(const DistanceArgs& a, std::ostream& out)
{
  ObjectModel model = read_model_json(a.model);
  Pose p1 = pose_for_model(model, parse_pose_record(a.pose_a));
  Pose p2 = pose_for_model(model, parse_pose_record(a.pose_b));
  double d = distance(model, p1, p2);
  out << "distance " << format_double(d) << "\n";
  if (!a.oracle_mesh.empty()) {
    SamplingPlan plan;
    plan.surface_samples = a.samples;
    plan.symmetry_steps = a.steps;
    plan.seed = a.seed;
    ObjData obj = read_obj(a.oracle_mesh);
    double o = model.dimension() == 2
                 ? distance_oracle(model, obj.polyline_mesh(), p1, p2, plan)
                 : distance_oracle(model, obj.triangle_mesh(), p1, p2, plan);
    out << "oracle " << format_double(o) << "\n";
    double gap = std::abs(d - o) / std::max(d, 1e-300);
    out << "relative_gap " << (d == o ? std::string("0") : format_double(gap))
        << "\n";
  }
  return kExitOk;
}

struct ClusterArgs
{
  std::string model;
  std::string votes;
  std::string radius = "auto";
  std::size_t max_modes = 20;
  double nms_radius = 0.0;
  std::size_t workers = 0;
  bool project_once = false;
  std::string out;
};

MeanShiftConfig
cluster_config(const std::string& radius,
               std::size_t max_modes,
               double nms_radius,
               std::size_t workers)
{
  MeanShiftConfig cfg;
  cfg.radius = parse_radius(radius);
  cfg.max_modes = max_modes;
  if (nms_radius > 0.0)
    cfg.nms_radius = nms_radius;
  else if (nms_radius < 0.0)
    fail(ErrorKind::InvalidInput, "suppression radius must be positive");
  cfg.workers = workers;
  return cfg;
}

int
cmd_cluster(const ClusterArgs& a, std::ostream& out)
{
  ObjectModel model = read_model_json(a.model);
  VoteSet votes = read_votes(model, a.votes);
  MeanShiftConfig cfg = cluster_config(a.radius, a.max_modes, a.nms_radius, a.workers);
  cfg.project_each_iteration = !a.project_once;
  report_radius(out, model, resolve_radius_detailed(model, cfg));
  auto modes = extract_modes(model, votes, cfg);

  out << "votes " << votes.poses.size() << ", modes " << modes.size() << "\n";
  out << std::left << std::setw(6) << "rank" << std::setw(14) << "score"
      << std::setw(9) << "support" << "pose\n";
  for (std::size_t i = 0; i < modes.size(); ++i)
    out << std::left << std::setw(6) << i + 1 << std::setw(14)
        << fmt(modes[i].score, 8) << std::setw(9) << modes[i].support
        << pose_text(modes[i].pose) << "\n";
  if (!a.out.empty()) {
    std::ostringstream s;
    write_modes_json(s, modes);
    write_text_file(a.out, s.str());
    out << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

struct SynthArgs
{
  std::string model;
  std::size_t instances = 3;
  std::size_t per_instance = 200;
  double rot_noise = 0.0;
  double trans_noise = 0.0;
  double outliers = 0.0;
  std::uint64_t seed = 0;
  std::string truths_in;
  std::string out;
  std::string truth_out;
};

int
cmd_synth(const SynthArgs& a, std::ostream& out)
{
  ObjectModel model = read_model_json(a.model);
  std::vector<Pose> truths;
  if (!a.truths_in.empty()) {
    truths = parse_poses_json(model, read_text_file(a.truths_in));
  } else {
    if (a.instances < 1)
      fail(ErrorKind::InvalidInput, "instances must be >= 1");
    double radius = resolve_radius(model, {});
    double separation = std::max(2.0 * model.lambda_frobenius(), 4.0 * radius);
    truths = synth_truths(model, a.instances,
                          separation * static_cast<double>(a.instances),
                          separation, a.seed);
  }
  SynthOptions opts;
  opts.per_instance = a.per_instance;
  opts.rot_noise = a.rot_noise;
  opts.trans_noise = a.trans_noise;
  opts.outlier_fraction = a.outliers;
  opts.seed = a.seed;
  VoteSet votes = synth_votes(model, truths, opts);

  std::string truth_path = a.truth_out;
  if (truth_path.empty()) {
    truth_path = a.out;
    if (truth_path.size() > 5 &&
        truth_path.compare(truth_path.size() - 5, 5, ".json") == 0)
      truth_path.resize(truth_path.size() - 5);
    truth_path += ".truth.json";
  }
  std::ostringstream v, t;
  write_votes_json(v, votes);
  write_poses_json(t, truths);
  write_text_file(a.out, v.str());
  write_text_file(truth_path, t.str());
  out << "wrote " << votes.poses.size() << " votes to " << a.out << "\n";
  out << "wrote " << truths.size() << " truths to " << truth_path << "\n";
  return kExitOk;
}

struct CompareArgs
{
  std::string model;
  std::string votes;
  std::string truths;
  std::string metric = "both";
  std::string radius = "auto";
  std::size_t max_modes = 20;
  std::size_t workers = 0;
};

int
cmd_compare(const CompareArgs& a, std::ostream& out)
{
  ObjectModel model = read_model_json(a.model);
  VoteSet votes = read_votes(model, a.votes);
  auto truths = parse_poses_json(model, read_text_file(a.truths));
  if (truths.empty())
    fail(ErrorKind::EmptyInput, "truth file holds no poses");
  if (a.metric != "proposed" && a.metric != "se3" && a.metric != "both")
    fail(ErrorKind::InvalidInput, "metric must be proposed, se3 or both");

  MeanShiftConfig cfg = cluster_config(a.radius, a.max_modes, 0.0, a.workers);
  RadiusChoice rc = resolve_radius_detailed(model, cfg);
  cfg.radius = rc.radius;
  report_radius(out, model, rc);
  const double match = 0.5 * rc.radius;

  out << std::left << std::setw(10) << "metric" << std::setw(15)
      << "coverage_rank" << std::setw(12) << "duplicates" << std::setw(18)
      << "first_spurious" << "modes\n";
  auto row = [&](const char* name, const ObjectModel& m) {
    auto modes = extract_modes(m, votes, cfg);
    auto rep = evaluate_modes(model, modes, truths, match);
    out << std::left << std::setw(10) << name << std::setw(15)
        << (rep.coverage_rank ? std::to_string(rep.coverage_rank)
                              : std::string("not covered"))
        << std::setw(12) << rep.duplicates << std::setw(18)
        << fmt(rep.first_spurious_relative, 4) << rep.modes << "\n";
  };
  if (a.metric != "se3")
    row("proposed", model);
  if (a.metric != "proposed")
    row("se3", se3_baseline_model(model, se3_default_scale(model)));
  out << "match: proposed pose distance < " << fmt(match, 6) << "; duplicates "
      << "counted in the top " << truths.size() << "\n";
  return kExitOk;
}

} // namespace

Symmetry
parse_symmetry_spec(const std::string& spec, const std::optional<Vec3>& axis)
{
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto no_arg = [&] {
    if (colon != std::string::npos)
      fail(ErrorKind::InvalidInput, "symmetry '" + head + "' takes no argument");
  };
  auto need_arg = [&] {
    if (arg.empty())
      fail(ErrorKind::InvalidInput, "symmetry '" + head + "' needs an argument");
  };
  Mat3 frame = axis ? rotation_from_z(axis->normalized()) : Mat3::Identity();

  if (head == "none") {
    no_arg();
    return Symmetry::none3d();
  }
  if (head == "spherical") {
    no_arg();
    return Symmetry::spherical();
  }
  if (head == "revolution" || head == "revolution-rotoreflection") {
    no_arg();
    return Symmetry::revolution(head == "revolution-rotoreflection", axis);
  }
  if (head == "finite") {
    need_arg();
    auto gens = parse_quaternion_list(read_text_file(arg));
    return Symmetry::finite(group_closure(gens));
  }
  if (head == "cyclic") {
    need_arg();
    return Symmetry::finite(
      cyclic_group(frame * Vec3::UnitZ(), parse_order(arg, spec)));
  }
  if (head == "dihedral") {
    need_arg();
    return Symmetry::finite(
      dihedral_group(parse_order(arg, spec)).conjugated(frame));
  }
  if (head == "octahedral") {
    no_arg();
    return Symmetry::finite(octahedral_group().conjugated(frame));
  }
  if (head == "circular2d") {
    no_arg();
    return Symmetry::circular2d();
  }
  if (head == "none2d") {
    no_arg();
    return Symmetry::none2d();
  }
  if (head == "cyclic2d") {
    need_arg();
    return Symmetry::cyclic2d(parse_order(arg, spec));
  }
  fail(ErrorKind::InvalidInput, "unknown symmetry spec '" + spec + "'");
}

int
run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Pose distances, averaging and mode seeking for rigid objects "
                "with symmetries",
                "posespace" };
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze-mesh", "Build an object model from an OBJ mesh");
  analyze->add_option("mesh", an.mesh, "OBJ file (faces for 3D, lines for 2D)")->required();
  analyze->add_option("-s,--symmetry", an.symmetry,
                      "none | spherical | revolution | revolution-rotoreflection | "
                      "finite:<quaternions.json> | cyclic:<n> | dihedral:<n> | "
                      "octahedral | circular2d | none2d | cyclic2d:<n>")
    ->required();
  analyze->add_option("--axis", an.axis, "revolution or cyclic axis x,y,z");
  analyze->add_option("--axis-point", an.axis_point, "point on the revolution axis x,y,z");
  analyze->add_option("--tolerance", an.tolerance,
                      "relative tolerance for the symmetry check")
    ->capture_default_str();
  analyze->add_option("-o,--out", an.out, "model JSON to write");

  DistanceArgs di;
  auto* dist = app.add_subcommand("distance", "Distance between two poses");
  dist->add_option("model", di.model, "model JSON")->required();
  dist->add_option("pose_a", di.pose_a, "w,x,y,z,tx,ty,tz")->required();
  dist->add_option("pose_b", di.pose_b, "w,x,y,z,tx,ty,tz")->required();
  dist->add_option("--oracle", di.oracle_mesh,
                   "source mesh: also estimate the distance by surface sampling");
  dist->add_option("--samples", di.samples, "surface samples")->capture_default_str();
  dist->add_option("--steps", di.steps, "rotations per continuous symmetry")
    ->capture_default_str();
  dist->add_option("--seed", di.seed, "sampling seed")->capture_default_str();

  ClusterArgs cl;
  auto* cluster = app.add_subcommand("cluster", "Extract pose modes from votes");
  cluster->add_option("model", cl.model, "model JSON")->required();
  cluster->add_option("votes", cl.votes, "votes JSON or CSV")->required();
  cluster->add_option("--radius", cl.radius, "auto or a length")->capture_default_str();
  cluster->add_option("--max-modes", cl.max_modes, "0 = unlimited")->capture_default_str();
  cluster->add_option("--nms-radius", cl.nms_radius, "default: the radius");
  cluster->add_option("--workers", cl.workers, "threads (0: POSESPACE_WORKERS or all cores)");
  cluster->add_flag("--project-once", cl.project_once,
                    "iterate in the embedding space, project after convergence");
  cluster->add_option("-o,--out", cl.out, "modes JSON to write");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate synthetic votes");
  synth->add_option("model", sy.model, "model JSON")->required();
  synth->add_option("--instances", sy.instances, "object instances")->capture_default_str();
  synth->add_option("--per-instance", sy.per_instance, "votes per instance")
    ->capture_default_str();
  synth->add_option("--rot-noise", sy.rot_noise, "rotation noise (radians)")
    ->capture_default_str();
  synth->add_option("--trans-noise", sy.trans_noise, "translation noise (length)")
    ->capture_default_str();
  synth->add_option("--outliers", sy.outliers, "outlier fraction in [0, 1)")
    ->capture_default_str();
  synth->add_option("--seed", sy.seed, "random seed")->capture_default_str();
  synth->add_option("--truths", sy.truths_in, "use these ground-truth poses");
  synth->add_option("-o,--out", sy.out, "votes JSON to write")->required();
  synth->add_option("--truth-out", sy.truth_out,
                    "ground-truth JSON (default: <out>.truth.json)");

  CompareArgs co;
  auto* compare = app.add_subcommand("compare", "Compare clustering under two metrics");
  compare->add_option("model", co.model, "model JSON")->required();
  compare->add_option("votes", co.votes, "votes JSON or CSV")->required();
  compare->add_option("truths", co.truths, "ground-truth JSON")->required();
  compare->add_option("--metric", co.metric, "proposed | se3 | both")->capture_default_str();
  compare->add_option("--radius", co.radius, "auto or a length")->capture_default_str();
  compare->add_option("--max-modes", co.max_modes, "0 = unlimited")->capture_default_str();
  compare->add_option("--workers", co.workers, "threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
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
    if (analyze->parsed())
      return cmd_analyze_mesh(an, out);
    if (dist->parsed())
      return cmd_distance(di, out);
    if (cluster->parsed())
      return cmd_cluster(cl, out);
    if (synth->parsed())
      return cmd_synth(sy, out);
    if (compare->parsed())
      return cmd_compare(co, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}

} // namespace posespace
