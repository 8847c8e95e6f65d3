#include "posespace/io.hpp"
#include "posespace/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace posespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Writer

std::string
format_double(double v)
{
  if (!std::isfinite(v))
    return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos)
    s += ".0";
  return s;
}

void
JsonWriter::indent()
{
  out_ << '\n' << std::string(2 * counts_.size(), ' ');
}

void
JsonWriter::separate()
{
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (counts_.empty())
    return;
  if (counts_.back()++ > 0)
    out_ << ',';
  indent();
}

JsonWriter&
JsonWriter::begin_object()
{
  separate();
  out_ << '{';
  counts_.push_back(0);
  return *this;
}

JsonWriter&
JsonWriter::close(char bracket)
{
  bool empty = counts_.back() == 0;
  counts_.pop_back();
  if (!empty)
    indent();
  out_ << bracket;
  return *this;
}

JsonWriter&
JsonWriter::end_object()
{
  return close('}');
}

JsonWriter&
JsonWriter::begin_array()
{
  separate();
  out_ << '[';
  counts_.push_back(0);
  return *this;
}

JsonWriter&
JsonWriter::end_array()
{
  return close(']');
}

JsonWriter&
JsonWriter::key(const std::string& name)
{
  separate();
  out_ << json(name).dump() << ": ";
  after_key_ = true;
  return *this;
}

JsonWriter&
JsonWriter::value(double v)
{
  separate();
  out_ << format_double(v);
  return *this;
}

JsonWriter&
JsonWriter::value(long long v)
{
  separate();
  out_ << v;
  return *this;
}

JsonWriter&
JsonWriter::value(bool v)
{
  separate();
  out_ << (v ? "true" : "false");
  return *this;
}

JsonWriter&
JsonWriter::value(const std::string& v)
{
  separate();
  out_ << json(v).dump();
  return *this;
}

JsonWriter&
JsonWriter::null()
{
  separate();
  out_ << "null";
  return *this;
}

void
JsonWriter::finish()
{
  out_ << '\n';
}

// ---------------------------------------------------------------------------
// Files

std::string
read_text_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void
write_text_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << content;
  if (!out)
    fail(ErrorKind::Io, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Poses

namespace {

json
parse_json(const std::string& text, const char* what)
{
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed ") + what + ": " + e.what());
  }
}

double
number(const json& j, const char* what)
{
  if (!j.is_number())
    fail(ErrorKind::InvalidInput, std::string(what) + " must be a number");
  double v = j.get<double>();
  if (!std::isfinite(v))
    fail(ErrorKind::InvalidInput, std::string(what) + " must be finite");
  return v;
}

const json&
member(const json& j, const char* name)
{
  if (!j.is_object() || !j.contains(name))
    fail(ErrorKind::InvalidInput, std::string("missing field '") + name + "'");
  return j.at(name);
}

std::vector<double>
numbers(const json& j, std::size_t n, const char* what)
{
  if (!j.is_array() || j.size() != n)
    fail(ErrorKind::InvalidInput,
         std::string(what) + " must be an array of " + std::to_string(n) +
           " numbers");
  std::vector<double> out;
  for (const auto& e : j)
    out.push_back(number(e, what));
  return out;
}

Mat3
quaternion_matrix(const json& j)
{
  auto q = numbers(j, 4, "quaternion");
  return quat_to_matrix({ q[0], q[1], q[2], q[3] });
}

RigidTransform
transform_from_json(const json& j)
{
  Mat3 r = quaternion_matrix(member(j, "quaternion"));
  auto t = numbers(member(j, "translation"), 3, "translation");
  return RigidTransform(r, Vec3(t[0], t[1], t[2]));
}

void
write_quaternion(JsonWriter& w, const Mat3& r)
{
  UnitQuaternion q = matrix_to_quat(r);
  w.begin_array().value(q.w).value(q.x).value(q.y).value(q.z).end_array();
}

void
write_vec3(JsonWriter& w, const Vec3& v)
{
  w.begin_array().value(v.x()).value(v.y()).value(v.z()).end_array();
}

void
write_pose(JsonWriter& w, const Pose& p)
{
  w.begin_object();
  w.key("quaternion");
  write_quaternion(w, p.rotation());
  w.key("translation");
  write_vec3(w, p.translation());
  w.end_object();
}

double
parse_number(const std::string& field, const std::string& context)
{
  std::string s = field;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
    ++start;
  s = s.substr(start);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    fail(ErrorKind::InvalidInput, "bad number '" + field + "' in " + context);
  return v;
}

std::vector<std::string>
split(const std::string& line, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep))
    out.push_back(cur);
  if (!line.empty() && line.back() == sep)
    out.emplace_back();
  return out;
}

} // namespace

RigidTransform
parse_pose_record(const std::string& text)
{
  auto fields = split(text, ',');
  if (fields.size() != 7)
    fail(ErrorKind::InvalidInput,
         "pose record needs 7 comma-separated numbers w,x,y,z,tx,ty,tz");
  double v[7];
  for (int i = 0; i < 7; ++i)
    v[i] = parse_number(fields[i], "pose record");
  return RigidTransform(quat_to_matrix({ v[0], v[1], v[2], v[3] }),
                        Vec3(v[4], v[5], v[6]));
}

Pose
pose_for_model(const ObjectModel& model, const RigidTransform& t)
{
  if (model.dimension() == 3)
    return Pose(t);
  const Mat3& r = t.rotation;
  double off = std::abs(r(0, 2)) + std::abs(r(1, 2)) + std::abs(r(2, 0)) +
               std::abs(r(2, 1)) + std::abs(r(2, 2) - 1.0);
  if (off > 1e-6)
    fail(ErrorKind::InvalidInput, "planar pose must rotate about e_z");
  if (std::abs(t.translation.z()) > 1e-9 * (1.0 + t.translation.norm()))
    fail(ErrorKind::InvalidInput, "planar pose must have a zero z translation");
  return Pose::planar(std::atan2(r(1, 0), r(0, 0)), t.translation.x(),
                      t.translation.y());
}

// ---------------------------------------------------------------------------
// Model

void
write_model_json(std::ostream& out, const ObjectModel& model)
{
  JsonWriter w(out);
  w.begin_object();
  w.key("dimension").value(model.dimension());
  w.key("symmetry_class").value(to_string(model.kind()));
  w.key("group_quaternions").begin_array();
  if (model.kind() == SymmetryClass::Finite)
    for (const auto& g : model.group().elements())
      write_quaternion(w, g);
  w.end_array();
  w.key("cyclic_order").value(model.cyclic_order());
  w.key("lambda_matrix").begin_array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      w.value(model.lambda_matrix()(r, c));
  w.end_array();
  w.key("lambda_eigenvalues").begin_array();
  for (double e : model.lambda_eigenvalues())
    w.value(e);
  w.end_array();
  w.key("lambda_r").value(model.lambda_r());
  w.key("lambda_z").value(model.lambda_z());
  w.key("lambda").value(model.lambda());
  w.key("surface_area").value(model.surface_area());
  w.key("T").value(model.separation());
  w.key("symmetry_residual").value(model.symmetry_residual());
  w.key("canonical_transform").begin_object();
  w.key("quaternion");
  write_quaternion(w, model.canonical_transform().rotation);
  w.key("translation");
  write_vec3(w, model.canonical_transform().translation);
  w.end_object();
  w.end_object();
  w.finish();
}

ObjectModel
parse_model_json(const std::string& text)
{
  json j = parse_json(text, "model");
  if (!j.is_object())
    fail(ErrorKind::InvalidInput, "model must be a JSON object");
  const json& cls = member(j, "symmetry_class");
  if (!cls.is_string())
    fail(ErrorKind::InvalidInput, "symmetry_class must be a string");

  Symmetry sym;
  switch (symmetry_class_from_string(cls.get<std::string>())) {
    case SymmetryClass::Spherical:
      sym = Symmetry::spherical();
      break;
    case SymmetryClass::Revolution:
      sym = Symmetry::revolution(false);
      break;
    case SymmetryClass::RevolutionRotoreflection:
      sym = Symmetry::revolution(true);
      break;
    case SymmetryClass::None3D:
      sym = Symmetry::none3d();
      break;
    case SymmetryClass::Finite: {
      const json& qs = member(j, "group_quaternions");
      if (!qs.is_array() || qs.empty())
        fail(ErrorKind::InvalidInput, "group_quaternions must be a nonempty array");
      std::vector<Mat3> els;
      for (const auto& q : qs)
        els.push_back(quaternion_matrix(q));
      sym = Symmetry::finite(validate_symmetry_group(els, 1e-9));
      break;
    }
    case SymmetryClass::Circular2D:
      sym = Symmetry::circular2d();
      break;
    case SymmetryClass::None2D:
      sym = Symmetry::none2d();
      break;
    case SymmetryClass::Cyclic2D: {
      const json& n = member(j, "cyclic_order");
      if (!n.is_number_integer())
        fail(ErrorKind::InvalidInput, "cyclic_order must be an integer");
      sym = Symmetry::cyclic2d(n.get<int>());
      break;
    }
  }

  auto l = numbers(member(j, "lambda_matrix"), 9, "lambda_matrix");
  Mat3 lambda;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      lambda(r, c) = l[3 * r + c];
  double area = j.contains("surface_area")
                  ? number(j.at("surface_area"), "surface_area")
                  : 1.0;
  double residual = j.contains("symmetry_residual") &&
                        !j.at("symmetry_residual").is_null()
                      ? number(j.at("symmetry_residual"), "symmetry_residual")
                      : 0.0;
  RigidTransform canonical;
  if (j.contains("canonical_transform"))
    canonical = transform_from_json(j.at("canonical_transform"));
  return ObjectModel::restore(sym, lambda, area, canonical, residual);
}

ObjectModel
read_model_json(const std::string& path)
{
  return parse_model_json(read_text_file(path));
}

std::vector<Mat3>
parse_quaternion_list(const std::string& text)
{
  json j = parse_json(text, "quaternion list");
  const json& list = j.is_object() ? member(j, "quaternions") : j;
  if (!list.is_array() || list.empty())
    fail(ErrorKind::InvalidInput, "quaternion list must be a nonempty array");
  std::vector<Mat3> out;
  for (const auto& q : list)
    out.push_back(quaternion_matrix(q));
  return out;
}

// ---------------------------------------------------------------------------
// Votes, poses, modes

namespace {

VoteSet
parse_votes_csv(const ObjectModel& model, const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  std::size_t columns = 0;
  std::size_t lineno = 0;
  VoteSet out;
  bool weighted = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    auto fields = split(line, ',');
    if (columns == 0) {
      if (fields.size() != 7 && fields.size() != 8)
        fail(ErrorKind::InvalidInput,
             "vote CSV header must be w,x,y,z,tx,ty,tz[,weight]");
      columns = fields.size();
      weighted = columns == 8;
      continue;
    }
    if (fields.size() != columns)
      fail(ErrorKind::InvalidInput,
           "vote CSV line " + std::to_string(lineno) + " has " +
             std::to_string(fields.size()) + " fields, expected " +
             std::to_string(columns));
    std::string ctx = "vote CSV line " + std::to_string(lineno);
    double v[8];
    for (std::size_t i = 0; i < columns; ++i)
      v[i] = parse_number(fields[i], ctx);
    RigidTransform t(quat_to_matrix({ v[0], v[1], v[2], v[3] }),
                     Vec3(v[4], v[5], v[6]));
    out.poses.push_back(pose_for_model(model, t));
    if (weighted)
      out.weights.push_back(v[7]);
  }
  return out;
}

} // namespace

VoteSet
parse_votes(const ObjectModel& model, const std::string& text)
{
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    fail(ErrorKind::EmptyInput, "vote file is empty");
  VoteSet out;
  if (text[first] == '{' || text[first] == '[') {
    json j = parse_json(text, "votes");
    const json& list = j.is_object() ? member(j, "votes") : j;
    if (!list.is_array())
      fail(ErrorKind::InvalidInput, "votes must be an array");
    bool any_weight = false;
    for (const auto& v : list)
      any_weight = any_weight || (v.is_object() && v.contains("weight"));
    for (const auto& v : list) {
      out.poses.push_back(pose_for_model(model, transform_from_json(v)));
      if (any_weight)
        out.weights.push_back(v.contains("weight") ? number(v.at("weight"), "weight")
                                                   : 1.0);
    }
  } else {
    out = parse_votes_csv(model, text);
  }
  if (out.poses.empty())
    fail(ErrorKind::EmptyInput, "vote file holds no votes");
  out.validate();
  return out;
}

VoteSet
read_votes(const ObjectModel& model, const std::string& path)
{
  return parse_votes(model, read_text_file(path));
}

void
write_votes_json(std::ostream& out, const VoteSet& votes)
{
  JsonWriter w(out);
  w.begin_object().key("votes").begin_array();
  for (std::size_t i = 0; i < votes.poses.size(); ++i) {
    w.begin_object();
    w.key("quaternion");
    write_quaternion(w, votes.poses[i].rotation());
    w.key("translation");
    write_vec3(w, votes.poses[i].translation());
    w.key("weight").value(votes.weight(i));
    w.end_object();
  }
  w.end_array().end_object();
  w.finish();
}

void
write_poses_json(std::ostream& out, const std::vector<Pose>& poses)
{
  JsonWriter w(out);
  w.begin_object().key("poses").begin_array();
  for (const auto& p : poses)
    write_pose(w, p);
  w.end_array().end_object();
  w.finish();
}

std::vector<Pose>
parse_poses_json(const ObjectModel& model, const std::string& text)
{
  json j = parse_json(text, "poses");
  const json& list = j.is_object() ? member(j, "poses") : j;
  if (!list.is_array())
    fail(ErrorKind::InvalidInput, "poses must be an array");
  std::vector<Pose> out;
  for (const auto& p : list)
    out.push_back(pose_for_model(model, transform_from_json(p)));
  return out;
}

void
write_modes_json(std::ostream& out, const std::vector<Mode>& modes)
{
  JsonWriter w(out);
  w.begin_array();
  for (const auto& m : modes) {
    w.begin_object();
    w.key("pose");
    write_pose(w, m.pose);
    w.key("score").value(m.score);
    w.key("support").value(m.support);
    w.end_object();
  }
  w.end_array();
  w.finish();
}

std::vector<Mode>
parse_modes_json(const ObjectModel& model, const std::string& text)
{
  json j = parse_json(text, "modes");
  if (!j.is_array())
    fail(ErrorKind::InvalidInput, "modes must be an array");
  std::vector<Mode> out;
  for (const auto& m : j) {
    Mode mode;
    mode.pose = pose_for_model(model, transform_from_json(member(m, "pose")));
    mode.score = number(member(m, "score"), "score");
    const json& s = member(m, "support");
    if (!s.is_number_unsigned())
      fail(ErrorKind::InvalidInput, "support must be a nonnegative integer");
    mode.support = s.get<std::size_t>();
    out.push_back(mode);
  }
  return out;
}

} // namespace posespace
