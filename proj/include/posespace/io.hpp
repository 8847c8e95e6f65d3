#pragma once

#include "posespace/modeseek.hpp"
#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace posespace {

/// Streaming JSON writer: two-space indentation, doubles at 17 significant
/// digits, non-finite doubles as null.
class JsonWriter
{
public:
  explicit JsonWriter(std::ostream& out)
    : out_(out)
  {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(std::size_t v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null();
  /// Closes the document with a newline.
  void finish();

private:
  JsonWriter& close(char bracket);
  void separate();
  void indent();

  std::ostream& out_;
  std::vector<std::size_t> counts_;
  bool after_key_ = false;
};

std::string
format_double(double v);

/// "w,x,y,z,tx,ty,tz". Throws InvalidInput.
RigidTransform
parse_pose_record(const std::string& text);

/// Pose of `model` from a rigid transformation; planar models require a
/// rotation about e_z and a zero z translation.
Pose
pose_for_model(const ObjectModel& model, const RigidTransform& t);

void
write_model_json(std::ostream& out, const ObjectModel& model);

ObjectModel
parse_model_json(const std::string& text);

ObjectModel
read_model_json(const std::string& path);

/// JSON array of [w, x, y, z] quaternions, or an object whose
/// "quaternions" member is one.
std::vector<Mat3>
parse_quaternion_list(const std::string& text);

/// JSON {"votes": [{quaternion, translation, weight}]} or CSV with the
/// header w,x,y,z,tx,ty,tz[,weight]. Detected from the content.
VoteSet
parse_votes(const ObjectModel& model, const std::string& text);

VoteSet
read_votes(const ObjectModel& model, const std::string& path);

void
write_votes_json(std::ostream& out, const VoteSet& votes);

void
write_poses_json(std::ostream& out, const std::vector<Pose>& poses);

std::vector<Pose>
parse_poses_json(const ObjectModel& model, const std::string& text);

void
write_modes_json(std::ostream& out, const std::vector<Mode>& modes);

std::vector<Mode>
parse_modes_json(const ObjectModel& model, const std::string& text);

/// Whole file as a string; throws Io.
std::string
read_text_file(const std::string& path);

/// Writes through a temporary string; throws Io.
void
write_text_file(const std::string& path, const std::string& content);

} // namespace posespace
