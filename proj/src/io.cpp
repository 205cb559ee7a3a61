#include "alertgate/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace alertgate::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

json parse_object(std::string_view line) {
  json j = json::parse(line.begin(), line.end());
  if (!j.is_object()) throw Error(ErrorCode::kParse, "record is not a JSON object");
  return j;
}

template <typename T, typename Decode>
std::vector<T> read_lines(std::istream& in, Decode decode) {
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      out.push_back(decode(line));
    } catch (const json::exception& e) {
      parse_fail(line_no, e.what());
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string frame_to_json(const ProbabilityFrame& frame) {
  json j;
  j["t"] = frame.t;
  j["probs"] = frame.probs;
  return j.dump();
}

std::string label_to_json(const LabeledFrame& label) {
  json j;
  j["t"] = label.t;
  j["label"] = label.label;
  return j.dump();
}

std::string event_to_json(const AlertEvent& event) {
  json j;
  j["class_id"] = event.class_id;
  j["t_start"] = event.t_start;
  j["t_end"] = event.t_end;
  return j.dump();
}

ProbabilityFrame frame_from_json(std::string_view line) {
  json j = parse_object(line);
  ProbabilityFrame f;
  f.t = j.at("t").get<FrameIndex>();
  f.probs = j.at("probs").get<std::vector<double>>();
  if (f.t < 0) throw Error(ErrorCode::kParse, "negative frame index");
  return f;
}

LabeledFrame label_from_json(std::string_view line) {
  json j = parse_object(line);
  LabeledFrame l;
  l.t = j.at("t").get<FrameIndex>();
  l.label = j.at("label").get<ClassId>();
  if (l.t < 0) throw Error(ErrorCode::kParse, "negative frame index");
  if (!is_valid_class(l.label)) {
    throw Error(ErrorCode::kParse, "label out of range: " + std::to_string(l.label));
  }
  return l;
}

AlertEvent event_from_json(std::string_view line) {
  json j = parse_object(line);
  AlertEvent e;
  e.class_id = j.at("class_id").get<ClassId>();
  e.t_start = j.at("t_start").get<FrameIndex>();
  e.t_end = j.at("t_end").get<FrameIndex>();
  if (e.t_start > e.t_end) throw Error(ErrorCode::kParse, "t_start > t_end");
  return e;
}

std::vector<ProbabilityFrame> read_frames(std::istream& in) {
  return read_lines<ProbabilityFrame>(in, frame_from_json);
}

std::vector<LabeledFrame> read_labels(std::istream& in) {
  return read_lines<LabeledFrame>(in, label_from_json);
}

std::vector<AlertEvent> read_events(std::istream& in) {
  return read_lines<AlertEvent>(in, event_from_json);
}

void write_frames(std::ostream& out, const std::vector<ProbabilityFrame>& frames) {
  for (const auto& f : frames) out << frame_to_json(f) << '\n';
}

void write_labels(std::ostream& out, const std::vector<LabeledFrame>& labels) {
  for (const auto& l : labels) out << label_to_json(l) << '\n';
}

void write_events_jsonl(std::ostream& out, const std::vector<AlertEvent>& events) {
  for (const auto& e : events) out << event_to_json(e) << '\n';
}

void write_events_csv(std::ostream& out, const std::vector<AlertEvent>& events) {
  out << "class_id,t_start,t_end\n";
  for (const auto& e : events) {
    out << e.class_id << ',' << e.t_start << ',' << e.t_end << '\n';
  }
}

std::vector<AlertEvent> read_events_any(std::istream& in) {
  std::string first;
  std::streampos start = in.tellg();
  while (std::getline(in, first) && is_blank(first)) {
  }
  in.clear();
  in.seekg(start);
  if (first.rfind("class_id,", 0) != 0) return read_events(in);

  std::vector<AlertEvent> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    AlertEvent e;
    char c1 = 0, c2 = 0;
    if (!(row >> e.class_id >> c1 >> e.t_start >> c2 >> e.t_end) || c1 != ',' || c2 != ',') {
      parse_fail(line_no, "malformed event row");
    }
    if (e.t_start > e.t_end) parse_fail(line_no, "t_start > t_end");
    out.push_back(e);
  }
  return out;
}

std::vector<ProbabilityFrame> read_frames_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_frames(in);
}

std::vector<LabeledFrame> read_labels_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_labels(in);
}

std::vector<AlertEvent> read_events_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_events_any(in);
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace alertgate::io
