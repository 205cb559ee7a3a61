// JSON Lines and CSV encodings for frames, labels and events.
//
// Frame record:  {"t": <int>, "probs": [<reals>]}
// Label record:  {"t": <int>, "label": <int 1..17>}
// Event record:  {"class_id": <int>, "t_start": <int>, "t_end": <int>}
//
// Readers report malformed input as Error(kParse) with the 1-based line number.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate::io {

std::string frame_to_json(const ProbabilityFrame& frame);
std::string label_to_json(const LabeledFrame& label);
std::string event_to_json(const AlertEvent& event);

ProbabilityFrame frame_from_json(std::string_view line);
LabeledFrame label_from_json(std::string_view line);
AlertEvent event_from_json(std::string_view line);

std::vector<ProbabilityFrame> read_frames(std::istream& in);
std::vector<LabeledFrame> read_labels(std::istream& in);
std::vector<AlertEvent> read_events(std::istream& in);

void write_frames(std::ostream& out, const std::vector<ProbabilityFrame>& frames);
void write_labels(std::ostream& out, const std::vector<LabeledFrame>& labels);
void write_events_jsonl(std::ostream& out, const std::vector<AlertEvent>& events);
// Header row "class_id,t_start,t_end" followed by one row per event.
void write_events_csv(std::ostream& out, const std::vector<AlertEvent>& events);
// Accepts either the JSONL or the CSV event encoding.
std::vector<AlertEvent> read_events_any(std::istream& in);

// File helpers; throw Error(kIo) when the file cannot be opened.
std::vector<ProbabilityFrame> read_frames_file(const std::filesystem::path& path);
std::vector<LabeledFrame> read_labels_file(const std::filesystem::path& path);
std::vector<AlertEvent> read_events_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

// RFC-4180 field quoting: quotes fields containing comma, quote, CR or LF.
std::string csv_field(std::string_view field);

}  // namespace alertgate::io
