#pragma once

#include <string>

#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/request.hpp"
#include "mpmd/solution.hpp"

namespace mpmd {

// Metric file: {"labels": [...], "dist": [[...]], "rates": [...]}
MetricSpace load_metric_file(const std::string& path);
MetricSpace metric_from_json_text(const std::string& text);
std::string metric_to_json(const MetricSpace& m);

// Sequence file: {"metric": <path or inline object>, "requests": [{"loc": i, "t": x}, ...]}
struct SequenceFile {
  MetricSpace metric;
  RequestSequence seq;
};
SequenceFile load_sequence_file(const std::string& path);
std::string sequence_to_json(const MetricSpace& m, const RequestSequence& seq,
                             bool inline_metric = true);

std::string solution_to_json(const Solution& sol);

DelaySpec delay_spec_from_string(const std::string& text);  // handles table:<path>

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mpmd
