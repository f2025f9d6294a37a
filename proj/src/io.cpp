#include "mpmd/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mpmd/errors.hpp"

namespace mpmd {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::BadConfig, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(Errc::BadConfig, "cannot write file: " + path);
  out << text;
}

namespace {

MetricSpace metric_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dist") || !j.contains("rates"))
    fail(Errc::BadConfig, "metric json: need 'dist' and 'rates'");
  std::vector<std::vector<double>> dist = j.at("dist").get<std::vector<std::vector<double>>>();
  std::vector<double> rates = j.at("rates").get<std::vector<double>>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return validate_metric(dist, rates, std::move(labels));
}

}  // namespace

MetricSpace metric_from_json_text(const std::string& text) {
  return metric_from_json(json::parse(text));
}

MetricSpace load_metric_file(const std::string& path) {
  return metric_from_json_text(read_text_file(path));
}

std::string metric_to_json(const MetricSpace& m) {
  json j;
  j["labels"] = m.labels;
  j["rates"] = m.rates;
  std::vector<std::vector<double>> dist(m.n(), std::vector<double>(m.n()));
  for (int i = 0; i < m.n(); ++i)
    for (int k = 0; k < m.n(); ++k) dist[i][k] = m.d(i, k);
  j["dist"] = dist;
  return j.dump(2);
}

SequenceFile load_sequence_file(const std::string& path) {
  json j = json::parse(read_text_file(path));
  if (!j.contains("metric") || !j.contains("requests"))
    fail(Errc::BadConfig, "sequence json: need 'metric' and 'requests'");
  SequenceFile out;
  if (j.at("metric").is_string()) {
    out.metric = load_metric_file(j.at("metric").get<std::string>());
  } else {
    out.metric = metric_from_json(j.at("metric"));
  }
  int id = 0;
  for (const auto& r : j.at("requests")) {
    out.seq.requests.push_back(
        Request{id++, r.at("loc").get<int>(), r.at("t").get<double>()});
  }
  check_sequence(out.seq, out.metric);
  return out;
}

std::string sequence_to_json(const MetricSpace& m, const RequestSequence& seq,
                             bool inline_metric) {
  json j;
  if (inline_metric) j["metric"] = json::parse(metric_to_json(m));
  json reqs = json::array();
  for (const Request& r : seq.requests) reqs.push_back({{"loc", r.location}, {"t", r.arrival}});
  j["requests"] = reqs;
  return j.dump(2);
}

std::string solution_to_json(const Solution& sol) {
  json j;
  json pairs = json::array();
  for (const MatchedPair& p : sol.pairs)
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"s", p.time}});
  json cleared = json::array();
  for (const ClearedRequest& c : sol.cleared) cleared.push_back({{"id", c.id}, {"t", c.time}});
  j["pairs"] = pairs;
  j["cleared"] = cleared;
  j["breakdown"] = {{"connection", sol.breakdown.connection},
                    {"delay", sol.breakdown.delay},
                    {"penalty", sol.breakdown.penalty},
                    {"total", sol.breakdown.total}};
  return j.dump(2);
}

DelaySpec delay_spec_from_string(const std::string& text) {
  if (text.rfind("table:", 0) == 0) {
    json j = json::parse(read_text_file(text.substr(6)));
    return DelaySpec::table(j.at("t").get<std::vector<double>>(),
                            j.at("f").get<std::vector<double>>());
  }
  return DelaySpec::parse(text);
}

}  // namespace mpmd
