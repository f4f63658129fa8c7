#include "stlwb/stl/trace.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace stlwb::stl {

TraceSchema::TraceSchema(std::vector<std::string> names, std::vector<ChannelKind> kinds) {
  if (names.size() != kinds.size()) throw TraceError("schema names/kinds size mismatch");
  for (std::size_t i = 0; i < names.size(); ++i) add(names[i], kinds[i]);
}

std::size_t TraceSchema::add(const std::string& name, ChannelKind kind) {
  if (auto it = index_.find(name); it != index_.end()) {
    if (kinds_[it->second] != kind) throw TraceError("channel '" + name + "' declared with two kinds");
    return it->second;
  }
  names_.push_back(name);
  kinds_.push_back(kind);
  index_.emplace(name, names_.size() - 1);
  return names_.size() - 1;
}

std::optional<std::size_t> TraceSchema::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool TraceSchema::has_family(const std::string& head) const {
  const std::string prefix = head + "(";
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (kinds_[i] == ChannelKind::Boolean && names_[i].compare(0, prefix.size(), prefix) == 0)
      return true;
  return false;
}

Trace::Trace(std::shared_ptr<const TraceSchema> schema)
    : schema_(std::move(schema)), width_(schema_->size()) {}

void Trace::push_back(std::span<const double> record) {
  if (record.size() != width_) throw TraceError("record width does not match schema");
  data_.insert(data_.end(), record.begin(), record.end());
  ++length_;
}

void Trace::truncate(std::size_t length) {
  if (length > length_) throw TraceError("truncate beyond trace length");
  length_ = length;
  data_.resize(length * width_);
}

Trace Trace::prefix(std::size_t length) const {
  Trace p = *this;
  p.truncate(length);
  return p;
}

Trace make_trace(const std::vector<TraceRecord>& records) {
  auto schema = std::make_shared<TraceSchema>();
  for (const auto& r : records) {
    for (const auto& [k, v] : r.props) schema->add(k, ChannelKind::Boolean);
    for (const auto& [k, v] : r.signals) schema->add(k, ChannelKind::Numeric);
  }
  Trace trace(schema);
  std::vector<double> row(schema->size());
  for (const auto& r : records) {
    for (std::size_t c = 0; c < row.size(); ++c)
      row[c] = schema->kind(c) == ChannelKind::Boolean ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    for (const auto& [k, v] : r.props) row[*schema->find(k)] = v ? 1.0 : 0.0;
    for (const auto& [k, v] : r.signals) row[*schema->find(k)] = v;
    trace.push_back(row);
  }
  return trace;
}

Trace read_trace(std::istream& in) {
  std::vector<TraceRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw TraceError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) throw TraceError("trace line " + std::to_string(lineno) + ": expected an object");
    TraceRecord r;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_boolean()) r.props[it.key()] = it->get<bool>();
      else if (it->is_number()) r.signals[it.key()] = it->get<double>();
      else throw TraceError("trace line " + std::to_string(lineno) + ": '" + it.key() +
                            "' must be a boolean or a number");
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw TraceError("trace is empty");
  return make_trace(records);
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file '" + path + "'");
  return read_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  const auto& s = trace.schema();
  for (std::size_t t = 0; t < trace.size(); ++t) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < s.size(); ++c) {
      double v = trace.at(t, c);
      if (s.kind(c) == ChannelKind::Boolean) j[s.name(c)] = v != 0.0;
      else if (!std::isnan(v)) j[s.name(c)] = v;
    }
    out << j.dump() << '\n';
  }
}

}  // namespace stlwb::stl
