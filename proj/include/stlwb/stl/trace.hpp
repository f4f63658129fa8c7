#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace stlwb::stl {

enum class ChannelKind { Boolean, Numeric };

/// Ordered set of named channels shared by every record of a trace.
class TraceSchema {
 public:
  TraceSchema() = default;
  TraceSchema(std::vector<std::string> names, std::vector<ChannelKind> kinds);

  /// Appends a channel; returns its column. Re-adding an existing name returns
  /// the existing column if the kind matches.
  std::size_t add(const std::string& name, ChannelKind kind);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t col) const { return names_.at(col); }
  ChannelKind kind(std::size_t col) const { return kinds_.at(col); }
  std::optional<std::size_t> find(const std::string& name) const;
  /// True when some Boolean channel is an instance of the parameterized atom
  /// family `head`, i.e. is named `head(...)`.
  bool has_family(const std::string& head) const;

 private:
  std::vector<std::string> names_;
  std::vector<ChannelKind> kinds_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Discrete-time trace, one record per second. Boolean channels hold 0 or 1;
/// numeric channels hold arbitrary reals (NaN marks a missing sample).
class Trace {
 public:
  explicit Trace(std::shared_ptr<const TraceSchema> schema);

  const TraceSchema& schema() const { return *schema_; }
  std::shared_ptr<const TraceSchema> schema_ptr() const { return schema_; }
  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  double at(std::size_t t, std::size_t col) const { return data_[t * width_ + col]; }
  std::span<const double> record(std::size_t t) const {
    return {data_.data() + t * width_, width_};
  }

  /// Appends a record; values are given in schema column order.
  void push_back(std::span<const double> record);
  void reserve(std::size_t records) { data_.reserve(records * width_); }
  void truncate(std::size_t length);
  /// Copy of the first `length` records.
  Trace prefix(std::size_t length) const;

 private:
  std::shared_ptr<const TraceSchema> schema_;
  std::size_t width_;
  std::size_t length_ = 0;
  std::vector<double> data_;
};

/// One record as a flat map, used by the text format.
struct TraceRecord {
  std::map<std::string, bool> props;
  std::map<std::string, double> signals;
};

/// Builds a trace from flat records. The schema is the union of all keys;
/// a Boolean channel absent from a record reads false, an absent numeric
/// channel reads NaN.
Trace make_trace(const std::vector<TraceRecord>& records);

/// Trace file: one JSON object per line, e.g. {"lampOn": true, "x": 3}.
/// Booleans become propositions and numbers become signals. Blank lines and
/// lines starting with '#' are skipped.
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stlwb::stl
