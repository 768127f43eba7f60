#include "pif/csv.hpp"

#include <charconv>
#include <istream>
#include <set>

#include "pif/errors.hpp"

namespace pif {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& s, const char* what, std::int64_t line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string(what) + ": not a number: '" + s + "'", line);
  return v;
}

int parse_int(const std::string& s, const char* what, std::int64_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string(what) + ": not an integer: '" + s + "'", line);
  return v;
}

// Reads line by line; strips a trailing CR; skips nothing else.
class CsvReader {
public:
  CsvReader(std::istream& in, const std::string& expected_header) : in_(in) {
    std::string header;
    if (!std::getline(in_, header)) throw ParseError("empty document");
    ++line_no_;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != expected_header)
      throw ParseError("header must be '" + expected_header + "', got '" + header + "'",
                       line_no_);
    n_fields_ = split_fields(expected_header).size();
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError("blank line", line_no_);
    fields = split_fields(line);
    if (fields.size() != n_fields_)
      throw ParseError("expected " + std::to_string(n_fields_) + " fields, got " +
                       std::to_string(fields.size()), line_no_);
    return true;
  }

  std::int64_t line() const { return line_no_; }

private:
  std::istream& in_;
  std::int64_t line_no_ = 0;
  size_t n_fields_ = 0;
};

}  // namespace

std::vector<RatingRecord> read_ratings_csv(std::istream& in) {
  CsvReader reader(in, "participant_id,task,scenario_id,rating");
  std::vector<RatingRecord> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    RatingRecord r;
    r.participant_id = f[0];
    r.task = f[1];
    r.scenario_id = f[2];
    r.rating = parse_int(f[3], "rating", reader.line());
    if (r.participant_id.empty() || r.task.empty() || r.scenario_id.empty())
      throw ParseError("empty identifier field", reader.line());
    if (r.rating < 1 || r.rating > 5)
      throw ParseError("rating must be 1..5, got " + f[3], reader.line());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ConditionRow> read_conditions_csv(std::istream& in) {
  CsvReader reader(in, "task,scenario_id,delay_ms,stall_count,avg_stall_ms,interaction_ms");
  std::vector<ConditionRow> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ConditionRow row;
    row.task = f[0];
    row.scenario_id = f[1];
    if (row.task.empty() || row.scenario_id.empty())
      throw ParseError("empty identifier field", reader.line());
    row.condition.delay_ms = parse_double(f[2], "delay_ms", reader.line());
    row.condition.stall_count = parse_int(f[3], "stall_count", reader.line());
    row.condition.avg_stall_ms = parse_double(f[4], "avg_stall_ms", reader.line());
    row.condition.interaction_ms = parse_double(f[5], "interaction_ms", reader.line());
    try {
      validate_condition(row.condition);
    } catch (const InputError& e) {
      throw ParseError(e.what(), reader.line());
    }
    if (!seen.insert({row.task, row.scenario_id}).second)
      throw ParseError("duplicate condition for (" + row.task + ", " + row.scenario_id + ")",
                       reader.line());
    out.push_back(std::move(row));
  }
  return out;
}

Dataset read_xy_csv(std::istream& in) {
  CsvReader reader(in, "x,y");
  Dataset d;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const double x = parse_double(f[0], "x", reader.line());
    const double y = parse_double(f[1], "y", reader.line());
    d.points.emplace_back(x, y);
  }
  return d;
}

std::vector<WeightsRecord> read_weights_csv(std::istream& in) {
  CsvReader reader(in, "qd,qs,mos");
  std::vector<WeightsRecord> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    WeightsRecord r;
    r.qd = parse_double(f[0], "qd", reader.line());
    r.qs = parse_double(f[1], "qs", reader.line());
    r.mos = parse_double(f[2], "mos", reader.line());
    out.push_back(r);
  }
  return out;
}

}  // namespace pif
