// Copyright 2026 The smpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smpriv/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "smpriv/errors.hpp"
#include "smpriv/rng.hpp"

namespace smpriv {

namespace {

enum class Unit { Wh, KWh };

// Splits on LF, dropping a trailing CR per line and a final empty line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Wh parse_reading(std::string_view field, Unit unit, std::size_t line) {
  if (!field.empty() && field.front() == '-')
    throw ParseError(line, "negative reading '" + std::string(field) + "'");
  if (unit == Unit::KWh) {
    try {
      return kwh_to_wh(field);
    } catch (const InvalidInput& e) {
      throw ParseError(line, e.what());
    }
  }
  const auto v = parse_int(field);
  if (!v) throw ParseError(line, "reading '" + std::string(field) + "' is not an integer Wh value");
  return *v;
}

ReadingMatrix parse_with_unit(std::string_view text, std::optional<Unit> expected) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(0, "empty readings file");
  Unit unit;
  if (lines[0] == "meter_id,period,wh")
    unit = Unit::Wh;
  else if (lines[0] == "meter_id,period,kwh")
    unit = Unit::KWh;
  else
    throw ParseError(1, "expected header 'meter_id,period,wh' or 'meter_id,period,kwh'");
  if (expected && *expected != unit)
    throw ParseError(1, unit == Unit::Wh ? "expected a kwh column, found wh"
                                         : "expected a wh column, found kwh");

  std::vector<std::string> meter_ids;
  std::unordered_map<std::string, std::size_t> meter_index;
  std::map<std::int64_t, std::size_t> period_seen;
  struct Record {
    std::size_t meter;
    std::int64_t period;
    Wh value;
    std::size_t line;
  };
  std::vector<Record> records;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const std::size_t line_no = l + 1;
    if (lines[l].empty()) throw ParseError(line_no, "empty line");
    const auto fields = split(lines[l], ',');
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 comma-separated fields");
    if (fields[0].empty()) throw ParseError(line_no, "empty meter_id");
    const auto period = parse_int(fields[1]);
    if (!period || *period < 0)
      throw ParseError(line_no, "period '" + std::string(fields[1]) + "' is not a non-negative integer");
    const Wh value = parse_reading(fields[2], unit, line_no);
    std::string id(fields[0]);
    auto [it, inserted] = meter_index.try_emplace(id, meter_ids.size());
    if (inserted) meter_ids.push_back(id);
    period_seen.try_emplace(*period, 0);
    records.push_back({it->second, *period, value, line_no});
  }
  if (records.empty()) throw ParseError(0, "no readings after header");

  std::size_t rank = 0;
  for (auto& [p, idx] : period_seen) idx = rank++;
  const std::size_t n = meter_ids.size(), t = period_seen.size();
  std::vector<Wh> cells(n * t, 0);
  std::vector<std::size_t> filled(n * t, 0);
  for (const Record& r : records) {
    const std::size_t cell = r.meter * t + period_seen[r.period];
    if (filled[cell] != 0)
      throw ParseError(r.line, "duplicate reading for meter '" + meter_ids[r.meter] + "', period " +
                                   std::to_string(r.period) + " (first on line " +
                                   std::to_string(filled[cell]) + ")");
    filled[cell] = r.line;
    cells[cell] = r.value;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [p, idx] : period_seen)
      if (filled[i * t + idx] == 0)
        throw ParseError(0, "missing reading for meter '" + meter_ids[i] + "', period " +
                                std::to_string(p));
  return ReadingMatrix(n, t, std::move(cells));
}

[[noreturn]] void bad_header(std::size_t line, std::string_view want) {
  throw ParseError(line, "expected '" + std::string(want) + "'");
}

std::int64_t count_field(std::string_view line, std::string_view key, std::size_t line_no) {
  const auto tok = tokens(line);
  if (tok.size() != 2 || tok[0] != key) bad_header(line_no, std::string(key) + " <count>");
  const auto v = parse_int(tok[1]);
  if (!v || *v < 0) throw ParseError(line_no, std::string(key) + " count must be a non-negative integer");
  return *v;
}

std::vector<std::int64_t> int_list(const std::vector<std::string_view>& tok, std::size_t from,
                                   std::size_t line_no) {
  std::vector<std::int64_t> out;
  for (std::size_t k = from; k < tok.size(); ++k) {
    const auto v = parse_int(tok[k]);
    if (!v) throw ParseError(line_no, "'" + std::string(tok[k]) + "' is not an integer");
    out.push_back(*v);
  }
  return out;
}

// Shared framing of the instance and permutation formats: returns the
// number of meters and hands each `period j ...` line's values to `row`.
template <typename Row>
std::size_t parse_framed(const std::vector<std::string_view>& lines, std::size_t header_lines,
                         Row row) {
  if (lines.size() < header_lines) throw ParseError(lines.size() + 1, "truncated header");
  const auto n = static_cast<std::size_t>(count_field(lines[0], "meters", 1));
  const auto t = static_cast<std::size_t>(count_field(lines[1], "periods", 2));
  if (n == 0) throw ParseError(1, "meters must be at least 1");
  if (lines.size() != header_lines + t)
    throw ParseError(0, "expected " + std::to_string(t) + " period lines, found " +
                            std::to_string(lines.size() - std::min(lines.size(), header_lines)));
  for (std::size_t j = 0; j < t; ++j) {
    const std::size_t line_no = header_lines + j + 1;
    const auto tok = tokens(lines[header_lines + j]);
    if (tok.size() < 2 || tok[0] != "period") bad_header(line_no, "period <j> <values...>");
    const auto idx = parse_int(tok[1]);
    if (!idx || *idx != static_cast<std::int64_t>(j + 1))
      throw ParseError(line_no, "expected period " + std::to_string(j + 1));
    auto values = int_list(tok, 2, line_no);
    if (values.size() != n)
      throw ParseError(line_no, "period " + std::to_string(j + 1) + " lists " +
                                    std::to_string(values.size()) + " values for " +
                                    std::to_string(n) + " meters");
    row(j, std::move(values), line_no);
  }
  return n;
}

void append_row(std::ostringstream& os, std::string_view key, const auto& values) {
  os << key;
  for (const auto& v : values) os << ' ' << v;
  os << '\n';
}

}  // namespace

Wh kwh_to_wh(std::string_view s) {
  const std::string shown(s);
  if (s.empty()) throw InvalidInput("empty kWh reading");
  const std::size_t dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw InvalidInput("kWh reading '" + shown + "' has no digits");
  auto all_digits = [](std::string_view d) {
    return std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac))
    throw InvalidInput("kWh reading '" + shown + "' is not a plain non-negative decimal");
  if (frac.size() > 3)
    throw InvalidInput("kWh reading '" + shown + "' has more than three decimals");

  constexpr Wh kMax = std::numeric_limits<Wh>::max();
  Wh wh = 0;
  for (char c : whole) {
    if (wh > (kMax - (c - '0')) / 10) throw InvalidInput("kWh reading '" + shown + "' overflows");
    wh = wh * 10 + (c - '0');
  }
  if (wh > kMax / 1000) throw InvalidInput("kWh reading '" + shown + "' overflows");
  wh *= 1000;
  Wh scale = 100;
  for (char c : frac) {
    wh += (c - '0') * scale;
    scale /= 10;
  }
  return wh;
}

ReadingMatrix parse_readings_csv(std::string_view text) { return parse_with_unit(text, Unit::Wh); }
ReadingMatrix parse_kwh_readings(std::string_view text) { return parse_with_unit(text, Unit::KWh); }
ReadingMatrix parse_readings(std::string_view text) { return parse_with_unit(text, std::nullopt); }

std::string write_readings_csv(const ReadingMatrix& matrix) {
  std::ostringstream os;
  os << "meter_id,period,wh\n";
  for (std::size_t i = 0; i < matrix.meters(); ++i)
    for (std::size_t j = 0; j < matrix.periods(); ++j)
      os << i + 1 << ',' << j + 1 << ',' << matrix.at(i, j) << '\n';
  return os.str();
}

ReadingMatrix select_submatrix(const ReadingMatrix& matrix, std::size_t meters,
                               std::size_t periods, std::uint64_t seed) {
  if (meters == 0 || periods == 0) throw InvalidInput("submatrix must be non-empty");
  if (meters > matrix.meters() || periods > matrix.periods())
    throw InvalidInput("requested " + std::to_string(meters) + "x" + std::to_string(periods) +
                       " submatrix of a " + std::to_string(matrix.meters()) + "x" +
                       std::to_string(matrix.periods()) + " matrix");
  Rng rng(seed);
  std::vector<std::size_t> pool(matrix.meters());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < meters; ++k)
    std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
  std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(meters));
  std::sort(chosen.begin(), chosen.end());
  const std::size_t start = rng.below(matrix.periods() - periods + 1);

  std::vector<Wh> cells;
  cells.reserve(meters * periods);
  for (std::size_t i : chosen)
    for (std::size_t j = 0; j < periods; ++j) cells.push_back(matrix.at(i, start + j));
  return ReadingMatrix(meters, periods, std::move(cells));
}

std::string write_instance(const AnonymizedInstance& inst) {
  std::ostringstream os;
  os << "meters " << inst.meters() << '\n' << "periods " << inst.periods() << '\n';
  append_row(os, "totals", inst.totals());
  for (std::size_t j = 0; j < inst.periods(); ++j)
    append_row(os, "period " + std::to_string(j + 1), inst.period(j));
  return os.str();
}

AnonymizedInstance parse_instance(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<std::vector<Wh>> periods;
  const std::size_t n = parse_framed(lines, 3, [&](std::size_t, std::vector<std::int64_t> v, std::size_t) {
    periods.push_back(std::move(v));
  });
  const auto tok = tokens(lines[2]);
  if (tok.empty() || tok[0] != "totals") bad_header(3, "totals <E_1> ... <E_n>");
  auto totals = int_list(tok, 1, 3);
  if (totals.size() != n)
    throw ParseError(3, "totals lists " + std::to_string(totals.size()) + " values for " +
                            std::to_string(n) + " meters");
  return AnonymizedInstance(std::move(periods), std::move(totals));
}

std::string write_permutations(const PermutationRecord& record) {
  std::ostringstream os;
  os << "meters " << record.meters() << '\n' << "periods " << record.periods() << '\n';
  for (std::size_t j = 0; j < record.periods(); ++j) {
    std::vector<std::size_t> one_based(record.period(j).begin(), record.period(j).end());
    for (auto& p : one_based) ++p;
    append_row(os, "period " + std::to_string(j + 1), one_based);
  }
  return os.str();
}

PermutationRecord parse_permutations(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<std::vector<std::size_t>> perms;
  parse_framed(lines, 2, [&](std::size_t, std::vector<std::int64_t> v, std::size_t line_no) {
    std::vector<std::size_t> row;
    for (auto p : v) {
      if (p < 1) throw ParseError(line_no, "positions are 1-based");
      row.push_back(static_cast<std::size_t>(p - 1));
    }
    perms.push_back(std::move(row));
  });
  return PermutationRecord(std::move(perms));
}

}  // namespace smpriv
