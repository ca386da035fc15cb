#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "malseq/error.hpp"
#include "malseq/eval.hpp"

namespace malseq {

namespace {

constexpr std::string_view kHeader =
    "kind,representation,alignment,classifier,regime,seed,accuracy,tp,tn,fp,fn,alignment_length,group_rows,"
    "warnings,error";
constexpr std::string_view kWarningSep = " | ";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw EvalError("bad number '" + s + "' in report");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw EvalError("bad integer '" + s + "' in report");
  return v;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_warnings(const std::vector<std::string>& ws) {
  std::string out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (i) out += kWarningSep;
    out += ws[i];
  }
  return out;
}

std::vector<std::string> split_warnings(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(kWarningSep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + kWarningSep.size();
  }
  return out;
}

// RFC 4180 records; quoted fields may hold commas, quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw EvalError("unterminated quoted field in report");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::string render_csv(const ResultTable& table) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : table.rows) {
    const auto& c = r.config;
    out += "row,";
    out += to_string(c.rep);
    out += ',';
    out += to_string(c.alignment);
    out += ',';
    out += to_string(c.classifier);
    out += ',';
    out += to_string(c.regime);
    out += ',' + std::to_string(c.seed) + ',' + format_double(r.accuracy);
    out += ',' + std::to_string(r.confusion.tp) + ',' + std::to_string(r.confusion.tn);
    out += ',' + std::to_string(r.confusion.fp) + ',' + std::to_string(r.confusion.fn);
    out += ',' + std::to_string(r.alignment_length) + ",,";
    out += quote(join_warnings(r.warnings));
    out += ',';
    if (r.error) out += quote("!" + *r.error);
    out += '\n';
  }
  for (const auto& g : table.by_representation) {
    out += "average_representation," + quote(g.key) + ",,,,," + format_double(g.accuracy) + ",,,,,," +
           std::to_string(g.rows) + ",,\n";
  }
  for (const auto& g : table.by_alignment) {
    out += "average_alignment,," + quote(g.key) + ",,,," + format_double(g.accuracy) + ",,,,,," +
           std::to_string(g.rows) + ",,\n";
  }
  if (table.overall) out += "average_overall,,,,,," + format_double(*table.overall) + ",,,,,,,,\n";
  return out;
}

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string render_markdown(const ResultTable& table) {
  std::ostringstream out;
  out << "# Classification accuracy\n\n";

  std::set<std::pair<Classifier, Regime>> column_set;
  std::set<RepId> reps;
  for (const auto& r : table.rows) {
    column_set.insert({r.config.classifier, r.config.regime});
    reps.insert(r.config.rep);
  }
  const std::vector<std::pair<Classifier, Regime>> columns(column_set.begin(), column_set.end());

  for (RepId rep : reps) {
    out << "## " << to_string(rep) << "\n\n| Alignment |";
    for (const auto& [c, g] : columns) out << ' ' << to_string(c) << ' ' << to_string(g) << " |";
    out << " Average |\n|---|";
    for (std::size_t i = 0; i <= columns.size(); ++i) out << "---|";
    out << '\n';

    // Cells average every successful row with that key (several seeds).
    std::map<AlignMethod, std::map<std::pair<Classifier, Regime>, std::pair<double, std::size_t>>> cells;
    std::map<AlignMethod, std::size_t> errors;
    for (const auto& r : table.rows) {
      if (r.config.rep != rep) continue;
      auto& by_col = cells[r.config.alignment];
      auto& acc = by_col[{r.config.classifier, r.config.regime}];
      if (r.error) {
        ++errors[r.config.alignment];
        continue;
      }
      acc.first += r.accuracy;
      ++acc.second;
    }
    std::vector<std::pair<double, std::size_t>> col_totals(columns.size());
    double block_sum = 0.0;
    std::size_t block_n = 0;
    for (const auto& [method, by_col] : cells) {
      out << "| " << to_string(method) << " |";
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t k = 0; k < columns.size(); ++k) {
        const auto it = by_col.find(columns[k]);
        if (it == by_col.end()) {
          out << " - |";
        } else if (it->second.second == 0) {
          out << " error |";
        } else {
          const double v = it->second.first / static_cast<double>(it->second.second);
          out << ' ' << cell(v) << " |";
          sum += it->second.first;
          n += it->second.second;
          col_totals[k].first += it->second.first;
          col_totals[k].second += it->second.second;
        }
      }
      out << ' ' << (n ? cell(sum / static_cast<double>(n)) : std::string("-")) << " |\n";
      block_sum += sum;
      block_n += n;
    }
    out << "| Average |";
    for (const auto& [s, n] : col_totals) out << ' ' << (n ? cell(s / static_cast<double>(n)) : std::string("-")) << " |";
    out << ' ' << (block_n ? cell(block_sum / static_cast<double>(block_n)) : std::string("-")) << " |\n\n";
  }

  out << "## Averages by alignment method\n\n| Alignment | Mean accuracy | Rows |\n|---|---|---|\n";
  for (const auto& g : table.by_alignment) out << "| " << g.key << " | " << cell(g.accuracy) << " | " << g.rows << " |\n";
  out << "\n## Averages by representation\n\n| Representation | Mean accuracy | Rows |\n|---|---|---|\n";
  for (const auto& g : table.by_representation) {
    out << "| " << g.key << " | " << cell(g.accuracy) << " | " << g.rows << " |\n";
  }
  if (table.overall) out << "\nOverall mean accuracy: " << cell(*table.overall) << '\n';

  bool errors_seen = false;
  for (const auto& r : table.rows) {
    if (!r.error) continue;
    if (!errors_seen) out << "\n## Errors\n\n";
    errors_seen = true;
    out << "- " << config_slug(r.config) << ": " << *r.error << '\n';
  }
  out << "\nThe benchmark condition (none) classifies the raw encoded signatures, right-padded with 'Y' to the "
         "longest signature's length.\n";
  return out.str();
}

}  // namespace

std::string render_report(const ResultTable& table, ReportFormat format) {
  return format == ReportFormat::csv ? render_csv(table) : render_markdown(table);
}

ResultTable parse_report_csv(std::string_view text) {
  const auto records = parse_csv(text);
  if (records.empty()) throw EvalError("empty report");
  {
    std::string header;
    for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
    if (header != kHeader) throw EvalError("unexpected report header");
  }
  ResultTable table;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 15) throw EvalError("report record " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
    const std::string& kind = f[0];
    if (kind == "row") {
      ResultRow r;
      r.config.rep = parse_rep_id(f[1]);
      r.config.alignment = parse_align_method(f[2]);
      r.config.classifier = parse_classifier(f[3]);
      r.config.regime = parse_regime(f[4]);
      r.config.seed = parse_u64(f[5]);
      r.accuracy = parse_double(f[6]);
      r.confusion.tp = parse_u64(f[7]);
      r.confusion.tn = parse_u64(f[8]);
      r.confusion.fp = parse_u64(f[9]);
      r.confusion.fn = parse_u64(f[10]);
      r.alignment_length = parse_u64(f[11]);
      r.warnings = split_warnings(f[13]);
      // A leading '!' separates "no error" from an empty error message.
      if (!f[14].empty()) {
        if (f[14].front() != '!') throw EvalError("bad error field in report");
        r.error = f[14].substr(1);
      }
      table.rows.push_back(std::move(r));
    } else if (kind == "average_representation") {
      table.by_representation.push_back({f[1], parse_double(f[6]), parse_u64(f[12])});
    } else if (kind == "average_alignment") {
      table.by_alignment.push_back({f[2], parse_double(f[6]), parse_u64(f[12])});
    } else if (kind == "average_overall") {
      table.overall = parse_double(f[6]);
    } else {
      throw EvalError("unknown record kind '" + kind + "'");
    }
  }
  return table;
}

}  // namespace malseq
