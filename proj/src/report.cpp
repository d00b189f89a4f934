#include "dcsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

namespace dcsim {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) throw ValidationError("unterminated quote in CSV line");
  return fields;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw ValidationError(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, const char* what) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw ValidationError(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string format_winners(const std::vector<MaybeEvent>& winners) {
  std::string out;
  for (std::size_t i = 0; i < winners.size(); ++i) {
    if (i) out += ';';
    out += format_event(winners[i]);
  }
  return out;
}

std::vector<MaybeEvent> parse_winners(std::string_view text) {
  std::vector<MaybeEvent> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(';', start);
    const auto item = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
    if (item == "nil") {
      out.push_back(std::nullopt);
    } else if (item.size() > 1 && item[0] == 'e') {
      out.push_back(static_cast<EventId>(parse_u64(item.substr(1), "event")));
    } else {
      throw ValidationError("bad winner '" + std::string(item) + "'");
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << csv_field(r.scenario_id) << ',' << to_string(r.variant) << ',' << to_string(r.semantics) << ','
        << r.c << ',' << r.u << ',' << format_winners(r.winners) << ',' << format_winners(r.truths) << ','
        << (r.correct ? "true" : "false") << ',' << r.gas_deploy << ',' << r.gas_total << ','
        << format_double(r.gas_per_consumer) << '\n';
  }
}

std::vector<ExperimentReport> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) throw ValidationError("missing report header");
  std::vector<ExperimentReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw ValidationError("report row has " + std::to_string(f.size()) + " fields");
    ExperimentReport r;
    r.scenario_id = f[0];
    r.variant = parse_variant(f[1]);
    r.semantics = parse_semantics(f[2]);
    r.c = parse_u64(f[3], "c");
    r.u = parse_u64(f[4], "u");
    r.winners = parse_winners(f[5]);
    r.truths = parse_winners(f[6]);
    if (f[7] != "true" && f[7] != "false") throw ValidationError("bad correct flag '" + f[7] + "'");
    r.correct = f[7] == "true";
    r.gas_deploy = parse_u64(f[8], "gas_deploy");
    r.gas_total = parse_u64(f[9], "gas_total");
    r.gas_per_consumer = parse_double(f[10], "gas_per_consumer");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<HeatmapCell> heatmap(const std::vector<ExperimentReport>& reports) {
  std::vector<HeatmapCell> cells;
  if (reports.empty()) return cells;
  const auto [lo, hi] = std::minmax_element(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return a.gas_per_consumer < b.gas_per_consumer;
  });
  const double min = lo->gas_per_consumer;
  const double span = hi->gas_per_consumer - min;
  for (const auto& r : reports) {
    cells.push_back({r.variant, r.c, r.u, r.gas_per_consumer, span > 0 ? (r.gas_per_consumer - min) / span : 0.0});
  }
  return cells;
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
  out << "variant,c,u,gas_per_consumer,normalized\n";
  for (const auto& cell : cells) {
    out << to_string(cell.variant) << ',' << cell.c << ',' << cell.u << ',' << format_double(cell.gas_per_consumer)
        << ',' << format_double(cell.normalized) << '\n';
  }
}

std::vector<CorrectnessRow> correctness_table(const std::vector<ExperimentReport>& reports) {
  struct Tally {
    std::uint64_t correct = 0;
    std::uint64_t total = 0;
  };
  std::map<OracleVariant, Tally> tally;
  std::map<Architecture, Semantics> semantics;
  for (const auto& r : reports) {
    auto& t = tally[r.variant];
    ++t.total;
    t.correct += r.correct ? 1 : 0;
    semantics[r.variant.architecture] = r.semantics;
  }
  const auto pct = [&](const OracleVariant& v) {
    const auto it = tally.find(v);
    if (it == tally.end() || it->second.total == 0) return -1.0;
    return 100.0 * static_cast<double>(it->second.correct) / static_cast<double>(it->second.total);
  };
  std::vector<CorrectnessRow> rows;
  // Baseline rows first, as in the usual presentation.
  for (const auto sem : {Semantics::ContinualBaseline, Semantics::TransactionDriven}) {
    for (const auto arch : kArchitectures) {
      const auto it = semantics.find(arch);
      if (it == semantics.end() || it->second != sem) continue;
      rows.push_back({sem, arch, pct({arch, false}), pct({arch, true})});
    }
  }
  return rows;
}

void write_correctness_csv(std::ostream& out, const std::vector<CorrectnessRow>& rows) {
  out << "semantics,oracle,regular,conditional\n";
  const auto cell = [](double v) { return v < 0 ? std::string() : format_double(v); };
  for (const auto& r : rows) {
    out << to_string(r.semantics) << ',' << to_string(r.architecture) << ',' << cell(r.regular) << ','
        << cell(r.conditional) << '\n';
  }
}

void write_receipts_log(std::ostream& out, const std::string& scenario_id, const std::vector<Receipt>& receipts) {
  for (const auto& r : receipts) {
    nlohmann::json logs = nlohmann::json::array();
    for (const auto& l : r.logs) {
      logs.push_back({{"source", l.source.value}, {"topic", l.topic}, {"payload", to_hex(l.payload)}});
    }
    nlohmann::json line = {
        {"scenario", scenario_id},
        {"step", r.mined_at},
        {"from", r.tx.from.value},
        {"to", r.tx.to.value},
        {"function", r.tx.function},
        {"payload_bytes", r.tx.payload.size()},
        {"gas_used", r.gas_used},
        {"status", r.ok() ? "ok" : "reverted"},
        {"logs", logs},
    };
    if (r.revert_reason) line["reason"] = *r.revert_reason;
    out << line.dump() << '\n';
  }
}

}  // namespace dcsim
