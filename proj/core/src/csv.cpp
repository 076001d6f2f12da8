#include <charconv>
#include <ostream>

#include "ircache/harness.hpp"

namespace ircache::harness {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

namespace {

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void write_metric(std::ostream& out, const SweepTable& table, const AggregateResult& row,
                  std::string_view metric, const MetricSummary& s) {
  out << table.experiment << ',' << to_string(row.arm) << ',' << table.variable << ','
      << format_number(row.variable) << ',' << metric << ',' << optional_number(s.mean)
      << ',' << optional_number(s.ci_half) << ',' << s.n << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const SweepTable& table) {
  out << "experiment,scenario,variable,value,metric,mean,ci_half,rounds\n";
  for (const auto& row : table.rows) {
    write_metric(out, table, row, "precision", row.precision);
    write_metric(out, table, row, "recall", row.recall);
    write_metric(out, table, row, "hit_rate", row.hit_rate);
    write_metric(out, table, row, "latency_ms", row.latency_ms);
  }
}

void write_rounds_csv(std::ostream& out, const SweepTable& table) {
  out << "experiment,round,scenario,variable,value,theta,places,cached,requests,"
         "precision,recall,hit_rate,mean_latency_ms\n";
  for (const auto& r : table.rounds) {
    out << table.experiment << ',' << r.round << ',' << to_string(r.arm) << ','
        << table.variable << ',' << format_number(r.variable) << ','
        << format_number(r.theta) << ',' << r.n_places << ',' << r.n_cached << ','
        << r.requests << ',' << format_number(r.precision) << ','
        << optional_number(r.recall) << ',' << format_number(r.hit_rate) << ','
        << format_number(r.mean_latency_ms) << '\n';
  }
}

}  // namespace ircache::harness
