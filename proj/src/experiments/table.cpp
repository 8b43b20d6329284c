#include "ionjc/experiments.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <ostream>

namespace ionjc {

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const std::string& timestamp) {
  out << "# " << table.title << '\n';
  if (!timestamp.empty()) out << "# generated " << timestamp << '\n';
  for (const std::string& note : table.notes) out << "# " << note << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_escape(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table, const std::string& timestamp) {
  nlohmann::ordered_json doc;
  doc["title"] = table.title;
  if (!timestamp.empty()) doc["generated"] = timestamp;
  doc["notes"] = table.notes;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      std::visit([&](const auto& v) { obj[table.columns[i]] = v; }, row[i]);
    }
    rows.push_back(obj);
  }
  doc["rows"] = rows;
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const Table& table, OutputFormat format, const std::string& timestamp) {
  if (format == OutputFormat::csv) write_csv(out, table, timestamp);
  else write_json(out, table, timestamp);
}

}  // namespace ionjc
