#include "edg/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edg {

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

std::string table_header(TableKind kind) {
  return kind == TableKind::Convergence ? "# level nelems h1semi l2" : "# nu nelems h1semi l2";
}

std::string format_table(const Table& table) {
  if (table.rows.empty()) throw std::invalid_argument("table has no rows");
  std::ostringstream out;
  out << table_header(table.kind) << '\n';
  for (const TableRow& r : table.rows) {
    if (table.kind == TableKind::Convergence) {
      out << static_cast<long>(r.key);
    } else {
      out << format_real(r.key);
    }
    out << ' ' << r.nelems << ' ' << format_real(r.h1semi) << ' ' << format_real(r.l2) << '\n';
  }
  return out.str();
}

void emit_table(const Table& table, const std::string& path) {
  const std::string text = format_table(table);
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write table to " + path);
  file << text;
  if (!file) throw std::runtime_error("failed writing table to " + path);
}

Table parse_table_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("table is empty");
  Table table;
  if (line == table_header(TableKind::Convergence)) {
    table.kind = TableKind::Convergence;
  } else if (line == table_header(TableKind::Sweep)) {
    table.kind = TableKind::Sweep;
  } else {
    throw std::runtime_error("unrecognised table header: " + line);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string key, nelems, h1, l2, extra;
    if (!(fields >> key >> nelems >> h1 >> l2) || (fields >> extra))
      throw std::runtime_error("malformed table row: " + line);
    try {
      table.rows.push_back({std::stod(key), std::stol(nelems), std::stod(h1), std::stod(l2)});
    } catch (const std::exception&) {
      throw std::runtime_error("malformed table row: " + line);
    }
  }
  return table;
}

Table parse_table(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot read table " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_table_text(buf.str());
}

}  // namespace edg
