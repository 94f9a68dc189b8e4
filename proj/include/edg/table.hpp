#pragma once

#include <string>
#include <vector>

namespace edg {

enum class TableKind {
  Convergence,  // level nelems h1semi l2
  Sweep,        // nu nelems h1semi l2
};

struct TableRow {
  double key = 0.0;  // refinement level or viscosity
  long nelems = 0;
  double h1semi = 0.0;
  double l2 = 0.0;

  bool operator==(const TableRow&) const = default;
};

struct Table {
  TableKind kind = TableKind::Convergence;
  std::vector<TableRow> rows;
};

/// Header line of a table kind, including the leading '#'.
std::string table_header(TableKind kind);

/// Whitespace-separated text with one header line. Reals use scientific
/// notation with enough digits to round-trip exactly.
std::string format_table(const Table& table);

/// Writes format_table to `path`. Throws on empty tables (no file is
/// created) and on unwritable paths.
void emit_table(const Table& table, const std::string& path);

Table parse_table_text(const std::string& text);
Table parse_table(const std::string& path);

}  // namespace edg
