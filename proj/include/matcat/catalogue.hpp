#pragma once

// Catalogue file, property table and a small conjunctive query engine.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "matcat/matroid.hpp"
#include "matcat/properties.hpp"

namespace matcat {

inline constexpr int kCatalogueVersion = 1;
inline constexpr int kPropertyVersion = 1;

/// Writes one line per matroid, `<id> <n> <rank> <hex,hex,...|->`, between a
/// version header and a footer carrying the record count and a CRC-32 of
/// everything above it. Matroids must already be sorted.
void write_catalogue(const std::vector<Matroid>& records, const std::string& path);
std::string format_catalogue(const std::vector<Matroid>& records);

/// Throws IoError, FormatError (with line number) or ChecksumMismatch.
std::vector<Matroid> read_catalogue(const std::string& path);
std::vector<Matroid> parse_catalogue(std::string_view text);

/// Splits a sorted catalogue into levels by ground-set size.
std::vector<std::vector<Matroid>> levels_by_size(const std::vector<Matroid>& records);

struct PropertyRow {
  std::uint64_t id = 0;
  int n = 0;
  int rank = 0;
  PropertyFlags flags;
  std::uint64_t aut_order = 1;
  int orbits = 0;
  int connectivity = 0;
  /// Representable over GF(2), GF(3), GF(4), GF(5).
  std::array<bool, 4> representable{};
  bool ingleton_violating = false;
  bool base_orderable = false;
  bool strongly_base_orderable = false;
  bool transversal = false;
  std::int64_t dual_id = -1;
  std::int64_t simplification_id = -1;
};

struct PropertyOptions {
  /// Ingleton search on at most this many elements; larger matroids use
  /// the single-element minor test against the violators found below.
  int ingleton_full_max_n = 8;
  bool parallel = true;
};

/// One row per record; ids are positions in the sorted catalogue, which
/// must contain every matroid on each size it covers.
std::vector<PropertyRow> build_property_table(const std::vector<Matroid>& records, const PropertyOptions& options = {});

enum class ColumnType { Bool, Int, IntOrInf };

struct Column {
  std::string name;
  ColumnType type;
};

/// Fixed column schema of the property TSV, in file order.
const std::vector<Column>& property_columns();

inline constexpr std::int64_t kInfValue = INT64_MAX;

/// Typed in-memory table; infinite connectivity is kInfValue.
struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<std::int64_t>> rows;

  /// Throws UnknownColumn.
  std::size_t column_index(std::string_view name) const;
};

Table to_table(const std::vector<PropertyRow>& rows);
std::string format_property_tsv(const Table& table);
void write_property_tsv(const Table& table, const std::string& path);
Table read_property_tsv(const std::string& path);

enum class CompareOp { Less, LessEqual, Equal, NotEqual, GreaterEqual, Greater };

struct Condition {
  std::string column;
  CompareOp op = CompareOp::Equal;
  std::string literal;
};

enum class Aggregate { Rows, Count, CountDistinct };

struct QueryExpr {
  std::vector<Condition> where;
  std::vector<std::string> group_by;
  Aggregate aggregate = Aggregate::Rows;
  std::string distinct_column;
};

/// Parses `col op literal [and col op literal ...]`; also accepts `&&` and
/// `,` as separators and the operators < <= = == != >= > plus the Unicode
/// forms. Throws ParseError with the 1-based character position.
std::vector<Condition> parse_conditions(std::string_view text);

struct QueryResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Throws UnknownColumn or TypeMismatch. Rows come out in id order, groups
/// in ascending key order.
QueryResult query(const Table& table, const QueryExpr& expr);
std::string format_result(const QueryResult& result);

/// Triples (n, r, b) with 0 <= r <= n <= max_n and 1 <= b <= C(n, r) that no
/// matroid in the table realises as (size, rank, number of bases).
std::vector<std::tuple<int, int, std::uint64_t>> missing_base_triples(const Table& table, int max_n);

}  // namespace matcat
