#include "matcat/catalogue.hpp"

#include <algorithm>
#include <boost/crc.hpp>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "matcat/canonical.hpp"
#include "matcat/errors.hpp"

namespace matcat {

namespace {

constexpr std::string_view kCatalogueHeader = "# matcat-catalogue v";
constexpr std::string_view kFooterPrefix = "# end records=";

std::uint32_t crc32(std::string_view text) {
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  return crc.checksum();
}

std::string hex(Mask m) {
  char buf[8];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m, 16);
  return std::string(buf, end);
}

template <typename T>
bool parse_number(std::string_view text, T& value, int base = 10) {
  if (text.empty()) return false;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  return ec == std::errc() && end == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace

std::string format_catalogue(const std::vector<Matroid>& records) {
  std::string body;
  body += std::string(kCatalogueHeader) + std::to_string(kCatalogueVersion) + "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Matroid& m = records[i];
    if (i > 0 && !(records[i - 1] < m)) throw std::invalid_argument("catalogue records must be strictly sorted");
    body += std::to_string(i) + ' ' + std::to_string(m.size()) + ' ' + std::to_string(m.rank()) + ' ';
    if (m.hyperplanes().empty()) {
      body += '-';
    } else {
      for (std::size_t j = 0; j < m.hyperplanes().size(); ++j) {
        if (j > 0) body += ',';
        body += hex(m.hyperplanes()[j]);
      }
    }
    body += '\n';
  }
  char crc[9];
  std::snprintf(crc, sizeof crc, "%08x", crc32(body));
  return body + std::string(kFooterPrefix) + std::to_string(records.size()) + " crc32=" + crc + "\n";
}

void write_catalogue(const std::vector<Matroid>& records, const std::string& path) {
  write_file(path, format_catalogue(records));
}

std::vector<Matroid> parse_catalogue(std::string_view text) {
  std::vector<Matroid> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool footer_seen = false;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) throw FormatError(line_no + 1, "missing final newline");
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    if (footer_seen) throw FormatError(line_no, "content after footer");
    if (line_no == 1) {
      if (line.substr(0, kCatalogueHeader.size()) != kCatalogueHeader) throw FormatError(1, "missing catalogue header");
      int version = 0;
      if (!parse_number(line.substr(kCatalogueHeader.size()), version) || version != kCatalogueVersion) {
        throw FormatError(1, "unsupported catalogue version");
      }
    } else if (line.substr(0, kFooterPrefix.size()) == kFooterPrefix) {
      const auto fields = split(line.substr(kFooterPrefix.size()), ' ');
      std::size_t count = 0;
      std::uint32_t expected = 0;
      if (fields.size() != 2 || !parse_number(fields[0], count) || fields[1].substr(0, 6) != "crc32=" ||
          !parse_number(fields[1].substr(6), expected, 16)) {
        throw FormatError(line_no, "malformed footer");
      }
      if (count != out.size()) {
        throw ChecksumMismatch("footer counts " + std::to_string(count) + " records, file has " + std::to_string(out.size()));
      }
      const std::uint32_t actual = crc32(text.substr(0, pos));
      if (actual != expected) throw ChecksumMismatch("catalogue checksum mismatch");
      footer_seen = true;
    } else {
      const auto fields = split(line, ' ');
      std::size_t id = 0;
      int n = 0;
      int rank = 0;
      if (fields.size() != 4 || !parse_number(fields[0], id) || !parse_number(fields[1], n) ||
          !parse_number(fields[2], rank)) {
        throw FormatError(line_no, "expected `<id> <n> <rank> <hyperplanes>`");
      }
      if (id != out.size()) throw FormatError(line_no, "id " + std::to_string(id) + " out of sequence");
      if (n < 0 || n > kMaxGround || rank < 0 || rank > n) throw FormatError(line_no, "size or rank out of range");
      std::vector<Mask> hyps;
      if (fields[3] != "-") {
        for (std::string_view h : split(fields[3], ',')) {
          Mask m = 0;
          if (!parse_number(h, m, 16) || m >= bit(n)) throw FormatError(line_no, "bad hyperplane mask");
          if (!hyps.empty() && hyps.back() >= m) throw FormatError(line_no, "hyperplanes not strictly increasing");
          hyps.push_back(m);
        }
      }
      Matroid m = Matroid::trusted(n, rank, std::move(hyps));
      if (!out.empty() && !(out.back() < m)) throw FormatError(line_no, "record out of (n, rank, certificate) order");
      out.push_back(std::move(m));
    }
    pos = eol + 1;
  }
  if (!footer_seen) throw FormatError(line_no, "missing footer");
  return out;
}

std::vector<Matroid> read_catalogue(const std::string& path) { return parse_catalogue(read_file(path)); }

std::vector<std::vector<Matroid>> levels_by_size(const std::vector<Matroid>& records) {
  std::vector<std::vector<Matroid>> levels;
  for (const Matroid& m : records) {
    if (static_cast<int>(levels.size()) <= m.size()) levels.resize(m.size() + 1);
    levels[m.size()].push_back(m);
  }
  return levels;
}

std::vector<PropertyRow> build_property_table(const std::vector<Matroid>& records, const PropertyOptions& options) {
  const auto levels = levels_by_size(records);
  std::array<std::vector<std::vector<bool>>, 4> rep;
  for (int q = 2; q <= 5; ++q) rep[q - 2] = representability_table(levels, q, options.parallel);
  std::vector<PropertyRow> rows(records.size());
  auto find = [&](const Matroid& key) -> std::int64_t {
    const auto it = std::lower_bound(records.begin(), records.end(), key);
    return it != records.end() && *it == key ? it - records.begin() : -1;
  };
  std::vector<std::size_t> level_start(levels.size() + 1, 0);
  for (std::size_t k = 0; k < levels.size(); ++k) level_start[k + 1] = level_start[k] + levels[k].size();

  auto fill_row = [&](std::size_t i) {
    const Matroid& m = records[i];
    PropertyRow& row = rows[i];
    row.id = i;
    row.n = m.size();
    row.rank = m.rank();
    row.flags = classify(m);
    const Certificate cert = certificate(m);
    row.aut_order = cert.aut_order;
    row.orbits = cert.orbit_count();
    row.connectivity = connectivity(m);
    for (int q = 0; q < 4; ++q) row.representable[q] = rep[q][m.size()][i - level_start[m.size()]];
    if (m.size() <= options.ingleton_full_max_n) row.ingleton_violating = ingleton_violating(m).has_value();
    row.base_orderable = base_orderable(m);
    row.strongly_base_orderable = row.base_orderable && strongly_base_orderable(m);
    row.transversal = is_transversal(m);
    row.dual_id = find(canonical_form(dual(m)));
    row.simplification_id = find(canonical_form(simplify(m)));
  };
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) if (options.parallel)
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      fill_row(i);
    } catch (...) {
#pragma omp critical(property_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  // Larger sizes inherit Ingleton violation through single-element minors.
  for (int n = options.ingleton_full_max_n + 1; n < static_cast<int>(levels.size()); ++n) {
    std::vector<Matroid> violators;
    for (std::size_t i = level_start[n - 1]; i < level_start[n]; ++i) {
      if (rows[i].ingleton_violating) violators.push_back(records[i]);
    }
#pragma omp parallel for schedule(dynamic, 8) if (options.parallel)
    for (std::size_t i = level_start[n]; i < level_start[n + 1]; ++i) {
      rows[i].ingleton_violating = ingleton_violating_by_minors(records[i], violators);
    }
  }
  return rows;
}

const std::vector<Column>& property_columns() {
  static const std::vector<Column> columns = {
      {"id", ColumnType::Int},
      {"n", ColumnType::Int},
      {"rank", ColumnType::Int},
      {"simple", ColumnType::Bool},
      {"cosimple", ColumnType::Bool},
      {"paving", ColumnType::Bool},
      {"sparsePaving", ColumnType::Bool},
      {"uniform", ColumnType::Bool},
      {"minCircuit", ColumnType::Int},
      {"numBases", ColumnType::Int},
      {"numCircuits", ColumnType::Int},
      {"numCocircuits", ColumnType::Int},
      {"numFlats", ColumnType::Int},
      {"numHyperplanes", ColumnType::Int},
      {"numIndependent", ColumnType::Int},
      {"numCircuitHyperplanes", ColumnType::Int},
      {"numLoops", ColumnType::Int},
      {"numColoops", ColumnType::Int},
      {"autOrder", ColumnType::Int},
      {"orbits", ColumnType::Int},
      {"connectivity", ColumnType::IntOrInf},
      {"gf2", ColumnType::Bool},
      {"gf3", ColumnType::Bool},
      {"gf4", ColumnType::Bool},
      {"gf5", ColumnType::Bool},
      {"ingletonViolating", ColumnType::Bool},
      {"baseOrderable", ColumnType::Bool},
      {"stronglyBaseOrderable", ColumnType::Bool},
      {"transversal", ColumnType::Bool},
      {"dualId", ColumnType::Int},
      {"simplificationId", ColumnType::Int},
  };
  return columns;
}

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw UnknownColumn("unknown column `" + std::string(name) + "`");
}

Table to_table(const std::vector<PropertyRow>& rows) {
  Table table;
  table.columns = property_columns();
  table.rows.reserve(rows.size());
  for (const PropertyRow& r : rows) {
    const PropertyFlags& f = r.flags;
    auto i64 = [](auto v) { return static_cast<std::int64_t>(v); };
    table.rows.push_back({i64(r.id),
                          r.n,
                          r.rank,
                          f.simple,
                          f.cosimple,
                          f.paving,
                          f.sparse_paving,
                          f.uniform,
                          f.min_circuit_size,
                          i64(f.bases),
                          i64(f.circuits),
                          i64(f.cocircuits),
                          i64(f.flats),
                          i64(f.hyperplanes),
                          i64(f.independent_sets),
                          i64(f.circuit_hyperplanes),
                          f.loops,
                          f.coloops,
                          i64(r.aut_order),
                          r.orbits,
                          r.connectivity == kInfiniteConnectivity ? kInfValue : r.connectivity,
                          r.representable[0],
                          r.representable[1],
                          r.representable[2],
                          r.representable[3],
                          r.ingleton_violating,
                          r.base_orderable,
                          r.strongly_base_orderable,
                          r.transversal,
                          r.dual_id,
                          r.simplification_id});
  }
  return table;
}

std::string format_property_tsv(const Table& table) {
  std::string out = "# matcat-properties v" + std::to_string(kPropertyVersion) + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "\t" : "") + table.columns[c].name;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += '\t';
      out += row[c] == kInfValue && table.columns[c].type == ColumnType::IntOrInf ? "inf" : std::to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_property_tsv(const Table& table, const std::string& path) { write_file(path, format_property_tsv(table)); }

Table read_property_tsv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Table table;
  const std::string header = "# matcat-properties v" + std::to_string(kPropertyVersion);
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != header) throw FormatError(1, "missing or unsupported property table header");
      continue;
    }
    const auto fields = split(line, '\t');
    if (line_no == 2) {
      const auto& schema = property_columns();
      if (fields.size() != schema.size()) throw FormatError(2, "unexpected column count");
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] != schema[c].name) throw FormatError(2, "unexpected column `" + std::string(fields[c]) + "`");
      }
      table.columns = schema;
      continue;
    }
    if (fields.size() != table.columns.size()) throw FormatError(line_no, "wrong number of fields");
    std::vector<std::int64_t> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c] == "inf" && table.columns[c].type == ColumnType::IntOrInf) {
        row[c] = kInfValue;
      } else if (!parse_number(fields[c], row[c])) {
        throw FormatError(line_no, "bad value in column " + table.columns[c].name);
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (line_no < 2) throw FormatError(line_no, "truncated property table");
  return table;
}

// ------------------------------------------------------------------ queries

std::vector<Condition> parse_conditions(std::string_view text) {
  std::vector<Condition> out;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  };
  skip_space();
  if (i == text.size()) return out;
  while (true) {
    skip_space();
    const std::size_t col_start = i;
    while (i < text.size() && is_word(text[i])) ++i;
    if (i == col_start) throw ParseError(i + 1, "expected a column name");
    Condition cond;
    cond.column = std::string(text.substr(col_start, i - col_start));
    skip_space();
    static const std::pair<std::string_view, CompareOp> kOps[] = {
        {"<=", CompareOp::LessEqual}, {">=", CompareOp::GreaterEqual}, {"!=", CompareOp::NotEqual},
        {"==", CompareOp::Equal},     {"≤", CompareOp::LessEqual}, {"≥", CompareOp::GreaterEqual},
        {"≠", CompareOp::NotEqual}, {"<", CompareOp::Less},       {">", CompareOp::Greater},
        {"=", CompareOp::Equal}};
    bool matched = false;
    for (const auto& [token, op] : kOps) {
      if (text.substr(i, token.size()) == token) {
        cond.op = op;
        i += token.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(i + 1, "expected a comparison operator");
    skip_space();
    const std::size_t lit_start = i;
    while (i < text.size() && is_word(text[i])) ++i;
    if (i == lit_start) throw ParseError(i + 1, "expected a literal");
    cond.literal = std::string(text.substr(lit_start, i - lit_start));
    out.push_back(std::move(cond));
    skip_space();
    if (i == text.size()) break;
    if (text.substr(i, 2) == "&&") {
      i += 2;
    } else if (text[i] == ',') {
      ++i;
    } else if ((text.substr(i, 3) == "and" || text.substr(i, 3) == "AND") &&
               (i + 3 == text.size() || !is_word(text[i + 3]))) {
      i += 3;
    } else {
      throw ParseError(i + 1, "expected `and` between conditions");
    }
  }
  return out;
}

namespace {

std::int64_t literal_value(const Column& column, const std::string& literal) {
  if (column.type == ColumnType::Bool) {
    if (literal == "true" || literal == "1") return 1;
    if (literal == "false" || literal == "0") return 0;
    throw TypeMismatch("column `" + column.name + "` is boolean, got `" + literal + "`");
  }
  if (literal == "inf" && column.type == ColumnType::IntOrInf) return kInfValue;
  std::int64_t value = 0;
  if (!parse_number(std::string_view(literal), value)) {
    throw TypeMismatch("column `" + column.name + "` is an integer, got `" + literal + "`");
  }
  return value;
}

bool compare(std::int64_t a, CompareOp op, std::int64_t b) {
  switch (op) {
    case CompareOp::Less: return a < b;
    case CompareOp::LessEqual: return a <= b;
    case CompareOp::Equal: return a == b;
    case CompareOp::NotEqual: return a != b;
    case CompareOp::GreaterEqual: return a >= b;
    case CompareOp::Greater: return a > b;
  }
  return false;
}

std::string render(const Column& column, std::int64_t v) {
  if (column.type == ColumnType::IntOrInf && v == kInfValue) return "inf";
  return std::to_string(v);
}

}  // namespace

QueryResult query(const Table& table, const QueryExpr& expr) {
  struct Bound {
    std::size_t column;
    CompareOp op;
    std::int64_t value;
  };
  std::vector<Bound> bounds;
  for (const Condition& c : expr.where) {
    const std::size_t idx = table.column_index(c.column);
    bounds.push_back({idx, c.op, literal_value(table.columns[idx], c.literal)});
  }
  std::vector<std::size_t> group_cols;
  for (const auto& name : expr.group_by) group_cols.push_back(table.column_index(name));
  std::size_t distinct_col = 0;
  if (expr.aggregate == Aggregate::CountDistinct) distinct_col = table.column_index(expr.distinct_column);

  std::vector<const std::vector<std::int64_t>*> matching;
  for (const auto& row : table.rows) {
    if (std::all_of(bounds.begin(), bounds.end(), [&](const Bound& b) { return compare(row[b.column], b.op, b.value); })) {
      matching.push_back(&row);
    }
  }
  const std::size_t id_col = table.column_index("id");
  std::sort(matching.begin(), matching.end(), [&](auto* a, auto* b) { return (*a)[id_col] < (*b)[id_col]; });

  QueryResult result;
  if (expr.aggregate == Aggregate::Rows) {
    for (const auto& c : table.columns) result.columns.push_back(c.name);
    for (const auto* row : matching) {
      std::vector<std::string> cells;
      for (std::size_t c = 0; c < row->size(); ++c) cells.push_back(render(table.columns[c], (*row)[c]));
      result.rows.push_back(std::move(cells));
    }
    return result;
  }
  std::map<std::vector<std::int64_t>, std::set<std::int64_t>> distinct;
  std::map<std::vector<std::int64_t>, std::uint64_t> counts;
  for (const auto* row : matching) {
    std::vector<std::int64_t> key;
    for (std::size_t c : group_cols) key.push_back((*row)[c]);
    ++counts[key];
    if (expr.aggregate == Aggregate::CountDistinct) distinct[key].insert((*row)[distinct_col]);
  }
  if (group_cols.empty() && counts.empty()) counts[{}] = 0;
  for (std::size_t c : group_cols) result.columns.push_back(table.columns[c].name);
  result.columns.push_back(expr.aggregate == Aggregate::Count ? "count" : "distinct_" + expr.distinct_column);
  for (const auto& [key, count] : counts) {
    std::vector<std::string> cells;
    for (std::size_t g = 0; g < key.size(); ++g) cells.push_back(render(table.columns[group_cols[g]], key[g]));
    cells.push_back(std::to_string(expr.aggregate == Aggregate::Count ? count : distinct[key].size()));
    result.rows.push_back(std::move(cells));
  }
  return result;
}

std::string format_result(const QueryResult& result) {
  std::string out;
  for (std::size_t c = 0; c < result.columns.size(); ++c) out += (c ? "\t" : "") + result.columns[c];
  out += '\n';
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "\t" : "") + row[c];
    out += '\n';
  }
  return out;
}

std::vector<std::tuple<int, int, std::uint64_t>> missing_base_triples(const Table& table, int max_n) {
  const std::size_t n_col = table.column_index("n");
  const std::size_t r_col = table.column_index("rank");
  const std::size_t b_col = table.column_index("numBases");
  std::set<std::tuple<int, int, std::uint64_t>> seen;
  for (const auto& row : table.rows) {
    seen.emplace(static_cast<int>(row[n_col]), static_cast<int>(row[r_col]), static_cast<std::uint64_t>(row[b_col]));
  }
  std::vector<std::tuple<int, int, std::uint64_t>> missing;
  for (int n = 0; n <= max_n; ++n) {
    for (int r = 0; r <= n; ++r) {
      for (std::uint64_t b = 1; b <= binomial(n, r); ++b) {
        if (!seen.count({n, r, b})) missing.emplace_back(n, r, b);
      }
    }
  }
  return missing;
}

}  // namespace matcat
