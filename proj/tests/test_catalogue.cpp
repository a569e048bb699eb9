#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>

#include "matcat/canonical.hpp"
#include "matcat/catalogue.hpp"
#include "matcat/errors.hpp"
#include "support.hpp"

using namespace matcat;
using matcat::testing::catalogue;

namespace {

std::vector<Matroid> flat_catalogue(int max_n) {
  std::vector<Matroid> out;
  for (int n = 0; n <= max_n; ++n) out.insert(out.end(), catalogue(max_n)[n].begin(), catalogue(max_n)[n].end());
  return out;
}

const Table& table_seven() {
  static const Table table = to_table(build_property_table(flat_catalogue(7)));
  return table;
}

std::int64_t cell(const Table& t, std::size_t row, std::string_view column) { return t.rows[row][t.column_index(column)]; }

std::filesystem::path scratch_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("matcat_test_" + name);
}

QueryResult run(const std::string& where, Aggregate aggregate = Aggregate::Rows, std::vector<std::string> group_by = {},
                std::string distinct = {}) {
  QueryExpr expr;
  expr.where = parse_conditions(where);
  expr.aggregate = aggregate;
  expr.group_by = std::move(group_by);
  expr.distinct_column = std::move(distinct);
  return query(table_seven(), expr);
}

}  // namespace

TEST_CASE("catalogue text round trip") {
  const std::vector<Matroid> records = flat_catalogue(8);
  REQUIRE(records.size() == 2198);
  const std::string text = format_catalogue(records);
  CHECK(text.rfind("# matcat-catalogue v1\n", 0) == 0);
  CHECK(parse_catalogue(text) == records);
  CHECK(format_catalogue(parse_catalogue(text)) == text);
  const auto levels = levels_by_size(records);
  REQUIRE(levels.size() == 9);
  for (int n = 0; n <= 8; ++n) REQUIRE(levels[n] == catalogue(8)[n]);

  const auto path = scratch_path("round.cat").string();
  write_catalogue(records, path);
  CHECK(read_catalogue(path) == records);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_catalogue(path), IoError);
}

TEST_CASE("catalogue corruption is detected") {
  const std::vector<Matroid> records = flat_catalogue(4);
  const std::string text = format_catalogue(records);

  std::string bad_header = text;
  bad_header.replace(0, 21, "# matcat-catalogue v9");
  CHECK_THROWS_AS(parse_catalogue(bad_header), FormatError);
  CHECK_THROWS_AS(parse_catalogue("hello\n"), FormatError);

  // Swap the second and third records while keeping ids in sequence.
  const std::size_t l1 = text.find('\n') + 1;
  const std::size_t l2 = text.find('\n', l1) + 1;
  const std::size_t l3 = text.find('\n', l2) + 1;
  const std::size_t l4 = text.find('\n', l3) + 1;
  std::string second(text.substr(l2, l3 - l2));
  std::string third(text.substr(l3, l4 - l3));
  std::swap(second[0], third[0]);
  std::string swapped = text.substr(0, l2) + third + second + text.substr(l4);
  try {
    parse_catalogue(swapped);
    FAIL("unsorted catalogue accepted");
  } catch (const FormatError& e) {
    CHECK(e.line() == 4);
  }

  std::string flipped = text;
  const std::size_t crc = flipped.rfind("crc32=") + 6;
  flipped[crc] = flipped[crc] == '0' ? '1' : '0';
  CHECK_THROWS_AS(parse_catalogue(flipped), ChecksumMismatch);

  std::string truncated = text.substr(0, text.rfind("# end"));
  CHECK_THROWS_AS(parse_catalogue(truncated), FormatError);
  CHECK_THROWS_AS(parse_catalogue(text + "0 0 0 -\n"), FormatError);
}

TEST_CASE("property table columns and row facts") {
  const Table& t = table_seven();
  CHECK(t.rows.size() == 1 + 2 + 4 + 8 + 17 + 38 + 98 + 306);
  CHECK(t.columns.size() == property_columns().size());
  CHECK_THROWS_AS(t.column_index("nope"), UnknownColumn);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    REQUIRE(cell(t, i, "id") == static_cast<std::int64_t>(i));
    const auto d = static_cast<std::size_t>(cell(t, i, "dualId"));
    REQUIRE(cell(t, d, "dualId") == static_cast<std::int64_t>(i));
    REQUIRE(cell(t, d, "rank") == cell(t, i, "n") - cell(t, i, "rank"));
    if (d == i) REQUIRE(2 * cell(t, i, "rank") == cell(t, i, "n"));
    const auto s = static_cast<std::size_t>(cell(t, i, "simplificationId"));
    REQUIRE(cell(t, s, "simple") == 1);
    REQUIRE(cell(t, s, "rank") == cell(t, i, "rank"));
    if (cell(t, i, "simple") == 1) REQUIRE(s == i);
    REQUIRE(cell(t, i, "cosimple") == cell(t, d, "simple"));
    REQUIRE(cell(t, i, "numCocircuits") == cell(t, d, "numCircuits"));
    REQUIRE(cell(t, i, "autOrder") == cell(t, d, "autOrder"));
    REQUIRE(cell(t, i, "gf2") == cell(t, d, "gf2"));
  }
}

TEST_CASE("serial and parallel property passes agree") {
  PropertyOptions serial;
  serial.parallel = false;
  const auto records = flat_catalogue(6);
  CHECK(to_table(build_property_table(records, serial)).rows == to_table(build_property_table(records)).rows);
}

TEST_CASE("property TSV round trip") {
  const Table& t = table_seven();
  const auto path = scratch_path("props.tsv").string();
  write_property_tsv(t, path);
  const Table back = read_property_tsv(path);
  CHECK(back.rows == t.rows);
  CHECK(format_property_tsv(back) == format_property_tsv(t));
  const std::string text = format_property_tsv(t);
  CHECK(text.rfind("# matcat-properties v1\nid\tn\trank\t", 0) == 0);
  CHECK(text.find("\tinf\t") != std::string::npos);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_property_tsv(path), IoError);
}

TEST_CASE("query expressions") {
  CHECK(parse_conditions("n=6 and rank=3").size() == 2);
  CHECK(parse_conditions("n>=6 && rank != 3, simple==1").size() == 3);
  CHECK(parse_conditions("n ≤ 6 AND rank ≥ 2").size() == 2);
  CHECK(parse_conditions("").empty());
  const auto conds = parse_conditions("numBases<11");
  REQUIRE(conds.size() == 1);
  CHECK(conds[0].column == "numBases");
  CHECK(conds[0].op == CompareOp::Less);
  CHECK(conds[0].literal == "11");
  try {
    parse_conditions("n=6 and rank");
    FAIL("incomplete condition accepted");
  } catch (const ParseError& e) {
    // The operator is missing just past the end of the text.
    CHECK(e.column() == 13);
  }
  CHECK_THROWS_AS(parse_conditions("n=6 or rank=3"), ParseError);
  CHECK_THROWS_AS(parse_conditions("=6"), ParseError);
  CHECK_THROWS_AS(run("nope=1"), UnknownColumn);
  CHECK_THROWS_AS(run("simple=7"), TypeMismatch);
  CHECK_THROWS_AS(run("n=x"), TypeMismatch);
}

TEST_CASE("query results") {
  const QueryResult distinct = run("n=6 and rank=3", Aggregate::CountDistinct, {}, "numBases");
  CHECK(distinct.columns == std::vector<std::string>{"distinct_numBases"});
  CHECK(distinct.rows == std::vector<std::vector<std::string>>{{"19"}});

  const QueryResult rank0 = run("rank=0");
  CHECK(rank0.rows.size() == 8);
  for (std::size_t i = 1; i < rank0.rows.size(); ++i) REQUIRE(std::stoll(rank0.rows[i - 1][0]) < std::stoll(rank0.rows[i][0]));

  const QueryResult all = run("", Aggregate::Count);
  CHECK(all.rows == std::vector<std::vector<std::string>>{{"474"}});
  CHECK(run("n=99", Aggregate::Count).rows == std::vector<std::vector<std::string>>{{"0"}});

  const QueryResult grouped = run("n=7", Aggregate::Count, {"rank"});
  CHECK(grouped.columns == std::vector<std::string>{"rank", "count"});
  std::vector<std::vector<std::string>> expected;
  const int by_rank[] = {1, 7, 37, 108, 108, 37, 7, 1};
  for (int r = 0; r <= 7; ++r) expected.push_back({std::to_string(r), std::to_string(by_rank[r])});
  CHECK(grouped.rows == expected);

  const QueryResult inf = run("connectivity>=3 and n=4", Aggregate::Count);
  CHECK(std::stoll(inf.rows[0][0]) >= 1);
  CHECK(format_result(distinct) == "distinct_numBases\n19\n");
}

TEST_CASE("missing base triples") {
  const auto missing = missing_base_triples(table_seven(), 7);
  REQUIRE(missing.size() == 1);
  CHECK(missing[0] == std::make_tuple(6, 3, std::uint64_t{11}));
  CHECK(missing_base_triples(table_seven(), 5).empty());
  std::set<std::int64_t> realised;
  const Table& t = table_seven();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (cell(t, i, "n") == 5 && cell(t, i, "rank") == 2) realised.insert(cell(t, i, "numBases"));
  }
  CHECK(realised.size() == 10);
}
