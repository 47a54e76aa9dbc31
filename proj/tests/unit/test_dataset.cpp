#include <random>
#include <sstream>

#include <doctest.h>

#include "prevision/dataset.hpp"

using namespace prevision;

namespace {

Dataset tiny() {
  Matrix v(2, 2);
  v << 1.0, 2.0, 3.0, 4.0;
  return Dataset({"a", "b"}, v);
}

}  // namespace

TEST_CASE("load_dataset: minimal well-formed input") {
  std::istringstream in("1.0,2.0\n");
  const Dataset d = load_dataset(in, {Delimiter::comma, false}, {{"0", "a"}, {"1", "b"}});
  CHECK(d.n() == 1);
  CHECK(d.k() == 2);
  CHECK(d.schema() == std::vector<std::string>{"a", "b"});
  CHECK(d.values()(0, 0) == 1.0);
  CHECK(d.values()(0, 1) == 2.0);
}

TEST_CASE("load_dataset: header consumed for names, schema map overrides") {
  std::istringstream in("GPA\thigh\tscore\n3.1\t3.5\t1160\n2.2\t2.8\t900\n");
  const Dataset d = load_dataset(in, {Delimiter::tab, true}, {{"GPA", "cgpa"}, {"2", "sat"}});
  CHECK(d.schema() == std::vector<std::string>{"cgpa", "high", "sat"});
  CHECK(d.n() == 2);
  CHECK(d.column("sat")[1] == 900.0);
}

TEST_CASE("load_dataset: keeps every row in file order") {
  std::ostringstream file;
  file << "x,y\n";
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    xs.push_back(x);
    file << format_double(x) << ',' << format_double(u(rng)) << '\n';
  }
  std::istringstream in(file.str());
  const Dataset d = load_dataset(in, {Delimiter::comma, true});
  REQUIRE(d.n() == 100);
  for (int i = 0; i < 100; ++i) {
    CHECK(d.values()(i, 0) == xs[size_t(i)]);
  }
}

TEST_CASE("load_dataset: error cases name their location") {
  SUBCASE("non-numeric cell") {
    std::istringstream in("a,b\n1.0,3.x\n");
    try {
      load_dataset(in, {Delimiter::comma, true});
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 2") != std::string::npos);
      CHECK(msg.find("column 2") != std::string::npos);
    }
  }
  SUBCASE("ragged row") {
    std::istringstream in("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(load_dataset(in, {Delimiter::comma, true}), StructureError);
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_dataset(in, {Delimiter::comma, true}), StructureError);
  }
  SUBCASE("header only") {
    std::istringstream in("a,b\n");
    CHECK_THROWS_AS(load_dataset(in, {Delimiter::comma, true}), StructureError);
  }
  SUBCASE("non-finite cells are rejected") {
    std::istringstream in("a\ninf\n");
    CHECK_THROWS_AS(load_dataset(in, {Delimiter::comma, true}), ParseError);
    std::istringstream in2("a\nnan\n");
    CHECK_THROWS_AS(load_dataset(in2, {Delimiter::comma, true}), ParseError);
  }
  SUBCASE("schema map entry matching nothing") {
    std::istringstream in("a,b\n1,2\n");
    CHECK_THROWS_AS(load_dataset(in, {Delimiter::comma, true}, {{"zzz", "x"}}),
                    SchemaError);
  }
}

TEST_CASE("load_dataset: whitespace delimiter handles runs and CRLF") {
  std::istringstream in("a  b\r\n1.5   2.5\r\n 3.5\t4.5 \r\n");
  const Dataset d = load_dataset(in, {Delimiter::whitespace, true});
  CHECK(d.n() == 2);
  CHECK(d.values()(1, 0) == 3.5);
  CHECK(d.values()(1, 1) == 4.5);
}

TEST_CASE("column access and lookup errors") {
  const Dataset d = tiny();
  CHECK(column(d, "a")[1] == 3.0);
  const Matrix single = (Matrix(1, 1) << 5.0).finished();
  const Dataset one({"a"}, single);
  CHECK(column(one, "a")[0] == 5.0);
  try {
    column(d, "zzz");
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("zzz") != std::string::npos);
    CHECK(msg.find("a, b") != std::string::npos);  // lists what exists
  }
}

TEST_CASE("dataset text round-trip is bit-exact") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 1 + Index(rng() % 40);
    const Index k = 1 + Index(rng() % 5);
    Matrix v(n, k);
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < k; ++c) {
        // mix of scales, including values that stress shortest-round-trip
        const int kind = int(rng() % 4);
        v(r, c) = kind == 0   ? u(rng)
                  : kind == 1 ? u(rng) * 1e-12
                  : kind == 2 ? double(int64_t(rng() % 1000))
                              : u(rng) / 3.0;
      }
    }
    std::vector<std::string> names;
    for (Index c = 0; c < k; ++c) names.push_back("v" + std::to_string(c));
    const Dataset d(names, v);

    for (auto delim : {Delimiter::comma, Delimiter::tab, Delimiter::whitespace}) {
      std::ostringstream out;
      save_dataset(d, out, delim, true);
      std::istringstream in(out.str());
      const Dataset back = load_dataset(in, {delim, true});
      REQUIRE(back.n() == d.n());
      REQUIRE(back.k() == d.k());
      CHECK(back.schema() == d.schema());
      CHECK(back.values() == d.values());  // bitwise
    }
  }
}

TEST_CASE("synthesize_column: seeded half-normal") {
  const Dataset d = tiny();
  const Dataset with_w = synthesize_column(d, "w", 1, 8.0);
  CHECK(with_w.k() == 3);
  CHECK(with_w.schema().back() == "w");
  for (Index r = 0; r < with_w.n(); ++r) {
    CHECK(with_w.values()(r, 2) >= 0.0);
  }
  // original columns untouched
  CHECK(with_w.values().leftCols(2) == d.values());

  SUBCASE("deterministic under a fixed seed") {
    const Dataset again = synthesize_column(d, "w", 1, 8.0);
    CHECK(again.values() == with_w.values());
    const Dataset other = synthesize_column(d, "w", 2, 8.0);
    CHECK(other.values().col(2) != with_w.values().col(2));
  }
  SUBCASE("precondition errors") {
    CHECK_THROWS_AS(synthesize_column(d, "w", 1, 0.0), DomainError);
    CHECK_THROWS_AS(synthesize_column(d, "w", 1, -1.0), DomainError);
    CHECK_THROWS_AS(synthesize_column(d, "a", 1, 8.0), SchemaError);
  }
}

TEST_CASE("synthesized scale roughly matches its half-normal target") {
  // with sigma = 8, |N(0,64)| over ~100 draws should span most of [0, 26]
  Matrix v(100, 1);
  for (Index i = 0; i < 100; ++i) v(i, 0) = double(i);
  const Dataset d({"id"}, v);
  const Dataset with_w = synthesize_column(d, "w", 42, 8.0);
  const Vector w = with_w.column("w");
  CHECK(w.maxCoeff() > 12.0);
  CHECK(w.maxCoeff() < 40.0);
  CHECK(w.minCoeff() >= 0.0);
  CHECK(w.mean() > 3.0);  // E|N(0,64)| = 8 sqrt(2/pi) ~ 6.4
  CHECK(w.mean() < 10.0);
}

TEST_CASE("Dataset constructor invariants") {
  CHECK_THROWS_AS(Dataset({"a", "a"}, Matrix::Zero(2, 2)), SchemaError);
  CHECK_THROWS_AS(Dataset({""}, Matrix::Zero(2, 1)), SchemaError);
  CHECK_THROWS_AS(Dataset({"a"}, Matrix::Zero(0, 1)), StructureError);
  Matrix bad(1, 1);
  bad << kInf;
  CHECK_THROWS_AS(Dataset({"a"}, bad), StructureError);
  CHECK_THROWS_AS(Dataset({"a", "b"}, Matrix::Zero(2, 1)), SchemaError);
}

TEST_CASE("fingerprint: stable, 64 hex chars, sensitive to values") {
  const Dataset d = tiny();
  const std::string f1 = fingerprint(d);
  CHECK(f1.size() == 64);
  CHECK(f1 == fingerprint(d));
  Matrix v2 = d.values();
  v2(0, 0) += 1e-9;
  CHECK(fingerprint(Dataset(d.schema(), v2)) != f1);
}
