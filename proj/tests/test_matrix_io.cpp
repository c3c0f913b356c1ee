#include "doctest.h"
#include "privctl/matrix_io.hpp"
#include "privctl/qmi.hpp"
#include "test_support.hpp"

using namespace privctl;

TEST_CASE("matrix CSV round-trips bit-exactly") {
  Rng rng(3);
  const Matrix M = rng.normal_matrix(3, 4) * 1e-7 + rng.normal_matrix(3, 4) * 1e5;
  std::string name;
  const Matrix back = parse_matrix_csv(format_matrix_csv("M", M), &name);
  CHECK(name == "M");
  CHECK(back == M);
}

TEST_CASE("matrix CSV layout is header plus row-major rows") {
  Matrix M(2, 2);
  M << 1, 2, 3, 0.5;
  CHECK(format_matrix_csv("X0", M) == "# X0 2 2\n1,2\n3,0.5\n");
}

TEST_CASE("matrix CSV rejects malformed input") {
  CHECK_THROWS_AS(parse_matrix_csv("1,2\n"), FormatError);             // no header
  CHECK_THROWS_AS(parse_matrix_csv("# A 2 2\n1,2\n"), FormatError);    // too few rows
  CHECK_THROWS_AS(parse_matrix_csv("# A 1 2\n1,2,3\n"), FormatError);  // too many cols
  CHECK_THROWS_AS(parse_matrix_csv("# A 1 2\n1,x\n"), FormatError);    // not a number
  CHECK_THROWS_AS(parse_matrix_csv("# A 1 1\n1\n2\n"), FormatError);   // extra rows
}

TEST_CASE("files and key-value config") {
  const auto dir = testing::scratch_dir("matrix_io");
  const Matrix M = Matrix::Identity(3, 2);
  write_matrix_csv(dir / "m.csv", "M", M);
  CHECK(read_matrix_csv(dir / "m.csv") == M);
  CHECK_THROWS(read_matrix_csv(dir / "missing.csv"));

  const KeyValues kv = parse_key_values("# comment\n a = 1 \nb=two # trailing\n\n");
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two");
  CHECK_THROWS_AS(parse_key_values("novalue\n"), FormatError);
  write_key_values(dir / "kv.txt", kv);
  CHECK(read_key_values(dir / "kv.txt") == kv);
}

TEST_CASE("format_double keeps 17 significant digits") {
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("QMI sets serialize to three matrices and a manifest") {
  Rng rng(9);
  const QmiSet set = testing::random_center_set(rng, 2, 1, 0.1);
  const auto dir = testing::scratch_dir("qmi_io");
  write_qmi_set(dir, set);
  const QmiSet back = read_qmi_set(dir);
  CHECK(back.Abold == set.Abold);
  CHECK(back.Bbold == set.Bbold);
  CHECK(back.Cbold == set.Cbold);
  CHECK(read_key_values(dir / "manifest.txt").at("m") == "1");
  write_key_values(dir / "manifest.txt", {{"n", "3"}, {"m", "0"}});
  CHECK_THROWS_AS(read_qmi_set(dir), FormatError);
}
