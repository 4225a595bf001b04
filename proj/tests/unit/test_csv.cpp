#include <string>
#include <vector>

#include "doctest.h"

#include "hopebench/csv.hpp"
#include "hopebench/error.hpp"
#include "hopebench/random.hpp"

using namespace hopebench;

TEST_SUITE("csv") {

TEST_CASE("quoted fields, doubled quotes and embedded newlines") {
  const auto rows = csv::parse("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n\"two\nlines\",z\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].fields == std::vector<std::string>{"x, y", "say \"hi\""});
  CHECK(rows[2].fields == std::vector<std::string>{"two\nlines", "z"});
  CHECK(rows[2].line == 3);
}

TEST_CASE("CRLF line endings and a missing final newline") {
  const auto rows = csv::parse("a,b\r\n1,2\r\n3,4");
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].fields == std::vector<std::string>{"3", "4"});
}

TEST_CASE("empty fields are kept") {
  const auto rows = csv::parse(",,\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].fields.size() == 3);
}

TEST_CASE("unterminated quote names the starting line") {
  CHECK_THROWS_WITH_AS(csv::parse("a\n\"open\n"), doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("format then parse round-trips arbitrary fields") {
  const std::string alphabet = "ab ,\"\n\rಕ";
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> fields(1 + rng.below(4));
    for (auto& f : fields) {
      const auto len = rng.below(6);
      for (std::uint64_t i = 0; i < len; ++i) {
        // Pick whole characters so the Kannada letter stays valid UTF-8.
        const auto k = rng.below(8);
        f += k == 7 ? std::string("ಕ") : std::string(1, alphabet[k]);
      }
    }
    // A lone empty field is indistinguishable from a blank line.
    if (fields.size() == 1 && fields[0].empty()) continue;
    const auto rows = csv::parse(csv::format_row(fields));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == fields);
  }
}

}
