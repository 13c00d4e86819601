#include <doctest.h>

#include <sstream>

#include "ptindep/error.hpp"
#include "ptindep/pointproc.hpp"
#include "support.hpp"

using namespace ptindep;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected ptindep::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("make_point_process validates and sorts") {
  const auto empty = make_point_process({}, 0.1);
  CHECK(empty.count() == 0);
  CHECK(empty.window_end() == 0.1);

  const auto sorted = make_point_process({0.05, 0.01}, 0.1);
  REQUIRE(sorted.count() == 2);
  CHECK(sorted[0] == 0.01);
  CHECK(sorted[1] == 0.05);

  CHECK(kind_of([] { make_point_process({0.02, 0.02}, 0.1); }) == ErrorKind::DuplicateTime);
  CHECK(kind_of([] { make_point_process({0.2}, 0.1); }) == ErrorKind::OutOfWindow);
  CHECK(kind_of([] { make_point_process({-1e-9}, 0.1); }) == ErrorKind::OutOfWindow);
  CHECK(kind_of([] { make_point_process({}, 0.0); }) == ErrorKind::InvalidArgument);

  // Window endpoints are inside.
  CHECK(make_point_process({0.0, 0.1}, 0.1).count() == 2);
}

TEST_CASE("samples need two trials on a shared window") {
  using testing::pair_of;
  CHECK(kind_of([] { BivariateSample({pair_of({}, {})}); }) == ErrorKind::DegenerateSample);
  CHECK(kind_of([] {
          BivariateSample({pair_of({}, {}), {make_point_process({}, 1.0),
                                             make_point_process({}, 1.0)}});
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_pair(make_point_process({}, 0.1), make_point_process({}, 0.2)); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("text format writes header, alternating lines, empty lines for empty processes") {
  using testing::pair_of;
  const BivariateSample s({pair_of({0.01, 0.05}, {}), pair_of({}, {0.1})});
  std::ostringstream out;
  write_sample(out, s);
  CHECK(out.str() == "# window_end=0.1\n0.01 0.05\n\n\n0.1\n");
}

TEST_CASE("text format round-trips simulated data exactly") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = testing::null_sample(seed, 7, static_cast<Experiment>(seed % 6));
    std::stringstream io;
    write_sample(io, s);
    CHECK(read_sample(io) == s);
  }
}

TEST_CASE("text format rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_sample(in);
  };
  CHECK(kind_of([&] { parse("0.1\n0.2\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse("# window_end=0.1\n0.01\n0.02\n0.03\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse("# window_end=0.1\n0.01  0.02\n\n\n\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse("# window_end=0.1\n0.01 x\n\n\n\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse("# window_end=0.1\n0.5\n\n\n\n"); }) == ErrorKind::OutOfWindow);
  CHECK(kind_of([&] { parse("# window_end=0.1\n0.02 0.02\n\n\n\n"); }) ==
        ErrorKind::DuplicateTime);
  CHECK(parse("# window_end=0.1\n0.02\r\n\n\n\n").size() == 2);
}
