#include <stdexcept>

#include "doctest.h"
#include "jscc/pmf.hpp"

using namespace jscc;

TEST_CASE("normalization policy: clamp tiny noise, reject real drift") {
  JointPmf p({{"A", 2}}, {0.25, 0.75});
  CHECK(p.probs()[0] == 0.25);

  // contract case: mass 0.98 is a caller error
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {0.49, 0.49}), std::domain_error);

  // drift within 1e-9 renormalizes to unit mass
  JointPmf q({{"A", 2}}, {0.5, 0.5 + 4e-10});
  CHECK(q.probs()[0] + q.probs()[1] == doctest::Approx(1.0).epsilon(1e-15));

  // negative noise within 1e-12 clamps to zero; anything worse throws
  JointPmf r({{"A", 2}}, {1.0, -5e-13});
  CHECK(r.probs()[1] == 0.0);
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {1.0, -1e-6}), std::domain_error);

  // shape errors
  CHECK_THROWS_AS(JointPmf({{"A", 0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({{"A", 2}, {"A", 2}}, {0.25, 0.25, 0.25, 0.25}),
                  std::invalid_argument);
}

TEST_CASE("strides, flat_index and cell lookup") {
  JointPmf p({{"A", 2}, {"B", 3}}, {0.0, 0.1, 0.2, 0.3, 0.25, 0.15});
  CHECK(p.size() == 6);
  CHECK(p.stride(0) == 3);
  CHECK(p.stride(1) == 1);
  CHECK(p.flat_index({1, 2}) == 5);
  CHECK(p.at({1, 1}) == 0.25);
  CHECK(p.var_index("B") == 1);
  CHECK(p.has_variable("A"));
  CHECK_FALSE(p.has_variable("C"));
  CHECK_THROWS_AS(p.var_index("Z"), std::invalid_argument);
  CHECK_THROWS_AS(p.flat_index({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(p.flat_index({0}), std::invalid_argument);
}

TEST_CASE("marginalize keeps the pmf axis order regardless of the keep list") {
  JointPmf p({{"A", 2}, {"B", 3}}, {0.0, 0.1, 0.2, 0.3, 0.25, 0.15});

  JointPmf full = marginalize(p, {"B", "A"});
  REQUIRE(full.variables().size() == 2);
  CHECK(full.variables()[0].name == "A");
  CHECK(full.variables()[1].name == "B");
  for (std::size_t i = 0; i < 6; ++i) CHECK(full.probs()[i] == doctest::Approx(p.probs()[i]));

  JointPmf ma = marginalize(p, {"A"});
  CHECK(ma.probs()[0] == doctest::Approx(0.3));
  CHECK(ma.probs()[1] == doctest::Approx(0.7));

  JointPmf mb = marginalize(p, {"B"});
  CHECK(mb.probs()[0] == doctest::Approx(0.3));
  CHECK(mb.probs()[1] == doctest::Approx(0.35));
  CHECK(mb.probs()[2] == doctest::Approx(0.35));

  CHECK_THROWS_AS(marginalize(p, {"A", "A"}), std::invalid_argument);
  CHECK_THROWS_AS(marginalize(p, {"Q"}), std::invalid_argument);
}

TEST_CASE("compose extends a joint by a conditional") {
  JointPmf base({{"A", 2}}, {0.25, 0.75});
  Kernel k({{"A", 2}}, {{"B", 2}}, {{0.9, 0.1}, {0.2, 0.8}});
  JointPmf j = compose(base, k);
  REQUIRE(j.variables().size() == 2);
  CHECK(j.variables()[1].name == "B");
  CHECK(j.at({0, 0}) == doctest::Approx(0.225));
  CHECK(j.at({0, 1}) == doctest::Approx(0.025));
  CHECK(j.at({1, 0}) == doctest::Approx(0.15));
  CHECK(j.at({1, 1}) == doctest::Approx(0.6));

  // an empty given list appends an independent factor
  JointPmf j2 = compose(j, Kernel({}, {{"C", 2}}, {{0.5, 0.5}}));
  CHECK(j2.at({1, 1, 0}) == doctest::Approx(0.3));

  Kernel bad({{"A", 3}}, {{"D", 2}}, {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(compose(j, bad), std::invalid_argument);
  Kernel dup({{"A", 2}}, {{"B", 2}}, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(compose(j, dup), std::invalid_argument);
}

TEST_CASE("condition_on_event drops fixed axes and renormalizes") {
  JointPmf p({{"A", 2}, {"B", 2}}, {0.1, 0.2, 0.3, 0.4});
  JointPmf c = condition_on_event(p, {{"A", 1}});
  REQUIRE(c.variables().size() == 1);
  CHECK(c.variables()[0].name == "B");
  CHECK(c.probs()[0] == doctest::Approx(3.0 / 7.0));
  CHECK(c.probs()[1] == doctest::Approx(4.0 / 7.0));

  JointPmf z({{"A", 2}, {"B", 2}}, {0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(condition_on_event(z, {{"A", 1}}), std::domain_error);
  CHECK_THROWS_AS(condition_on_event(p, {{"A", 0}, {"B", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(condition_on_event(p, {{"A", 2}}), std::invalid_argument);
}

TEST_CASE("permute relabels axes consistently") {
  JointPmf p({{"A", 2}, {"B", 3}}, {0.05, 0.1, 0.15, 0.2, 0.25, 0.25});
  JointPmf q = permute(p, {"B", "A"});
  CHECK(q.variables()[0].name == "B");
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) CHECK(q.at({b, a}) == p.at({a, b}));

  JointPmf r = permute(q, {"A", "B"});
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.probs()[i] == p.probs()[i]);

  CHECK_THROWS_AS(permute(p, {"A"}), std::invalid_argument);
  CHECK_THROWS_AS(permute(p, {"A", "A"}), std::invalid_argument);
}

TEST_CASE("split_variable unpacks a product alphabet in place") {
  // dyadic cells sum to exactly 1, so normalization cannot move them
  std::vector<double> probs = {0.03125, 0.0625, 0.09375, 0.125, 0.1875, 0.5};
  JointPmf flat({{"Y", 6}}, probs);
  JointPmf s = split_variable(flat, "Y", {"YR", 2}, {"YS", 3});
  REQUIRE(s.variables().size() == 2);
  CHECK(s.variables()[0].name == "YR");
  CHECK(s.variables()[1].name == "YS");
  for (int yr = 0; yr < 2; ++yr)
    for (int ys = 0; ys < 3; ++ys) CHECK(s.at({yr, ys}) == flat.at({yr * 3 + ys}));

  CHECK_THROWS_AS(split_variable(flat, "Y", {"YR", 2}, {"YS", 2}), std::invalid_argument);
  CHECK_THROWS_AS(split_variable(flat, "Q", {"YR", 2}, {"YS", 3}), std::invalid_argument);
}

TEST_CASE("kernel row indexing and validation") {
  Kernel k({{"A", 2}, {"B", 3}}, {{"C", 2}},
           std::vector<std::vector<double>>(6, {0.5, 0.5}));
  CHECK(k.row_count() == 6);
  CHECK(k.row_width() == 2);
  CHECK(k.row_index({0, 1}) == 1);
  CHECK(k.row_index({1, 2}) == 5);
  CHECK_THROWS_AS(k.row_index({2, 0}), std::invalid_argument);

  // row count must match the given alphabet product
  CHECK_THROWS_AS(Kernel({{"A", 2}}, {{"C", 2}}, {{0.5, 0.5}}), std::invalid_argument);
  // every row is a pmf under the same policy as JointPmf
  CHECK_THROWS_AS(Kernel({{"A", 2}}, {{"C", 2}}, {{0.49, 0.49}, {0.5, 0.5}}),
                  std::domain_error);
}
