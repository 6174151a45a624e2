#include <cmath>

#include "doctest.h"
#include "jscc/measures.hpp"
#include "jscc/network.hpp"
#include "jscc/rng.hpp"

using namespace jscc;

namespace {

JointPmf random_joint(SplitMix& g, const std::vector<Variable>& vars) {
  std::size_t cells = 1;
  for (const auto& v : vars) cells *= static_cast<std::size_t>(v.size);
  std::vector<double> p(cells);
  double s = 0.0;
  for (double& x : p) {
    x = 0.01 + g.next_u01();
    s += x;
  }
  for (double& x : p) x /= s;
  return JointPmf(vars, p);
}

}  // namespace

TEST_CASE("entropy on frozen values") {
  JointPmf u3({{"A", 3}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(entropy(u3, {"A"}) == doctest::Approx(1.5849625007211562).epsilon(1e-14));

  JointPmf b({{"A", 2}}, {1.0 / 3, 2.0 / 3});
  CHECK(entropy(b, {"A"}) == doctest::Approx(0.9182958340544896).epsilon(1e-14));

  JointPmf point({{"A", 3}}, {0.0, 1.0, 0.0});
  CHECK(entropy(point, {"A"}) == 0.0);

  // zero cells contribute nothing
  JointPmf gap({{"A", 3}}, {0.5, 0.0, 0.5});
  CHECK(entropy(gap, {"A"}) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(entropy(u3, {}) == 0.0);
  CHECK_THROWS_AS(entropy(u3, {"B"}), std::invalid_argument);
}

TEST_CASE("binary symmetric channel at crossover 0.1, frozen oracle") {
  // joint p(x,y) for a uniform input: diagonal 0.45, off-diagonal 0.05
  JointPmf j({{"X", 2}, {"Y", 2}}, {0.45, 0.05, 0.05, 0.45});
  CHECK(mutual_information(j, {"X"}, {"Y"}) ==
        doctest::Approx(0.5310044064107188).epsilon(1e-13));
  CHECK(conditional_entropy(j, {"Y"}, {"X"}) ==
        doctest::Approx(0.46899559358928117).epsilon(1e-13));
  CHECK(entropy(j, {"Y"}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("worked ternary-support source, frozen oracle") {
  const JointPmf& s = somarc_example_source().pmf;
  CHECK(entropy(s, {"S1", "S2"}) == doctest::Approx(1.5849625007211562).epsilon(1e-13));
  CHECK(entropy(s, {"S1"}) == doctest::Approx(0.9182958340544896).epsilon(1e-13));
  CHECK(conditional_entropy(s, {"S1"}, {"S2"}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(conditional_entropy(s, {"S2"}, {"S1"}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("information identities hold on random joints") {
  SplitMix g(2024, 7);
  for (int t = 0; t < 100; ++t) {
    JointPmf p = random_joint(g, {{"A", 2}, {"B", 3}, {"C", 2}});

    // chain rule for entropy
    const double hab = entropy(p, {"A", "B"});
    const double ha = entropy(p, {"A"});
    CHECK(std::abs(hab - (ha + conditional_entropy(p, {"B"}, {"A"}))) < 1e-10);

    // symmetry and nonnegativity of mutual information
    const double iab = mutual_information(p, {"A"}, {"B"});
    CHECK(std::abs(iab - mutual_information(p, {"B"}, {"A"})) < 1e-12);
    CHECK(iab >= 0.0);
    CHECK(conditional_mutual_information(p, {"A"}, {"B"}, {"C"}) >= 0.0);

    // conditioning reduces entropy
    CHECK(conditional_entropy(p, {"A"}, {"B", "C"}) <= ha + 1e-12);

    // chain rule for mutual information
    const double joint_mi = mutual_information(p, {"A"}, {"B", "C"});
    const double split = iab + conditional_mutual_information(p, {"A"}, {"C"}, {"B"});
    CHECK(std::abs(joint_mi - split) < 1e-10);
  }
}

TEST_CASE("independent variables carry zero mutual information") {
  JointPmf a({{"A", 2}}, {0.3, 0.7});
  JointPmf j = compose(a, Kernel({}, {{"B", 3}}, {{0.2, 0.5, 0.3}}));
  const double mi = mutual_information(j, {"A"}, {"B"});
  CHECK(mi >= 0.0);
  CHECK(mi < 1e-12);
}

TEST_CASE("overlapping variable lists are rejected") {
  JointPmf p({{"A", 2}, {"B", 2}}, {0.1, 0.2, 0.3, 0.4});
  CHECK_THROWS_AS(conditional_entropy(p, {"A"}, {"A"}), std::invalid_argument);
  CHECK_THROWS_AS(conditional_mutual_information(p, {"A"}, {"A"}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(conditional_mutual_information(p, {"A"}, {"B"}, {"B"}),
                  std::invalid_argument);
}
