#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "chanalloc/channel_game.hpp"
#include "chanalloc/error.hpp"
#include "oracles.hpp"

using namespace chanalloc;

namespace {

// Two pairs: gain 0.25 from pair 2 into pair 1's receiver, 0.1 from pair 1
// into pair 2's receiver, unit own-link gains.
Network two_pairs() {
  Matrix g(2, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  g(1, 0) = 0.25;
  g(0, 1) = 0.1;
  return network_from_gains(g, {1.0, 1.0});
}

Network three_pairs() {
  Matrix g(3, 3, 0.01);
  g(0, 0) = g(1, 1) = g(2, 2) = 1.0;
  g(1, 0) = 0.25;
  g(0, 1) = 0.1;
  g(2, 0) = 0.3;
  return network_from_gains(g, {1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("co_channel indicator") {
  CHECK(co_channel(1, 1) == 1);
  CHECK(co_channel(1, 2) == 0);
  CHECK(co_channel(3, 3) == 1);
  CHECK(co_channel(2, 1) == co_channel(1, 2));
}

TEST_CASE("sir") {
  const auto net = two_pairs();
  SUBCASE("alone on a channel") {
    CHECK(std::isinf(sir(0, StrategyProfile({1, 2}), net)));
  }
  SUBCASE("one co-channel interferer") {
    const double s = sir(0, StrategyProfile({1, 1}), net);
    CHECK(s == doctest::Approx(4.0));
    CHECK(10.0 * std::log10(s) == doctest::Approx(6.0206).epsilon(1e-4));
  }
  SUBCASE("an off-channel third pair is excluded") {
    CHECK(sir(0, StrategyProfile({1, 1, 2}), three_pairs()) == doctest::Approx(4.0));
  }
}

TEST_CASE("selfish utility") {
  const auto net3 = three_pairs();
  CHECK(utility_selfish(0, StrategyProfile({1, 2, 3}), net3) == 0.0);
  CHECK(utility_selfish(0, StrategyProfile({1, 1, 2}), net3) == doctest::Approx(-0.25));
  Matrix g(3, 3, 0.01);
  g(0, 0) = g(1, 1) = g(2, 2) = 1.0;
  g(1, 0) = 0.25;
  g(2, 0) = 0.1;
  CHECK(utility_selfish(0, StrategyProfile({1, 1, 1}), network_from_gains(g, {1, 1, 1})) ==
        doctest::Approx(-0.35));
}

TEST_CASE("cooperative utility") {
  const auto net = two_pairs();
  CHECK(utility_cooperative(0, StrategyProfile({1, 2}), net) == 0.0);
  CHECK(utility_cooperative(0, StrategyProfile({1, 1}), net) == doctest::Approx(-0.35));

  Matrix g(2, 2, 0.2);
  g(0, 0) = g(1, 1) = 1.0;
  const auto sym = network_from_gains(g, {1.0, 1.0});
  const StrategyProfile same({2, 2});
  CHECK(utility_cooperative(0, same, sym) == doctest::Approx(2.0 * utility_selfish(0, same, sym)));
  CHECK(utility_cooperative(0, same, sym) == doctest::Approx(-0.4));
}

TEST_CASE("potential examples") {
  const auto net = two_pairs();
  CHECK(potential(StrategyProfile({1, 2}), net) == 0.0);
  CHECK(potential(StrategyProfile({1, 1}), net) == doctest::Approx(-0.35));

  Rng rng(6);
  const auto net6 = oracle::random_network(rng, 6);
  const auto s = oracle::random_profile(rng, 6, 3);
  double half_sum = 0.0;
  for (std::size_t i = 0; i < 6; ++i) half_sum += 0.5 * oracle::u2(net6, s, i);
  CHECK(std::abs(potential(s, net6) - half_sum) <= 1e-12 * std::max(1.0, std::abs(half_sum)));
}

TEST_CASE("generalized potential") {
  Rng rng(5);
  const auto net = oracle::random_network(rng, 5);
  SUBCASE("a = 1/2 matches the potential") {
    for (int rep = 0; rep < 50; ++rep) {
      const auto s = oracle::random_profile(rng, 5, 3);
      CHECK(generalized_potential(s, net, 0.5) == potential(s, net));
    }
  }
  SUBCASE("zero when every user has its own channel") {
    for (double a : {0.1, 0.3, 0.7, 0.9}) {
      CHECK(generalized_potential(StrategyProfile({1, 2, 3, 4, 5}), net, a) == 0.0);
    }
  }
  SUBCASE("a = 0.3 is exact over all unilateral deviations") {
    const auto s = oracle::random_profile(rng, 5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
      for (int c = 1; c <= 3; ++c) {
        StrategyProfile d = s;
        d[i] = c;
        const double dpot = generalized_potential(d, net, 0.3) - generalized_potential(s, net, 0.3);
        const double du = oracle::u2(net, d, i) - oracle::u2(net, s, i);
        CHECK(dpot == doctest::Approx(du).epsilon(1e-12));
        CHECK(generalized_potential(d, net, 0.3) ==
              doctest::Approx(oracle::pot_weighted(net, d, 0.3)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("a outside (0, 1) is rejected") {
    const StrategyProfile s({1, 1, 1, 1, 1});
    for (double a : {0.0, 1.0, -0.2, 1.5}) CHECK_THROWS_AS(generalized_potential(s, net, a), InvalidParameter);
  }
}

TEST_CASE("utilities agree with the defining sums on random instances") {
  Rng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.uniform_index(10);
    const int k = 1 + static_cast<int>(rng.uniform_index(4));
    const auto net = oracle::random_network(rng, n);
    const auto s = oracle::random_profile(rng, n, k);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(utility_selfish(i, s, net) == doctest::Approx(oracle::u1(net, s, i)).epsilon(1e-12));
      CHECK(utility_cooperative(i, s, net) == doctest::Approx(oracle::u2(net, s, i)).epsilon(1e-12));
      // U2 = U1 + (non-positive outgoing term)
      CHECK(utility_selfish(i, s, net) >= utility_cooperative(i, s, net));
      const auto u = channel_utilities(i, s, net, {k, UtilityKind::Cooperative});
      for (int c = 1; c <= k; ++c) {
        StrategyProfile d = s;
        d[i] = c;
        CHECK(u[c - 1] == utility_cooperative(i, d, net));
      }
    }
  }
}

TEST_CASE("sir ignores users on other channels") {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const auto net = oracle::random_network(rng, 7);
    const auto s = oracle::random_profile(rng, 7, 3);
    const double before = sir(0, s, net);
    for (std::size_t j = 1; j < 7; ++j) {
      if (s[j] == s[0]) continue;
      for (int c = 1; c <= 3; ++c) {
        if (c == s[0]) continue;
        StrategyProfile d = s;
        d[j] = c;
        CHECK(sir(0, d, net) == before);
      }
    }
  }
}

TEST_CASE("best response") {
  SUBCASE("moves away from the only interferer") {
    Matrix g(2, 2, 0.3);
    g(0, 0) = g(1, 1) = 1.0;
    const auto net = network_from_gains(g, {1.0, 1.0});
    Rng rng(1);
    CHECK(best_response(0, StrategyProfile({1, 1}), net, {2, UtilityKind::Cooperative}, rng) == 2);
    CHECK(best_response(0, StrategyProfile({1, 1}), net, {2, UtilityKind::Selfish}, rng) == 2);
  }
  SUBCASE("fixed point at a unique argmax") {
    Matrix g(2, 2, 0.3);
    g(0, 0) = g(1, 1) = 1.0;
    const auto net = network_from_gains(g, {1.0, 1.0});
    Rng rng(1);
    CHECK(best_response(0, StrategyProfile({2, 1}), net, {2, UtilityKind::Cooperative}, rng) == 2);
  }
  SUBCASE("ties are broken uniformly") {
    // Three users on channel 3 of 3; channels 1 and 2 are both empty for user 0.
    Matrix g(3, 3, 0.2);
    g(0, 0) = g(1, 1) = g(2, 2) = 1.0;
    const auto net = network_from_gains(g, {1.0, 1.0, 1.0});
    const StrategyProfile s({3, 3, 3});
    const GameConfig cfg{3, UtilityKind::Cooperative};
    CHECK(best_response_set(0, s, net, cfg) == std::vector<Channel>{1, 2});
    Rng rng(2024);
    int ones = 0;
    const int draws = 20000;
    for (int t = 0; t < draws; ++t) {
      const Channel c = best_response(0, s, net, cfg, rng);
      REQUIRE((c == 1 || c == 2));
      ones += c == 1;
    }
    // 5 sigma of a fair coin over 20000 draws is about 0.018.
    CHECK(std::abs(ones / static_cast<double>(draws) - 0.5) < 0.018);
  }
}

TEST_CASE("best response argmax is invariant to common scaling") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rng.uniform_index(6);
    const auto net = oracle::random_network(rng, n);
    const auto s = oracle::random_profile(rng, n, 3);
    for (double c : {0.25, 0.37, 4.0}) {
      Matrix g = net.gains;
      std::vector<double> p = net.powers;
      // Scale powers by c and keep gains valid (<= 1) by scaling those by 1/2.
      for (std::size_t i = 0; i < n; ++i) {
        p[i] *= c;
        for (std::size_t j = 0; j < n; ++j) g(i, j) *= 0.5;
      }
      const auto scaled = network_from_gains(g, p);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto kind : {UtilityKind::Selfish, UtilityKind::Cooperative}) {
          CHECK(best_response_set(i, s, net, {3, kind}) == best_response_set(i, s, scaled, {3, kind}));
        }
      }
    }
  }
}

TEST_CASE("is_pure_nash on two users") {
  const auto net = two_pairs();
  const GameConfig cfg{2, UtilityKind::Cooperative};
  CHECK(is_pure_nash(StrategyProfile({1, 2}), net, cfg));
  CHECK(is_pure_nash(StrategyProfile({2, 1}), net, cfg));
  CHECK_FALSE(is_pure_nash(StrategyProfile({1, 1}), net, cfg));
  CHECK_FALSE(is_pure_nash(StrategyProfile({2, 2}), net, cfg));
}

TEST_CASE("is_pure_nash agrees with brute force on every 4-user 2-channel profile") {
  Rng rng(404);
  for (int inst = 0; inst < 20; ++inst) {
    const auto net = oracle::random_network(rng, 4);
    for (auto kind : {UtilityKind::Selfish, UtilityKind::Cooperative}) {
      const GameConfig cfg{2, kind};
      const auto eq = enumerate_pure_nash(net, cfg);
      for (const auto& s : oracle::all_profiles(4, 2)) {
        const bool brute = kind == UtilityKind::Selfish
                               ? oracle::no_profitable_deviation(net, s, 2, oracle::u1)
                               : oracle::no_profitable_deviation(net, s, 2, oracle::u2);
        CHECK(is_pure_nash(s, net, cfg) == brute);
        CHECK((std::find(eq.begin(), eq.end(), s) != eq.end()) == brute);
      }
    }
  }
}

TEST_CASE("enumerate_pure_nash") {
  SUBCASE("two users two channels") {
    const auto eq = enumerate_pure_nash(two_pairs(), {2, UtilityKind::Cooperative});
    CHECK(eq == std::vector<StrategyProfile>{StrategyProfile({1, 2}), StrategyProfile({2, 1})});
  }
  SUBCASE("one channel") {
    Rng rng(3);
    const auto eq = enumerate_pure_nash(oracle::random_network(rng, 4), {1, UtilityKind::Cooperative});
    CHECK(eq == std::vector<StrategyProfile>{StrategyProfile({1, 1, 1, 1})});
  }
  SUBCASE("five users two channels") {
    Rng rng(55);
    const auto net = oracle::random_network(rng, 5);
    const GameConfig cfg{2, UtilityKind::Cooperative};
    const auto eq = enumerate_pure_nash(net, cfg);
    CHECK_FALSE(eq.empty());
    for (const auto& s : eq) CHECK(oracle::no_profitable_deviation(net, s, 2, oracle::u2));
    // The potential maximizer is always an equilibrium.
    double best = -std::numeric_limits<double>::infinity();
    StrategyProfile arg;
    for (const auto& s : oracle::all_profiles(5, 2)) {
      if (potential(s, net) > best) {
        best = potential(s, net);
        arg = s;
      }
    }
    CHECK(std::find(eq.begin(), eq.end(), arg) != eq.end());
  }
  SUBCASE("cap") {
    Rng rng(1);
    const auto net = oracle::random_network(rng, 12);
    CHECK_THROWS_AS(enumerate_pure_nash(net, {4, UtilityKind::Cooperative}), TooLarge);
    CHECK_THROWS_AS(enumerate_pure_nash(net, {2, UtilityKind::Cooperative}, 100), TooLarge);
  }
}

TEST_CASE("profile validation and CSV") {
  const auto net = two_pairs();
  CHECK_NOTHROW(validate_profile(StrategyProfile({1, 2}), net, 2));
  CHECK_THROWS_AS(validate_profile(StrategyProfile({1, 3}), net, 2), InvalidParameter);
  CHECK_THROWS_AS(validate_profile(StrategyProfile({0, 1}), net, 2), InvalidParameter);
  CHECK_THROWS_AS(validate_profile(StrategyProfile({1}), net, 2), InvalidParameter);
  CHECK(profile_to_csv(StrategyProfile({3, 1, 4})) == "3,1,4");
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = oracle::random_profile(rng, 1 + rng.uniform_index(30), 4);
    CHECK(profile_from_csv(profile_to_csv(s)) == s);
  }
  CHECK_THROWS_AS(profile_from_csv("1,x"), InvalidParameter);
}
