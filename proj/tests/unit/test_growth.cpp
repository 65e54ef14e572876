#include "wcw/error.hpp"
#include "wcw/growth.hpp"
#include "wcw/netstats.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

using namespace wcw;

namespace {

GrowthConfig config(int n, int m0, int m, double alpha, std::uint64_t seed = 1) {
  GrowthConfig c;
  c.n_final = n;
  c.m0 = m0;
  c.m_edges = m;
  c.alpha = alpha;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("seed clique only") {
  const auto g = grow(config(3, 3, 2, 1.0));
  CHECK(g.degrees == std::vector<std::int64_t>{2, 2, 2});
  CHECK(g.edges.size() == 3);
}

TEST_CASE("handshake identity and distinct targets") {
  for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
    for (bool directed : {false, true}) {
      auto c = config(3000, 5, 3, alpha, 17);
      c.directed = directed;
      const auto g = grow(c);
      const std::int64_t total = std::accumulate(g.degrees.begin(), g.degrees.end(), std::int64_t{0});
      CHECK(total == 2 * (5 * 4 / 2 + 3 * (3000 - 5)));
      CHECK(g.edges.size() == static_cast<std::size_t>(5 * 4 / 2 + 3 * (3000 - 5)));
      for (int v = 5; v < 3000; ++v) CHECK(g.degrees[v] >= 3);

      std::map<int, std::set<int>> targets;
      for (const auto& e : g.edges) {
        CHECK(e.dst < e.src);
        CHECK(targets[e.src].insert(e.dst).second);
      }
    }
  }
}

TEST_CASE("growth is deterministic in the seed") {
  const auto a = grow(config(2000, 3, 2, 1.0, 5));
  const auto b = grow(config(2000, 3, 2, 1.0, 5));
  const auto c = grow(config(2000, 3, 2, 1.0, 6));
  REQUIRE(a.edges.size() == b.edges.size());
  bool same = true;
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    same = same && a.edges[i].src == b.edges[i].src && a.edges[i].dst == b.edges[i].dst;
  }
  CHECK(same);
  CHECK(a.degrees != c.degrees);
}

TEST_CASE("configuration checks") {
  CHECK_THROWS_AS(grow(config(10, 2, 3, 1.0)), Error);
  CHECK_THROWS_AS(grow(config(2, 3, 1, 1.0)), Error);
  CHECK_THROWS_AS(grow(config(10, 3, 0, 1.0)), Error);
  try {
    grow(config(10, 3, 2, -0.5));
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("a zero-degree seed still receives links") {
  const auto g = grow(config(50, 1, 1, 1.0));
  CHECK(g.degrees[0] >= 1);
  CHECK(std::accumulate(g.degrees.begin(), g.degrees.end(), std::int64_t{0}) == 2 * 49);
}

TEST_CASE("attachment probability scales as degree to the alpha") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    // hits[k] ~ Poisson(k^alpha * exposure[k]); exposure sums count_k / total weight.
    std::map<std::int64_t, double> exposure;
    std::map<std::int64_t, double> hits;
    for (std::uint64_t run = 0; run < 300; ++run) {
      grow(config(150, 2, 1, alpha, 1000 + run), [&](const AttachmentEvent& ev) {
        std::map<std::int64_t, int> count;
        for (int i = 0; i < ev.node; ++i) ++count[ev.degrees[i]];
        for (const auto& [k, c] : count) exposure[k] += c / ev.total_weight;
        hits[ev.degrees[ev.targets[0]]] += 1.0;
      });
    }
    for (std::int64_t k : {1, 2}) {
      const double theta_k = hits[k] / exposure[k];
      const double theta_2k = hits[2 * k] / exposure[2 * k];
      const double ratio = theta_2k / theta_k;
      const double sigma = ratio * std::sqrt(1.0 / hits[k] + 1.0 / hits[2 * k]);
      CHECK(std::abs(ratio - std::pow(2.0, alpha)) <= 3.0 * sigma);
    }
  }
}

TEST_CASE("attachment weights follow the configured rule") {
  auto c = config(30, 3, 2, 1.5, 9);
  grow(c, [&](const AttachmentEvent& ev) {
    double total = 0.0;
    for (int i = 0; i < ev.node; ++i) {
      CHECK(ev.weights[i] == doctest::Approx(std::pow(static_cast<double>(ev.degrees[i]), 1.5)));
      total += ev.weights[i];
    }
    CHECK(ev.total_weight == doctest::Approx(total));
    CHECK(ev.targets.size() == 2);
  });
}

TEST_CASE("degree distribution") {
  const std::vector<std::int64_t> a{2, 2, 2};
  auto d = degree_distribution(a);
  CHECK(d.k == std::vector<std::int64_t>{2});
  CHECK(d.p == std::vector<double>{1.0});

  const std::vector<std::int64_t> b{1, 1, 2};
  d = degree_distribution(b);
  CHECK(d.k == std::vector<std::int64_t>{1, 2});
  CHECK(d.p[0] == doctest::Approx(2.0 / 3.0));
  CHECK(d.p[1] == doctest::Approx(1.0 / 3.0));

  const auto g = grow(config(5000, 3, 2, 1.0, 3));
  d = degree_distribution(g.degrees);
  CHECK(std::abs(std::accumulate(d.p.begin(), d.p.end(), 0.0) - 1.0) <= 1e-12);
}

TEST_CASE("linear preferential attachment yields a heavy tail") {
  const auto g = grow(config(20000, 3, 2, 1.0, 4));
  std::vector<double> obs(g.degrees.begin(), g.degrees.end());
  const auto fit = fit_power_law(std::span<const double>(obs));
  CHECK(-fit.hill_exponent >= 2.4);
  CHECK(-fit.hill_exponent <= 3.6);

  const auto u = grow(config(20000, 3, 2, 0.0, 4));
  std::vector<double> uobs(u.degrees.begin(), u.degrees.end());
  CHECK(fit_power_law(std::span<const double>(uobs)).verdict == Verdict::NotPowerLaw);
}
