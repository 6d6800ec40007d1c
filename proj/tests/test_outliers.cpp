// Copyright 2026 The oseql Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles/detector_oracles.hpp"
#include "oseql/error.hpp"
#include "oseql/outliers.hpp"
#include "oseql/stats.hpp"

using namespace oseql;

namespace {

std::vector<ScorePoint> points_of(const std::vector<double>& s) {
  std::vector<ScorePoint> p;
  for (std::size_t i = 0; i < s.size(); ++i) {
    p.push_back({i + 1, s[i], s[i] >= 0.5 ? 1 : 0});
  }
  return p;
}

std::vector<bool> flags_of(const OutlierSet& set, std::size_t n) {
  std::vector<bool> f(n, false);
  for (const auto& p : set.flagged) f[p.line_index - 1] = true;
  return f;
}

// Half the sets sit on a 1/64 grid so fences land exactly on data points and
// the strict inequality is exercised; the rest are continuous.
std::vector<double> random_scores(std::mt19937_64& rng, std::size_t n, bool grid) {
  std::vector<double> s(n);
  for (auto& v : s) {
    v = grid ? static_cast<double>(rng() % 65) / 64.0
             : static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  if (rng() % 3 == 0) s[rng() % n] = grid ? 1.0 : 0.999;
  return s;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("distribution helpers against reference values") {
  // Reference values from an independent numerical library.
  CHECK(stats::chi2_1_quantile(0.975) == doctest::Approx(5.023886187314888).epsilon(1e-13));
  CHECK(stats::chi2_1_quantile(0.5) == doctest::Approx(0.454936423119572).epsilon(1e-13));
  CHECK(stats::chi2_3_cdf(0.1) == doctest::Approx(0.00816257626812352).epsilon(1e-13));
  CHECK(stats::chi2_3_cdf(1.0) == doctest::Approx(0.19874804309879915).epsilon(1e-13));
  CHECK(stats::chi2_3_cdf(2.5) == doctest::Approx(0.5247089166569795).epsilon(1e-13));
  CHECK(stats::chi2_3_cdf(7.8) == doctest::Approx(0.9496689021401467).epsilon(1e-13));
  CHECK(stats::mcd_consistency_factor(0.5) == doctest::Approx(7.010074539703252).epsilon(1e-12));
  CHECK(stats::mcd_consistency_factor(0.6) == doctest::Approx(4.659969541210519).epsilon(1e-12));
  CHECK(stats::mcd_consistency_factor(0.75) == doctest::Approx(2.713527101775519).epsilon(1e-12));
  CHECK(stats::mcd_consistency_factor(0.9) == doctest::Approx(1.6050965432888382).epsilon(1e-12));
  CHECK(stats::mcd_consistency_factor(1.0) == 1.0);
  CHECK(stats::normal_quantile(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-14));
  CHECK(stats::normal_quantile(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-14));
  CHECK(stats::normal_quantile(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-14));
  CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(stats::normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-14));
  CHECK(stats::normal_quantile(0.999999) == doctest::Approx(4.753424308817087).epsilon(1e-13));
}

TEST_CASE("test-side oracles agree with the reference values too") {
  CHECK(static_cast<double>(oracle::chi2_1_quantile(0.975L)) ==
        doctest::Approx(5.023886187314888).epsilon(1e-14));
  CHECK(static_cast<double>(oracle::mcd_factor(0.5L)) ==
        doctest::Approx(7.010074539703252).epsilon(1e-12));
  CHECK(static_cast<double>(oracle::chi2_3_cdf(7.8L)) ==
        doctest::Approx(0.9496689021401467).epsilon(1e-13));
}

TEST_CASE("average path length") {
  CHECK(average_path_length(0) == 0.0);
  CHECK(average_path_length(1) == 0.0);
  CHECK(average_path_length(2) == 1.0);
  CHECK(average_path_length(3) == doctest::Approx(1.207392357589623).epsilon(1e-14));
  CHECK(average_path_length(21) == doctest::Approx(5.241133972149143).epsilon(1e-14));
  CHECK(average_path_length(256) == doctest::Approx(10.244770920119917).epsilon(1e-14));
}

}  // TEST_SUITE

TEST_SUITE("outliers") {

TEST_CASE("IQR matches the brute-force quantile oracle on 1000 score sets") {
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 60;
    const auto s = random_scores(rng, n, t % 2 == 0);
    const double k = t % 5 == 0 ? 3.0 : 1.5;
    const auto got = iqr_outliers(points_of(s), IqrConfig{k});
    if (flags_of(got, n) != oracle::iqr_flags(s, k)) ++mismatches;
    const auto f = oracle::iqr_fences(s, k);
    const auto& d = std::get<IqrDiagnostics>(got.diagnostics);
    CHECK(static_cast<long double>(d.lower_fence) == doctest::Approx(static_cast<double>(f.lo)).epsilon(1e-12));
    CHECK(static_cast<long double>(d.upper_fence) == doctest::Approx(static_cast<double>(f.hi)).epsilon(1e-12));
  }
  CHECK(mismatches == 0);
}

TEST_CASE("IQR bounds of two hand-checked profiles") {
  // Score profile (a): eight lines, line 6 far above the rest.
  const std::vector<double> a = {0.0004, 0.0006, 0.0006, 0.0007, 0.0008,
                                 0.97,   0.00095, 0.00095};
  const auto ra = iqr_outliers(points_of(a));
  const auto& da = std::get<IqrDiagnostics>(ra.diagnostics);
  CHECK(da.lower_fence == doctest::Approx(0.000075).epsilon(1e-9));
  CHECK(da.upper_fence == doctest::Approx(0.001475).epsilon(1e-9));
  REQUIRE(ra.flagged.size() == 1);
  CHECK(ra.flagged[0].line_index == 6);

  // Profile (b): twelve lines, lines 9 and 10 above the upper fence.
  const std::vector<double> b = {0.02,    0.01,    0.03015, 0.03015,
                                 0.1,     0.15,    0.2,     0.283125,
                                 0.98,    0.71,    0.283125, 0.05};
  const auto rb = iqr_outliers(points_of(b));
  const auto& db = std::get<IqrDiagnostics>(rb.diagnostics);
  CHECK(db.lower_fence == doctest::Approx(-0.3493125).epsilon(1e-9));
  CHECK(db.upper_fence == doctest::Approx(0.6625875).epsilon(1e-9));
  REQUIRE(rb.flagged.size() == 2);
  CHECK(rb.flagged[0].line_index == 9);
  CHECK(rb.flagged[1].line_index == 10);
}

TEST_CASE("IQR edge cases") {
  CHECK_THROWS_AS(iqr_outliers(std::vector<ScorePoint>{}), InvalidArgument);
  CHECK_THROWS_AS(iqr_outliers(points_of({0.1, 0.2}), IqrConfig{0}), InvalidArgument);
  const auto one = iqr_outliers(points_of({0.3}));
  CHECK(one.flagged.empty());
  CHECK(one.degenerate);
  const auto flat = iqr_outliers(points_of({0.2, 0.2, 0.2, 0.2}));
  CHECK(flat.flagged.empty());
  CHECK(flat.degenerate);
  // Zero IQR but not all equal: everything off the plateau is flagged.
  const auto plateau = iqr_outliers(points_of({0.2, 0.2, 0.2, 0.2, 0.2, 0.9}));
  CHECK_FALSE(plateau.degenerate);
  REQUIRE(plateau.flagged.size() == 1);
  CHECK(plateau.flagged[0].line_index == 6);
}

TEST_CASE("1-D MCD matches exhaustive subset search") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 4 + rng() % 11;  // 4..14
    auto s = random_scores(rng, n, false);
    const double frac = t % 3 == 0 ? 0.75 : 0.5;
    const auto got = elliptic_outliers(points_of(s), EllipticConfig{frac, 0.975});
    const auto want = oracle::mcd_subsets(s, frac, 0.975L);
    const auto& d = std::get<EllipticDiagnostics>(got.diagnostics);
    CAPTURE(t);
    CHECK(d.support == want.h);
    CHECK(d.location == doctest::Approx(static_cast<double>(want.location)).epsilon(1e-12));
    CHECK(d.raw_variance == doctest::Approx(static_cast<double>(want.variance)).epsilon(1e-9));
    CHECK(flags_of(got, n) == want.flags);
  }
}

TEST_CASE("1-D MCD matches exhaustive window search on larger sets") {
  std::mt19937_64 rng(78);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 15 + rng() % 150;
    std::vector<double> s(n);
    // Cluster plus scattered tail, like occlusion score profiles.
    for (auto& v : s) {
      v = rng() % 8 ? 0.6 + 0.05 * static_cast<double>(rng() >> 11) * 0x1.0p-53
                    : static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    const auto got = elliptic_outliers(points_of(s));
    const auto want = oracle::mcd_windows(s, 0.5L, 0.975L);
    const auto& d = std::get<EllipticDiagnostics>(got.diagnostics);
    CAPTURE(t);
    CHECK(d.location == doctest::Approx(static_cast<double>(want.location)).epsilon(1e-12));
    CHECK(flags_of(got, n) == want.flags);
  }
}

TEST_CASE("MCD with a zero-variance support flags everything else") {
  const auto r = elliptic_outliers(points_of({0.3, 0.3, 0.3, 0.3, 0.31, 0.9}));
  CHECK(r.degenerate);
  REQUIRE(r.flagged.size() == 2);
  CHECK(r.flagged[0].line_index == 5);
  CHECK(r.flagged[1].line_index == 6);
  CHECK_THROWS_AS(elliptic_outliers(points_of({0.1, 0.2, 0.3})), InvalidArgument);
}

TEST_CASE("isolation forest flags the extreme point of a 21-point instance") {
  std::mt19937_64 data(5);
  std::vector<double> s;
  for (int i = 0; i < 20; ++i) {
    s.push_back(0.70 + 0.04 * static_cast<double>(data() >> 11) * 0x1.0p-53);
  }
  s.insert(s.begin() + 13, 0.03);  // line 14
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = iforest_outliers(points_of(s), IforestConfig{}, seed);
    const auto f = flags_of(r, s.size());
    hits += f[13];
  }
  CHECK(hits >= 95);
}

TEST_CASE("isolation forest is deterministic and order-free") {
  std::mt19937_64 rng(9);
  auto s = random_scores(rng, 30, false);
  s[4] = 0.999;
  auto pts = points_of(s);
  const auto a = iforest_outliers(pts, IforestConfig{}, 42);
  const auto b = iforest_outliers(pts, IforestConfig{}, 42);
  CHECK(a.flagged == b.flagged);
  CHECK(std::get<IforestDiagnostics>(a.diagnostics).anomaly_scores ==
        std::get<IforestDiagnostics>(b.diagnostics).anomaly_scores);

  auto shuffled = pts;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto c = iforest_outliers(shuffled, IforestConfig{}, 42);
  auto by_line = [](std::vector<ScorePoint> v) {
    std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.line_index < y.line_index; });
    return v;
  };
  CHECK(by_line(c.flagged) == a.flagged);

  const auto flat = iforest_outliers(points_of({0.4, 0.4, 0.4}), IforestConfig{}, 1);
  CHECK(flat.degenerate);
  CHECK(flat.flagged.empty());
  CHECK_THROWS_AS(iforest_outliers(points_of({0.4}), IforestConfig{}, 1), InvalidArgument);
}

TEST_CASE("anomaly scores stay in (0, 1]") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_scores(rng, 2 + rng() % 40, t % 2);
    const auto r = iforest_outliers(points_of(s), IforestConfig{20, 0, 0.6}, t);
    for (double a : std::get<IforestDiagnostics>(r.diagnostics).anomaly_scores) {
      CHECK(a > 0.0);
      CHECK(a <= 1.0);
    }
  }
}

TEST_CASE("ensemble is the 2-of-3 vote of its parts") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + rng() % 40;
    const auto s = random_scores(rng, n, t % 2);
    const auto pts = points_of(s);
    const auto iq = flags_of(iqr_outliers(pts), n);
    const auto fo = flags_of(iforest_outliers(pts, IforestConfig{}, t), n);
    const auto ee = flags_of(elliptic_outliers(pts), n);
    const auto all = ensemble_outliers(pts, t);
    const auto got = flags_of(all, n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(got[i] == (iq[i] + fo[i] + ee[i] >= 2));
    }
  }
  CHECK_THROWS_AS(ensemble_outliers(points_of({0.1, 0.2, 0.9}), 0), InvalidArgument);
}

TEST_CASE("detect_outliers degrades on tiny inputs instead of throwing") {
  DetectorConfig cfg;
  for (auto m : {OutlierMethod::Iqr, OutlierMethod::IsolationForest,
                 OutlierMethod::EllipticEnvelope, OutlierMethod::Ensemble}) {
    cfg.method = m;
    for (std::size_t n = 1; n <= 3; ++n) {
      std::vector<double> s(n, 0.2);
      s[0] = 0.9;
      const auto r = detect_outliers(points_of(s), cfg);
      CAPTURE(n);
      CAPTURE(to_string(m));
      CHECK(r.method == m);
      // The vote still has IQR and iForest from two points on.
      if (m == OutlierMethod::EllipticEnvelope || (m != OutlierMethod::Iqr && n == 1)) {
        CHECK(r.degenerate);
        CHECK(r.flagged.empty());
      }
    }
  }
  CHECK(parse_method("all") == OutlierMethod::Ensemble);
  CHECK(to_string(OutlierMethod::EllipticEnvelope) == "ee");
  CHECK_THROWS_AS(parse_method("lof"), InvalidArgument);
}

}  // TEST_SUITE
