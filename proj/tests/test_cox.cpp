#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "analytic.hpp"
#include "cox.hpp"
#include "oracles.hpp"

using namespace radarcox;
using namespace radarcox::cox;

namespace {

constexpr double kPi = 3.14159265358979323846;
double deg(double d) { return d * kPi / 180.0; }

NetworkModel plcp_defaults() {
  NetworkModel m;
  m.kind = NetworkModel::Kind::Plcp;
  m.lambda_l = 0.01;
  m.lambda = 0.01;
  m.r_p = 500.0;
  return m;
}

NetworkModel blcp_defaults() {
  NetworkModel m;
  m.kind = NetworkModel::Kind::Blcp;
  m.n_b = 300;
  m.r_g = 1500.0;
  m.lambda = 0.01;
  m.r_b = 500.0;
  m.r_0 = 0.0;
  return m;
}

bool same_realization(const Realization& a, const Realization& b) {
  if (a.lines.size() != b.lines.size() || a.interferers.size() != b.interferers.size())
    return false;
  for (std::size_t i = 0; i < a.lines.size(); ++i)
    if (a.lines[i].theta != b.lines[i].theta || a.lines[i].r != b.lines[i].r) return false;
  for (std::size_t i = 0; i < a.interferers.size(); ++i) {
    const auto &x = a.interferers[i], &y = b.interferers[i];
    if (x.line_index != y.line_index || x.v != y.v || x.w != y.w || x.active != y.active)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identical seeds give bit-identical realizations") {
  const auto m = plcp_defaults();
  RadioParams radio;
  radio.tx_prob = 0.7;
  const auto sector = make_interference_sector(m, deg(10));
  const auto a = sample_realization(m, sector, radio, 1234);
  const auto b = sample_realization(m, sector, radio, 1234);
  const auto c = sample_realization(m, sector, radio, 1235);
  CHECK(same_realization(a, b));
  CHECK_FALSE(same_realization(a, c));
}

TEST_CASE("lambda_L -> 0 leaves only ego-street interferers") {
  auto m = plcp_defaults();
  m.lambda_l = 0.0;
  m.lambda = 0.02;
  RadioParams radio;
  const auto sector = make_interference_sector(m, deg(15));
  double sum = 0.0, count = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const auto real = sample_realization(m, sector, radio, Rng(5, k).uniform() * 1e18);
    CHECK(real.lines.size() == 1);
    for (const auto& f : real.interferers) {
      CHECK(f.line_index == 0);
      CHECK(f.v >= 0.0);
      CHECK(f.v <= m.r_p);
      CHECK(f.w == doctest::Approx(f.v));  // head-on traffic, distance = v
      sum += f.v;
      count += 1.0;
    }
  }
  // uniform on [0, R_P]: mean v = R_P/2
  CHECK(sum / count == doctest::Approx(m.r_p / 2.0).epsilon(0.02));
  CHECK(count / 2000.0 == doctest::Approx(m.lambda * m.r_p).epsilon(0.05));
}

TEST_CASE("every sampled interferer is mutually visible") {
  const auto m = plcp_defaults();
  RadioParams radio;
  const auto sector = make_interference_sector(m, deg(20));
  for (int k = 0; k < 50; ++k) {
    const auto real = sample_realization(m, sector, radio, 777 + k);
    for (const auto& f : real.interferers) {
      const auto& line = real.lines[f.line_index];
      const auto& iv = real.intervals[f.line_index];
      const geom::Vec2 pos = interferer_position(line, sector, iv, f.v);
      CHECK(geom::mutual_visibility(sector, pos, line, -1));
      CHECK(f.w == doctest::Approx((pos - sector.apex).norm()).epsilon(1e-10));
    }
  }
}

TEST_CASE("Campbell consistency: mean interferer count = lambda * mean interval length") {
  const auto m = blcp_defaults();
  NetworkModel m2 = m;
  m2.n_b = 50;
  m2.lambda = 0.005;
  RadioParams radio;
  const auto sector = make_interference_sector(m2, deg(15));
  double count = 0.0, len = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    Rng rng(9, k);
    const auto real = sample_realization(m2, sector, radio, rng);
    count += static_cast<double>(real.interferers.size());
    for (const auto& iv : real.intervals) len += iv.length();
  }
  const double mean_count = count / n;
  const double expected = m2.lambda * len / n;
  CHECK(mean_count == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("conditional SF success: empty and trivial products") {
  Realization real;
  real.lines.push_back({0.0, 0.0});
  RadioParams radio;
  CHECK(conditional_sf_success(real, radio, 0.5, 15.0) == 1.0);

  // p -> 0: every factor is 1
  real.interferers.push_back({0, 10.0, 10.0, true});
  real.interferers.push_back({0, 90.0, 90.0, false});
  RadioParams p0 = radio;
  p0.tx_prob = 1e-300;
  CHECK(conditional_sf_success(real, p0, 0.5, 15.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single interferer at 100 m against the hand-evaluated factor") {
  Realization real;
  real.lines.push_back({0.0, 0.0});
  real.interferers.push_back({0, 100.0, 100.0, true});
  RadioParams radio;  // sigma = 30 dBsm = 1000 m^2, alpha = 2, p = 1
  const double bp = 4.0 * kPi * std::pow(15.0, 4) / 1000.0;
  const double expected = 1.0 / (1.0 + bp * std::pow(100.0, -2.0));
  CHECK(conditional_sf_success(real, radio, 0.5, 15.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(conditional_sf_success(real, radio, 1.0, 15.0), std::domain_error);
}

TEST_CASE("single-interferer factor equals a fading Monte Carlo average") {
  // independent oracle: average 1(SF > beta_sf) over sigma_c, h draws
  Realization real;
  real.lines.push_back({0.0, 0.0});
  real.interferers.push_back({0, 100.0, 100.0, true});
  RadioParams radio;
  const double beta_sf = 0.5, R = 15.0;
  const double sigma = radio.sigma_linear();
  Rng rng(31);
  const int n = 2000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double sc = rng.exponential(sigma);
    const double h = rng.exponential(1.0);
    const double s = sc * std::pow(R, -4.0);
    const double interf = 4.0 * kPi * h * std::pow(100.0, -2.0);
    if (s / (s + interf) > beta_sf) ++hits;
  }
  const double mc = static_cast<double>(hits) / n;
  const double an = conditional_sf_success(real, radio, beta_sf, R);
  CHECK(an == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("SIR sentinel and SF identity") {
  Realization real;
  real.lines.push_back({0.0, 0.0});
  RadioParams radio;
  Rng rng(1);
  CHECK(std::isinf(sample_sir(real, radio, 15.0, rng)));

  real.interferers.push_back({0, 60.0, 60.0, true});
  for (int i = 0; i < 100; ++i) {
    const double sir = sample_sir(real, radio, 15.0, rng);
    const double sf = sir / (1.0 + sir);
    CHECK(sf >= 0.0);
    CHECK(sf <= 1.0);
    CHECK(sf / (1.0 - sf) == doctest::Approx(sir).epsilon(1e-9));
  }
}

TEST_CASE("SIR draws are invariant to transmit power and gains") {
  const auto m = plcp_defaults();
  RadioParams a;
  RadioParams b;
  b.p_dbm = 40.0;
  b.g_t_dbi = 23.0;
  b.f_c_hz = 24e9;
  const auto sector = make_interference_sector(m, deg(15));
  const auto real = sample_realization(m, sector, a, 5150);
  Rng r1(77), r2(77);
  for (int i = 0; i < 50; ++i)
    CHECK(sample_sir(real, a, 15.0, r1) == sample_sir(real, b, 15.0, r2));
}

TEST_CASE("tower property: P(SIR > beta) matches the mean conditional success") {
  const auto m = plcp_defaults();
  RadioParams radio;
  radio.tx_prob = 0.6;
  Thresholds thr;
  const double beta = thr.beta_linear();
  const double beta_sf = beta / (1.0 + beta);
  const auto sector = make_interference_sector(m, deg(15));
  const int n = 100000;
  int hits = 0;
  double cond_sum = 0.0, cond_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    Rng rng(1701, k);
    const auto real = sample_realization(m, sector, radio, rng);
    if (sample_sir(real, radio, 15.0, rng) > beta) ++hits;
    const double c = conditional_sf_success(real, radio, beta_sf, 15.0);
    cond_sum += c;
    cond_sq += c * c;
  }
  const double p_hit = static_cast<double>(hits) / n;
  const double cond_mean = cond_sum / n;
  // 3 sigma of the indicator estimate dominates
  const double se = std::sqrt(p_hit * (1.0 - p_hit) / n);
  CHECK(std::abs(p_hit - cond_mean) < 3.5 * se);
}

TEST_CASE("empirical meta-distribution is a proper CCDF") {
  const auto m = plcp_defaults();
  RadioParams radio;
  const auto sector = make_interference_sector(m, deg(15));
  const auto grid = default_t_grid(128);
  const auto md = empirical_md(m, sector, radio, 0.5, 15.0, 4000, 31337, grid, 2);
  CHECK(md.curve.F.front() == 1.0);
  for (std::size_t i = 1; i < md.curve.F.size(); ++i) {
    CHECK(md.curve.F[i] <= md.curve.F[i - 1] + 1e-12);
    CHECK(md.curve.F[i] >= 0.0);
    CHECK(md.curve.F[i] <= 1.0);
  }
  // first moment of samples equals the reported p_d
  double mean, se;
  sample_moment(md.samples, 1.0, mean, se);
  CHECK(mean == doctest::Approx(md.p_d));
}

TEST_CASE("beta_sf -> 0 gives the constant-1 curve") {
  const auto m = plcp_defaults();
  RadioParams radio;
  const auto sector = make_interference_sector(m, deg(15));
  const auto grid = default_t_grid(64);
  const auto md = empirical_md(m, sector, radio, 1e-12, 15.0, 500, 9, grid, 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(md.curve.F[i] == 1.0);
}

TEST_CASE("thread count does not change the result") {
  const auto m = plcp_defaults();
  RadioParams radio;
  const auto sector = make_interference_sector(m, deg(15));
  const auto grid = default_t_grid(64);
  const auto a = empirical_md(m, sector, radio, 0.5, 15.0, 3000, 555, grid, 1);
  const auto b = empirical_md(m, sector, radio, 0.5, 15.0, 3000, 555, grid, 2);
  CHECK(a.p_d == b.p_d);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.curve.F[i] == b.curve.F[i]);
}

TEST_CASE("PLCP statistics are translation invariant") {
  auto m = plcp_defaults();
  RadioParams radio;
  // translated construction: the sampler windows lines around the sector apex
  auto sector0 = make_interference_sector(m, deg(15));
  auto sector1 = sector0;
  sector1.apex = {1234.5, -876.0};
  const auto grid = default_t_grid(4);
  const int n = 40000;
  double p0, p1, se0, se1;
  {
    auto md = empirical_md(m, sector0, radio, 0.5, 15.0, n, 2222, grid, 2);
    p0 = md.p_d;
    se0 = md.p_d_se;
  }
  {
    // same model, sector translated; sampling window follows the apex
    geom::SectorSpec s = sector1;
    auto md = empirical_md(m, s, radio, 0.5, 15.0, n, 4444, grid, 2);
    p1 = md.p_d;
    se1 = md.p_d_se;
  }
  CHECK(std::abs(p0 - p1) < 3.5 * std::hypot(se0, se1));
}

TEST_CASE("BLCP statistics depend on the ego position") {
  auto near = blcp_defaults();
  auto far = blcp_defaults();
  far.r_0 = 20000.0;
  RadioParams radio;
  const auto grid = default_t_grid(4);
  const auto md_near = empirical_md(near, make_interference_sector(near, deg(15)), radio, 0.5,
                                    15.0, 20000, 8, grid, 2);
  const auto md_far = empirical_md(far, make_interference_sector(far, deg(15)), radio, 0.5,
                                   15.0, 20000, 8, grid, 2);
  CHECK(std::abs(md_near.p_d - md_far.p_d) > 3.0 * std::hypot(md_near.p_d_se, md_far.p_d_se));
}
