#include "gridhorizon/scenario.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "test_networks.h"

namespace gridhorizon {
namespace {

// Reference SplitMix64 stream generator, written from its textbook form.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t state) : state_(state) {}
  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

uint64_t First(uint64_t state) { return SplitMix64(state).Next(); }

// The generator's output finalizer on its own: a stream started one
// increment below z emits Finalize(z) first.
uint64_t Finalize(uint64_t z) { return First(z - 0x9e3779b97f4a7c15ULL); }

// The draw for (seed, name, t, stream) recomputed from the generator: the
// seed's first output is folded with the name hash and the counter through
// the finalizer, and the resulting key's stream yields two uniforms.
double ReferenceNormal(uint64_t seed, std::string_view name, int t, uint32_t stream) {
  const uint64_t counter = static_cast<uint64_t>(static_cast<uint32_t>(t)) |
                           (static_cast<uint64_t>(stream) << 32);
  const uint64_t key = Finalize(Finalize(First(seed) ^ HashName(name)) ^ counter);
  SplitMix64 g(key);
  const double u1 = 1.0 - static_cast<double>(g.Next() >> 11) / 9007199254740992.0;
  const double u2 = static_cast<double>(g.Next() >> 11) / 9007199254740992.0;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

TEST(RandomTest, SplitMixReferenceVector) {
  SplitMix64 g(0);
  EXPECT_EQ(g.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g.Next(), 0x6e789e6aa1b965f4ULL);
}

TEST(RandomTest, NameHashIsFnv1a) {
  EXPECT_EQ(HashName(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(HashName("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(HashName("foobar"), 0x85944171f73967e8ULL);
}

TEST(RandomTest, NormalMatchesRecomputation) {
  for (uint64_t seed : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    for (const char* name : {"price", "pv1", "S890.p.b"}) {
      for (int t : {0, 5, 23}) {
        for (uint32_t stream : {0u, 1u, 5u}) {
          EXPECT_EQ(StandardNormal(seed, name, t, stream), ReferenceNormal(seed, name, t, stream));
        }
      }
    }
  }
}

TEST(RandomTest, StreamsAndVariablesAreDistinct) {
  EXPECT_NE(StandardNormal(1, "price", 3, 0), StandardNormal(1, "price", 3, 1));
  EXPECT_NE(StandardNormal(1, "price", 3, 0), StandardNormal(1, "pv", 3, 0));
  EXPECT_NE(StandardNormal(1, "price", 3, 0), StandardNormal(2, "price", 3, 0));
  EXPECT_NE(StandardNormal(1, "price", 3, 0), StandardNormal(1, "price", 4, 0));
}

TEST(RandomTest, MomentsOfLargeSample) {
  const int n = 200000;
  double sum = 0.0, sq = 0.0, tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = StandardNormal(static_cast<uint64_t>(i), "x", 0);
    sum += z;
    sq += z * z;
    tail += std::abs(z) > 1.959963985 ? 1.0 : 0.0;
  }
  // Tolerances are about five standard errors.
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(tail / n, 0.05, 5.0 * std::sqrt(0.05 * 0.95 / n));
}

class DrawTest : public ::testing::Test {
 protected:
  NetworkModel net = LoadNetwork(testing::MicrogridDocument());
  Profiles p = testing::DailyProfiles(net);
};

TEST_F(DrawTest, ZeroSigmaCollapsesToMeans) {
  RealizationPath path = SampleRealizationPath(p, net, ErrorSpec::Zero(), 9);
  ASSERT_EQ(static_cast<int>(path.size()), p.horizon);
  for (int t = 0; t < p.horizon; ++t) {
    Realization m = MeanAt(p, t);
    EXPECT_EQ(path[t].price, m.price);
    EXPECT_EQ(path[t].available, m.available);
    EXPECT_EQ(path[t].load_p, m.load_p);
    EXPECT_EQ(path[t].load_q, m.load_q);
  }
  for (const RealizationPath& s : SampleScenarios(p, net, ErrorSpec::Zero(), 3, 9)) {
    EXPECT_EQ(s[7].price, p.price[7]);
  }
}

TEST_F(DrawTest, DrawsFollowTheDocumentedFormula) {
  ErrorSpec e;
  const uint64_t seed = 77;
  const int t = 12;
  Realization r = SampleRealization(p, net, e, seed, t);
  const double fp = std::max(0.0, 1.0 + e.price * ReferenceNormal(seed, "price", t, 0));
  EXPECT_EQ(r.price, p.price[t] * fp);
  const int pv = net.FindDevice("pv");
  const double fa = std::max(0.0, 1.0 + e.pv * ReferenceNormal(seed, "pv", t, 0));
  EXPECT_EQ(r.available[pv], std::min(p.available[pv][t] * fa, net.devices[pv].s_max));
  const double fl = std::max(0.0, 1.0 + e.p_demand * ReferenceNormal(seed, "d3.p.b", t, 0));
  EXPECT_EQ(r.load_p[0][1], p.load_p[0][t][1] * fl);
  const double fq = std::max(0.0, 1.0 + e.q_demand * ReferenceNormal(seed, "d3.q.c", t, 0));
  EXPECT_EQ(r.load_q[0][2], p.load_q[0][t][2] * fq);

  std::vector<RealizationPath> scen = SampleScenarios(p, net, e, 2, seed);
  const double fs = std::max(0.0, 1.0 + e.price * ReferenceNormal(seed, "price", t, 2));
  EXPECT_EQ(scen[1][t].price, p.price[t] * fs);
}

TEST_F(DrawTest, AvailabilityIsCappedAtCapacity) {
  const int pv = net.FindDevice("pv");
  for (int t = 0; t < p.horizon; ++t) p.available[pv][t] = net.devices[pv].s_max;
  ErrorSpec e;
  e.pv = 0.5;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    for (const Realization& r : SampleRealizationPath(p, net, e, seed)) {
      EXPECT_LE(r.available[pv], net.devices[pv].s_max);
      EXPECT_GE(r.available[pv], 0.0);
    }
  }
}

// Averaging many seeds recovers the mean profile (law of large numbers).
TEST_F(DrawTest, SampleMeanApproachesProfile) {
  ErrorSpec e;
  const int n = 4000;
  double price = 0.0, load = 0.0;
  for (int s = 0; s < n; ++s) {
    Realization r = SampleRealization(p, net, e, static_cast<uint64_t>(s), 18);
    price += r.price / n;
    load += r.load_p[0][0] / n;
  }
  EXPECT_NEAR(price / p.price[18], 1.0, 5.0 * e.price / std::sqrt(n));
  EXPECT_NEAR(load / p.load_p[0][18][0], 1.0, 5.0 * e.p_demand / std::sqrt(n));
}

TEST_F(DrawTest, ForecastWindowTruncatesAtHorizon) {
  WindowForecast f = MakeForecast(p, 20, 11);
  EXPECT_EQ(f.start, 20);
  EXPECT_EQ(f.length(), 4);
  EXPECT_EQ(f.steps[3].price, p.price[23]);
  EXPECT_THROW(MakeForecast(p, 24, 3), std::out_of_range);
  EXPECT_THROW(MakeForecast(p, 0, 0), std::invalid_argument);
}

TEST_F(DrawTest, ProfilesRoundTripThroughCsv) {
  std::istringstream in(FormatProfiles(p, net));
  Profiles q = ParseProfiles(in, net);
  EXPECT_EQ(q.horizon, p.horizon);
  EXPECT_EQ(q.price, p.price);
  EXPECT_EQ(q.available, p.available);
  EXPECT_EQ(q.load_p, p.load_p);
  EXPECT_EQ(q.load_q, p.load_q);
}

TEST_F(DrawTest, TotalColumnsSplitEvenly) {
  std::istringstream in("t,price,pv,d3.p,d3.q\n0,1,0.5,0.9,0.3\n");
  Profiles q = ParseProfiles(in, net);
  EXPECT_DOUBLE_EQ(q.load_p[0][0][2], 0.3);
  EXPECT_DOUBLE_EQ(q.load_q[0][0][0], 0.1);
}

std::string ProfileError(const NetworkModel& net, const std::string& text) {
  std::istringstream in(text);
  try {
    ParseProfiles(in, net);
  } catch (const gridhorizon::ProfileError& e) {
    return e.what();
  }
  return "";
}

TEST_F(DrawTest, ErrorsNameLineAndColumn) {
  EXPECT_NE(ProfileError(net, "t,price,pv,d3.p,d3.q\n0,1,x,0.9,0.3\n").find("line 2, column pv"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "t,price,d3.p,d3.q\n0,1,0.9,0.3\n").find("missing column pv"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "t,price,pv,d3.p,d3.q,zz\n0,1,0,0.9,0.3,1\n").find("unknown column zz"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "# horizon: 2\nt,price,pv,d3.p,d3.q\n0,1,0,0.9,0.3\n")
                .find("length mismatch"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "t,price,pv,d3.p,d3.q\n0,-1,0,0.9,0.3\n").find("negative price"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "t,price,pv,d3.p,d3.q\n0,1,5,0.9,0.3\n").find("S_max"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "t,price,pv,d3.p,d3.q\n1,1,0,0.9,0.3\n").find("step index"),
            std::string::npos);
  EXPECT_NE(ProfileError(net, "t,price,pv,d3.p,d3.q\n0,1,0\n").find("line 2"), std::string::npos);
}

TEST(WindTest, PiecewiseCurve) {
  WindCurve c;
  EXPECT_EQ(WindPower(2.0, c), 0.0);
  EXPECT_EQ(WindPower(30.0, c), 0.0);
  EXPECT_EQ(WindPower(12.0, c), 1.0);
  EXPECT_EQ(WindPower(20.0, c), 1.0);
  const double mid = 7.5;
  EXPECT_NEAR(WindPower(mid, c), (std::pow(mid, 3) - 27.0) / (1728.0 - 27.0), 1e-12);
}

}  // namespace
}  // namespace gridhorizon
