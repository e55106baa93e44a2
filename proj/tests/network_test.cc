#include "gridhorizon/network.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridhorizon/per_unit.h"
#include "test_networks.h"

namespace gridhorizon {
namespace {

using nlohmann::json;

TEST(PerUnitTest, ImpedanceBaseFromFeederRatings) {
  Bases b(100e3, 24.9e3);
  // 24900^2 / 100000 = 620010000 / 100000
  EXPECT_NEAR(b.impedance_base(), 6200.1, 1e-9);
  EXPECT_DOUBLE_EQ(WattsToPerUnit(300e3, b), 3.0);
  EXPECT_EQ(OhmsToPerUnit(0.0, b), 0.0);
  EXPECT_THROW(Bases(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Bases(1.0, -2.0), std::invalid_argument);
}

TEST(PerUnitTest, ConversionsRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  Bases b(100e3, 24.9e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(PerUnitToOhms(OhmsToPerUnit(x, b), b), x, 1e-12 * std::abs(x));
    EXPECT_NEAR(PerUnitToWatts(WattsToPerUnit(x, b), b), x, 1e-12 * std::abs(x));
    EXPECT_NEAR(PerUnitToSiemens(SiemensToPerUnit(x, b), b), x, 1e-12 * std::abs(x));
    EXPECT_NEAR(PerUnitToAmps(AmpsToPerUnit(x, b), b), x, 1e-12 * std::abs(x));
    // Any per-unit value produced from a document is reproduced exactly by a
    // write and re-read.
    const double pu_z = OhmsToPerUnit(u(rng), b), pu_w = WattsToPerUnit(u(rng), b);
    EXPECT_EQ(OhmsToPerUnit(PerUnitToOhms(pu_z, b), b), pu_z);
    EXPECT_EQ(WattsToPerUnit(PerUnitToWatts(pu_w, b), b), pu_w);
  }
}

TEST(NetworkTest, LoadsMinimalTwoBus) {
  NetworkModel m = LoadNetwork(testing::TwoBusDocument());
  EXPECT_EQ(m.buses.size(), 2u);
  EXPECT_EQ(m.lines.size(), 1u);
  EXPECT_EQ(m.slack_bus(), 0);
  EXPECT_DOUBLE_EQ(m.lines[0].r[1][1], 0.01);
  EXPECT_TRUE(Validate(m).empty());
}

TEST(NetworkTest, DanglingBusNamesTheId) {
  json doc = testing::TwoBusDocument();
  doc["lines"][0]["to"] = "b99";
  try {
    LoadNetwork(doc);
    FAIL() << "expected an error";
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.path(), "lines[0].to");
    EXPECT_NE(std::string(e.what()).find("b99"), std::string::npos);
  }
}

TEST(NetworkTest, StructuralErrorsCarryPaths) {
  json doc = testing::TwoBusDocument();
  doc["buses"][1]["id"] = "b1";
  EXPECT_THROW(LoadNetwork(doc), NetworkError);

  doc = testing::TwoBusDocument();
  doc["buses"][0]["kind"] = "pq";
  try {
    LoadNetwork(doc);
    FAIL();
  } catch (const NetworkError& e) {
    EXPECT_NE(std::string(e.what()).find("slack"), std::string::npos);
  }

  doc = testing::TwoBusDocument();
  doc["buses"].push_back({{"id", "island"}, {"phases", "abc"}});
  try {
    LoadNetwork(doc);
    FAIL();
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.path(), "buses[2]");
  }

  doc = testing::TwoBusDocument();
  doc["lines"][0]["r"] = "oops";
  try {
    LoadNetwork(doc);
    FAIL();
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.path(), "lines[0].r");
  }

  doc = testing::TwoBusDocument();
  doc["bases"].erase("s_base_va");
  try {
    LoadNetwork(doc);
    FAIL();
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.path(), "bases.s_base_va");
  }
}

TEST(NetworkTest, ValidateReportsBatteryAndAsymmetry) {
  NetworkModel m = LoadNetwork(testing::TwoBusDocument());
  Device bat;
  bat.id = "bess";
  bat.kind = DeviceKind::kBattery;
  bat.bus = 1;
  bat.s_max = 1.0;
  bat.pf_min = 0.9;
  bat.battery = {0.1, 1.0, 1.5, 0.5, 0.5, 0.9, 0.0};
  m.devices.push_back(bat);
  auto v = Validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("bess"), std::string::npos);

  m.devices.back().battery.e_init = 0.5;
  EXPECT_TRUE(Validate(m).empty());
  m.lines[0].r[0][1] = 0.002;
  v = Validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("l12"), std::string::npos);
}

TEST(NetworkTest, ValidateAgreesWithLoader) {
  json doc = testing::TwoBusDocument();
  doc["limits"]["v_max_pu"] = 0.99;
  EXPECT_THROW(LoadNetwork(doc), NetworkError);
  doc = testing::TwoBusDocument();
  doc["loads"][0]["phases"] = "ab";
  doc["buses"][1]["phases"] = "a";
  doc["lines"][0]["r"] = json{{0.01, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  doc["lines"][0]["x"] = json{{0.01, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  EXPECT_THROW(LoadNetwork(doc), NetworkError);
  doc["loads"][0]["phases"] = "a";
  NetworkModel m = LoadNetwork(doc);
  EXPECT_TRUE(Validate(m).empty());
}

TEST(NetworkTest, SerializeRoundTripIsExact) {
  json doc = testing::TwoBusDocument(0.0123, 0.0456);
  doc["bases"] = {{"s_base_va", 100e3}, {"v_base_v", 24.9e3}, {"dt_h", 1.0}};
  doc["lines"][0]["r"][0][1] = 0.3;
  doc["lines"][0]["r"][1][0] = 0.3;
  doc["lines"][0]["b_sh"] = {1e-6, 2e-6, 3e-6};
  doc["devices"].push_back({{"id", "pv1"}, {"kind", "pv"}, {"bus", "b2"}, {"s_max_va", 3e5},
                            {"pf_min", 0.95}, {"q_min_var", -93600.0}, {"q_max_var", 93600.0}});
  doc["devices"].push_back({{"id", "dg1"}, {"kind", "dg"}, {"bus", "b2"}, {"s_max_va", 8e5},
                            {"pf_min", 0.9}, {"q_min_var", -1e5}, {"q_max_var", 3e5},
                            {"cost_per_kwh", 4.23}});
  doc["devices"].push_back({{"id", "bess"}, {"kind", "battery"}, {"bus", "b2"},
                            {"s_max_va", 2e6}, {"pf_min", 0.9}, {"q_min_var", -6e5},
                            {"q_max_var", 6e5}, {"e_min_wh", 3.9e5}, {"e_max_wh", 3.9e6},
                            {"e_init_wh", 1.95e6}, {"p_ch_max_w", 1.9e6},
                            {"p_dis_max_w", 1.9e6}, {"eta_rt", 0.9},
                            {"self_discharge_per_h", 0.001}});
  NetworkModel a = LoadNetwork(doc);
  NetworkModel b = LoadNetwork(Serialize(a));
  ASSERT_EQ(a.lines.size(), b.lines.size());
  for (int f = 0; f < 3; ++f) {
    for (int h = 0; h < 3; ++h) {
      EXPECT_EQ(a.lines[0].r[f][h], b.lines[0].r[f][h]);
      EXPECT_EQ(a.lines[0].x[f][h], b.lines[0].x[f][h]);
    }
    EXPECT_EQ(a.lines[0].b_sh[f], b.lines[0].b_sh[f]);
  }
  ASSERT_EQ(a.devices.size(), b.devices.size());
  for (size_t i = 0; i < a.devices.size(); ++i) {
    const Device &x = a.devices[i], &y = b.devices[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.kind, y.kind);
    EXPECT_EQ(x.bus, y.bus);
    EXPECT_EQ(x.s_max, y.s_max);
    EXPECT_EQ(x.s_tr, y.s_tr);
    EXPECT_EQ(x.pf_min, y.pf_min);
    EXPECT_EQ(x.q_min, y.q_min);
    EXPECT_EQ(x.q_max, y.q_max);
    EXPECT_EQ(x.cost, y.cost);
    EXPECT_EQ(x.battery.e_min, y.battery.e_min);
    EXPECT_EQ(x.battery.e_max, y.battery.e_max);
    EXPECT_EQ(x.battery.e_init, y.battery.e_init);
    EXPECT_EQ(x.battery.p_ch_max, y.battery.p_ch_max);
    EXPECT_EQ(x.battery.eta_rt, y.battery.eta_rt);
    EXPECT_EQ(x.battery.self_discharge, y.battery.self_discharge);
  }
  EXPECT_EQ(Serialize(a), Serialize(b));
}

}  // namespace
}  // namespace gridhorizon
