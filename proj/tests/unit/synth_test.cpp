#include "fedstlf/synth.hpp"

#include <gtest/gtest.h>

#include "fedstlf/error.hpp"
#include "fedstlf/preprocess.hpp"

namespace fedstlf::data {
namespace {

TEST(Synth, Deterministic) {
  SynthOptions o;
  o.n_clients = 5;
  o.n_days = 90;
  o.seed = 1;
  const auto a = synth_generate(o);
  const auto b = synth_generate(o);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].client_id, b[i].client_id);
    EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_EQ(a[i].size(), 90u * 24u);
  }
  o.seed = 2;
  EXPECT_NE(synth_generate(o)[0].values, a[0].values);
}

TEST(Synth, NonNegative) {
  SynthOptions o;
  o.n_clients = 20;
  o.n_days = 30;
  o.flat_fraction = 0.3;
  for (const auto& ts : synth_generate(o)) {
    for (double v : ts.values) ASSERT_GE(v, 0.0);
  }
}

TEST(Synth, FlatFractionCount) {
  SynthOptions o;
  o.n_clients = 10;
  o.n_days = 30;
  o.flat_fraction = 0.2;
  std::size_t below = 0;
  for (const auto& ts : synth_generate(o)) {
    if (load_std(ts) < 0.01) ++below;
  }
  EXPECT_EQ(below, 2u);
}

TEST(Synth, InvalidSizes) {
  SynthOptions o;
  o.n_clients = 0;
  EXPECT_THROW(synth_generate(o), ConfigError);
  o.n_clients = 3;
  o.n_days = 1;
  EXPECT_THROW(synth_generate(o), ConfigError);
}

}  // namespace
}  // namespace fedstlf::data
