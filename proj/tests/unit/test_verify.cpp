#include <gtest/gtest.h>

#include <string>

#include "potts/verify.hpp"

namespace {

TEST(Verify, OnlyPrintedTableCellsFail) {
  const auto rep = potts::verify::run_all();
  EXPECT_GE(rep.checks.size(), 90u);
  for (const auto& c : rep.failures()) {
    EXPECT_EQ(c.suite, "table1-printed") << c.name << " residual " << c.residual;
  }
}

TEST(Verify, InternalChecksAllPass) {
  const auto rep = potts::verify::run_all({}, false);
  for (const auto& c : rep.checks) {
    EXPECT_TRUE(c.pass) << c.suite << ": " << c.name << " residual " << c.residual << " tol " << c.tolerance;
  }
  EXPECT_TRUE(rep.all_pass());
}

}  // namespace
