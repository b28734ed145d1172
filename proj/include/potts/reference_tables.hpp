#pragma once

// Reference values for the three-point constant at six decimals (or the quoted
// significant figures). The same numbers live in
// data/table1.csv and data/table2.csv.

#include <array>
#include <numbers>

namespace potts::reference {

struct Table1Row {
  double q;
  double kappa;
  double c;
  double im_dozz;
};

inline constexpr std::array<Table1Row, 13> kTable1{{
    {1.00, 2.666667, 1.0, 1.0},
    {1.25, 2.755285, 1.100695, 0.997433},
    {1.50, 2.839139, 1.202563, 0.991314},
    {1.75, 2.920214, 1.306731, 0.983085},
    {2.00, 3.0, 1.414213, 0.973497},
    {2.25, 3.079786, 1.526056, 0.962951},
    {2.50, 3.160861, 1.643484, 0.951647},
    {2.75, 3.244715, 1.768084, 0.939642},
    {3.00, 3.333333, 1.902113, 0.926870},
    {3.25, 3.429802, 2.049192, 0.913097},
    {3.50, 3.539893, 2.216090, 0.897767},
    {3.75, 3.678278, 2.419665, 0.879331},
    {4.00, 4.0, 2.0 * std::numbers::sqrt2, 0.840896},
}};

struct Table2Row {
  double q;
  double r_num;        // simulated value
  double r_num_sigma;  // quoted one-sigma uncertainty (0 = exact)
  double exact;        // printed (C(q)/sqrt(q)) * ImDOZZ
};

inline constexpr std::array<Table2Row, 13> kTable2{{
    {1.00, 1.0, 0.0, 1.0},
    {1.25, 0.9815, 0.0005, 0.981964},
    {1.50, 0.973, 0.002, 0.973360},
    {1.75, 0.9720, 0.0005, 0.971087},
    {2.00, 0.9735, 0.0002, 0.973497},
    {2.25, 0.9800, 0.0003, 0.979678},
    {2.50, 0.9896, 0.0012, 0.989171},
    {2.75, 1.002, 0.002, 1.00184},
    {3.00, 1.0183, 0.0005, 1.01788},
    {3.25, 1.0376, 0.0020, 1.03791},
    {3.50, 1.061, 0.003, 1.06345},
    {3.75, 1.093, 0.003, 1.09873},
    {4.00, 1.18, 0.01, 1.18921},
}};

}  // namespace potts::reference
