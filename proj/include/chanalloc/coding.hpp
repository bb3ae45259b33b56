#pragma once

#include <array>
#include <span>
#include <string>

namespace chanalloc {

// One RM(1,m) code: its rate and the SIR needed for the target bit error rate.
struct RateRow {
  int m;
  double rate;
  double required_sir_db;
};

inline constexpr double kBerTarget = 1e-3;

// Rows ordered by m = 2..10; rates and SIR requirements both strictly decrease.
inline constexpr std::array<RateRow, 9> kRateTable{{
    {2, 0.75, 6.0},
    {3, 0.5, 5.15},
    {4, 0.3125, 4.6},
    {5, 0.1875, 4.1},
    {6, 0.1094, 3.75},
    {7, 0.0625, 3.45},
    {8, 0.0352, 3.2},
    {9, 0.0195, 3.1},
    {10, 0.0107, 2.8},
}};

inline std::span<const RateRow> rate_table() { return kRateTable; }

double to_db(double linear);

// Table lookup for 2 <= m <= 10; InvalidParameter otherwise.
double required_sir_db(int m);

/// Highest code rate whose SIR requirement is met; 0 below the weakest
/// code's threshold, the top rate for +infinity.
double normalized_throughput(double sir_db);

// "m,rate,sir_db" header followed by the nine table rows.
std::string rate_table_csv();

}  // namespace chanalloc
