#include "chanalloc/coding.hpp"

#include <cmath>

#include "chanalloc/csv.hpp"
#include "chanalloc/error.hpp"

namespace chanalloc {

double to_db(double linear) { return 10.0 * std::log10(linear); }

double required_sir_db(int m) {
  for (const auto& row : kRateTable) {
    if (row.m == m) return row.required_sir_db;
  }
  throw InvalidParameter("RM(1,m) table covers m = 2..10, got " + std::to_string(m));
}

double normalized_throughput(double sir_db) {
  if (std::isnan(sir_db)) return 0.0;
  for (const auto& row : kRateTable) {
    if (sir_db >= row.required_sir_db) return row.rate;
  }
  return 0.0;
}

std::string rate_table_csv() {
  std::string out = "m,rate,sir_db\n";
  for (const auto& row : kRateTable) {
    out += std::to_string(row.m) + ',' + csv::num(row.rate) + ',' + csv::num(row.required_sir_db) +
           '\n';
  }
  return out;
}

}  // namespace chanalloc
