// field_diff A.csv B.csv TOL: exit 0 when both fields have the same shape and
// max |a - b| <= TOL.
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "wavinv/error.hpp"
#include "wavinv/io/csv.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: field_diff A.csv B.csv TOL\n";
    return 2;
  }
  try {
    const auto a = wavinv::io::read_field_csv(std::string(argv[1]));
    const auto b = wavinv::io::read_field_csv(std::string(argv[2]));
    if (!a.values.same_shape(b.values)) {
      std::cerr << "shape mismatch\n";
      return 1;
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      m = std::max(m, std::abs(a.values.storage()[i] - b.values.storage()[i]));
    std::cout << "max |a - b| = " << m << '\n';
    return m <= std::atof(argv[3]) ? 0 : 1;
  } catch (const wavinv::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
