#include "maxfem/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace maxfem {

SparseMatrixC matrix_from_triplets(int rows, int cols, std::vector<TripletC>& triplets) {
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const TripletC& a, const TripletC& b) {
                     return a.col() != b.col() ? a.col() < b.col() : a.row() < b.row();
                   });

  SparseMatrixC m(rows, cols);
  std::vector<TripletC> merged;
  merged.reserve(triplets.size());
  for (const TripletC& t : triplets) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
      throw std::out_of_range("matrix_from_triplets: index out of range");
    if (!merged.empty() && merged.back().row() == t.row() && merged.back().col() == t.col())
      merged.back() = TripletC(t.row(), t.col(), merged.back().value() + t.value());
    else
      merged.push_back(t);
  }
  m.setFromTriplets(merged.begin(), merged.end());
  m.makeCompressed();
  return m;
}

void ComplexSparseSystem::dump_matrix(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char line[128];
  for (int col = 0; col < A.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(A, col); it; ++it) {
      std::snprintf(line, sizeof line, "%d %d %.17g %.17g\n", static_cast<int>(it.row()),
                    static_cast<int>(it.col()), it.value().real(), it.value().imag());
      out << line;
    }
  }
}

}  // namespace maxfem
