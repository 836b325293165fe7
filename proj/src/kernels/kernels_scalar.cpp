#include "navobs/kernels.hpp"

namespace navobs::kernels::scalar {

namespace {

inline double at(const double* a, int i, int j) { return a[j * kDim + i]; }

// (A P)(i, j): rows of P shifted up by one block, last block zero.
inline double shifted(const double* p, int i, int j) {
  return i < 6 ? at(p, i + 3, j) : 0.0;
}

}  // namespace

void riccati_rhs(const double* p, const double* m, const double* v, double gamma,
                 double* out) {
  double mp[kSize];
  for (int j = 0; j < kDim; ++j) {
    for (int i = 0; i < kDim; ++i) {
      double s = 0.0;
      for (int k = 0; k < kDim; ++k) s += at(m, i, k) * at(p, k, j);
      mp[j * kDim + i] = s;
    }
  }
  for (int j = 0; j < kDim; ++j) {
    for (int i = 0; i < kDim; ++i) {
      double s = 0.0;
      for (int k = 0; k < kDim; ++k) s += at(p, i, k) * mp[j * kDim + k];
      out[j * kDim + i] =
          gamma * (shifted(p, i, j) + shifted(p, j, i) - s + at(v, i, j));
    }
  }
}

void accumulate_gram(const double* g, std::size_t rows, double weight, double* w_acc) {
  for (int j = 0; j < kDim; ++j) {
    const double* gj = g + j * rows;
    for (int i = 0; i < kDim; ++i) {
      const double* gi = g + i * rows;
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += gi[r] * gj[r];
      w_acc[j * kDim + i] += weight * s;
    }
  }
}

}  // namespace navobs::kernels::scalar
