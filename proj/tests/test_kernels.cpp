#include "navobs/kernels.hpp"
#include "navobs/riccati.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <vector>

using namespace navobs;
using navobs::test::random_mat;
using navobs::test::random_spd9;

namespace {

Mat9 reference_rhs(const Mat9& p, const Mat9& m, const Mat9& v, double gamma) {
  const Mat9& a = TranslationalModel::A();
  return gamma * (a * p + p * a.transpose() - p * m * p + v);
}

double rel_err(const MatX& got, const MatX& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

void check_table(const kernels::KernelTable& k) {
  for (int trial = 0; trial < 200; ++trial) {
    const Mat9 p = random_spd9();
    const Mat9 m = random_spd9(0.0);
    const Mat9 v = random_spd9();
    const double gamma = navobs::test::uniform(1.0, 4.0);
    Mat9 out;
    k.riccati_rhs(p.data(), m.data(), v.data(), gamma, out.data());
    CHECK(rel_err(out, reference_rhs(p, m, v, gamma)) < 1e-13);
  }
  for (std::size_t rows : {1u, 3u, 4u, 7u, 12u, 13u, 16u, 17u, 33u}) {
    const MatX g = random_mat(static_cast<Eigen::Index>(rows), 9);
    Mat9 acc = random_spd9();
    const Mat9 expect = acc + 0.37 * g.transpose() * g;
    k.accumulate_gram(g.data(), rows, 0.37, acc.data());
    CHECK(rel_err(acc, expect) < 1e-14);
  }
}

}  // namespace

TEST_CASE("scalar kernels match the Eigen reference") { check_table(kernels::scalar_kernels()); }

TEST_CASE("avx2 kernels match the Eigen reference when available") {
  const kernels::KernelTable* k = kernels::avx2_kernels();
  if (k == nullptr) {
    MESSAGE("AVX2/FMA not available; skipped");
    return;
  }
  check_table(*k);
}

TEST_CASE("scalar and avx2 kernels agree") {
  const kernels::KernelTable* k = kernels::avx2_kernels();
  if (k == nullptr) return;
  const auto& s = kernels::scalar_kernels();
  for (int trial = 0; trial < 500; ++trial) {
    const Mat9 p = random_spd9(), m = random_spd9(0.0), v = random_spd9();
    Mat9 a, b;
    s.riccati_rhs(p.data(), m.data(), v.data(), 2.0, a.data());
    k->riccati_rhs(p.data(), m.data(), v.data(), 2.0, b.data());
    CHECK(rel_err(a, b) < 1e-14);

    const MatX g = random_mat(12, 9);
    Mat9 wa = Mat9::Zero(), wb = Mat9::Zero();
    s.accumulate_gram(g.data(), 12, 1.5, wa.data());
    k->accumulate_gram(g.data(), 12, 1.5, wb.data());
    CHECK(rel_err(wa, wb) < 1e-14);
    // Both variants produce exactly symmetric accumulators.
    CHECK(wa == wa.transpose());
    CHECK(wb == wb.transpose());
  }
}

TEST_CASE("active table is one of the known variants") {
  const auto name = kernels::active().name;
  CHECK((name == "scalar" || name == "avx2"));
}
