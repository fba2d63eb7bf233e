#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "levywalk/kernel.hpp"
#include "levywalk/meijer.hpp"
#include "levywalk/stable.hpp"
#include "levywalk/wait_first.hpp"

using namespace levywalk;

namespace {

double rel_gap(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace

TEST_CASE("rational index arithmetic and parameter blocks") {
  RationalIndex idx(3, 4);
  CHECK(idx.alpha() == 0.75);
  CHECK(RationalIndex(1, 2).alpha() == 0.5);
  CHECK_THROWS_AS(RationalIndex(0, 2), domain_error);
  CHECK_THROWS_AS(RationalIndex(2, 4), domain_error);  // not coprime
  CHECK_THROWS_AS(RationalIndex(3, 3), domain_error);
  CHECK_THROWS_AS(RationalIndex(4, 3), domain_error);  // needs l < k
  const std::vector<double> d4 = delta_list(4, 1.0);
  REQUIRE(d4.size() == 4);
  CHECK(d4[0] == 0.25);
  CHECK(d4[1] == 0.5);
  CHECK(d4[2] == 0.75);
  CHECK(d4[3] == 1.0);
  const std::vector<double> d3 = delta_list(3, 0.5);
  REQUIRE(d3.size() == 3);
  CHECK(rel_gap(d3[0], 0.5 / 3.0) < 1e-15);
  CHECK(rel_gap(d3[1], 1.5 / 3.0) < 1e-15);
  CHECK(rel_gap(d3[2], 2.5 / 3.0) < 1e-15);
}

TEST_CASE("contour evaluation reproduces classical special cases") {
  // G^{1,0}_{0,1}(z; b=0) = e^{-z}
  MeijerSpec expo(1, 0, {}, {0.0}, 1.0);
  CHECK(rel_gap(eval_meijer_g(expo), 0.36787944117144232) < 1e-12);
  // G^{1,1}_{1,1}(z; a, b) = Gamma(1-a+b) z^b (1+z)^{a-b-1}
  MeijerSpec binom(1, 1, {-1.0}, {0.0}, 0.5);
  CHECK(rel_gap(eval_meijer_g(binom), 4.0 / 9.0) < 1e-12);
  // G^{2,0}_{0,2}(z; 0, 0) = 2 K_0(2 sqrt z)
  MeijerSpec bessel(2, 0, {}, {0.0, 0.0}, 1.0);
  CHECK(rel_gap(eval_meijer_g(bessel), 0.22778774549906687131) < 1e-12);
  // overlapping pole groups leave no room for the contour
  CHECK_THROWS_AS(MeijerSpec(1, 1, {2.0}, {0.0}, 0.5), domain_error);
}

TEST_CASE("stable density through the G form reproduces pinned values") {
  CHECK(rel_gap(r_rational(RationalIndex(1, 3), 1.5), 0.0842286806343781) < 1e-9);
  CHECK(rel_gap(r_rational(RationalIndex(2, 3), 0.8), 0.494655701779025) < 1e-9);
  CHECK(rel_gap(r_rational(RationalIndex(3, 4), 2.0), 0.107189992935841) < 1e-9);
  CHECK(rel_gap(r_rational(RationalIndex(1, 4), 10.0), 0.00761501846387701) < 5e-9);
}

TEST_CASE("stable density agrees with the series and integral path") {
  // in the deep left tail the density collapses through many orders of
  // magnitude and the contour integral loses relative digits to cancellation;
  // the absolute floor keeps the comparison honest there, matching the
  // abs_tol/rel_tol contract of the evaluation itself
  for (auto [l, k] : {std::pair{1, 2}, {1, 3}, {2, 3}, {3, 4}, {1, 4}}) {
    RationalIndex idx(l, k);
    StableIndex ai(idx.alpha());
    for (double x : {0.15, 0.6, 1.5, 4.0, 12.0}) {
      const double g = r_rational(idx, x);
      const double r = r_alpha(ai, x);
      CHECK(std::fabs(g - r) < 5e-8 * r + 1e-12);
    }
  }
}

TEST_CASE("coupling kernel through the G form reproduces pinned values") {
  CHECK(rel_gap(z_kernel_meijer(RationalIndex(1, 3), 0.25, 1.0, 0.3),
                0.0026459431456901363) < 1e-7);
  CHECK(rel_gap(z_kernel_meijer(RationalIndex(3, 4), 0.25, 1.0, -0.2),
                0.10690675379026676546) < 1e-7);
  CHECK(rel_gap(z_kernel_meijer(RationalIndex(3, 4), 0.5, 1.0, 0.5),
                0.14984008700005275479) < 1e-7);
  CHECK(rel_gap(z_kernel_meijer(RationalIndex(1, 4), 0.5, 2.0, 0.5),
                0.00061904866600898604098) < 1e-7);
  // at the half index the G path must shadow the closed kernel
  MeijerKernelStats st;
  const double g = z_kernel_meijer(RationalIndex(1, 2), 0.25, 0.5, 0.1, {}, &st);
  CHECK(rel_gap(g, z_kernel_half(0.25, 0.5, 0.1)) < 1e-9);
  CHECK(st.g_nodes == 1);
  CHECK(st.fallback_nodes == 0);
}

TEST_CASE("nodes with G argument near one fall back to the quadrature kernel") {
  // ((1-p)/p)^k ((w+x)/(w-x))^l = 1 exactly at p = 1/4, w = 1, x = -4/5
  MeijerKernelStats st;
  const double k = z_kernel_meijer(RationalIndex(1, 2), 0.25, 1.0, -0.8, {}, &st);
  CHECK(st.fallback_nodes == 1);
  CHECK(st.g_nodes == 0);
  CHECK(k == z_kernel_half(0.25, 1.0, -0.8));
  // a node safely away from Z = 1 stays on the G path
  st = {};
  z_kernel_meijer(RationalIndex(1, 2), 0.25, 1.0, 0.3, {}, &st);
  CHECK(st.fallback_nodes == 0);
  CHECK(st.g_nodes == 1);
}

TEST_CASE("wait-first density through the G kernel") {
  // closed-form cross-check at the half index
  MeijerKernelStats st;
  const double g12 = pdf_wait_first_meijer(RationalIndex(1, 2), 0.25, {1.0, 0.3}, {}, &st);
  CHECK(rel_gap(g12, pdf_wait_first_half(0.25, 1.0, 0.3)) < 1e-9);
  CHECK(st.g_nodes > 0);
  // quadrature cross-check away from it
  const double g34 = pdf_wait_first_meijer(RationalIndex(3, 4), 0.25, {1.0, 0.3});
  CHECK(rel_gap(g34, 0.093351473780151101) < 1e-8);
  const double g34n = pdf_wait_first_meijer(RationalIndex(3, 4), 0.5, {1.0, -0.4});
  CHECK(rel_gap(g34n, 0.43831438828738384) < 1e-8);
}

TEST_CASE("curve through the G kernel matches the quadrature curve") {
  const std::vector<double> grid{-0.8, -0.45, -0.1, 0.25, 0.6, 0.9};
  MeijerKernelStats st;
  DensityCurve gm = curve_wait_first_meijer(RationalIndex(3, 4), 0.25, 1.0, grid, {}, &st);
  CHECK(gm.method == Method::meijer);
  CHECK(st.g_nodes > 0);
  ModelParams mp{StableIndex(0.75), 0.25};
  DensityCurve qd = curve_wait_first(mp, 1.0, grid);
  REQUIRE(gm.values.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(rel_gap(gm.values[i], qd.values[i]) < 1e-6);
    CHECK(gm.divergent[i] == 0);
  }
}
