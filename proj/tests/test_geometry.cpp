#include <catch2/catch_amalgamated.hpp>

#include "lfot/curvature.hpp"
#include "lfot/geodesic.hpp"
#include "lfot/jacobi.hpp"
#include "lfot/models.hpp"
#include "helpers.hpp"

using namespace lfot;
using lfot::testing::origin;
using lfot::testing::sample_timelike;
using Catch::Approx;

TEST_CASE("connection vanishes on Minkowski") {
  Minkowski mk{3};
  auto x = origin(3);
  std::vector<double> v{1.2, 0.3, -0.1};
  auto c = connection_at(mk, x, v);
  for (double g : c.spray) REQUIRE(g == Approx(0.0).margin(1e-14));
  for (double g : c.chern) REQUIRE(g == Approx(0.0).margin(1e-13));
}

TEST_CASE("Bogoslovsky is flat: zero spray, straight geodesics") {
  Bogoslovsky bg{2, 0.1};
  auto x = origin(2);
  std::vector<double> v{2.0, 1.0};
  auto G = spray<double>(bg, x, v);
  REQUIRE(norm2(G) < 1e-10);

  auto seg = exp_geodesic(bg, x, v, 1.0, 128, /*force_rk4=*/true);
  for (size_t k = 0; k < seg.times.size(); ++k) {
    double t = seg.times[k];
    REQUIRE(seg.points[k][0] == Approx(t * v[0]).margin(1e-8));
    REQUIRE(seg.points[k][1] == Approx(t * v[1]).margin(1e-8));
  }
}

TEST_CASE("de Sitter Christoffel symbols match the hand oracle") {
  DeSitter2D ds;
  Rng rng(101);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto v = sample_timelike(ds, x, rng);
    auto c = connection_at(ds, x, v);
    double t = x[0];
    REQUIRE(c.chern_at(0, 1, 1) == Approx(-std::cos(t) * std::sin(t)).margin(1e-8));
    REQUIRE(c.chern_at(1, 0, 1) == Approx(-std::tan(t)).margin(1e-8));
    REQUIRE(c.chern_at(1, 1, 0) == Approx(-std::tan(t)).margin(1e-8));
    REQUIRE(c.chern_at(0, 0, 0) == Approx(0.0).margin(1e-8));
    // quadratic metric: Chern coefficients coincide with the formal ones
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d)
          REQUIRE(c.chern_at(a, b, d) == Approx(c.formal_at(a, b, d)).margin(1e-9));
  }
}

TEST_CASE("Chern coefficients are symmetric in the lower indices") {
  Bogoslovsky bg{3, 0.2};
  DeSitter2D ds;
  Rng rng(7);
  auto x3 = origin(3);
  for (int k = 0; k < 20; ++k) {
    auto v = sample_timelike(bg, x3, rng);
    auto c = connection_at(bg, x3, v);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d)
          REQUIRE(c.chern_at(a, b, d) == Approx(c.chern_at(a, d, b)).margin(1e-9));

    std::vector<double> xd{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    auto vd = sample_timelike(ds, xd, rng);
    auto cd = connection_at(ds, xd, vd);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d)
          REQUIRE(cd.chern_at(a, b, d) == Approx(cd.chern_at(a, d, b)).margin(1e-9));
  }
}

TEST_CASE("nonlinear connection matches finite differences of the spray") {
  DeSitter2D ds;
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    auto v = sample_timelike(ds, x, rng);
    Matd N = nonlinear_connection<double>(ds, x, v);
    const double h = 1e-6;
    for (int b = 0; b < 2; ++b) {
      auto vp = v, vm = v;
      vp[b] += h;
      vm[b] -= h;
      auto Gp = spray<double>(ds, x, vp);
      auto Gm = spray<double>(ds, x, vm);
      for (int a = 0; a < 2; ++a) {
        double fd = (Gp[a] - Gm[a]) / (2.0 * h);
        REQUIRE(N(a, b) == Approx(fd).epsilon(1e-6).margin(1e-8));
      }
    }
  }
}

TEST_CASE("Minkowski geodesic is the exact straight line") {
  Minkowski mk{2};
  auto x = origin(2);
  std::vector<double> v{1.0, 0.0};
  auto seg = exp_geodesic(mk, x, v, 1.0, 1000, /*force_rk4=*/true);
  REQUIRE(seg.points.back()[0] == Approx(1.0).margin(1e-12));
  REQUIRE(seg.points.back()[1] == Approx(0.0).margin(1e-12));
}

TEST_CASE("de Sitter geodesics keep constant speed") {
  DeSitter2D ds;
  Rng rng(19);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> x{rng.uniform(-0.5, -0.1), rng.uniform(-0.5, 0.5)};
    auto v = sample_timelike(ds, x, rng, 0.8, 1.1);
    auto seg = exp_geodesic(ds, x, v, 0.8, 1000);
    double F0 = f_norm(ds, seg.points.front(), seg.tangents.front());
    for (size_t j = 0; j < seg.times.size(); ++j) {
      double F = f_norm(ds, seg.points[j], seg.tangents[j]);
      REQUIRE(std::fabs(F - F0) < 1e-7);
    }
  }
}

TEST_CASE("RK4 shows fourth-order convergence on de Sitter") {
  DeSitter2D ds;
  std::vector<double> x{-0.2, -0.2};
  std::vector<double> v{1.1, 0.35};
  auto ref = exp_map_t<double>(ds, x, v, 0.9, 8192);
  auto e1 = exp_map_t<double>(ds, x, v, 0.9, 64);
  auto e2 = exp_map_t<double>(ds, x, v, 0.9, 128);
  double err1 = std::hypot(e1[0] - ref[0], e1[1] - ref[1]);
  double err2 = std::hypot(e2[0] - ref[0], e2[1] - ref[1]);
  REQUIRE(err1 / err2 >= 8.0);
}

TEST_CASE("geodesic guards") {
  DeSitter2D ds;
  std::vector<double> x{0.0, 0.0};
  std::vector<double> v{4.0, 0.0};
  REQUIRE_THROWS_AS(exp_geodesic(ds, x, v, 1.0, 64), BlowUpError);
  Minkowski mk{2};
  REQUIRE_THROWS_AS(exp_geodesic(mk, origin(2), std::vector<double>{1.0, 0.0}, 1.0, 8),
                    std::invalid_argument);
}

TEST_CASE("curvature endomorphism annihilates the reference vector") {
  DeSitter2D ds;
  Bogoslovsky bg{2, 0.15};
  Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    auto v = sample_timelike(ds, x, rng);
    auto Rv = curvature_endomorphism(ds, x, v, v);
    REQUIRE(norm2(Rv) < 1e-8 * std::max(1.0, dot(v, v)));

    auto x2 = origin(2);
    auto vb = sample_timelike(bg, x2, rng);
    auto Rvb = curvature_endomorphism(bg, x2, vb, vb);
    REQUIRE(norm2(Rvb) < 1e-8);
  }
}

TEST_CASE("Minkowski curvature vanishes identically") {
  Minkowski mk{3};
  Rng rng(29);
  auto x = origin(3);
  for (int k = 0; k < 10; ++k) {
    auto v = sample_timelike(mk, x, rng);
    Matd R = curvature_matrix(mk, x, v);
    for (double e : R.d) REQUIRE(std::fabs(e) < 1e-12);
  }
}

TEST_CASE("de Sitter has constant curvature one") {
  DeSitter2D ds;
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    auto v = sample_timelike(ds, x, rng);
    double F2 = -2.0 * lagrangian_eval(ds, x, v);
    // Ricci scalar equals (n-1) F^2 = F^2
    REQUIRE(ricci(ds, x, v) == Approx(F2).epsilon(1e-6));

    // unit timelike v, g_v-unit w orthogonal to v: g_v(R_v(w), w) = F^2(v)
    double F = std::sqrt(F2);
    auto vu = v;
    for (auto& c : vu) c /= F;
    std::vector<double> w{0.0, 1.0};
    double gvw = metric_pairing(ds, x, vu, vu, w);
    // project w off vu (g(vu,vu) = -1), then normalize
    for (int i = 0; i < 2; ++i) w[i] += gvw * vu[i];
    double wn = std::sqrt(metric_pairing(ds, x, vu, w, w));
    for (auto& c : w) c /= wn;
    auto Rw = curvature_endomorphism(ds, x, vu, w);
    double val = metric_pairing(ds, x, vu, Rw, w);
    REQUIRE(val == Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("Ricci scaling and g_v-symmetry") {
  DeSitter2D ds;
  Rng rng(37);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    auto v = sample_timelike(ds, x, rng);
    auto v2 = v;
    for (auto& c : v2) c *= 2.0;
    REQUIRE(ricci(ds, x, v2) == Approx(4.0 * ricci(ds, x, v)).margin(1e-8));

    std::vector<double> w1{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    std::vector<double> w2{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto Rw1 = curvature_endomorphism(ds, x, v, w1);
    auto Rw2 = curvature_endomorphism(ds, x, v, w2);
    double lhs = metric_pairing(ds, x, v, w1, Rw2);
    double rhs = metric_pairing(ds, x, v, Rw1, w2);
    REQUIRE(lhs == Approx(rhs).margin(1e-7));
  }
}

TEST_CASE("Jacobi matrices grow linearly on Minkowski") {
  Minkowski mk{2};
  auto x = origin(2);
  std::vector<double> v{1.0, 0.2};
  auto seg = exp_geodesic(mk, x, v, 1.0, 64, /*force_rk4=*/true);
  Matd J0 = Matd::identity(2);
  Matd B0(2, 2);
  B0(0, 0) = 0.3;
  B0(0, 1) = -0.2;
  B0(1, 0) = -0.2;
  B0(1, 1) = 0.5;
  auto fr = jacobi_propagate(mk, seg, J0, B0);
  for (size_t k = 0; k < seg.times.size(); ++k) {
    double t = seg.times[k];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double expect = (a == b ? 1.0 : 0.0) + t * B0(a, b);
        REQUIRE(fr.J[k](a, b) == Approx(expect).margin(1e-12));
      }
  }
}

TEST_CASE("Lagrange identity along de Sitter Jacobi flows") {
  DeSitter2D ds;
  std::vector<double> x{-0.3, 0.3};
  std::vector<double> v{1.05, 0.3};
  auto seg = exp_geodesic(ds, x, v, 1.0, 2000);
  Matd J0 = Matd::identity(2);
  Matd B0(2, 2);
  B0(0, 0) = 0.1;
  B0(0, 1) = 0.25;
  B0(1, 0) = 0.25;
  B0(1, 1) = -0.2;
  auto fr = jacobi_propagate(ds, seg, J0, B0);
  // with Jacobi fields stored as rows the conserved Wronskian is
  // J J'^T - J' J^T; zero for symmetric initial data
  for (size_t k = 0; k < seg.times.size(); ++k) {
    Matd W = fr.J[k] * transpose(fr.Jp[k]) - fr.Jp[k] * transpose(fr.J[k]);
    for (double e : W.d) REQUIRE(std::fabs(e) < 1e-7);
  }
}

TEST_CASE("de Sitter scalar Jacobi component is cosine-type") {
  DeSitter2D ds;
  std::vector<double> x{0.0, 0.0};
  std::vector<double> v{1.0, 0.0};  // unit speed
  auto seg = exp_geodesic(ds, x, v, 1.1, 1024);
  auto fr = jacobi_propagate(ds, seg, Matd::identity(2), Matd(2, 2));
  for (size_t k = 0; k < seg.times.size(); ++k) {
    double t = seg.times[k];
    REQUIRE(fr.J[k](1, 1) == Approx(std::cos(t)).margin(1e-5));
  }
}

TEST_CASE("Riccati trace identity") {
  Matd J0 = Matd::identity(2);
  Matd B0(2, 2);
  B0(0, 0) = 0.2;
  B0(0, 1) = 0.1;
  B0(1, 0) = 0.1;
  B0(1, 1) = -0.3;

  SECTION("Minkowski") {
    Minkowski mk{2};
    auto seg = exp_geodesic(mk, origin(2), std::vector<double>{1.0, 0.1}, 1.0, 1024,
                            /*force_rk4=*/true);
    auto fr = jacobi_propagate(mk, seg, J0, B0);
    auto rep = riccati_residual(mk, fr);
    REQUIRE(rep.max_abs < 1e-10);
    REQUIRE(rep.max_abs_fd < 1e-7);
  }

  SECTION("Bogoslovsky") {
    Bogoslovsky bg{2, 0.1};
    auto seg = exp_geodesic(bg, origin(2), std::vector<double>{2.0, 1.0}, 1.0, 1024,
                            /*force_rk4=*/true);
    auto fr = jacobi_propagate(bg, seg, J0, B0);
    auto rep = riccati_residual(bg, fr);
    REQUIRE(rep.max_abs < 1e-7);
    REQUIRE(rep.max_abs_fd < 1e-7);
  }

  SECTION("de Sitter") {
    DeSitter2D ds;
    Matd Bm(2, 2);
    Bm(0, 0) = 0.1;
    Bm(0, 1) = 0.05;
    Bm(1, 0) = 0.05;
    Bm(1, 1) = -0.1;
    auto seg = exp_geodesic(ds, std::vector<double>{-0.2, 0.1},
                            std::vector<double>{1.1, 0.25}, 0.9, 2000);
    auto fr = jacobi_propagate(ds, seg, J0, Bm);
    auto rep = riccati_residual(ds, fr);
    REQUIRE(rep.max_abs < 1e-5);
    REQUIRE(rep.max_abs_fd < 1e-5);
  }
}
