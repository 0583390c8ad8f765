#include <catch2/catch_amalgamated.hpp>

#include "lfot/core.hpp"
#include "lfot/models.hpp"
#include "helpers.hpp"

using namespace lfot;
using lfot::testing::origin;
using lfot::testing::sample_timelike;
using Catch::Approx;

TEST_CASE("Lagrangian values on Minkowski") {
  Minkowski mk{2};
  auto x = origin(2);
  std::vector<double> v{1.0, 0.0};
  REQUIRE(lagrangian_eval(mk, x, v) == Approx(-0.5));
  std::vector<double> v2{2.0, 0.0};
  REQUIRE(lagrangian_eval(mk, x, v2) == Approx(-2.0));
}

TEST_CASE("Bogoslovsky Lagrangian closed form") {
  Bogoslovsky bg{2, 0.1};
  auto x = origin(2);
  std::vector<double> v{2.0, 1.0};
  // -((4-1)^0.9 (2-1)^0.2)/2
  REQUIRE(lagrangian_eval(bg, x, v) == Approx(-0.5 * std::pow(3.0, 0.9)).epsilon(1e-12));
}

TEST_CASE("metric tensor of Minkowski is the flat metric") {
  Minkowski mk{3};
  auto x = origin(3);
  std::vector<double> v{1.5, 0.2, -0.3};
  auto g = metric_tensor(mk, x, v);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j) ? (i == 0 ? -1.0 : 1.0) : 0.0;
      REQUIRE(g(i, j) == Approx(expect).margin(1e-14));
    }
}

TEST_CASE("Euler identity g_v(v,v) = 2L(v)") {
  Rng rng(42);
  auto x2 = origin(2);
  Minkowski mk{2};
  Bogoslovsky bg{2, 0.2};
  DeSitter2D ds;
  std::vector<double> xds{0.3, -0.2};
  for (int k = 0; k < 100; ++k) {
    auto vm = sample_timelike(mk, x2, rng);
    REQUIRE(metric_pairing(mk, x2, vm, vm, vm) ==
            Approx(2.0 * lagrangian_eval(mk, x2, vm)).margin(1e-10));
    auto vb = sample_timelike(bg, x2, rng);
    REQUIRE(metric_pairing(bg, x2, vb, vb, vb) ==
            Approx(2.0 * lagrangian_eval(bg, x2, vb)).margin(1e-10));
    auto vd = sample_timelike(ds, xds, rng);
    REQUIRE(metric_pairing(ds, xds, vd, vd, vd) ==
            Approx(2.0 * lagrangian_eval(ds, xds, vd)).margin(1e-10));
  }
}

TEST_CASE("metric matches central finite differences on Bogoslovsky") {
  Bogoslovsky bg{2, 0.1};
  auto x = origin(2);
  std::vector<double> v{2.0, 1.0};
  auto g = metric_tensor(bg, x, v);
  const double h = 1e-5;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto ev = [&](double di, double dj) {
        auto w = v;
        w[i] += di;
        w[j] += dj;
        return lagrangian_eval(bg, x, w);
      };
      double fd = (ev(h, h) - ev(h, -h) - ev(-h, h) + ev(-h, -h)) / (4.0 * h * h);
      REQUIRE(g(i, j) == Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("2-homogeneity of L on random samples") {
  Rng rng(7);
  Bogoslovsky bg{3, 0.15};
  auto x = origin(3);
  for (int k = 0; k < 100; ++k) {
    auto v = sample_timelike(bg, x, rng);
    double c = rng.uniform(1e-3, 10.0);
    auto cv = v;
    for (auto& t : cv) t *= c;
    double L = lagrangian_eval(bg, x, v);
    REQUIRE(lagrangian_eval(bg, x, cv) ==
            Approx(c * c * L).margin(1e-10 * std::max(1.0, std::fabs(L))));
  }
}

TEST_CASE("signature is (-,+,...,+) on the cone") {
  Rng rng(11);
  Minkowski mk{3};
  Bogoslovsky bg{3, 0.2};
  auto x = origin(3);
  for (int k = 0; k < 50; ++k) {
    for (int which = 0; which < 2; ++which) {
      auto run = [&](const auto& m) {
        auto v = sample_timelike(m, x, rng);
        auto ev = symmetric_eigenvalues(metric_tensor(m, x, v));
        int neg = 0;
        for (double e : ev) neg += (e < 0.0);
        REQUIRE(neg == 1);
      };
      if (which == 0) run(mk);
      else run(bg);
    }
  }
}

TEST_CASE("causal classification") {
  Minkowski mk{3};
  auto x = origin(3);
  auto c1 = classify(mk, x, std::vector<double>{1.0, 0.0, 0.0});
  REQUIRE(c1.kind == CausalKind::timelike);
  REQUIRE(c1.future_directed.value());

  Minkowski mk2{2};
  auto x2 = origin(2);
  auto c2 = classify(mk2, x2, std::vector<double>{1.0, 1.0});
  REQUIRE(c2.kind == CausalKind::lightlike);
  REQUIRE(c2.future_directed.value());

  auto c3 = classify(mk2, x2, std::vector<double>{-1.0, 0.0});
  REQUIRE(c3.kind == CausalKind::timelike);
  REQUIRE_FALSE(c3.future_directed.value());

  auto c4 = classify(mk2, x2, std::vector<double>{0.0, 0.0});
  REQUIRE(c4.kind == CausalKind::zero);
  REQUIRE_FALSE(c4.future_directed.has_value());

  auto c5 = classify(mk2, x2, std::vector<double>{0.3, 1.0});
  REQUIRE(c5.kind == CausalKind::spacelike);
}

TEST_CASE("F-norm values") {
  Minkowski mk{2};
  auto x = origin(2);
  REQUIRE(f_norm(mk, x, std::vector<double>{1.0, 0.0}) == Approx(1.0));
  REQUIRE(f_norm(mk, x, std::vector<double>{2.0, 1.0}) == Approx(std::sqrt(3.0)));
  REQUIRE(f_norm(mk, x, std::vector<double>{1.0, 1.0}) == Approx(0.0).margin(1e-15));
  REQUIRE_THROWS_AS(f_norm(mk, x, std::vector<double>{0.0, 1.0}), std::domain_error);
}

TEST_CASE("Legendre map values and pairing identity") {
  Minkowski mk{2};
  auto x = origin(2);
  auto z1 = legendre_map(mk, x, std::vector<double>{1.0, 0.0});
  REQUIRE(z1[0] == Approx(-1.0));
  REQUIRE(z1[1] == Approx(0.0).margin(1e-15));
  auto z2 = legendre_map(mk, x, std::vector<double>{2.0, 1.0});
  REQUIRE(z2[0] == Approx(-2.0));
  REQUIRE(z2[1] == Approx(1.0));

  Rng rng(3);
  Bogoslovsky bg{2, 0.1};
  for (int k = 0; k < 100; ++k) {
    auto v = sample_timelike(bg, x, rng);
    auto z = legendre_map(bg, x, v);
    double pairing = z[0] * v[0] + z[1] * v[1];
    REQUIRE(pairing == Approx(2.0 * lagrangian_eval(bg, x, v)).margin(1e-10));
  }
}

TEST_CASE("Legendre round trips both directions") {
  Rng rng(5);
  auto x = origin(2);
  Minkowski mk{2};
  Bogoslovsky bg{2, 0.1};

  auto z0 = std::vector<double>{-1.0, 0.0};
  auto v0 = legendre_inverse(mk, x, z0);
  REQUIRE(v0[0] == Approx(1.0).margin(1e-10));
  REQUIRE(v0[1] == Approx(0.0).margin(1e-10));

  std::vector<double> vb{2.0, 1.0};
  auto zb = legendre_map(bg, x, vb);
  auto vb2 = legendre_inverse(bg, x, zb);
  REQUIRE(vb2[0] == Approx(2.0).margin(1e-8));
  REQUIRE(vb2[1] == Approx(1.0).margin(1e-8));

  for (int k = 0; k < 100; ++k) {
    auto v = sample_timelike(bg, x, rng);
    auto z = legendre_map(bg, x, v);
    auto v2 = legendre_inverse(bg, x, z);
    for (int i = 0; i < 2; ++i) REQUIRE(v2[i] == Approx(v[i]).margin(1e-8));
    // and the reverse composition on the covector side
    auto z2 = legendre_map(bg, x, v2);
    for (int i = 0; i < 2; ++i) REQUIRE(z2[i] == Approx(z[i]).margin(1e-8));
  }
}

TEST_CASE("reverse Cauchy-Schwarz inequality") {
  Rng rng(17);
  Bogoslovsky bg{2, 0.2};
  Minkowski mk{3};
  auto x2 = origin(2);
  auto x3 = origin(3);
  for (int k = 0; k < 200; ++k) {
    auto v = sample_timelike(bg, x2, rng);
    auto w = sample_timelike(bg, x2, rng);
    auto z = legendre_map(bg, x2, w);  // polar-cone covector
    double zv = z[0] * v[0] + z[1] * v[1];
    double Ls = lagrangian_eval(bg, x2, w);  // L*(Leg(w)) = L(w)
    REQUIRE(4.0 * Ls * lagrangian_eval(bg, x2, v) <= zv * zv + 1e-12);

    auto v3 = sample_timelike(mk, x3, rng);
    auto w3 = sample_timelike(mk, x3, rng);
    auto z3 = legendre_map(mk, x3, w3);
    double zv3 = z3[0] * v3[0] + z3[1] * v3[1] + z3[2] * v3[2];
    REQUIRE(4.0 * lagrangian_eval(mk, x3, w3) * lagrangian_eval(mk, x3, v3) <=
            zv3 * zv3 + 1e-12);
  }
}

TEST_CASE("q-Lagrangian values and conventions") {
  Minkowski mk{2};
  auto x = origin(2);
  REQUIRE(q_lagrangian(mk, x, std::vector<double>{1.0, 0.0}, 0.5) == Approx(-2.0));
  REQUIRE(q_lagrangian(mk, x, std::vector<double>{2.0, 1.0}, 0.5) ==
          Approx(-2.0 * std::pow(3.0, 0.25)));
  REQUIRE(is_pos_inf(q_lagrangian(mk, x, std::vector<double>{0.3, 1.0}, 0.5)));
  REQUIRE(is_pos_inf(q_lagrangian(mk, x, std::vector<double>{-1.0, 0.0}, 0.5)));
  REQUIRE(q_lagrangian(mk, x, std::vector<double>{0.0, 0.0}, 0.5) == 0.0);
}

TEST_CASE("q-Hamiltonian values and polar-cone behavior") {
  Minkowski mk{2};
  auto x = origin(2);
  REQUIRE(q_hamiltonian(mk, x, std::vector<double>{-1.0, 0.0}, 0.5) == Approx(1.0).margin(1e-10));
  REQUIRE(is_pos_inf(q_hamiltonian(mk, x, std::vector<double>{1.0, 0.0}, 0.5)));
  // q = 1 indicator of {L* <= -1/2}
  REQUIRE(q_hamiltonian(mk, x, std::vector<double>{-1.0, 0.0}, 1.0) == 0.0);
  REQUIRE(is_pos_inf(q_hamiltonian(mk, x, std::vector<double>{-0.5, 0.0}, 1.0)));
}

TEST_CASE("Fenchel consistency of the q-pair") {
  Rng rng(23);
  Bogoslovsky bg{2, 0.1};
  auto x = origin(2);
  double q = 0.5;
  for (int k = 0; k < 50; ++k) {
    auto v = sample_timelike(bg, x, rng);
    double F = f_norm(bg, x, v);
    auto zeta = legendre_map(bg, x, v);
    for (auto& z : zeta) z *= std::pow(F, q - 2.0);
    double zv = zeta[0] * v[0] + zeta[1] * v[1];
    double H = q_hamiltonian(bg, x, zeta, q);
    double L = q_lagrangian(bg, x, v, q);
    REQUIRE(H + L == Approx(zv).margin(1e-8));
  }
}

TEST_CASE("q-duality maps invert each other") {
  Rng rng(29);
  Bogoslovsky bg{2, 0.1};
  auto x = origin(2);
  double q = 0.4, p = q / (q - 1.0);
  for (int k = 0; k < 50; ++k) {
    auto v = sample_timelike(bg, x, rng);
    double F = f_norm(bg, x, v);
    auto zeta = legendre_map(bg, x, v);
    for (auto& z : zeta) z *= std::pow(F, q - 2.0);
    // inverse map: F*(zeta)^(p-2) Leg^{-1}(zeta)
    auto w = legendre_inverse(bg, x, zeta);
    double Fs = std::sqrt(-2.0 * lagrangian_eval(bg, x, w));
    for (auto& c : w) c *= std::pow(Fs, p - 2.0);
    for (int i = 0; i < 2; ++i) REQUIRE(w[i] == Approx(v[i]).margin(1e-8));
  }
}
