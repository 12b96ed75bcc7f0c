// Closed-form model quantities: qubit dressing, rotating-frame reduction,
// single-NV eigenenergies, field projection onto the four NV axes.
#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fqnv/model.hpp"

using namespace fqnv;

TEST_CASE("qubit frequency and coupling at zero bias") {
  const auto qc = qubit_frequency_and_coupling({5000.0, 0.0, 0.3}, 0.375);
  REQUIRE(qc.omega_c == 5000.0);
  REQUIRE(qc.g_eff == 0.375);
}

TEST_CASE("qubit frequency and coupling, 3-4-5 bias") {
  const auto qc = qubit_frequency_and_coupling({3000.0, 4000.0, 0.0}, 1.0);
  REQUIRE_THAT(qc.omega_c, Catch::Matchers::WithinRel(5000.0, 1e-14));
  REQUIRE_THAT(qc.g_eff, Catch::Matchers::WithinRel(0.6, 1e-14));
}

TEST_CASE("qubit frequency and coupling, symmetric bias") {
  const auto qc = qubit_frequency_and_coupling({2878.0, 2878.0, 0.0}, 1.0);
  REQUIRE_THAT(qc.omega_c, Catch::Matchers::WithinRel(2878.0 * std::sqrt(2.0), 1e-14));
  REQUIRE_THAT(qc.g_eff, Catch::Matchers::WithinRel(1.0 / std::sqrt(2.0), 1e-14));
}

TEST_CASE("qubit coupling never exceeds bare coupling") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 8000.0);
  for (int i = 0; i < 200; ++i) {
    const double gap = u(rng) + 1.0;
    const double bias = u(rng) - 4000.0;
    const auto qc = qubit_frequency_and_coupling({gap, bias, 0.0}, 1.0);
    REQUIRE(qc.g_eff <= 1.0 + 1e-15);
    if (bias == 0.0) REQUIRE(qc.g_eff == 1.0);
    else REQUIRE(qc.g_eff < 1.0);
  }
}

TEST_CASE("qubit coupling rejects nonpositive gap") {
  REQUIRE_THROWS_AS(qubit_frequency_and_coupling({0.0, 0.0, 0.0}, 1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(qubit_frequency_and_coupling({-10.0, 0.0, 0.0}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("rotating frame: resonant strain-free spin") {
  NvSpin s;
  s.d_k = 2878.0;
  const auto rf = rotating_frame_spin(s, 2878.0);
  REQUIRE(rf.omega_b == 0.0);
  REQUIRE(rf.omega_d == 0.0);
  REQUIRE(rf.j == 0.0);
  REQUIRE(rf.j_prime == 0.0);
}

TEST_CASE("rotating frame: strain fully in E_y at phi = pi/4") {
  NvSpin s;
  s.d_k = 2878.0;
  s.e1_k = 1.0;
  s.phi_k = pi / 4.0;
  const auto rf = rotating_frame_spin(s, 2878.0);
  REQUIRE_THAT(rf.omega_b, Catch::Matchers::WithinAbs(-1.0, 1e-12));
  REQUIRE_THAT(rf.omega_d, Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(rf.j_prime, Catch::Matchers::WithinAbs(0.0, 1e-12));  // cos(pi/2)
  REQUIRE(rf.j == 0.0);
}

TEST_CASE("rotating frame: pure axial Zeeman becomes J") {
  NvSpin s;
  s.d_k = 2878.0;
  s.b_z_zeeman_k = 42.03;
  const auto rf = rotating_frame_spin(s, 2878.0);
  REQUIRE(rf.omega_b == 0.0);
  REQUIRE(rf.omega_d == 0.0);
  REQUIRE(rf.j == 42.03);
  REQUIRE(rf.j_prime == 0.0);
}

TEST_CASE("rotating frame: omega_d - omega_b = 2 E sin 2phi always") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    NvSpin s;
    s.d_k = 2878.0 + 10.0 * u(rng);
    s.e1_k = 8.0 * u(rng);
    s.e2_k = 8.0 * u(rng);
    s.phi_k = pi * (u(rng) + 1.0);
    s.b_z_zeeman_k = 40.0 * u(rng);
    const auto rf = rotating_frame_spin(s, 2878.0);
    const double e = std::hypot(s.e1_k, s.e2_k);
    REQUIRE_THAT(rf.omega_d - rf.omega_b,
                 Catch::Matchers::WithinAbs(2.0 * e * std::sin(2.0 * s.phi_k), 1e-12));
    // decay rates ride through untouched
    REQUIRE(rf.gamma_b == s.gamma_b);
    REQUIRE(rf.gamma_d == s.gamma_d);
  }
}

TEST_CASE("single NV eigenenergies, degenerate and 3-4-5 cases") {
  auto e = single_nv_eigenenergies(0.0, 0.0, 0.0, 2878.0);
  REQUIRE(e.e0 == 0.0);
  REQUIRE(e.e_plus == 2878.0);
  REQUIRE(e.e_minus == 2878.0);

  e = single_nv_eigenenergies(3.0, 4.0, 0.0, 2878.0);
  REQUIRE_THAT(e.e_plus, Catch::Matchers::WithinRel(2883.0, 1e-14));
  REQUIRE_THAT(e.e_minus, Catch::Matchers::WithinRel(2873.0, 1e-14));
}

TEST_CASE("single NV eigenenergies match 2x2 excited-block diagonalization") {
  // Independent oracle: the m = +-1 block is [[D+z, Ex-iEy],[Ex+iEy, D-z]].
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double ex = 10.0 * u(rng), ey = 10.0 * u(rng), z = 45.0 * u(rng);
    Eigen::Matrix2cd h;
    h << std::complex<double>(2878.0 + z, 0.0), std::complex<double>(ex, -ey),
        std::complex<double>(ex, ey), std::complex<double>(2878.0 - z, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    const auto e = single_nv_eigenenergies(ex, ey, z, 2878.0);
    REQUIRE_THAT(e.e_minus, Catch::Matchers::WithinAbs(es.eigenvalues()(0), 1e-9));
    REQUIRE_THAT(e.e_plus, Catch::Matchers::WithinAbs(es.eigenvalues()(1), 1e-9));
  }
  const auto z42 = single_nv_eigenenergies(0.0, 0.0, 42.03, 2878.0);
  REQUIRE_THAT(z42.e_plus, Catch::Matchers::WithinAbs(2920.03, 1e-12));
  REQUIRE_THAT(z42.e_minus, Catch::Matchers::WithinAbs(2835.97, 1e-12));
}

TEST_CASE("single NV eigenenergies depend only on Ex^2 + Ey^2 + z^2") {
  const auto a = single_nv_eigenenergies(5.0, 0.0, 0.0, 2878.0);
  const auto b = single_nv_eigenenergies(3.0, 4.0, 0.0, 2878.0);
  const auto c = single_nv_eigenenergies(0.0, 0.0, 5.0, 2878.0);
  REQUIRE_THAT(a.e_plus, Catch::Matchers::WithinAbs(b.e_plus, 1e-12));
  REQUIRE_THAT(a.e_plus, Catch::Matchers::WithinAbs(c.e_plus, 1e-12));
  REQUIRE_THROWS_AS(single_nv_eigenenergies(0.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("large-field expansion: values and error bound") {
  auto s = eigenenergy_large_field_expansion(0.0, 0.0, 42.03);
  REQUIRE(s.plus == 42.03);
  REQUIRE(s.minus == 42.03);

  s = eigenenergy_large_field_expansion(4.4, 0.0, 42.03);
  REQUIRE_THAT(s.plus, Catch::Matchers::WithinAbs(42.03 + 4.4 * 4.4 / (2.0 * 42.03), 1e-12));
  REQUIRE_THAT(s.plus, Catch::Matchers::WithinAbs(42.2603, 5e-5));

  // expansion vs exact splitting at E1 = E2 = 4.4
  const double exact = std::sqrt(2.0 * 4.4 * 4.4 + 42.03 * 42.03);
  s = eigenenergy_large_field_expansion(4.4, 4.4, 42.03);
  REQUIRE(std::abs(s.plus - exact) < 0.01);

  REQUIRE_THROWS_AS(eigenenergy_large_field_expansion(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("large-field expansion error below next Taylor term on a grid") {
  const double z = 42.03;
  for (int ix = 0; ix <= 20; ++ix) {
    for (int iy = 0; iy <= 20; ++iy) {
      const double ex = 0.5 * ix, ey = 0.5 * iy;
      const double s2 = ex * ex + ey * ey;
      const double exact = std::sqrt(s2 + z * z);
      const auto s = eigenenergy_large_field_expansion(ex, ey, z);
      REQUIRE(std::abs(s.plus - exact) <= s2 * s2 / (8.0 * z * z * z) + 1e-15);
    }
  }
}

TEST_CASE("field projection onto NV axes") {
  const auto zero = project_field_to_nv_axes(0.0, {1.0, 0.0, 0.0});
  for (double v : zero) REQUIRE(v == 0.0);

  const auto b100 = project_field_to_nv_axes(2.6, {1.0, 0.0, 0.0});
  const double expected = 28.0 * 2.6 / std::sqrt(3.0);  // 42.0311...
  for (double v : b100) REQUIRE_THAT(v, Catch::Matchers::WithinAbs(expected, 1e-12));
  REQUIRE_THAT(b100[0], Catch::Matchers::WithinAbs(42.0311, 2e-4));

  const auto b111 = project_field_to_nv_axes(1.0, {1.0, 1.0, 1.0});
  REQUIRE_THAT(b111[0], Catch::Matchers::WithinAbs(28.0, 1e-12));
  for (int i = 1; i < 4; ++i)
    REQUIRE_THAT(b111[i], Catch::Matchers::WithinAbs(28.0 / 3.0, 1e-12));
}

TEST_CASE("field projection invariances") {
  const auto plus = project_field_to_nv_axes(1.3, {0.0, 1.0, 0.0});
  const auto minus = project_field_to_nv_axes(1.3, {0.0, -1.0, 0.0});
  for (int i = 0; i < 4; ++i) REQUIRE(plus[i] == minus[i]);
  REQUIRE_THROWS_AS(project_field_to_nv_axes(1.0, {0.0, 0.0, 0.0}), std::invalid_argument);
}
