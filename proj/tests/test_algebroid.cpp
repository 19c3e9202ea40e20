// Extended-bundle structure: bracket, connection, curvature, Ricci, and the
// block field equation.  Every closed form is checked against a
// definition-chasing route and against hand-evaluated flat-space values.
#include <catch2/catch_amalgamated.hpp>

#include <affmet/algebroid.hpp>
#include <affmet/families.hpp>

using namespace affmet;

namespace {

double gap(const FiberValue& a, const FiberValue& b) { return max_abs(a - b); }

SectionField scaled_section(std::function<double(const Point&)> phi,
                            const SectionField& s) {
  return {[phi, s](const Point& p) { return vscale(phi(p), s.bar(p)); },
          [phi, s](const Point& p) { return phi(p) * s.xi(p); }};
}

SectionField bracket_section(const MetricField& gf, const PotentialField& pf,
                             const SectionField& u, const SectionField& v,
                             const FdConfig& fd) {
  return {[&gf, &pf, u, v, fd](const Point& q) { return bracket(gf, pf, u, v, q, fd).bar; },
          [&gf, &pf, u, v, fd](const Point& q) { return bracket(gf, pf, u, v, q, fd).xi; }};
}

struct FlatUniform {
  MetricField gf = make_minkowski();
  double b;
  PotentialField pf;
  explicit FlatUniform(double strength)
      : b(strength), pf(make_potential("uniform", {{"B", strength}}, gf)) {}
};

}  // namespace

TEST_CASE("fiber values: inner product, anchor, flatten round trip", "[algebroid]") {
  Mat4 eta{};
  eta[0][0] = -1.0;
  eta[1][1] = eta[2][2] = eta[3][3] = 1.0;
  const FiberValue a{{1.0, 2.0, 0.0, 0.0}, 3.0};
  const FiberValue b{{1.0, 0.0, 1.0, 0.0}, -2.0};
  REQUIRE(fiber_inner(eta, a, b) == Catch::Approx(-1.0 + (3.0 * -2.0)).margin(0.0));
  REQUIRE(anchor(a) == a.bar);
  REQUIRE(anchor(value_at(xi_section(), Point{})) == Vec4{});
  REQUIRE(gap(unflatten(flatten(a)), a) == 0.0);
}

TEST_CASE("bracket: hand values in the flat uniform case", "[algebroid]") {
  const FlatUniform fu(0.9);
  const Point p{0.0, 0.4, -0.2, 1.0};

  // [ē₁, ē₂] = 2⟨F(∂₁), ∂₂⟩ ξ = 2 F_12 ξ = B ξ
  const FiberValue b12 =
      bracket(fu.gf, fu.pf, coordinate_lift(1), coordinate_lift(2), p);
  REQUIRE(max_abs(b12.bar) == 0.0);
  REQUIRE(b12.xi == Catch::Approx(fu.b).margin(1e-12));

  // [ē_i, ξ] = 0 exactly
  for (int i = 0; i < 4; ++i) {
    const FiberValue bx = bracket(fu.gf, fu.pf, coordinate_lift(i), xi_section(), p);
    REQUIRE(max_abs(bx) == 0.0);
  }

  // [X̄, fξ] with constant f: Xf = 0
  const SectionField half_xi = constant_section({Vec4{}, 0.5});
  REQUIRE(max_abs(bracket(fu.gf, fu.pf, coordinate_lift(0), half_xi, p)) == 0.0);
}

TEST_CASE("bracket: antisymmetry and self-annihilation", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 101.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 102.0}}, gf);
  const auto pool = random_sections(103, 4);
  const Point p{0.1, -0.2, 0.05, 0.2};
  for (const SectionField& u : pool) {
    REQUIRE(max_abs(bracket(gf, pf, u, u, p)) < 1e-14);
    for (const SectionField& v : pool) {
      const FiberValue uv = bracket(gf, pf, u, v, p);
      const FiberValue vu = bracket(gf, pf, v, u, p);
      REQUIRE(gap(uv, -1.0 * vu) < 1e-12);
    }
  }
}

TEST_CASE("bracket: Leibniz rule in the second argument", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 111.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 112.0}}, gf);
  const auto pool = random_sections(113, 2);
  auto phi = [](const Point& q) {
    return 0.3 + 0.7 * q[0] - 0.4 * q[2] + 0.2 * q[1] * q[3];
  };
  const Point p{0.0, 0.15, -0.1, 0.1};
  const SectionField& u = pool[0];
  const SectionField& v = pool[1];

  const FiberValue lhs = bracket(gf, pf, u, scaled_section(phi, v), p);
  const double dphi = directional_derivative(phi, p, u.bar(p), FdConfig{});
  const FiberValue rhs = phi(p) * bracket(gf, pf, u, v, p) + dphi * value_at(v, p);
  REQUIRE(gap(lhs, rhs) < 1e-9);
}

TEST_CASE("bracket: Jacobi identity", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 121.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 122.0}}, gf);
  const FdConfig fd{};
  const auto pool = random_sections(123, 3);
  const SectionField& u = pool[0];
  const SectionField& v = pool[1];
  const SectionField& w = pool[2];
  for (const Point& p : {Point{0.0, 0.0, 0.0, 0.0}, Point{0.12, -0.2, 0.18, 0.05}}) {
    const FiberValue cyc = bracket(gf, pf, u, bracket_section(gf, pf, v, w, fd), p, fd) +
                           bracket(gf, pf, v, bracket_section(gf, pf, w, u, fd), p, fd) +
                           bracket(gf, pf, w, bracket_section(gf, pf, u, v, fd), p, fd);
    REQUIRE(max_abs(cyc) < 1e-6);
  }
}

TEST_CASE("connection: structural relations in the flat uniform case",
          "[algebroid]") {
  const FlatUniform fu(1.1);
  const Point p{0.0, -0.7, 0.3, 0.5};

  REQUIRE(max_abs(connection(fu.gf, fu.pf, xi_section(), xi_section(), p)) == 0.0);

  // ∇̂_{ē₁}ξ = ∇̂_ξ ē₁ = -bar(F(∂₁)) = (0, 0, -B/2, 0)
  const FiberValue left = connection(fu.gf, fu.pf, coordinate_lift(1), xi_section(), p);
  const FiberValue right = connection(fu.gf, fu.pf, xi_section(), coordinate_lift(1), p);
  const FiberValue want{{0.0, 0.0, -fu.b / 2.0, 0.0}, 0.0};
  REQUIRE(gap(left, want) < 1e-12);
  REQUIRE(gap(right, want) < 1e-12);

  // ∇̂_{ē₁}ē₂ = ⟨F(∂₁), ∂₂⟩ ξ = (B/2) ξ on a flat background
  const FiberValue fe =
      connection(fu.gf, fu.pf, coordinate_lift(1), coordinate_lift(2), p);
  REQUIRE(max_abs(fe.bar) == 0.0);
  REQUIRE(fe.xi == Catch::Approx(fu.b / 2.0).margin(1e-12));
}

TEST_CASE("connection: no potential means ordinary covariant derivative",
          "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 131.0}});
  const PotentialField zero = make_potential("zero", {}, gf);
  const auto pool = random_sections(133, 2);
  const SectionField& u = pool[0];
  const SectionField& v = pool[1];
  const Point p{0.05, 0.2, -0.15, 0.0};
  const FdConfig fd{};

  const FiberValue got = connection(gf, zero, u, v, p, fd);

  const Christoffel gamma = christoffel(gf, p, fd);
  const Vec4 x = u.bar(p);
  const Vec4 y = v.bar(p);
  Vec4 want{};
  for (int d = 0; d < 4; ++d) {
    const Vec4 dy = fd_partial([&](const Point& q) { return v.bar(q); }, p, d, fd);
    for (int k = 0; k < 4; ++k) want[k] += x[d] * dy[k];
  }
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < 4; ++m) want[k] += gamma[k][i][m] * x[i] * y[m];
  REQUIRE(max_abs(vsub(got.bar, want)) < 1e-12);
  const double xg = directional_derivative([&](const Point& q) { return v.xi(q); },
                                           p, x, fd);
  REQUIRE(got.xi == Catch::Approx(xg).margin(1e-12));
}

TEST_CASE("connection satisfies the Koszul identity", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 141.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 142.0}}, gf);
  const FdConfig fd{};
  auto pool = random_sections(143, 5);
  pool.push_back(coordinate_lift(0));
  pool.push_back(coordinate_lift(2));
  pool.push_back(xi_section());
  const Point pts[] = {{0.0, 0.0, 0.0, 0.0}, {0.2, -0.15, 0.1, -0.05}};

  Rng rng(144);
  int checks = 0;
  for (const Point& p : pts) {
    const Mat4 g = metric_at(gf, p);
    for (int trial = 0; trial < 24; ++trial) {
      const SectionField& u = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& v = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& w = pool[rng.index(static_cast<int>(pool.size()))];
      const double lhs = 2.0 * fiber_inner(g, connection(gf, pf, u, v, p, fd),
                                           value_at(w, p));
      const double rhs = koszul_rhs(gf, pf, u, v, w, p, fd);
      REQUIRE(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(rhs)));
      ++checks;
    }
  }
  REQUIRE(checks == 48);
}

TEST_CASE("connection recovered from Koszul data alone matches", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 151.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 152.0}}, gf);
  const auto pool = random_sections(153, 2);
  const Point p{0.1, 0.1, -0.1, 0.15};
  const FiberValue direct = connection(gf, pf, pool[0], pool[1], p);
  const FiberValue rebuilt = connection_via_koszul(gf, pf, pool[0], pool[1], p);
  REQUIRE(gap(direct, rebuilt) < 1e-6);
}

TEST_CASE("connection is metric and torsion compatible", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 161.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 162.0}}, gf);
  const FdConfig fd{};
  const auto pool = random_sections(163, 3);
  const SectionField& u = pool[0];
  const SectionField& v = pool[1];
  const SectionField& w = pool[2];
  const Point p{-0.05, 0.12, 0.2, -0.1};
  const Mat4 g = metric_at(gf, p);

  // ρ(U)⟨V,W⟩ = ⟨∇̂_U V, W⟩ + ⟨V, ∇̂_U W⟩
  auto vw = [&](const Point& q) {
    return fiber_inner(gf.component(q), value_at(v, q), value_at(w, q));
  };
  const double lhs = directional_derivative(vw, p, u.bar(p), fd);
  const double rhs = fiber_inner(g, connection(gf, pf, u, v, p, fd), value_at(w, p)) +
                     fiber_inner(g, value_at(v, p), connection(gf, pf, u, w, p, fd));
  REQUIRE(lhs == Catch::Approx(rhs).margin(1e-8));

  // ∇̂_U V - ∇̂_V U = [U, V]
  const FiberValue torsion = connection(gf, pf, u, v, p, fd) -
                             connection(gf, pf, v, u, p, fd) -
                             bracket(gf, pf, u, v, p, fd);
  REQUIRE(max_abs(torsion) < 1e-9);

  // ∇̂_U (φV) = (ρ(U)φ) V + φ ∇̂_U V
  auto phi = [](const Point& q) { return 1.2 - 0.5 * q[1] + 0.3 * q[0] * q[2]; };
  const FiberValue leib_lhs = connection(gf, pf, u, scaled_section(phi, v), p, fd);
  const FiberValue leib_rhs = directional_derivative(phi, p, u.bar(p), fd) * value_at(v, p) +
                              phi(p) * connection(gf, pf, u, v, p, fd);
  REQUIRE(gap(leib_lhs, leib_rhs) < 1e-9);
}

TEST_CASE("curvature table: flat empty space vanishes identically", "[algebroid]") {
  const MetricField gf = make_minkowski();
  const PotentialField zero = make_potential("zero", {}, gf);
  const HatCurvature r = curvature_hat(gf, zero, Point{0.0, 1.0, 2.0, 3.0});
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) REQUIRE(max_abs(r[a][b][c]) == 0.0);
}

TEST_CASE("curvature table: hand values in the flat uniform case", "[algebroid]") {
  const FlatUniform fu(1.3);
  const double b = fu.b;
  const Point p{0.0, 0.6, -0.3, 0.2};
  const HatCurvature r = curvature_hat(fu.gf, fu.pf, p);

  // R̂(ē₁, ξ)ξ = -bar(F(F(∂₁))) = (B²/4) ē₁
  const FiberValue top = r[1][kXiSlot][kXiSlot];
  REQUIRE(top.bar[1] == Catch::Approx(b * b / 4.0).margin(1e-12));
  REQUIRE(std::abs(top.xi) < 1e-14);

  // R̂(ē₁, ξ)ē₂ = -⟨F(∂₁), F(∂₂)⟩ ξ; the two field vectors are orthogonal
  REQUIRE(max_abs(r[1][kXiSlot][2]) < 1e-10);

  // R̂(ē₁, ē₂)ē₁: only the F-quadratic terms survive on a flat background
  // bar = ⟨∂₁,F(∂₁)⟩F(∂₂) - ⟨∂₁,F(∂₂)⟩F(∂₁) + 2⟨F(∂₁),∂₂⟩F(∂₁) — first term 0,
  // second -(-B/2)·F(∂₁), third 2(B/2)F(∂₁); F(∂₁) = (B/2)ē₂
  const FiberValue r121 = r[1][2][1];
  REQUIRE(r121.bar[2] == Catch::Approx((3.0 / 2.0) * b * (b / 2.0)).margin(1e-10));
  REQUIRE(std::abs(r121.xi) < 1e-10);

  // antisymmetry in the first two slots is exact
  for (int a = 0; a < 5; ++a)
    for (int c = 0; c < 5; ++c) {
      REQUIRE(gap(r[a][a][c], FiberValue{}) == 0.0);
      for (int d = 0; d < 5; ++d)
        REQUIRE(gap(r[a][d][c], -1.0 * r[d][a][c]) == 0.0);
    }
}

TEST_CASE("curvature closed forms match the definition-chasing oracle",
          "[algebroid]") {
  struct Case {
    MetricField gf;
    PotentialField pf;
    Point p;
  };
  const MetricField poly = make_metric("poly", {{"seed", 171.0}});
  const MetricField schw = make_metric("schwarzschild", {{"M", 1.0}});
  const MetricField flat = make_minkowski();
  const Case cases[] = {
      {poly, make_potential("poly", {{"seed", 172.0}}, poly), Point{0.0, 0.1, -0.1, 0.05}},
      {schw, make_potential("coulomb", {{"q", 0.8}}, schw), Point{0.0, 5.0, 1.3, 0.4}},
      {flat, make_potential("uniform", {{"B", 0.7}}, flat), Point{0.0, 0.2, 0.5, -1.0}},
  };
  const FdConfig fd{};
  for (const Case& c : cases) {
    const HatCurvature table = curvature_hat(c.gf, c.pf, c.p, fd);
    auto pool = random_sections(173, 3);
    pool.push_back(coordinate_lift(1));
    pool.push_back(xi_section());
    Rng rng(174);
    for (int trial = 0; trial < 6; ++trial) {
      const SectionField& u = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& v = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& w = pool[rng.index(static_cast<int>(pool.size()))];
      const FiberValue direct = apply_curvature(table, value_at(u, c.p),
                                                value_at(v, c.p), value_at(w, c.p));
      const FiberValue brute = curvature_hat_oracle(c.gf, c.pf, u, v, w, c.p, fd);
      REQUIRE(gap(direct, brute) < 1e-5 * std::max(1.0, max_abs(brute)));
    }
  }
}

TEST_CASE("ricci: hand values in the flat uniform case", "[algebroid]") {
  const FlatUniform fu(0.6);
  const double b = fu.b;
  const Point p{0.0, 0.1, 0.4, -0.8};
  const Mat5 m = ricci_hat(fu.gf, fu.pf, p);

  // R̂ic(ξ) = bar(div F) - tr(F∘F) ξ = (B²/2) ξ here
  for (int l = 0; l < 4; ++l) REQUIRE(std::abs(m[l][kXiSlot]) < 1e-10);
  REQUIRE(m[kXiSlot][kXiSlot] == Catch::Approx(b * b / 2.0).margin(1e-12));

  // R̂ic(ē₁) = 2 bar(F(F(∂₁))) = -(B²/2) ē₁
  REQUIRE(m[1][1] == Catch::Approx(-b * b / 2.0).margin(1e-10));
  REQUIRE(std::abs(m[kXiSlot][1]) < 1e-10);

  // scalar: R̂ = R + tr(F∘F) = -B²/2
  double tr = 0.0;
  for (int a = 0; a < 5; ++a) tr += m[a][a];
  REQUIRE(tr == Catch::Approx(-b * b / 2.0).margin(1e-10));
  REQUIRE(scalar_hat_from(metric_at(fu.gf, p), m) ==
          Catch::Approx(-b * b / 2.0).margin(1e-10));
}

TEST_CASE("ricci closed form equals the orthonormal frame trace", "[algebroid]") {
  struct Case {
    MetricField gf;
    PotentialField pf;
    Point p;
  };
  const MetricField poly = make_metric("poly", {{"seed", 181.0}});
  const MetricField rn = make_metric("reissner_nordstrom", {{"M", 1.0}, {"Q", 0.5}});
  const Case cases[] = {
      {poly, make_potential("poly", {{"seed", 182.0}}, poly), Point{0.0, -0.1, 0.2, 0.1}},
      {rn, make_potential("coulomb", {{"q", 0.5}}, rn), Point{0.0, 4.0, 1.2, 0.3}},
  };
  for (const Case& c : cases) {
    const Mat4 g = metric_at(c.gf, c.p);
    const Mat5 closed = ricci_hat(c.gf, c.pf, c.p);
    const Mat5 traced = ricci_hat_from_trace(curvature_hat(c.gf, c.pf, c.p), g);
    double scale = 1.0;
    for (int a = 0; a < 5; ++a)
      for (int bcol = 0; bcol < 5; ++bcol)
        scale = std::max(scale, std::abs(closed[a][bcol]));
    for (int a = 0; a < 5; ++a)
      for (int bcol = 0; bcol < 5; ++bcol)
        REQUIRE(std::abs(closed[a][bcol] - traced[a][bcol]) < 1e-6 * scale);

    // lowering with diag(g, 1) must give a symmetric matrix
    const Mat5 low = lower_hat(g, closed);
    for (int a = 0; a < 5; ++a)
      for (int bcol = a + 1; bcol < 5; ++bcol)
        REQUIRE(low[a][bcol] == Catch::Approx(low[bcol][a]).margin(1e-8));

    // frame-traced scalar equals R + tr(F∘F)
    const CurvaturePack pack = curvature_pack(c.gf, c.p);
    const Faraday f = faraday(c.gf, c.pf, c.p);
    REQUIRE(scalar_hat_from(g, closed) ==
            Catch::Approx(pack.scalar + trace_ff(f)).margin(1e-8));
  }
}

TEST_CASE("vacuum: everything vanishes on schwarzschild with no potential",
          "[algebroid]") {
  const MetricField gf = make_metric("schwarzschild", {{"M", 1.0}});
  const PotentialField zero = make_potential("zero", {}, gf);
  const Point p{0.0, 6.0, 1.4, 0.2};
  const Mat5 m = ricci_hat(gf, zero, p);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) REQUIRE(std::abs(m[a][b]) < 1e-8);
  const EinsteinBlocks blocks = einstein_blocks(gf, zero, p);
  REQUIRE(max_abs(blocks.barbar) < 1e-7);
  REQUIRE(max_abs(blocks.mixed) < 1e-8);
  REQUIRE(std::abs(blocks.xixi) < 1e-8);
}

TEST_CASE("einstein blocks: hand values in the flat uniform case", "[algebroid]") {
  const FlatUniform fu(1.0);
  const double b = fu.b;
  const Point p{0.0, -0.3, 0.8, 0.1};
  const EinsteinBlocks blocks = einstein_blocks(fu.gf, fu.pf, p);

  REQUIRE(blocks.scalar == Catch::Approx(0.0).margin(1e-10));
  REQUIRE(blocks.trff == Catch::Approx(-b * b / 2.0).margin(1e-12));
  REQUIRE(blocks.scalar_hat == Catch::Approx(-b * b / 2.0).margin(1e-10));

  // barbar = 2(F∘F) + (B²/4) g: diag(-1,1,1,1)·B²/4 + diag(0,-B²/2,-B²/2,0)
  REQUIRE(blocks.barbar[0][0] == Catch::Approx(-b * b / 4.0).margin(1e-10));
  REQUIRE(blocks.barbar[1][1] == Catch::Approx(-b * b / 4.0).margin(1e-10));
  REQUIRE(blocks.barbar[2][2] == Catch::Approx(-b * b / 4.0).margin(1e-10));
  REQUIRE(blocks.barbar[3][3] == Catch::Approx(b * b / 4.0).margin(1e-10));

  REQUIRE(max_abs(blocks.mixed) < 1e-10);
  REQUIRE(blocks.xixi == Catch::Approx(0.75 * b * b).margin(1e-10));
}

TEST_CASE("einstein blocks agree with the assembled 5x5 tensor", "[algebroid]") {
  const MetricField gf = make_metric("poly", {{"seed", 191.0}});
  const PotentialField pf = make_potential("poly", {{"seed", 192.0}}, gf);
  const Point p{0.05, 0.15, -0.2, 0.1};
  const Mat4 g = metric_at(gf, p);
  const EinsteinBlocks blocks = einstein_blocks(gf, pf, p);
  const Mat5 full = einstein_hat(g, ricci_hat(gf, pf, p));

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j)
      REQUIRE(blocks.barbar[i][j] == Catch::Approx(full[i][j]).margin(1e-8));
    REQUIRE(blocks.mixed[i] == Catch::Approx(full[i][kXiSlot]).margin(1e-8));
    REQUIRE(blocks.mixed[i] == Catch::Approx(full[kXiSlot][i]).margin(1e-8));
  }
  REQUIRE(blocks.xixi == Catch::Approx(full[kXiSlot][kXiSlot]).margin(1e-8));
}

TEST_CASE("reissner-nordstrom solves the tangent and current blocks",
          "[algebroid]") {
  const double mass = 1.0, charge = 0.5;
  const MetricField gf =
      make_metric("reissner_nordstrom", {{"M", mass}, {"Q", charge}});
  const PotentialField pf = make_potential("coulomb", {{"q", charge}}, gf);
  for (const double r : {3.0, 5.0, 9.0}) {
    const Point p{0.0, r, kPi / 2, 0.0};
    const EinsteinBlocks blocks = einstein_blocks(gf, pf, p);

    REQUIRE(max_abs(blocks.barbar) < 1e-6);
    REQUIRE(max_abs(blocks.mixed) < 1e-7);

    // base scalar vanishes, so the ξξ block is pure field strength:
    // -3/2 tr(F∘F) = -3 Q²/r⁴, the unsourced third equation
    REQUIRE(std::abs(blocks.scalar) < 1e-7);
    REQUIRE(blocks.trff ==
            Catch::Approx(2.0 * charge * charge / std::pow(r, 4)).margin(1e-8));
    REQUIRE(blocks.xixi ==
            Catch::Approx(-3.0 * charge * charge / std::pow(r, 4)).margin(1e-7));
  }
}

TEST_CASE("block residuals: dust source on a flat background", "[algebroid]") {
  const MetricField gf = make_minkowski();
  const PotentialField zero = make_potential("zero", {}, gf);
  const Point p{0.0, 0.0, 0.0, 0.0};
  const EinsteinBlocks blocks = einstein_blocks(gf, zero, p);

  const double rho0 = 0.01;
  Sources src;
  src.mass_stress[0][0] = rho0;
  const BlockResiduals res = block_residuals(blocks, src);

  // flat space carries no curvature to balance the dust
  REQUIRE(res.barbar_max == Catch::Approx(kEightPi * rho0).margin(1e-12));
  REQUIRE(res.barbar_frob == Catch::Approx(kEightPi * rho0).margin(1e-12));
  REQUIRE(res.mixed_max < 1e-12);
  REQUIRE(res.xixi_signed == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(res.total_max == Catch::Approx(kEightPi * rho0).margin(1e-12));
  REQUIRE(res.total_frob == Catch::Approx(kEightPi * rho0).margin(1e-12));

  // matching source zeroes the residual
  Sources balanced = src;
  balanced.mass_stress[0][0] = blocks.barbar[0][0] / kEightPi;
  const BlockResiduals res2 = block_residuals(blocks, balanced);
  REQUIRE(res2.total_max < 1e-10);
}

TEST_CASE("block residuals: charged solution with and without the fifth source",
          "[algebroid]") {
  const double charge = 0.5;
  const MetricField gf =
      make_metric("reissner_nordstrom", {{"M", 1.0}, {"Q", charge}});
  const PotentialField pf = make_potential("coulomb", {{"q", charge}}, gf);
  const Point p{0.0, 4.0, kPi / 2, 0.0};
  const EinsteinBlocks blocks = einstein_blocks(gf, pf, p);

  Sources empty;
  const BlockResiduals res = block_residuals(blocks, empty);
  REQUIRE(res.barbar_max < 1e-6);
  REQUIRE(res.mixed_max < 1e-7);
  // the ξξ equation is NOT satisfied with H = 0: residual -3Q²/r⁴
  const double expect = -3.0 * charge * charge / std::pow(4.0, 4);
  REQUIRE(res.xixi_signed == Catch::Approx(expect).margin(1e-7));
  REQUIRE(res.xixi_max > 1e-4);

  // supplying H = G_ξξ/8π closes it
  Sources with_h;
  with_h.charge_scalar = blocks.xixi / kEightPi;
  const BlockResiduals res2 = block_residuals(blocks, with_h);
  REQUIRE(res2.xixi_max < 1e-12);
  REQUIRE(res2.total_max < 1e-6);
}
