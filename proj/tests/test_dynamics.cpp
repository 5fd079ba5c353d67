#include "glider/model/dynamics.hpp"
#include "glider/model/params.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

#include <doctest.h>

#include <sstream>

using namespace glider;

namespace {

VehicleParams<double> trimmed_params() {
  VehicleParams<double> p = default_vehicle_params();
  p.mass.r_r.setZero();
  p.mass.r_s.setZero();
  p.mass.r_b.setZero();
  p.mass.rotary_radius = 0;
  return p;
}

}  // namespace

TEST_CASE("hydrodynamic wrench: fixed cases") {
  const auto k = HydroCoefficients<double>::from_vector(
      (Vec12<double>() << 1.5, 2, 0.3, 4, -5, -6, -7, 0.8, -9, -10, 11, -12).finished());
  const auto zero = hydrodynamic_wrench(BodyVelocity<double>{}, k);
  CHECK(zero.vector().isZero(0));

  const auto w = hydrodynamic_wrench(BodyVelocity<double>{1, 0, 0, 0, 0, 0}, k);
  CHECK((w.force - Vec3<double>(-1.5, 0, -0.3)).norm() < 1e-15);
  CHECK((w.torque - Vec3<double>(0, 0.8, 0)).norm() < 1e-15);
}

TEST_CASE("hydrodynamic wrench matches the straight-line oracle and is linear in K") {
  testing::Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    const auto s = testing::random_state(rng);
    const auto p = testing::random_params(rng, false);
    const auto w = hydrodynamic_wrench(s.nu, p.hydro);
    const auto o = oracle::hydro(s.nu, p.hydro);
    CHECK((w.force - o.force).norm() <= 1e-12 * (1 + o.force.norm()));
    CHECK((w.torque - o.torque).norm() <= 1e-12 * (1 + o.torque.norm()));
    const Vec6<double> via_regressor = hydrodynamic_regressor(s.nu) * p.hydro.vector();
    CHECK((via_regressor - w.vector()).norm() <= 1e-12 * (1 + w.vector().norm()));
  }
}

TEST_CASE("hydrodynamic force scales with the square of speed") {
  testing::Rng rng(22);
  const auto k = default_hydro_coefficients();
  for (int i = 0; i < 100; ++i) {
    BodyVelocity<double> nu{testing::uniform(rng, 0.1, 1), testing::uniform(rng, -0.3, 0.3),
                            testing::uniform(rng, -0.3, 0.3), 0, 0, 0};
    BodyVelocity<double> twice{2 * nu.u, 2 * nu.v, 2 * nu.w, 0, 0, 0};
    const double f1 = hydrodynamic_wrench(nu, k).force.norm();
    const double f2 = hydrodynamic_wrench(twice, k).force.norm();
    CHECK(f2 == doctest::Approx(4 * f1).epsilon(1e-12));
  }
}

TEST_CASE("gravity/buoyancy wrench") {
  const auto p = trimmed_params();
  ActuatorState<double> none;
  CHECK(gravity_buoyancy_wrench(EulerAngles<double>{0.2, 0.3, 0.4}, p.mass, none).vector().isZero(0));

  const auto level = gravity_buoyancy_wrench(EulerAngles<double>{}, p.mass, make_actuators(p, 0.0, 0.0, 0.1));
  CHECK((level.force - Vec3<double>(0, 0, 0.1 * p.mass.g)).norm() < 1e-15);

  // Pitched with an offset sliding mass: torque is r × F written out by hand.
  VehicleParams<double> q = trimmed_params();
  q.mass.r_s = Vec3<double>(0.03, 0.0, 0.01);
  const double th = 0.3, g = q.mass.g, ms = q.mass.m_s;
  const auto w = gravity_buoyancy_wrench(EulerAngles<double>{0, th, 0}, q.mass, ActuatorState<double>{});
  const double rx = 0.03, rz = 0.01;
  const double Fx = -ms * g * std::sin(th), Fz = ms * g * std::cos(th);
  const Vec3<double> expect(0, rz * Fx - rx * Fz, 0);
  CHECK((w.torque - expect).norm() < 1e-14);
}

TEST_CASE("generalized momentum") {
  const InertiaModel<double> diag((Vec6<double>() << 2, 3, 4, 5, 6, 7).finished().asDiagonal().toDenseMatrix());
  auto [P0, Q0] = generalized_momentum(diag, BodyVelocity<double>{});
  CHECK(P0.isZero(0));
  CHECK(Q0.isZero(0));
  auto [P, Q] = generalized_momentum(diag, BodyVelocity<double>{1, 0, 0, 0, 0, 0});
  CHECK(P == Vec3<double>(2, 0, 0));
  CHECK(Q.isZero(0));

  testing::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Mat6<double> m = testing::random_spd(rng);
    const InertiaModel<double> im(m);
    const auto s = testing::random_state(rng);
    auto [Pi, Qi] = generalized_momentum(im, s.nu);
    for (int r = 0; r < 3; ++r) {
      double pr = 0, qr = 0;
      for (int c = 0; c < 6; ++c) {
        pr += m(r, c) * s.nu.vector()(c);
        qr += m(r + 3, c) * s.nu.vector()(c);
      }
      CHECK(Pi(r) == doctest::Approx(pr).epsilon(1e-13));
      CHECK(Qi(r) == doctest::Approx(qr).epsilon(1e-13));
    }
  }
}

TEST_CASE("inertia must be symmetric positive definite") {
  Mat6<double> m = Mat6<double>::Identity();
  m(0, 0) = -1;
  CHECK_THROWS_AS(InertiaModel<double>{m}, SingularInertiaError);
  m = Mat6<double>::Identity();
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(InertiaModel<double>{m}, SingularInertiaError);
}

TEST_CASE("state derivative: equilibrium and pure ballast") {
  const auto p = trimmed_params();
  const auto d = state_derivative(VehicleState<double>{}, ActuatorState<double>{}, p);
  CHECK(d.vector().cwiseAbs().maxCoeff() < 1e-12);

  const auto dflt = default_vehicle_params();
  const auto act = make_actuators(dflt, 0.0, 0.0, 0.1);
  const auto d2 = state_derivative(VehicleState<double>{}, act, dflt);
  // ν = 0: only the ballast force and the moving-mass moment remain.
  const double g = dflt.mass.g;
  const Vec3<double> down(0, 0, g);
  const Vec3<double> moment = dflt.mass.m_r * (dflt.mass.r_r + Vec3<double>(0, 0, dflt.mass.rotary_radius)) +
                              dflt.mass.m_s * dflt.mass.r_s +
                              0.1 * (dflt.mass.r_b + Vec3<double>(act.delta_rb, 0, 0));
  Vec6<double> rhs;
  rhs << 0, 0, 0.1 * g, moment.cross(down);
  const Vec6<double> expect = dflt.inertia.M().inverse() * rhs;
  CHECK((d2.nu.vector() - expect).norm() < 1e-12);
  CHECK(d2.pose.vector().isZero(0));
}

TEST_CASE("state derivative matches the straight-line oracle") {
  testing::Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto p = testing::random_params(rng, true);
    const auto s = testing::random_state(rng);
    const auto a = testing::random_actuators(rng, p);
    Vec6<double> extra;
    for (int j = 0; j < 6; ++j) extra(j) = testing::uniform(rng, -0.5, 0.5);
    const Vec12<double> lib = state_derivative(s, a, p, extra).vector();
    const Vec12<double> ref = oracle::derivative(s, a, p, extra);
    CHECK((lib - ref).norm() <= 1e-10 * ref.norm());
  }
}

TEST_CASE("state derivative is affine in each hydrodynamic coefficient") {
  testing::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::random_params(rng, true);
    const auto s = testing::random_state(rng);
    const auto a = testing::random_actuators(rng, p);
    for (int j = 0; j < 12; ++j) {
      auto at = [&](double kj) {
        Vec12<double> k = p.hydro.vector();
        k(j) = kj;
        VehicleParams<double> q = p;
        q.hydro = HydroCoefficients<double>::from_vector(k);
        return state_derivative(s, a, q).nu.vector();
      };
      const Vec6<double> d1 = at(1) - at(0);
      const Vec6<double> d2 = at(3) - at(2);
      CHECK((d1 - d2).norm() <= 1e-8 * (1 + d1.norm()));
    }
  }
}

TEST_CASE("vehicle parameter file") {
  const auto p = default_vehicle_params();
  CHECK(validate(p).empty());
  std::stringstream ss;
  write_vehicle_params(ss, p);
  const auto back = parse_vehicle_params(ss);
  CHECK(back.inertia.M() == p.inertia.M());
  CHECK(back.hydro.vector() == p.hydro.vector());
  CHECK(back.mass.r_s == p.mass.r_s);
  CHECK(back.plunger_gain == p.plunger_gain);

  std::stringstream bad("hydro.kd0 = 1\nnot_a_key = 3\nmass.m_s = abc\n");
  try {
    parse_vehicle_params(bad, "bad.txt");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.problems().size() == 2);
  }
}
