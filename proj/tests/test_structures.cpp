#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "cgeo/contact.hpp"
#include "cgeo/deform.hpp"
#include "cgeo/models.hpp"
#include "cgeo/ngts.hpp"
#include "support.hpp"

using namespace cgeo;

namespace {

constexpr int kFew = 8;

HSpectrum spectrum(std::array<double, kDim - 1> ev) {
  HSpectrum s;
  s.eigenvalues = ev;
  s.median = 0.5 * (ev[1] + ev[2]);
  return s;
}

}  // namespace

// ------------------------------------------------------------ classes

TEST_CASE("class residuals separate the base structures", "[contact]") {
  const DerivativeEngine eng;
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(601, n);
    const auto x = testing::random_point(rng);
    const RoundS5 s5;
    const auto sas = class_residuals(acm_local(Member<RoundS5>(s5, 3), eng, x));
    CHECK(sas.at("sasakian") <= 1e-12);
    CHECK(sas.at("cosymplectic") > 0.1);

    const double t = 2.0 * rng.uniform();
    const auto nc = class_residuals(acm_local(Member<RotatedNc<RoundS5>>(rotated_nc(s5, 1.0, t), 2), eng, x));
    CHECK(nc.at("nearly_cosymplectic") <= 1e-12);
    CHECK(nc.at("anc") > 0.1);  // d eta != 0, so the eta-d eta terms do not vanish

    const auto anc = class_residuals(acm_local(Member<AncQuadruple<RoundS5>>(anc_quadruple(s5, 1.0, t), 2), eng, x));
    CHECK(anc.at("anc") <= 1e-12);
    CHECK(anc.at("nearly_cosymplectic") > 0.01);

    const auto flat = class_residuals(acm_local(Member<FlatR5>(FlatR5{}, 2), eng, x));
    for (const char* k : {"cosymplectic", "nearly_cosymplectic", "anc"}) CHECK(flat.at(k) == 0.0);
    CHECK(flat.at("sasakian") > 0.1);
  }
}

TEST_CASE("lambda estimate edge cases", "[contact]") {
  CHECK_FALSE(estimate_lambda({}, 0.0).lambda_type);
  const auto skipped = estimate_lambda({spectrum({4, 4, 4, 4})}, 1e-3);
  CHECK_FALSE(skipped.lambda_type);
  CHECK(skipped.note.find("Killing") != std::string::npos);
  const auto zero = estimate_lambda({spectrum({0, 0, 0, 0}), spectrum({1e-12, 0, 0, 0})}, 0.0);
  CHECK(zero.lambda_type);
  CHECK(zero.lambda == 0.0);
  const auto four = estimate_lambda({spectrum({4, 4, 4, 4}), spectrum({4, 4, 4, 4 + 1e-7})}, 0.0);
  CHECK(four.lambda_type);
  CHECK(four.lambda == Catch::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(estimate_lambda({spectrum({1, 1, 4, 4})}, 0.0).lambda_type);
  CHECK_FALSE(estimate_lambda({spectrum({4, 4, 4, 4}), spectrum({9, 9, 9, 9})}, 0.0).lambda_type);
}

TEST_CASE("h of the nearly cosymplectic family is of lambda type", "[contact][property]") {
  const DerivativeEngine eng;
  for (double lam : {0.5, 1.0, 2.0}) {
    std::vector<HSpectrum> spectra;
    for (int n = 0; n < kFew; ++n) {
      CounterRng rng(602, n);
      const auto x = testing::random_point(rng);
      const Member<RotatedNc<RoundS5>> m(rotated_nc(RoundS5{}, lam, 0.4), 1);
      const AcmLocal L = acm_local(m, eng, x);
      spectra.push_back(h_spectrum(L));
      CHECK(h_square_residual(L, lam) <= 1e-11);
      CHECK(trace_h_squared(L) == Catch::Approx(-4.0 * lam * lam).epsilon(1e-11));
    }
    const auto est = estimate_lambda(spectra, 0.0);
    REQUIRE(est.lambda_type);
    CHECK(est.lambda == Catch::Approx(lam).epsilon(1e-10));
  }
}

TEST_CASE("SU(2) systems on the sphere and on flat space", "[contact][property]") {
  const DerivativeEngine eng;
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(603, n);
    const auto x = testing::random_point(rng);
    const auto se = su2_system_residuals(su2_local(RoundS5{}, eng, x), 1.0);
    CHECK(se.at("sasaki_einstein") <= 1e-12);
    CHECK(se.at("hypo") <= 1e-12);
    CHECK(se.at("nc_lambda") <= 1e-12);  // same system at lambda = 1
    CHECK(se.at("anc_lambda") > 0.1);
    for (double lam : {0.5, 3.0}) {
      const auto nc = su2_system_residuals(su2_local(nc_quadruple(RoundS5{}, lam), eng, x), lam);
      CHECK(nc.at("nc_lambda") <= 1e-11);
      const auto anc = su2_system_residuals(su2_local(anc_quadruple(RoundS5{}, lam, 0.3), eng, x), lam);
      CHECK(anc.at("anc_lambda") <= 1e-11);
    }
    const auto flat = su2_system_residuals(su2_local(FlatR5{}, eng, x), 0.0);
    CHECK(flat.at("hypo") == 0.0);
    CHECK(flat.at("nc_lambda") == 0.0);
  }
}

// ------------------------------------------------------------ deformations

TEST_CASE("homothety scales the fields", "[deform][property]") {
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(611, n);
    const auto x = testing::random_point(rng);
    const double c = 0.2 + 3.0 * rng.uniform();
    const RoundS5 s5;
    const Homothety<RoundS5> h(s5, c);
    CHECK(max_abs(h.metric(x) - (c * c) * s5.metric(x)) <= 1e-14);
    CHECK(max_abs(h.eta(x) - c * s5.eta(x)) <= 1e-14);
    CHECK(max_abs(h.xi(x) - (1.0 / c) * s5.xi(x)) <= 1e-14);
    CHECK(max_abs(h.omega(1, x) - (c * c) * s5.omega(1, x)) <= 1e-14);
    // phi_i is unchanged
    CHECK(max_abs(Member(h, 2).phi(x) - Member(s5, 2).phi(x)) <= 1e-13);
  }
  CHECK_THROWS_AS(Homothety<RoundS5>(RoundS5{}, 0.0), ParameterError);
  CHECK_THROWS_AS(DHomothety<RoundS5>(RoundS5{}, -1.0), ParameterError);
  CHECK_THROWS_AS(Member<RoundS5>(RoundS5{}, 4), ParameterError);
}

TEST_CASE("D-homothety keeps the structure compatible and inverts", "[deform][property]") {
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(612, n);
    const auto x = testing::random_point(rng);
    const double a = 0.2 + 3.0 * rng.uniform();
    const Member<RoundS5> base(RoundS5{}, 3);
    const DHomothety<Member<RoundS5>> d(base, a);
    for (const auto& [k, v] : acm_compatibility_residuals(d, ChartPoint{ChartId::kNorth, x})) CHECK(v <= 1e-12);
    const DHomothety<DHomothety<Member<RoundS5>>> back(d, 1.0 / a);
    CHECK(max_abs(back.metric(x) - base.metric(x)) <= 1e-13);
    CHECK(max_abs(back.eta(x) - base.eta(x)) <= 1e-14);
    CHECK(max_abs(back.xi(x) - base.xi(x)) <= 1e-14);
    CHECK(max_abs(back.phi(x) - base.phi(x)) <= 1e-13);
  }
}

TEST_CASE("rotation by t and -t is the identity", "[deform][property]") {
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(613, n);
    const auto x = testing::random_point(rng);
    const double t = 6.0 * rng.uniform();
    const Rotated<Rotated<RoundS5>> r(Rotated<RoundS5>(RoundS5{}, t), -t);
    for (int i = 1; i <= 3; ++i) CHECK(max_abs(r.omega(i, x) - RoundS5{}.omega(i, x)) <= 1e-14);
    const Rotated<RoundS5> quarter(RoundS5{}, std::numbers::pi / 2);
    CHECK(max_abs(quarter.omega(1, x) - RoundS5{}.omega(2, x)) <= 1e-14);
  }
}

TEST_CASE("attached Sasaki-Einstein structure", "[deform]") {
  const DerivativeEngine eng;
  const Member<AncQuadruple<RoundS5>> anc(anc_quadruple(RoundS5{}, 1.0, 0.5), 1);
  CHECK_THROWS_AS(AttachedSasakiEinstein(anc, 0.0), UnsupportedInput);
  CHECK_THROWS_AS(AttachedSasakiEinstein(anc, -1.0), UnsupportedInput);
  LambdaEstimate not_lambda;
  not_lambda.note = "not of lambda-type";
  CHECK_THROWS_AS(attach_sasaki_einstein(anc, not_lambda), UnsupportedInput);
  LambdaEstimate zero;
  zero.lambda_type = true;
  CHECK_THROWS_AS(attach_sasaki_einstein(anc, zero), UnsupportedInput);

  const AttachedSasakiEinstein se(anc, 1.0, eng);
  for (int n = 0; n < 3; ++n) {
    CounterRng rng(614, n);
    const auto x = testing::random_point(rng);
    CHECK(su2_system_residuals(su2_local(se, eng, x), 1.0).at("sasaki_einstein") <= 1e-10);
  }
}

TEST_CASE("Levi-Civita connections of D-homothetic metrics", "[deform][property]") {
  const DerivativeEngine eng;
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(615, n);
    const auto x = testing::random_point(rng);
    const double a = 0.3 + 2.0 * rng.uniform();
    CHECK(dhom_connection_relation_residual(Member<RoundS5>(RoundS5{}, 3), a, eng, x) <= 1e-11);
  }
}

// ------------------------------------------------------------ NGTS connections

TEST_CASE("metricity variant satisfies the Einstein metricity condition", "[ngts][property]") {
  const DerivativeEngine eng;
  using AncM = Member<AncQuadruple<RoundS5>>;
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(621, n);
    const auto x = testing::random_point(rng);
    const AncM m(anc_quadruple(RoundS5{}, 1.0, 2.0 * rng.uniform()), 1);
    const auto good = metricity_residuals(NgtsConnection<AncM>(m, eng), m, x);
    CHECK(good.at("full") <= 1e-11);
    CHECK(good.at("coordinate") <= 1e-11);
    CHECK(good.at("torsion_skew") <= 1e-12);
    CHECK(good.at("torsion_dF") <= 1e-12);
    CHECK(good.at("g_display_eta_negated") <= 1e-11);
    // the other sign of the eta-d eta term has the same torsion but breaks metricity
    const auto printed = metricity_residuals(NgtsConnection<AncM>(m, eng, NgtsVariant::kAsPrinted), m, x);
    CHECK(printed.at("torsion_dF") <= 1e-12);
    CHECK(printed.at("full") > 0.1);
  }
}

TEST_CASE("family connection equals the connection built from the ANC structure", "[ngts][property]") {
  const DerivativeEngine eng;
  using AncM = Member<AncQuadruple<RoundS5>>;
  for (int n = 0; n < kFew; ++n) {
    CounterRng rng(622, n);
    const auto x = testing::random_point(rng);
    const double t = 2.0 * rng.uniform();
    for (double lam : {1.0, 2.5}) {
      const AncM m(anc_quadruple(RoundS5{}, lam, t), 1);
      for (auto v : {NgtsVariant::kMetricity, NgtsVariant::kAsPrinted}) {
        const NgtsConnection<AncM> direct(m, eng, v);
        const NgtsFamilyConnection<NcQuadruple<RoundS5>> family(nc_quadruple(RoundS5{}, lam), t, lam, eng, v);
        CHECK(max_abs(direct.gamma(x) - family.gamma(x)) <= 1e-11);
      }
    }
  }
}

TEST_CASE("NGTS connection of a cosymplectic structure is Levi-Civita", "[ngts]") {
  const Member<FlatR5> m(FlatR5{}, 2);
  const Point<double> x{0.3, -0.2, 0.1, 0.7, 1.1};
  CHECK(max_abs(NgtsConnection<Member<FlatR5>>(m).gamma(x)) == 0.0);
  CHECK(max_abs(ngts_torsion(m, DerivativeEngine{}, x)) == 0.0);
}

TEST_CASE("ngts_torsion rejects structures outside the ANC class", "[ngts]") {
  const Point<double> x{0.3, -0.2, 0.1, 0.4, 0.2};
  CHECK_THROWS_AS(ngts_torsion(Member<RoundS5>(RoundS5{}, 3), DerivativeEngine{}, x), ContractError);
}
