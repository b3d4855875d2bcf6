#include "support.hpp"

#include <gtest/gtest.h>

using namespace hkt_test;

namespace {

const std::vector<std::string> kHkt{"torus4", "torus8", "hopf4", "nil8"};

struct HktData {
  KForm T;
  LeeForm lee;
  Connection bismut;
  Connection obata;
  Curvature Rob;
};

HktData hkt_data(const CatalogEntry& e) {
  const auto& H = e.structure;
  const KForm T = *hkt_check(H, e.lie).torsion;
  const Connection b = bismut_connection(T, e.lie, H.g);
  const Connection ob = obata_connection(H, e.lie, T);
  return {T, lee_form(T, H, e.lie), b, ob, curvature(ob, e.lie, H.g)};
}

Rational oracle_star_scalar(const CatalogEntry& e, int s) {
  const auto& H = e.structure;
  const Curvature Rg = curvature(levi_civita(e.lie, H.g), e.lie, H.g);
  const auto frame = orthonormal_frame(H.g);
  const Endomorphism& J = H.j(s);
  Rational total;
  for (const auto& fa : frame)
    for (const auto& fb : frame) total += eval_tensor(Rg.r, {J.apply(fa), fa, fb, J.apply(fb)});
  return Rational(1, 2) * total;
}

Rational oracle_h(const KForm& dT, const HyperhermitianStructure& H) {
  const auto frame = orthonormal_frame(H.g);
  Rational total;
  for (const auto& fa : frame)
    for (const auto& fb : frame) total += dT.evaluate({fa, H.j(1).apply(fa), fb, H.j(1).apply(fb)});
  return Rational(-1, 4) * total;
}

Rational oracle_codifferential(const KForm& theta, const CatalogEntry& e) {
  const Connection lc = levi_civita(e.lie, e.structure.g);
  Rational total;
  for (const auto& f : orthonormal_frame(e.structure.g)) total += theta.evaluate({lc.apply(f, f)});
  return total;
}

RicciPackage zero_package(std::size_t n) {
  RicciPackage p{Tensor(2, n), Tensor(2, n), {Tensor(2, n), Tensor(2, n), Tensor(2, n)}, Rational{}, {}};
  return p;
}

}  // namespace

TEST(LeeForm, MatchesFrameOracle) {
  for (const auto& name : kHkt) {
    const auto& e = builtin(name);
    const HktData d = hkt_data(e);
    for (int s = 1; s <= 3; ++s)
      for (std::size_t x = 0; x < e.dim(); ++x)
        EXPECT_EQ(d.lee.theta({x}), oracle_lee(d.T, e.structure.j(s), e.structure.g, x)) << name << " s=" << s;
  }
}

TEST(LeeForm, HopfIsClosedNotZero) {
  const auto& e = builtin("hopf4");
  const LeeForm lee = hkt_data(e).lee;
  EXPECT_EQ(lee.classification, LeeClass::ClosedNonzero);
  EXPECT_EQ(lee.theta({0}), Rational(-2));
  for (std::size_t x = 1; x < 4; ++x) EXPECT_TRUE(lee.theta({x}).is_zero());
  EXPECT_EQ(hkt_data(builtin("nil8")).lee.classification, LeeClass::Balanced);
}

TEST(LeeForm, RejectsNonHktTorsion) {
  const auto& e = builtin("hc_only8");
  const KForm T1 = kt_torsion(e.structure.j(1), e.lie, e.structure.g);
  EXPECT_THROW(lee_form(T1, e.structure, e.lie), Error);
}

TEST(ObataRicci, RicciMatchesFrameOracle) {
  for (const auto& name : kHkt) {
    const auto& e = builtin(name);
    const HktData d = hkt_data(e);
    const RicciPackage p = ricci_package(d.Rob, e.structure);
    for (std::size_t x = 0; x < e.dim(); ++x)
      for (std::size_t y = 0; y < e.dim(); ++y) EXPECT_EQ(p.ric(x, y), oracle_ric(d.Rob.r, e.structure.g, x, y));
  }
  const auto& hc = builtin("hc_only8");
  const Connection ob = obata_connection(hc.structure, hc.lie, std::nullopt);
  EXPECT_EQ(curvature(ob, hc.lie, hc.structure.g).r, oracle_curvature(ob, hc.lie, hc.structure.g));
}

TEST(ObataRicci, IdentitySuiteOnHktEntries) {
  for (const auto& name : kHkt) {
    const auto& e = builtin(name);
    const HktData d = hkt_data(e);
    for (const auto& c : obata_identity_suite(ricci_package(d.Rob, e.structure), d.lee, e.structure))
      EXPECT_TRUE(c.ok) << name << " " << c.id << " " << c.counterexample;
  }
}

TEST(ObataRicci, IdentitySuiteInSkewedBases) {
  std::mt19937 rng(51);
  for (const char* name : {"hopf4", "nil8"}) {
    const auto f = change_basis(builtin(name), random_basis_change(rng, builtin(name).dim()));
    const HktData d = hkt_data(f);
    for (const auto& c : obata_identity_suite(ricci_package(d.Rob, f.structure), d.lee, f.structure))
      EXPECT_TRUE(c.ok) << name << " " << c.id << " " << c.counterexample;
  }
}

TEST(ObataRicci, SuiteDetectsWrongLeeForm) {
  const auto& e = builtin("hopf4");
  HktData d = hkt_data(e);
  // a non-closed 1-form in place of theta: Ric^ob = 0 no longer matches d theta
  d.lee.d_theta = ce_differential(KForm::basis_covector(1, 4), e.lie);
  const auto checks = obata_identity_suite(ricci_package(d.Rob, e.structure), d.lee, e.structure);
  EXPECT_FALSE(find_check(checks, "ric_eq_dtheta")->ok);
}

TEST(CurvatureRelation, ReproducesObataCurvature) {
  for (const auto& name : kHkt) {
    const auto& e = builtin(name);
    const HktData d = hkt_data(e);
    const Tensor A = difference_tensor(d.T, e.structure);
    const Curvature Rb = curvature(d.bismut, e.lie, e.structure.g);
    EXPECT_TRUE(curvature_relation_check(Rb, d.Rob, A, d.T, d.bismut, e.structure.g).ok) << name;
  }
}

TEST(CurvatureRelation, DetectsPerturbation) {
  const auto& e = builtin("nil8");
  const HktData d = hkt_data(e);
  Tensor A = difference_tensor(d.T, e.structure);
  A(0, 1, 2) += 1;
  const Curvature Rb = curvature(d.bismut, e.lie, e.structure.g);
  EXPECT_FALSE(curvature_relation_check(Rb, d.Rob, A, d.T, d.bismut, e.structure.g).ok);
}

TEST(StarScalar, ValuesAgainstOracles) {
  struct Want {
    const char* name;
    Rational star, h, theta_sq, torsion_sq;
  };
  for (const Want& w : {Want{"hopf4", 2, 0, 4, 24}, Want{"nil8", -3, 12, 0, 36}, Want{"torus8", 0, 0, 0, 0}}) {
    const auto& e = builtin(w.name);
    const HktData d = hkt_data(e);
    const DtTraces dt = dT_traces(d.T, e.structure, e.lie);
    const StarScalar st = star_scalar(curvature(levi_civita(e.lie, e.structure.g), e.lie, e.structure.g),
                                      e.structure, e.lie, d.T, d.lee, dt);
    for (int s = 1; s <= 3; ++s) {
      EXPECT_EQ(st.scal_s[static_cast<std::size_t>(s - 1)], oracle_star_scalar(e, s)) << w.name << " s=" << s;
      EXPECT_EQ(st.scal_s[static_cast<std::size_t>(s - 1)], w.star) << w.name;
    }
    EXPECT_EQ(dt.h, oracle_h(dt.dT, e.structure)) << w.name;
    EXPECT_EQ(dt.h, w.h) << w.name;
    EXPECT_EQ(st.delta_theta, oracle_codifferential(d.lee.theta, e)) << w.name;
    EXPECT_EQ(st.theta_sq, w.theta_sq) << w.name;
    EXPECT_EQ(st.torsion_sq, w.torsion_sq) << w.name;
    for (const auto& c : st.checks) EXPECT_TRUE(c.ok) << w.name << " " << c.id << " " << c.counterexample;
    EXPECT_TRUE(chern_norm_check(d.T, e.structure).ok) << w.name;
  }
}

TEST(StarScalar, FactorialNormConventionFailsCalibration) {
  for (const char* name : {"hopf4", "nil8"}) {
    const auto& e = builtin(name);
    const HktData d = hkt_data(e);
    const Rational star = oracle_star_scalar(e, 1);
    const Rational t2 = norm_sq(d.T, e.structure.g, NormConvention::FactorialNormalized);
    const Rational th2 = norm_sq(d.lee.theta, e.structure.g, NormConvention::FactorialNormalized);
    const Rational delta = oracle_codifferential(d.lee.theta, e);
    EXPECT_NE(star, delta + th2 - t2 / 12) << name;
  }
}

TEST(StarScalar, InvariantUnderBasisChange) {
  std::mt19937 rng(52);
  for (const char* name : {"hopf4", "nil8"}) {
    const auto& e = builtin(name);
    const HktData d0 = hkt_data(e);
    const DtTraces dt0 = dT_traces(d0.T, e.structure, e.lie);
    const auto f = change_basis(e, random_basis_change(rng, e.dim()));
    const HktData d = hkt_data(f);
    const DtTraces dt = dT_traces(d.T, f.structure, f.lie);
    const StarScalar st = star_scalar(curvature(levi_civita(f.lie, f.structure.g), f.lie, f.structure.g),
                                      f.structure, f.lie, d.T, d.lee, dt);
    EXPECT_EQ(dt.h, dt0.h) << name;
    EXPECT_EQ(st.scal_s[0], oracle_star_scalar(e, 1)) << name;
    EXPECT_EQ(st.theta_sq, norm_sq(d0.lee.theta, e.structure.g)) << name;
    for (const auto& c : st.checks) EXPECT_TRUE(c.ok) << name << " " << c.id << " " << c.counterexample;
  }
}

TEST(DtTraces, StrongAndAlmostStrong) {
  const auto& hopf = builtin("hopf4");
  const DtTraces a = dT_traces(hkt_data(hopf).T, hopf.structure, hopf.lie);
  EXPECT_TRUE(a.strong);
  EXPECT_TRUE(a.almost_strong);
  const auto& nil = builtin("nil8");
  const DtTraces b = dT_traces(hkt_data(nil).T, nil.structure, nil.lie);
  EXPECT_FALSE(b.strong);
  EXPECT_FALSE(b.almost_strong);
  EXPECT_TRUE(b.partial_coincide);
}

TEST(Obstruction, NoFlagOnHktOrHypercomplexEntries) {
  for (const auto& e : builtin_catalog()) {
    const Connection ob = obata_connection(e.structure, e.lie, std::nullopt);
    const ObstructionReport r = hkt_obstruction_report(ricci_package(curvature(ob, e.lie, e.structure.g), e.structure),
                                                       e.structure);
    EXPECT_FALSE(r.obstructed()) << e.name << ": " << r.detail;
    EXPECT_EQ(r.verdict(), "inconclusive");
  }
}

TEST(Obstruction, FlagsSyntheticPackages) {
  const auto& H = builtin("hopf4").structure;
  RicciPackage p = zero_package(4);
  EXPECT_FALSE(hkt_obstruction_report(p, H).obstructed());

  p.ric(0, 0) = 1;
  auto r = hkt_obstruction_report(p, H);
  EXPECT_TRUE(r.ric_flag);
  EXPECT_EQ(r.verdict(), "no compatible HKT metric");

  p = zero_package(4);
  p.ric(0, 2) = 1;  // skew but not J-invariant
  p.ric(2, 0) = -1;
  EXPECT_TRUE(hkt_obstruction_report(p, H).ric_flag);

  p = zero_package(4);
  p.rho_s[1](0, 1) = 1;
  r = hkt_obstruction_report(p, H);
  EXPECT_TRUE(r.rho_s_flag);
  EXPECT_FALSE(r.ric_flag);

  p = zero_package(4);
  p.scal_s[2] = 1;
  EXPECT_TRUE(hkt_obstruction_report(p, H).scal_flag);
}

TEST(HyperkahlerDetector, TruthTable) {
  EXPECT_EQ(hyperkahler_detector(true, 0, 5, false, true).status, "consistent");
  EXPECT_EQ(hyperkahler_detector(true, 0, 5, false, false).status, "THEOREM VIOLATION");
  EXPECT_EQ(hyperkahler_detector(true, 1, 0, false, false).status, "THEOREM VIOLATION");
  EXPECT_EQ(hyperkahler_detector(true, 1, 1, true, false).status, "THEOREM VIOLATION");
  EXPECT_EQ(hyperkahler_detector(true, 12, -3, false, false).status, "not applicable");
  EXPECT_EQ(hyperkahler_detector(false, 0, 0, true, false).status, "not applicable");
}
