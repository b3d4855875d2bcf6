#pragma once

// Full analysis of one catalog entry and its JSON / text renderings.

#include "hktlab/catalog.hpp"
#include "hktlab/curvature_analysis.hpp"
#include "hktlab/holonomy.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hktlab {

inline constexpr const char* kReportSchemaVersion = "1";

enum class ConnectionKind { Obata, Bismut, LeviCivita };

inline const char* to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::Obata: return "obata";
    case ConnectionKind::Bismut: return "bismut";
    case ConnectionKind::LeviCivita: return "levicivita";
  }
  return "?";
}

struct HolonomyReport {
  ConnectionKind connection = ConnectionKind::Obata;
  bool available = false;
  std::string unavailable_reason;
  std::size_t dim = 0;
  bool closed = true;
  bool in_gl = true;
  bool in_sl = true;
  bool g_skew = true;
  std::string certificate;
  std::vector<Matrix> generators;
};

/// Holonomy of one connection of an entry. Throws Error when the connection
/// does not exist (no HKT torsion for Bismut, non-integrable for Obata).
inline HolonomyReport holonomy_report(const CatalogEntry& e, ConnectionKind kind) {
  const auto& H = e.structure;
  const auto& L = e.lie;
  HolonomyReport r;
  r.connection = kind;
  Connection c;
  switch (kind) {
    case ConnectionKind::LeviCivita: c = levi_civita(L, H.g); break;
    case ConnectionKind::Bismut: {
      const auto hk = hkt_check(H, L);
      if (!hk.ok) throw Error("no HKT connection: " + hk.failure);
      c = bismut_connection(*hk.torsion, L, H.g);
      break;
    }
    case ConnectionKind::Obata: {
      if (const auto s = integrability_check(H, L))
        throw Error("no Obata connection: J" + std::to_string(*s) + " is not integrable");
      const auto hk = hkt_check(H, L);
      c = obata_connection(H, L, hk.ok ? hk.torsion : std::nullopt);
      break;
    }
  }
  const Curvature R = curvature(c, L, H.g);
  const HolonomyAlgebra hol = holonomy_algebra(c, R);
  r.available = true;
  r.dim = hol.dim();
  r.closed = is_closed(hol);
  const SlMembership m = slnh_membership(hol, H);
  r.in_gl = m.in_gl;
  r.in_sl = m.in_sl;
  r.certificate = m.certificate;
  r.g_skew = all_g_skew(hol, H.g);
  r.generators = hol.generators;
  return r;
}

struct Verdict {
  bool integrable = false;
  bool hkt = false;
  bool hyperkahler = false;
  bool balanced = false;
  bool invariant_sl = false;
  bool restricted_sl = false;
  bool strong = false;
  bool almost_strong = false;
  bool obata_flat = false;
  std::string sl_tier;
  std::string caveat;
  std::size_t obata_holonomy_dim = 0;
  std::string obstruction;
  std::string vanishing;
};

struct AnalysisReport {
  std::string name;
  std::size_t n = 0;
  std::size_t dim = 0;

  std::vector<Check> validation;
  std::optional<int> non_integrable;

  bool hkt = false;
  std::string hkt_failure;
  bool skew_connection = false;
  std::optional<KForm> torsion;

  std::string obata_route;
  std::size_t oracle_rank = 0;
  std::size_t oracle_unknowns = 0;

  std::optional<LeeForm> lee;
  std::optional<DtTraces> dt;
  std::optional<StarScalar> star;
  std::optional<RicciPackage> ricci_obata;
  ObstructionReport obstruction;
  HyperkahlerVerdict vanishing;

  std::vector<Check> identities;   // structural: must always hold
  std::vector<Check> consistency;  // theorem-level implications
  std::vector<Check> expected;     // catalog regression map

  std::vector<HolonomyReport> holonomy;
  Verdict verdict;

  bool structural_defect() const { return !all_ok(validation) || !all_ok(identities); }
  bool theorem_violation() const { return !all_ok(consistency) || vanishing.violation; }
  int exit_code() const { return theorem_violation() || structural_defect() ? 3 : 0; }
};

namespace detail {
inline Check bool_check(std::string id, std::string statement, bool ok, std::string where = "") {
  Check c{std::move(id), std::move(statement)};
  if (!ok) fail_once(c, where.empty() ? "fails" : where);
  return c;
}
inline void append(std::vector<Check>& dst, const std::vector<Check>& src) { dst.insert(dst.end(), src.begin(), src.end()); }
}  // namespace detail

inline std::map<std::string, bool> observed_flags(const AnalysisReport& r) {
  std::map<std::string, bool> m{{"integrable", r.verdict.integrable},
                                {"hkt", r.verdict.hkt},
                                {"obata_flat", r.verdict.obata_flat},
                                {"obstructed", r.obstruction.obstructed()}};
  if (r.lee) {
    m["hyperkahler"] = r.verdict.hyperkahler;
    m["balanced"] = r.verdict.balanced;
    m["strong"] = r.verdict.strong;
    m["almost_strong"] = r.verdict.almost_strong;
    m["d_theta_zero"] = r.lee->d_theta.is_zero();
  }
  return m;
}

inline AnalysisReport analyze(const CatalogEntry& e) {
  const auto& H = e.structure;
  const auto& L = e.lie;
  AnalysisReport r;
  r.name = e.name;
  r.n = e.n;
  r.dim = e.dim();

  const auto lv = validate_lie_algebra(L);
  r.validation.push_back(detail::bool_check("lie_algebra", "antisymmetry and Jacobi identity", lv.ok, lv.message));
  r.validation.push_back(quaternionic_check(H));
  r.non_integrable = integrability_check(H, L);
  r.verdict.integrable = !r.non_integrable;

  const Connection lc = levi_civita(L, H.g);
  r.identities.push_back(detail::bool_check("lc_torsion_free", "Levi-Civita connection is torsion-free",
                                            torsion(lc, L, H.g).is_zero()));
  r.identities.push_back(detail::bool_check("lc_metric", "Levi-Civita connection preserves g", lc.is_metric()));
  for (int s = 1; s <= 3; ++s) {
    const Nijenhuis N = nijenhuis(H.j(s), L, H.g);
    if (!N.form) continue;
    Check c = df_minus_relation(H.j(s), L, H.g);
    const std::string j = "J" + std::to_string(s);
    c.id += "_" + j;
    c.statement = j + " dF^- = -3/4 N_" + j;
    r.identities.push_back(std::move(c));
  }

  const HktResult hk = hkt_check(H, L);
  r.hkt = hk.ok;
  r.hkt_failure = hk.failure;
  r.skew_connection = hk.skew_connection;
  r.verdict.hkt = hk.ok;
  std::optional<Connection> bismut;
  if (hk.ok) {
    r.torsion = hk.torsion;
    const KForm& T = *hk.torsion;
    r.identities.push_back(detail::bool_check("hkt_integrable", "J1 dF1 = J2 dF2 = J3 dF3 forces N_{J_s} = 0", hk.integrable));
    r.identities.push_back(type_check_12_21(T, H));
    bismut = bismut_connection(T, L, H.g);
    const Torsion bt = torsion(*bismut, L, H.g);
    r.identities.push_back(detail::bool_check("bismut_torsion", "torsion of nabla = nabla^g + T/2 equals T",
                                              bt.form && *bt.form == T));
    r.identities.push_back(detail::bool_check("bismut_metric", "nabla g = 0", bismut->is_metric()));
    bool preserves = true;
    for (int s = 1; s <= 3; ++s) preserves = preserves && bismut->preserves(H.j(s));
    r.identities.push_back(detail::bool_check("bismut_preserves_J", "nabla J_s = 0", preserves));
    const Curvature Rb = curvature(*bismut, L, H.g);
    r.identities.push_back(ricci_forms_vanish(ricci_package(Rb, H)));
  }

  std::optional<Connection> ob;
  ObataSolution oracle;
  if (r.verdict.integrable) {
    try {
      oracle = obata_oracle_solver(H, L);
      r.oracle_rank = oracle.rank;
      r.oracle_unknowns = oracle.unknowns;
    } catch (const Error& err) {
      r.identities.push_back(detail::bool_check("obata_oracle", "torsion-free J-preserving connection is unique", false,
                                                err.what()));
    }
    if (hk.ok) {
      r.obata_route = "hkt_plus_A";
      ob = obata_connection(H, L, hk.torsion);
      if (r.oracle_unknowns > 0)
        r.identities.push_back(detail::bool_check("obata_oracle", "nabla + A equals the linear-system solution",
                                                  *ob == oracle.connection));
    } else if (r.oracle_unknowns > 0) {
      r.obata_route = "linear_system";
      ob = oracle.connection;
    }
  }
  if (ob) {
    r.identities.push_back(detail::bool_check("obata_torsion_free", "nabla^ob is torsion-free",
                                              torsion(*ob, L, H.g).is_zero()));
    bool preserves = true;
    for (int s = 1; s <= 3; ++s) preserves = preserves && ob->preserves(H.j(s));
    r.identities.push_back(detail::bool_check("obata_preserves_J", "nabla^ob J_s = 0", preserves));
    const Curvature Rob = curvature(*ob, L, H.g);
    r.verdict.obata_flat = Rob.is_zero();
    r.ricci_obata = ricci_package(Rob, H);
    r.obstruction = hkt_obstruction_report(*r.ricci_obata, H);

    if (hk.ok) {
      const KForm& T = *hk.torsion;
      const Tensor A = difference_tensor(T, H);
      const Torsion bt = torsion(*bismut, L, H.g);
      r.identities.push_back(difference_tensor_invariance(A, H));
      r.identities.push_back(detail::bool_check("B_eq_A", "lowered B equals A",
                                                H.g.lower_last(obata_b_tensor(bt.raised, H)) == A));
      r.lee = lee_form(T, H, L);
      detail::append(r.identities, trace_identities(A, H, r.lee->theta));
      detail::append(r.identities, complex_trace_A(A, H, r.lee->theta));
      detail::append(r.identities, obata_identity_suite(*r.ricci_obata, *r.lee, H));
      const Curvature Rb = curvature(*bismut, L, H.g);
      r.identities.push_back(curvature_relation_check(Rb, Rob, A, T, *bismut, H.g));
      r.dt = dT_traces(T, H, L);
      r.identities.push_back(detail::bool_check("dT_partial_coincide",
                                                "sum_a dT(e_a,J_s e_a,X,J_s Y) is independent of s",
                                                r.dt->partial_coincide));
      r.star = star_scalar(curvature(lc, L, H.g), H, L, T, *r.lee, *r.dt);
      detail::append(r.identities, r.star->checks);
      r.identities.push_back(chern_norm_check(T, H));
    }
  }

  for (auto kind : {ConnectionKind::Obata, ConnectionKind::Bismut, ConnectionKind::LeviCivita}) {
    try {
      r.holonomy.push_back(holonomy_report(e, kind));
    } catch (const Error& err) {
      HolonomyReport h;
      h.connection = kind;
      h.unavailable_reason = err.what();
      r.holonomy.push_back(h);
    }
  }
  for (const auto& h : r.holonomy) {
    if (!h.available) continue;
    r.identities.push_back(detail::bool_check(std::string("hol_closed_") + to_string(h.connection),
                                              std::string("holonomy algebra of ") + to_string(h.connection) +
                                                  " is closed under brackets",
                                              h.closed));
    if (h.connection == ConnectionKind::Obata) {
      r.verdict.obata_holonomy_dim = h.dim;
      r.identities.push_back(detail::bool_check("hol_obata_gl", "Obata holonomy lies in gl(n,H)", h.in_gl,
                                                h.certificate));
    } else {
      r.identities.push_back(detail::bool_check(std::string("hol_skew_") + to_string(h.connection),
                                                std::string("holonomy of ") + to_string(h.connection) +
                                                    " consists of g-skew endomorphisms",
                                                h.g_skew));
      if (h.connection == ConnectionKind::Bismut)
        r.identities.push_back(detail::bool_check("hol_bismut_quaternionic",
                                                  "Bismut holonomy commutes with every J_s", h.in_gl, h.certificate));
    }
  }

  // Verdict and consistency matrix.
  const HolonomyReport* obh = nullptr;
  for (const auto& h : r.holonomy)
    if (h.connection == ConnectionKind::Obata && h.available) obh = &h;
  if (hk.ok && r.lee) {
    const bool t_zero = r.torsion->is_zero();
    const bool theta_zero = r.lee->theta.is_zero();
    const bool dtheta_zero = r.lee->d_theta.is_zero();
    const bool ric_zero = r.ricci_obata->ric.is_zero();
    const bool trace_free = obh && obh->in_sl;
    r.verdict.hyperkahler = t_zero;
    r.verdict.balanced = theta_zero;
    r.verdict.invariant_sl = theta_zero;
    r.verdict.restricted_sl = dtheta_zero;
    r.verdict.strong = r.dt->strong;
    r.verdict.almost_strong = r.dt->almost_strong;
    if (theta_zero) {
      r.verdict.sl_tier = t_zero ? "hyperkahler" : "invariant_SL";
    } else if (dtheta_zero) {
      r.verdict.sl_tier = "restricted_SL";
      r.verdict.caveat =
          "restricted holonomy in SL(n,H) only; a compact quotient with nonzero closed Lee form "
          "(Hopf type) has no holomorphic volume form, so global SL(n,H) fails";
    } else {
      r.verdict.sl_tier = "not_SL";
    }
    r.consistency.push_back(detail::bool_check("balanced_implies_closed", "theta = 0 implies d theta = 0",
                                               !theta_zero || dtheta_zero));
    r.consistency.push_back(detail::bool_check("closed_iff_ric_zero", "d theta = 0 iff Ric^ob = 0",
                                               dtheta_zero == ric_zero));
    r.consistency.push_back(detail::bool_check("ric_zero_iff_trace_free",
                                               "Ric^ob = 0 iff Obata holonomy is trace-free", ric_zero == trace_free));
    r.consistency.push_back(detail::bool_check("exact_lee_sl", "theta = 0 implies Ric^ob = 0 and trace-free holonomy",
                                               !theta_zero || (ric_zero && trace_free)));
    r.consistency.push_back(detail::bool_check("sl_requires_exact_or_caveat",
                                               "Ric^ob = 0 and trace-free holonomy imply theta = 0 or a flagged caveat",
                                               !(ric_zero && trace_free) || theta_zero || !r.verdict.caveat.empty()));
    r.consistency.push_back(detail::bool_check("no_obstruction_on_hkt",
                                               "obstruction report raises no flag on an HKT structure",
                                               !r.obstruction.obstructed(), r.obstruction.detail));
    r.vanishing = hyperkahler_detector(theta_zero, r.dt->h, r.star->scal_s[0], r.dt->almost_strong, t_zero);
  } else {
    r.verdict.restricted_sl = obh && obh->in_sl;
    r.verdict.sl_tier = obh ? (obh->in_sl ? "restricted_SL" : "not_SL") : "undefined";
    r.vanishing.status = "not applicable";
  }
  r.verdict.obstruction = r.verdict.integrable ? r.obstruction.verdict() : "not hypercomplex";
  r.verdict.vanishing = r.vanishing.status;

  const auto observed = observed_flags(r);
  for (const auto& [key, want] : e.expected) {
    Check c{"expected_" + key, "catalog expects " + key + " = " + (want ? "true" : "false")};
    const auto it = observed.find(key);
    if (it == observed.end()) fail_once(c, "unknown key");
    else if (it->second != want) fail_once(c, std::string("observed ") + (it->second ? "true" : "false"));
    r.expected.push_back(c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline Json form_to_json(const KForm& f) {
  Json out = Json::array();
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (f.entry(p).is_zero()) continue;
    Json item = Json::array();
    for (auto i : f.sorted_tuple(p)) item.push_back(i);
    item.push_back(to_string(f.entry(p)));
    out.push_back(std::move(item));
  }
  return out;
}

inline Json checks_to_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["id"] = c.id;
    j["statement"] = c.statement;
    j["ok"] = c.ok;
    if (!c.ok) j["counterexample"] = c.counterexample;
    out.push_back(std::move(j));
  }
  return out;
}

inline Json holonomy_to_json(const HolonomyReport& h) {
  Json j;
  j["connection"] = to_string(h.connection);
  j["available"] = h.available;
  if (!h.available) {
    j["reason"] = h.unavailable_reason;
    return j;
  }
  j["dim"] = h.dim;
  j["closed"] = h.closed;
  j["in_gl_n_H"] = h.in_gl;
  j["in_sl_n_H"] = h.in_sl;
  j["g_skew"] = h.g_skew;
  if (!h.certificate.empty()) j["certificate"] = h.certificate;
  return j;
}

inline Json tensor2_to_json(const Tensor& t) {
  Json out = Json::array();
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (t.flat(p).is_zero()) continue;
    const auto idx = t.index_of(p);
    out.push_back(Json::array({idx[0], idx[1], to_string(t.flat(p))}));
  }
  return out;
}

inline const char* mark(bool ok) { return ok ? "✓" : "✗"; }

}  // namespace detail

inline Json to_json(const AnalysisReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["name"] = r.name;
  j["n"] = r.n;
  j["dim"] = r.dim;
  j["status"] = r.theorem_violation() ? "theorem_violation" : (r.structural_defect() ? "structural_defect" : "ok");
  j["validation"] = detail::checks_to_json(r.validation);
  j["integrable"] = !r.non_integrable;
  if (r.non_integrable) j["first_non_integrable"] = "J" + std::to_string(*r.non_integrable);

  Json hkt;
  hkt["ok"] = r.hkt;
  if (!r.hkt) hkt["failure"] = r.hkt_failure;
  hkt["skew_torsion_connection"] = r.skew_connection;
  if (r.torsion) hkt["torsion"] = detail::form_to_json(*r.torsion);
  j["hkt"] = std::move(hkt);

  Json ob;
  ob["route"] = r.obata_route.empty() ? "none" : r.obata_route;
  if (r.oracle_unknowns > 0) {
    ob["oracle_rank"] = r.oracle_rank;
    ob["oracle_unknowns"] = r.oracle_unknowns;
  }
  if (r.ricci_obata) {
    ob["flat"] = r.verdict.obata_flat;
    ob["ric"] = detail::tensor2_to_json(r.ricci_obata->ric);
    ob["scal"] = to_string(r.ricci_obata->scal);
    Json ss = Json::array();
    for (const auto& v : r.ricci_obata->scal_s) ss.push_back(to_string(v));
    ob["scal_s"] = std::move(ss);
  }
  j["obata"] = std::move(ob);

  if (r.lee) {
    Json lee;
    Json th = Json::array();
    for (std::size_t x = 0; x < r.dim; ++x) th.push_back(to_string(r.lee->theta({x})));
    lee["theta"] = std::move(th);
    lee["d_theta"] = detail::form_to_json(r.lee->d_theta);
    lee["classification"] = to_string(r.lee->classification);
    j["lee"] = std::move(lee);
  }
  if (r.dt && r.star) {
    Json sc;
    sc["h"] = to_string(r.dt->h);
    sc["dT_trace"] = to_string(r.dt->full_trace);
    sc["strong"] = r.dt->strong;
    sc["almost_strong"] = r.dt->almost_strong;
    sc["delta_theta"] = to_string(r.star->delta_theta);
    sc["theta_norm_sq"] = to_string(r.star->theta_sq);
    sc["torsion_norm_sq"] = to_string(r.star->torsion_sq);
    Json ss = Json::array();
    for (const auto& v : r.star->scal_s) ss.push_back(to_string(v));
    sc["star_scalar"] = std::move(ss);
    j["scalars"] = std::move(sc);
  }
  j["identities"] = detail::checks_to_json(r.identities);
  j["consistency"] = detail::checks_to_json(r.consistency);
  Json hol = Json::array();
  for (const auto& h : r.holonomy) hol.push_back(detail::holonomy_to_json(h));
  j["holonomy"] = std::move(hol);

  Json obs;
  obs["verdict"] = r.verdict.obstruction;
  obs["ric_flag"] = r.obstruction.ric_flag;
  obs["rho_s_flag"] = r.obstruction.rho_s_flag;
  obs["scal_flag"] = r.obstruction.scal_flag;
  j["obstruction"] = std::move(obs);

  Json v;
  v["hyperkahler"] = r.verdict.hyperkahler;
  v["hkt"] = r.verdict.hkt;
  v["balanced"] = r.verdict.balanced;
  v["invariant_SL"] = r.verdict.invariant_sl;
  v["restricted_SL"] = r.verdict.restricted_sl;
  v["strong"] = r.verdict.strong;
  v["almost_strong"] = r.verdict.almost_strong;
  v["obata_flat"] = r.verdict.obata_flat;
  v["sl_tier"] = r.verdict.sl_tier;
  if (!r.verdict.caveat.empty()) v["caveat"] = r.verdict.caveat;
  v["obata_holonomy_dim"] = r.verdict.obata_holonomy_dim;
  v["vanishing_theorem"] = r.verdict.vanishing;
  j["verdict"] = std::move(v);
  if (!r.expected.empty()) j["expected"] = detail::checks_to_json(r.expected);
  return j;
}

inline std::string to_text(const AnalysisReport& r) {
  std::ostringstream o;
  auto list = [&](const char* title, const std::vector<Check>& checks) {
    if (checks.empty()) return;
    o << title << "\n";
    for (const auto& c : checks) {
      o << "  " << detail::mark(c.ok) << " " << c.statement;
      if (!c.ok) o << "   [" << c.counterexample << "]";
      o << "\n";
    }
  };
  o << r.name << "  (dim " << r.dim << ", n = " << r.n << ")\n";
  list("validation", r.validation);
  o << "integrable: " << (r.non_integrable ? "no (J" + std::to_string(*r.non_integrable) + ")" : "yes") << "\n";
  o << "HKT: " << (r.hkt ? "yes" : "no (" + r.hkt_failure + ")") << "\n";
  if (!r.hkt && r.skew_connection) o << "  a metric connection with skew torsion preserves every J_s\n";
  if (r.lee) {
    o << "Lee form theta = (";
    for (std::size_t x = 0; x < r.dim; ++x) o << (x ? ", " : "") << to_string(r.lee->theta({x}));
    o << "), " << to_string(r.lee->classification) << "\n";
  }
  if (r.dt && r.star) {
    o << "|T|^2 = " << to_string(r.star->torsion_sq) << ", |theta|^2 = " << to_string(r.star->theta_sq)
      << ", delta theta = " << to_string(r.star->delta_theta) << ", Scal* = " << to_string(r.star->scal_s[0])
      << ", h = " << to_string(r.dt->h) << "\n";
    o << "strong: " << (r.dt->strong ? "yes" : "no") << ", almost strong: " << (r.dt->almost_strong ? "yes" : "no")
      << "\n";
  }
  if (!r.obata_route.empty())
    o << "Obata connection via " << r.obata_route << (r.verdict.obata_flat ? " (flat)" : "") << "\n";
  list("identities", r.identities);
  list("consistency", r.consistency);
  o << "holonomy\n";
  for (const auto& h : r.holonomy) {
    o << "  " << to_string(h.connection) << ": ";
    if (!h.available) {
      o << "n/a (" << h.unavailable_reason << ")\n";
      continue;
    }
    o << "dim " << h.dim << ", gl(n,H) " << detail::mark(h.in_gl) << ", sl(n,H) " << detail::mark(h.in_sl)
      << ", g-skew " << detail::mark(h.g_skew) << "\n";
  }
  o << "obstruction: " << r.verdict.obstruction << "\n";
  o << "vanishing theorem: " << r.verdict.vanishing << "\n";
  o << "verdict: " << r.verdict.sl_tier;
  if (r.verdict.hkt) o << (r.verdict.balanced ? ", balanced" : "") << (r.verdict.strong ? ", strong" : "");
  o << "\n";
  if (!r.verdict.caveat.empty()) o << "caveat: " << r.verdict.caveat << "\n";
  list("expected", r.expected);
  return o.str();
}

}  // namespace hktlab
