#include "mfv/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mfh/associate.hpp"
#include "mfh/descent.hpp"
#include "mfv/random.hpp"

namespace mfv {

using namespace mfh;

bool is_check_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ThetaUnstable:
    case ErrorKind::StrongDivisibilityFailure:
    case ErrorKind::HorizontalityViolation:
    case ErrorKind::GluingMismatch:
    case ErrorKind::NotPCurvatureZero:
    case ErrorKind::DegreeBoundExceeded:
    case ErrorKind::NotHorizontal:
    case ErrorKind::DescentFailure:
    case ErrorKind::NilpotencyTooDeep:
    case ErrorKind::NotAUnit:
      return true;
    default:
      return false;
  }
}

namespace {

// Runs `body`; a check-failure error becomes a failing check named `name`.
template <class F>
bool attempt(ValidationReport& rep, const std::string& name, F&& body) {
  try {
    body();
    return true;
  } catch (const Error& e) {
    if (!is_check_failure(e.kind())) throw;
    rep.add(name, false, std::string(to_string(e.kind())) + ": " + e.detail());
    return false;
  }
}

std::vector<std::string> split_images(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(item);
  return out;
}

Report make_report(const std::string& command, const Model& m) {
  return Report{command, m.doc().id, {}, 0.0};
}

std::string prefix_for(const Model& m, const std::string& id) {
  return m.doc().charts.size() > 1 ? id + "." : "";
}

// Validates the chart; on failure the checks are recorded and false returned.
bool chart_valid(Report& r, const DeRhamChart& chart, const std::string& prefix) {
  ValidationReport v = validate(chart);
  if (v.ok()) return true;
  r.checks.append(v, prefix);
  return false;
}

std::string theta_text(const HiggsChart& h) {
  std::ostringstream os;
  os << "levels [";
  for (std::size_t a = 0; a < h.levels().size(); ++a) os << (a ? ", " : "") << h.levels()[a];
  os << "]";
  for (int l = 0; l < h.dim(); ++l) os << "; theta_" << h.ring()->var(l) << " = " << h.theta(l).to_string();
  return os.str();
}

std::vector<Vec> basis_vectors(const RingPtr& R, int r) {
  std::vector<Vec> out;
  for (int a = 0; a < r; ++a) out.push_back(unit_vec(R, r, a));
  return out;
}

// Residual identity for all given sections and every level separately.
void residual_checks(ValidationReport& rep, const std::string& tag, const DeRhamChart& chart,
                     const FrobeniusLifting& F2, const std::vector<Vec>& sections) {
  std::string bad;
  for (const Vec& e : sections) {
    Vec lhs = residual_difference(chart, e, F2);
    Vec rhs = change_of_frobenius_residual(chart, e, F2);
    if (lhs != rhs && bad.empty())
      bad = "e = " + vec_to_string(e) + ": " + vec_to_string(lhs) + " != " + vec_to_string(rhs);
  }
  rep.add(tag + "residual_identity", bad.empty(),
          bad.empty() ? std::to_string(sections.size()) + " sections" : bad);

  bad.clear();
  RingPtr R1 = chart.residue_ring();
  for (int i = 0; i <= chart.weight(); ++i)
    for (const Vec& e : sections) {
      Vec ei = e;
      for (int a = 0; a < chart.rank(); ++a)
        if (chart.fil()[a] != i) ei[a] = RingElement(R1);
      Vec lhs = level_difference(chart, ei, i, F2);
      Vec rhs = level_residual(chart, ei, i, F2);
      if (lhs != rhs && bad.empty())
        bad = "level " + std::to_string(i) + ", e = " + vec_to_string(ei) + ": " +
              vec_to_string(lhs) + " != " + vec_to_string(rhs);
    }
  rep.add(tag + "level_residual_identity", bad.empty(), bad);
}

std::map<std::string, FrobeniusLifting> twist_liftings(const Model& m, const Options& o) {
  std::map<std::string, FrobeniusLifting> L = m.liftings_by_chart();
  if (o.liftings_file)
    for (const auto& [chart, images] : load_liftings_file(*o.liftings_file))
      L.insert_or_assign(chart, m.parse_lifting(chart, images));
  return L;
}

}  // namespace

// ---- commands ---------------------------------------------------------------

Report cmd_validate(const Model& m, const Options&) {
  Report r = make_report("validate", m);
  const GluedObject& g = m.glued();
  if (g.derham.size() + g.higgs.size() == 1 && g.overlaps.empty())
    r.checks = g.derham.empty() ? validate(g.higgs[0]) : validate(g.derham[0]);
  else
    r.checks = validate_glued(g);
  return r;
}

Report cmd_grade(const Model& m, const Options&) {
  Report r = make_report("grade", m);
  for (const DeRhamChart& c : m.glued().derham) {
    const std::string pre = prefix_for(m, c.id());
    if (!chart_valid(r, c, pre)) continue;
    HiggsChart h = gr_fil(c);
    r.checks.append(validate(h), pre + "gr.");
    r.checks.add(pre + "gr", true, theta_text(h));
  }
  for (const HiggsChart& h : m.glued().higgs) {
    r.checks.append(validate(h), prefix_for(m, h.id()));
    r.checks.add(prefix_for(m, h.id()) + "higgs", true, theta_text(h));
  }
  return r;
}

Report cmd_associate(const Model& m, const Options& o) {
  Report r = make_report("associate", m);
  const SubmoduleSpec& spec = m.submodule_spec(o.sub);
  if (spec.space != "E0") throw Error(ErrorKind::InvalidInput, "associate expects an E0 submodule");
  const DeRhamChart& base = m.derham(spec.chart);
  if (!chart_valid(r, base, "")) return r;
  DeRhamChart chart = o.lifting ? transport_frobenius(base, m.parse_lifting(spec.chart, split_images(*o.lifting)))
                                : base;
  Submodule G = m.submodule(o.sub);

  std::string w;
  bool stable = is_theta_stable(G, gr_fil(chart).thetas(), &w);
  r.checks.add("theta_stable", stable, stable ? G.to_string() : w);
  if (!stable) return r;

  std::optional<FrobeniusLifting> cmp;
  if (o.compare_lifting) cmp = m.parse_lifting(spec.chart, split_images(*o.compare_lifting));
  std::optional<AssociationCertificate> cert;
  if (!attempt(r.checks, "associated", [&] { cert = associate_subsheaf(chart, G, cmp, o.saturate); }))
    return r;
  r.checks.add("associated", true, "S = " + cert->S.to_string());
  attempt(r.checks, "horizontality", [&] {
    ValidationReport h = horizontality_certificate(chart, cert->S, G);
    r.checks.add("horizontality", true, std::to_string(h.checks.size()) + " identities and memberships");
  });

  if (cmp) {
    r.checks.add("lifting_independence", cert->lifting_independent,
                 "S = " + cert->S.to_string() + ", S' = " + cert->S_second->to_string());
    std::vector<Vec> sections = basis_vectors(chart.residue_ring(), chart.rank());
    for (const Vec& g : G.normal_form()) sections.push_back(g);
    residual_checks(r.checks, "", chart, *cmp, sections);
  }

  if (o.random_liftings > 0) {
    Rng rng(o.seed);
    std::string bad;
    ValidationReport sub;
    for (int k = 0; k < o.random_liftings; ++k) {
      FrobeniusLifting F2 = random_lifting(chart.ring(), rng);
      Submodule S2 = associated(transport_frobenius(chart, F2), G);
      if (o.saturate) S2 = saturate(S2);
      if (S2 != cert->S && bad.empty())
        bad = "F' = " + F2.to_strings()[0] + " gives " + S2.to_string();
      std::vector<Vec> sections;
      for (int s = 0; s < o.random_sections; ++s)
        sections.push_back(random_vec(chart.residue_ring(), chart.rank(), rng));
      residual_checks(sub, "", chart, F2, sections);
      attempt(sub, "random_horizontality",
              [&] { horizontality_certificate(transport_frobenius(chart, F2), S2, G); });
    }
    r.checks.add("random_lifting_independence", bad.empty(),
                 bad.empty() ? std::to_string(o.random_liftings) + " liftings, seed " + std::to_string(o.seed) : bad);
    r.checks.add("random_residual_identity", sub.ok(),
                 sub.ok() ? std::to_string(o.random_liftings * o.random_sections) + " sections" : sub.checks.back().witness);
  }

  for (const Overlap& ov : m.glued().overlaps) {
    if (ov.first != spec.chart || !m.glued().find_derham(ov.second)) continue;
    const std::string tag = "gluing(" + ov.first + "," + ov.second + ")";
    attempt(r.checks, tag, [&] {
      GlueReport gr = glue_associated(m.glued(), ov, G, m.submodule_on(o.sub, ov.second));
      r.checks.add(tag, true, "S = " + gr.S_overlap.to_string());
    });
  }
  return r;
}

Report cmd_pcurv(const Model& m, const Options& o) {
  Report r = make_report("pcurv", m);
  if (m.glued().derham.empty()) throw Error(ErrorKind::InvalidInput, "pcurv needs de Rham charts");
  Rng rng(o.seed);
  for (const DeRhamChart& c : m.glued().derham) {
    const std::string pre = prefix_for(m, c.id());
    if (!chart_valid(r, c, pre)) continue;
    std::vector<Matrix> A = c.connection_mod_p();
    PCurvature psi = p_curvature(A);
    std::ostringstream wit;
    for (int l = 0; l < c.dim(); ++l) wit << (l ? "; " : "") << "psi_" << c.ring()->var(l) << " = " << psi.psi[l].to_string();
    r.checks.add(pre + "psi", true, wit.str());

    std::string bad;
    RingPtr R1 = c.residue_ring();
    for (int trial = 0; trial < 5; ++trial) {
      RingElement f = random_element(R1, rng);
      Vec v = random_vec(R1, c.rank(), rng);
      for (int l = 0; l < c.dim(); ++l)
        if (apply_p_curvature(A, l, scale(f, v)) != scale(f, psi.psi[l] * v) && bad.empty())
          bad = "f = " + f.to_string() + ", v = " + vec_to_string(v);
    }
    r.checks.add(pre + "psi_linearity", bad.empty(), bad);
    if (c.dim() == 2) {
      bool comm = psi.psi[0] * psi.psi[1] == psi.psi[1] * psi.psi[0];
      r.checks.add(pre + "psi_commute", comm);
    }
    bool nil = true;
    for (const Matrix& P : psi.psi) {
      Matrix pw = Matrix::identity(R1, c.rank());
      for (int k = 0; k <= c.weight(); ++k) pw = pw * P;
      nil = nil && pw.is_zero();
    }
    r.checks.add(pre + "psi_nilpotent", nil, "psi^" + std::to_string(c.weight() + 1) + " = 0");
    if (c.dim() == 1) {
      ConjugateFiltration cf = conjugate_filtration(c);
      r.checks.append(conjugate_filtration_horizontality(c, cf), pre + "conjugate.");
    }
  }
  return r;
}

Report cmd_descend(const Model& m, const Options& o) {
  Report r = make_report("descend", m);
  const SubmoduleSpec& spec = m.submodule_spec(o.sub);
  const DeRhamChart& chart = m.derham(spec.chart);
  if (!chart_valid(r, chart, "")) return r;
  Submodule W = m.submodule(o.sub);
  if (spec.space == "E0") {
    if (!attempt(r.checks, "associated", [&] { W = associate_subsheaf(chart, W).S; })) return r;
    r.checks.add("associated", true, "W = " + W.to_string());
  }
  attempt(r.checks, "descent", [&] {
    Submodule G = cartier_katz_descent(chart, W, o.degree_bound);
    r.checks.add("descent", true, "G = " + G.to_string());
  });
  return r;
}

Report cmd_roundtrip(const Model& m, const Options& o) {
  Report r = make_report("roundtrip", m);
  const SubmoduleSpec& spec = m.submodule_spec(o.sub);
  if (spec.space != "E0") throw Error(ErrorKind::InvalidInput, "roundtrip expects an E0 submodule");
  const DeRhamChart& chart = m.derham(spec.chart);
  if (!chart_valid(r, chart, "")) return r;
  Submodule G = m.submodule(o.sub);
  std::string why;
  bool hodge = is_subsystem_of_hodge(G, chart.fil());
  if (!hodge) why = "not graded: " + G.to_string();
  else if (!is_theta_stable(G, gr_fil(chart).thetas(), &why)) hodge = false;
  r.checks.add("subsystem_of_hodge", hodge, hodge ? G.to_string() : why);
  if (!hodge) return r;
  attempt(r.checks, "roundtrip", [&] {
    RoundTrip rt = roundtrip_check(chart, G);
    r.checks.add("roundtrip", rt.equal, "S = " + rt.S.to_string() + ", back = " + rt.G_back.to_string());
    r.checks.add("theta_agreement", rt.theta_agrees);
    ConjugateFiltration cf = conjugate_filtration(chart);
    const int n = chart.weight();
    for (int i = 0; i <= n; ++i) {
      Submodule lhs = associated(chart, truncate_levels(G, chart.fil(), i));
      Submodule rhs = intersect(rt.S, cf.steps[n - i]);
      r.checks.add("remark_identity[" + std::to_string(i) + "]", lhs == rhs,
                   lhs.to_string() + (lhs == rhs ? " = " : " != ") + rhs.to_string());
    }
  });
  return r;
}

Report cmd_twist(const Model& m, const Options& o) {
  Report r = make_report("twist", m);
  if (!m.glued().higgs.empty()) {
    auto L = twist_liftings(m, o);
    TwistResult tw = inverse_cartier_twist(m.glued(), L);
    for (const TwistedChart& tc : tw.charts) {
      std::ostringstream os;
      for (std::size_t k = 0; k < tc.B.size(); ++k) os << (k ? "; " : "") << "B_" << k << " = " << tc.B[k].to_string();
      r.checks.add(tc.id + ".twisted_connection", true, os.str());
    }
    for (const TwistedOverlap& to : tw.overlaps)
      r.checks.add("overlap(" + to.first + "," + to.second + ").transition", true,
                   "h = " + to.h.to_string() + ", T = " + to.transition.to_string());
    r.checks.append(tw.report);
    return r;
  }
  // de Rham charts: twist gr(H) with the chart's lifting and compare with nabla mod p.
  for (const DeRhamChart& c : m.glued().derham) {
    const std::string pre = prefix_for(m, c.id());
    if (!chart_valid(r, c, pre)) continue;
    FrobeniusLifting F = c.lifting();
    if (o.liftings_file) {
      auto file = load_liftings_file(*o.liftings_file);
      if (auto it = file.find(c.id()); it != file.end()) F = m.parse_lifting(c.id(), it->second);
    }
    DeRhamChart cc = transport_frobenius(c, F);
    attempt(r.checks, pre + "phi_tilde_gauge", [&] {
      TwistedChart tc = twist_chart(gr_fil(cc), F);
      PhiTilde pt = phi_tilde(cc);
      std::vector<Matrix> A = cc.connection_mod_p();
      bool ok = true;
      std::string wit;
      for (int k = 0; k < cc.dim(); ++k) {
        Matrix gauge = pt.inverse * (pt.matrix.derivative(k) + A[k] * pt.matrix);
        if (gauge != tc.B[k]) {
          ok = false;
          wit = "B = " + tc.B[k].to_string() + " but Phi~^-1 nabla Phi~ = " + gauge.to_string();
        } else if (wit.empty()) {
          wit = "B = " + tc.B[k].to_string();
        }
      }
      r.checks.add(pre + "phi_tilde_gauge", ok, wit);
    });
  }
  return r;
}

Report cmd_degree(const Model& m, const Options& o) {
  Report r = make_report("degree", m);
  const GluedObject& g = m.glued();
  if (g.higgs.size() != 2 || g.overlaps.size() != 1)
    throw Error(ErrorKind::InvalidInput, "degree needs a two-chart Higgs cover");
  auto L = twist_liftings(m, o);
  for (const HiggsChart& h : g.higgs)
    if (!L.count(h.id())) L.emplace(h.id(), FrobeniusLifting::standard(h.ring()->with_precision(2)));
  attempt(r.checks, "determinant", [&] {
    DeterminantCheck dc = determinant_formula_check(g, L);
    const int p = g.overlaps[0].ring->prime();
    r.checks.add("det_transition_identity", dc.det_identity,
                 "det M = " + dc.det_M.to_string() + ", det T = " + dc.det_T.to_string());
    r.checks.add("exp_det_one", dc.exp_det_one, "det exp = " + dc.det_exp.to_string());
    std::ostringstream os;
    os << "deg det G = " << dc.degree_G << ", deg det C^-1 = " << dc.degree_twisted
       << ", slopes " << slope(dc.degree_G, dc.rank).to_string() << " and "
       << slope(dc.degree_twisted, dc.rank).to_string() << ", p = " << p;
    r.checks.add("degree_multiplied", dc.degree_multiplied, os.str());
  });
  return r;
}

Report run_command(const std::string& command, const Options& o) {
  auto start = std::chrono::steady_clock::now();
  Model m(load_fixture(o.file));
  Report r;
  if (command == "validate") r = cmd_validate(m, o);
  else if (command == "grade") r = cmd_grade(m, o);
  else if (command == "associate") r = cmd_associate(m, o);
  else if (command == "pcurv") r = cmd_pcurv(m, o);
  else if (command == "descend") r = cmd_descend(m, o);
  else if (command == "roundtrip") r = cmd_roundtrip(m, o);
  else if (command == "twist") r = cmd_twist(m, o);
  else if (command == "degree") r = cmd_degree(m, o);
  else throw Error(ErrorKind::InvalidInput, "unknown command " + command);
  r.fixture = o.file;
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"mfv: exact checks for Frobenius-crystal data and associated subsheaves"};
  app.require_subcommand(1);
  Options o;
  std::string json_path;
  bool no_timing = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "fixture file (mfv1)")->required();
    sub->add_option("--json", json_path, "write the machine report to PATH");
    sub->add_flag("--no-timing", no_timing, "omit wall_time_ms from the machine report");
    sub->add_option("--seed", o.seed, "seed for randomized checks");
  };
  add_common(app.add_subcommand("validate", "check the axioms of every chart and overlap"));
  add_common(app.add_subcommand("grade", "associated graded Higgs data"));
  auto* assoc = app.add_subcommand("associate", "associated de Rham subsheaf S(G)");
  add_common(assoc);
  assoc->add_option("--sub", o.sub, "submodule name")->required();
  assoc->add_option("--lifting", o.lifting, "use this Frobenius lifting (images separated by ';')");
  assoc->add_option("--compare-lifting", o.compare_lifting, "second lifting for the comparison");
  assoc->add_flag("--saturate", o.saturate, "saturate S");
  assoc->add_option("--random-liftings", o.random_liftings, "number of random liftings t^p + p g");
  assoc->add_option("--random-sections", o.random_sections, "random sections per lifting");
  add_common(app.add_subcommand("pcurv", "p-curvature and conjugate filtration"));
  auto* desc = app.add_subcommand("descend", "Cartier-Katz descent of a submodule");
  add_common(desc);
  desc->add_option("--sub", o.sub, "submodule name")->required();
  desc->add_option("--degree-bound", o.degree_bound, "flat-section degree bound");
  auto* rt = app.add_subcommand("roundtrip", "associate then descend");
  add_common(rt);
  rt->add_option("--sub", o.sub, "submodule name")->required();
  auto* tw = app.add_subcommand("twist", "inverse Cartier by exponential twisting");
  add_common(tw);
  tw->add_option("--liftings", o.liftings_file, "liftings file (mfv1-liftings)");
  auto* deg = app.add_subcommand("degree", "determinant and degree of the twist");
  add_common(deg);
  deg->add_option("--liftings", o.liftings_file, "liftings file (mfv1-liftings)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Report report;
  int code = 0;
  try {
    report = run_command(command, o);
    code = report.exit_code();
    std::cout << report.to_text();
  } catch (const Error& e) {
    std::cerr << "mfv: " << e.what() << "\n";
    report = Report{command, o.file, {}, 0.0};
    report.checks.checks.push_back({"input", Status::Error, e.what()});
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "mfv: " << e.what() << "\n";
    report = Report{command, o.file, {}, 0.0};
    report.checks.checks.push_back({"input", Status::Error, e.what()});
    code = 2;
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "mfv: cannot write " << json_path << "\n";
      return 2;
    }
    out << report.to_json(!no_timing);
  }
  return code;
}

}  // namespace mfv
