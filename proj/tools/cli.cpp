#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "hpencil/epi.hpp"
#include "hpencil/errors.hpp"
#include "hpencil/herglotz.hpp"
#include "hpencil/pencil.hpp"
#include "hpencil/presets.hpp"
#include "hpencil/problem_io.hpp"
#include "hpencil/prufer.hpp"
#include "hpencil/wkb.hpp"

namespace hpencil::cli {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

class OutputTarget {
public:
  OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
  std::ofstream file_;
  std::ostream& fallback_;
};

std::map<std::string, std::string> parse_fields(const std::vector<std::string>& raw) {
  std::map<std::string, std::string> out;
  for (const auto& entry : raw) {
    auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--field expects name=expression, got '" + entry + "'");
    out[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return out;
}

double field_constant(const std::map<std::string, std::string>& fields,
                      const std::string& name, double fallback) {
  auto it = fields.find(name);
  if (it == fields.end()) return fallback;
  return coeffs::parse_expr(it->second).eval(0.0);
}

struct ProblemSource {
  std::string preset;
  std::string problem_file;
  std::vector<std::string> fields;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "preset name (see `preset list`)");
    cmd->add_option("--problem", problem_file, "problem file (JSON)");
    cmd->add_option("--field", fields,
                    "preset field as name=expression (e.g. gprime=1+x)");
  }

  pencil::PencilProblem resolve() const {
    if (preset.empty() == problem_file.empty())
      throw ValidationError("exactly one of --preset or --problem is required");
    if (!problem_file.empty()) return pencil::load_problem_file(problem_file);

    auto f = parse_fields(fields);
    if (preset == "example39") return presets::example39();
    if (preset == "capasso") {
      auto it = f.find("gprime");
      if (it == f.end())
        throw ValidationError("preset capasso requires --field gprime=<expression>");
      presets::CapassoParams cp;
      cp.gprime = coeffs::CoefficientField::from_source(it->second, 0, 1);
      cp.a11 = field_constant(f, "a11", 1.0);
      cp.a12 = field_constant(f, "a12", 1.0);
      cp.a22 = field_constant(f, "a22", 1.0);
      cp.d = field_constant(f, "d", 1.0);
      return cp.pencil();
    }
    if (preset == "morphogen") {
      auto it = f.find("abar");
      if (it == f.end())
        throw ValidationError("preset morphogen requires --field abar=<expression>");
      presets::MorphogenParams mp;
      mp.abar = coeffs::CoefficientField::from_source(it->second, 0, 1);
      mp.f0 = field_constant(f, "f0", 1.0);
      mp.g0 = field_constant(f, "g0", 1.0);
      mp.h0 = field_constant(f, "h0", 1.0);
      return mp.pencil();
    }
    if (preset == "rabies-fig3")
      return epi::build_stability_pencil(presets::rabies_fig3());
    if (preset == "rabies-vaccine")
      return epi::build_stability_pencil(presets::rabies_vaccine());
    throw ValidationError("unknown preset '" + preset + "'");
  }
};

json problem_echo(const pencil::PencilProblem& p) {
  return json::parse(pencil::problem_to_json(p));
}

// ---------------------------------------------------------------- check ---

void report_line(std::ostream& os, const std::string& what, bool ok,
                 const std::string& detail = "") {
  os << "check: " << what << ": " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) os << " (" << detail << ")";
  os << "\n";
}

bool check_pencil_structure(const pencil::PencilProblem& p, std::ostream& os) {
  bool all = true;
  p.validate();
  const int samples = 512;
  auto scan_positive = [&](const coeffs::CoefficientField& field, bool half_points)
      -> std::optional<double> {
    for (int i = 0; i <= samples; ++i) {
      double x = half_points ? p.a + (p.b - p.a) * (i + 0.5) / (samples + 1)
                             : p.a + (p.b - p.a) * i / samples;
      if (!(field.eval(x) > 0)) return x;
    }
    return std::nullopt;
  };

  auto bad_d = scan_positive(p.D, true);
  report_line(os, "D(x) > 0 at half-interval samples", !bad_d,
              bad_d ? "fails near x = " + fmt12(*bad_d) : "");
  all &= !bad_d;
  auto bad_w0 = scan_positive(p.W0, false);
  report_line(os, "W0(x) > 0 at samples", !bad_w0,
              bad_w0 ? "fails near x = " + fmt12(*bad_w0) : "");
  all &= !bad_w0;
  for (int k = 0; k < p.pole_count(); ++k) {
    auto bad_w = scan_positive(p.poles[static_cast<std::size_t>(k)].weight, false);
    report_line(os, "W_" + std::to_string(k + 1) + "(x) > 0 at samples", !bad_w,
                bad_w ? "fails near x = " + fmt12(*bad_w) : "");
    all &= !bad_w;
  }
  report_line(os, "pole locations strictly increasing", true);

  // pointwise sampling oracle on g(x, .) at a few stations
  bool oracle_ok = true;
  for (int s = 1; s <= 5 && oracle_ok; ++s) {
    double x = p.a + (p.b - p.a) * s / 6.0;
    double spread = 1.0;
    if (p.pole_count() > 0)
      spread = std::max(1.0, p.poles.back().alpha - p.poles.front().alpha);
    double lo = (p.pole_count() ? p.poles.front().alpha : 0.0) - 10 * spread;
    double hi = (p.pole_count() ? p.poles.back().alpha : 0.0) + 10 * spread;
    oracle_ok &= herglotz::is_herglotz_sampled(
        [&](std::complex<double> z) {
          std::complex<double> acc = z * p.W0.eval(x) - p.V.eval(x);
          for (const auto& pole : p.poles) acc -= pole.weight.eval(x) / (z - pole.alpha);
          return acc;
        },
        lo, hi, 200);
  }
  report_line(os, "sampling oracle: g(x, .) maps upper half-plane up", oracle_ok);
  all &= oracle_ok;
  return all;
}

void print_quadratic_report(const herglotz::QuadraticCheck& c, std::ostream& os) {
  report_line(os, "denominator roots real and distinct", c.real_distinct_roots,
              c.root_lo ? "roots " + fmt12(*c.root_lo) + ", " + fmt12(*c.root_hi) : c.note);
  report_line(os, "partial-fraction residues positive", c.residues_positive,
              c.residue_lo ? "residues " + fmt12(*c.residue_lo) + ", " + fmt12(*c.residue_hi)
                           : "");
  report_line(os, "compact polynomial inequalities", c.compact_inequalities);
  os << "check: compact vs root/residue agreement: "
     << (c.checks_agree ? "agree" : "DISAGREE") << "\n";
  os << "verdict: "
     << (c.verdict == herglotz::Verdict::Herglotz
             ? "herglotz"
             : c.verdict == herglotz::Verdict::NotHerglotz ? "not-herglotz"
                                                           : "indeterminate")
     << "\n";
}

int cmd_check(const ProblemSource& src, const std::vector<double>& jacobian2,
              const std::vector<double>& jacobian3, const std::vector<double>& quad,
              std::ostream& out) {
  int selections = (!src.preset.empty() || !src.problem_file.empty()) +
                   !jacobian2.empty() + !jacobian3.empty() + !quad.empty();
  if (selections != 1)
    throw ValidationError(
        "check-herglotz needs exactly one of --preset/--problem, --jacobian2, "
        "--jacobian3 or --quad");

  if (!jacobian2.empty()) {
    if (jacobian2.size() != 4)
      throw ValidationError("--jacobian2 expects f_u,f_v,g_u,g_v");
    herglotz::TwoSpeciesJacobian j{jacobian2[0], jacobian2[1], jacobian2[2], jacobian2[3]};
    bool ok = herglotz::check_two_species(j);
    report_line(out, "f_v * g_u >= 0", ok, "f_v*g_u = " + fmt12(j.f_v * j.g_u));
    out << "verdict: " << (ok ? "herglotz" : "not-herglotz") << "\n";
    return 0;
  }
  if (!jacobian3.empty()) {
    if (jacobian3.size() != 9)
      throw ValidationError("--jacobian3 expects f_u,f_v,f_w,g_u,g_v,g_w,h_u,h_v,h_w");
    herglotz::ThreeSpeciesJacobian j{jacobian3[0], jacobian3[1], jacobian3[2],
                                     jacobian3[3], jacobian3[4], jacobian3[5],
                                     jacobian3[6], jacobian3[7], jacobian3[8]};
    auto c = herglotz::check_three_species(j);
    report_line(out, "first determinant expression > 0", c.first_expression > 0,
                fmt12(c.first_expression));
    report_line(out, "second determinant expression > 0", c.second_expression > 0,
                fmt12(c.second_expression));
    out << "check: agreement with root/residue reduction: "
        << (c.agrees_with_reduction ? "agree" : "DISAGREE") << "\n";
    out << "verdict: " << (c.determinant_conditions ? "herglotz" : "not-herglotz")
        << "\n";
    return 0;
  }
  if (!quad.empty()) {
    if (quad.size() != 4) throw ValidationError("--quad expects alpha,beta,gamma,delta");
    herglotz::QuadraticForm q{quad[0], quad[1], quad[2], quad[3]};
    print_quadratic_report(herglotz::check_quadratic_reduction(q), out);
    return 0;
  }

  pencil::PencilProblem p = src.resolve();
  bool ok = check_pencil_structure(p, out);
  if (src.preset == "capasso") {
    auto fields = parse_fields(src.fields);
    presets::CapassoParams cp;
    cp.gprime = coeffs::CoefficientField::from_source(fields.at("gprime"), 0, 1);
    cp.a12 = field_constant(fields, "a12", 1.0);
    bool sign_ok = true;
    for (int i = 0; i <= 64; ++i)
      sign_ok &= herglotz::check_two_species(cp.jacobian_at(i / 64.0));
    report_line(out, "two-species sign condition a12 * g'(x) >= 0", sign_ok);
    ok &= sign_ok;
  }
  if (src.preset == "morphogen") {
    auto fields = parse_fields(src.fields);
    presets::MorphogenParams mp;
    mp.abar = coeffs::CoefficientField::from_source(fields.at("abar"), 0, 1);
    mp.f0 = field_constant(fields, "f0", 1.0);
    mp.g0 = field_constant(fields, "g0", 1.0);
    mp.h0 = field_constant(fields, "h0", 1.0);
    bool res_ok = true, oracle_ok = true;
    for (int i = 0; i <= 16; ++i) {
      auto q = mp.q_plus_lambda_at(i / 16.0);
      res_ok &= q.poles.at(0).residue > 0;
      if (i % 4 == 0) oracle_ok &= herglotz::is_herglotz_sampled(q, 200);
    }
    report_line(out, "pointwise residue f0 + h0*abar(x) > 0", res_ok);
    report_line(out, "sampling oracle on lambda + q(x, lambda)", oracle_ok);
    ok &= res_ok && oracle_ok;
  }
  out << "verdict: " << (ok ? "herglotz-pencil" : "not-herglotz-pencil") << "\n";
  return 0;
}

// ----------------------------------------------------------------- eigs ---

json pair_to_json(const pencil::EigenPair& ep) {
  json j;
  j["j"] = ep.interval_index;
  j["k"] = ep.oscillation_count;
  j["lambda"] = ep.lambda;
  j["imag_magnitude"] = ep.imag_magnitude;
  j["residual"] = ep.residual;
  j["near_pole"] = ep.near_pole;
  j["u"] = std::vector<double>(ep.u.data(), ep.u.data() + ep.u.size());
  json vs = json::array();
  for (const auto& v : ep.v)
    vs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["v"] = vs;
  return j;
}

int cmd_eigs(const ProblemSource& src, int nx, double reality_tol,
             const std::string& format, const std::string& out_path,
             const std::string& efunc_out, int efunc_j, int efunc_k,
             std::ostream& out) {
  pencil::PencilProblem p = src.resolve();
  pencil::DiscreteGrid grid(p, nx);
  auto spec = pencil::solve_spectrum(p, grid, reality_tol);

  OutputTarget target(out_path, out);
  if (format == "csv") {
    target.stream() << "j,k,lambda,imag_magnitude,residual,near_pole\n";
    for (const auto& ep : spec.pairs)
      target.stream() << ep.interval_index << ',' << ep.oscillation_count << ','
                      << fmt12(ep.lambda) << ',' << fmt12(ep.imag_magnitude) << ','
                      << fmt12(ep.residual) << ',' << csv_bool(ep.near_pole) << "\n";
  } else if (format == "json") {
    json root;
    root["meta"] = {{"nx", nx},
                    {"reality_tol", reality_tol},
                    {"timestamp", iso_timestamp()},
                    {"discarded_count", spec.discarded.size()}};
    root["problem"] = problem_echo(p);
    root["pairs"] = json::array();
    for (const auto& ep : spec.pairs) root["pairs"].push_back(pair_to_json(ep));
    target.stream() << root.dump(1) << "\n";
  } else {
    throw ValidationError("unknown format '" + format + "' (csv or json)");
  }

  if (!efunc_out.empty()) {
    const pencil::EigenPair* chosen = nullptr;
    for (const auto& ep : spec.pairs)
      if (ep.interval_index == efunc_j && ep.oscillation_count == efunc_k) {
        chosen = &ep;
        break;
      }
    if (!chosen)
      throw ValidationError("no eigenpair with j = " + std::to_string(efunc_j) +
                            ", k = " + std::to_string(efunc_k));
    std::ofstream ef(efunc_out);
    if (!ef) throw ValidationError("cannot open '" + efunc_out + "'");
    ef << "x,u";
    for (int i = 0; i < p.pole_count(); ++i) ef << ",v" << (i + 1);
    ef << "\n";
    for (int i = 0; i < grid.interior_count(); ++i) {
      ef << fmt12(grid.x(i + 1)) << ',' << fmt12(chosen->u(i));
      for (const auto& v : chosen->v) ef << ',' << fmt12(v(i));
      ef << "\n";
    }
  }
  return 0;
}

int cmd_verify(const std::string& in_path, std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw ValidationError("cannot open '" + in_path + "'");
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded()) throw ValidationError("verify: input is not valid JSON");
  if (!root.contains("problem") || !root.contains("pairs") || !root.contains("meta"))
    throw ValidationError("verify: not an eigs JSON file");

  pencil::PencilProblem p = pencil::problem_from_json(root["problem"].dump());
  int nx = root["meta"]["nx"].get<int>();
  pencil::DiscreteGrid grid(p, nx);
  auto ub = pencil::assemble_u_block(p, grid);

  double worst_pde = 0, worst_aux_drift = 0;
  for (const auto& jp : root["pairs"]) {
    double lambda = jp["lambda"].get<double>();
    auto uvec = jp["u"].get<std::vector<double>>();
    Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(uvec.data(),
                                                    static_cast<Eigen::Index>(uvec.size()));
    if (jp["near_pole"].get<bool>()) continue;
    worst_pde = std::max(worst_pde, pencil::residual(p, grid, lambda, u) /
                                        std::max(1.0, std::abs(lambda)));

    double aux = 0;
    auto vsets = jp["v"].get<std::vector<std::vector<double>>>();
    for (std::size_t k = 0; k < vsets.size(); ++k) {
      Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(
          vsets[k].data(), static_cast<Eigen::Index>(vsets[k].size()));
      Eigen::VectorXd expect = ub.w[k].cwiseProduct(u) / (lambda - ub.alphas[k]);
      aux = std::max(aux, (v - expect).cwiseAbs().maxCoeff());
    }
    worst_aux_drift = std::max(worst_aux_drift,
                               std::abs(aux - jp["residual"].get<double>()));
  }
  out << "verify: max scaled PDE residual = " << fmt12(worst_pde) << "\n";
  out << "verify: max auxiliary-residual reproduction drift = "
      << fmt12(worst_aux_drift) << "\n";
  bool ok = worst_aux_drift <= 1e-12;
  out << "verify: " << (ok ? "PASS" : "FAIL") << "\n";
  if (!ok) throw NumericalError("verification drift exceeds 1e-12");
  return 0;
}

// ---------------------------------------------------------------- shoot ---

int cmd_shoot(const ProblemSource& src, int j, int k, double tol,
              const std::string& out_path, std::ostream& out) {
  pencil::PencilProblem p = src.resolve();
  auto r = prufer::shoot_eigenvalue(p, j, k, tol);
  OutputTarget target(out_path, out);
  target.stream() << "j,k,lambda,theta_b,crossings,iterations\n"
                  << j << ',' << k << ',' << fmt12(r.lambda) << ','
                  << fmt12(r.theta_b) << ',' << r.crossings << ',' << r.iterations
                  << "\n";
  return 0;
}

// ------------------------------------------------------------------ wkb ---

int cmd_wkb(const ProblemSource& src, int j, int k, double tol,
            const std::string& out_path, std::ostream& out) {
  pencil::PencilProblem p = src.resolve();
  int m = wkb::quantization_index(p, k);
  double lambda = wkb::wkb_eigenvalue(p, j, m, tol);
  OutputTarget target(out_path, out);
  target.stream() << "j,k,quantization_integer,lambda\n"
                  << j << ',' << k << ',' << m << ',' << fmt12(lambda) << "\n";
  return 0;
}

int cmd_wkb_accum(const ProblemSource& src, int pole, const std::string& out_path,
                  std::ostream& out) {
  pencil::PencilProblem p = src.resolve();
  double c = wkb::accumulation_constant(p, pole);
  OutputTarget target(out_path, out);
  target.stream() << "pole,alpha,constant\n"
                  << pole << ',' << fmt12(p.poles.at(static_cast<std::size_t>(pole - 1)).alpha)
                  << ',' << fmt12(c) << "\n";
  return 0;
}

// --------------------------------------------------------------- rabies ---

epi::RabiesParams rabies_params(const std::string& preset) {
  if (preset == "rabies-fig3" || preset.empty()) return presets::rabies_fig3();
  if (preset == "rabies-vaccine") return presets::rabies_vaccine();
  throw ValidationError("rabies subcommands accept --preset rabies-fig3 or rabies-vaccine");
}

int cmd_rabies_scalar(const std::string& preset, int nx, bool growth,
                      const std::string& out_path, std::ostream& out) {
  epi::RabiesParams rp = rabies_params(preset);
  OutputTarget target(out_path, out);
  if (growth) {
    target.stream() << "quantity,value\nlambda0," << fmt12(epi::principal_growth_rate(rp, nx))
                    << "\n";
  } else {
    target.stream() << "quantity,value\nr0," << fmt12(epi::reproduction_number(rp, nx))
                    << "\n";
  }
  return 0;
}

int cmd_vaccine_sweep(const std::string& preset, double c0, double a0_step,
                      double L_step, int nx, const std::string& format,
                      const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
  epi::RabiesParams rp = rabies_params(preset.empty() ? "rabies-vaccine" : preset);
  std::vector<double> a0s, Ls;
  for (int i = 0;; ++i) {
    double a0 = i * a0_step;
    if (a0 > 0.5 + 1e-12) break;
    a0s.push_back(a0);
  }
  for (int i = 1;; ++i) {
    double L = i * L_step;
    if (L > 1 + 1e-12) break;
    Ls.push_back(L);
  }
  auto sr = epi::vaccine_sweep(rp, c0, a0s, Ls, nx);

  OutputTarget target(out_path, out);
  if (format == "csv") {
    target.stream() << "c0,a0,L,lambda0,stable\n";
    for (const auto& pt : sr.points)
      target.stream() << fmt12(c0) << ',' << fmt12(pt.a0) << ',' << fmt12(pt.L) << ','
                      << fmt12(pt.lambda0) << ',' << csv_bool(pt.stable) << "\n";
  } else if (format == "json") {
    json root;
    root["meta"] = {{"nx", nx},
                    {"c0", c0},
                    {"a0_step", a0_step},
                    {"L_step", L_step},
                    {"timestamp", iso_timestamp()},
                    {"params", {{"a", rp.a},
                                {"b", rp.b},
                                {"sigma", rp.sigma},
                                {"K", rp.K},
                                {"alpha", *rp.alpha.source()},
                                {"beta", *rp.beta.source()},
                                {"D", *rp.D.source()}}}};
    root["minimizer"] = {{"a0", sr.minimizer.a0},
                         {"L", sr.minimizer.L},
                         {"lambda0", sr.minimizer.lambda0}};
    root["boundary"] = json::array();
    for (auto& [ba, bl] : sr.boundary) root["boundary"].push_back({ba, bl});
    root["points"] = json::array();
    for (const auto& pt : sr.points)
      root["points"].push_back({{"c0", c0},
                                {"a0", pt.a0},
                                {"L", pt.L},
                                {"lambda0", pt.lambda0},
                                {"stable", pt.stable}});
    target.stream() << root.dump(1) << "\n";
  } else {
    throw ValidationError("unknown format '" + format + "'");
  }
  err << "minimizer: a0 = " << fmt12(sr.minimizer.a0) << ", L = " << fmt12(sr.minimizer.L)
      << ", lambda0 = " << fmt12(sr.minimizer.lambda0) << "\n";
  return 0;
}

int cmd_heterogeneity(const std::string& kind, int nx, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
  epi::HeterogeneityKind hk;
  std::vector<double> values;
  if (kind == "beta_c1" || kind == "alpha_c2") {
    hk = kind == "beta_c1" ? epi::HeterogeneityKind::BetaC1
                           : epi::HeterogeneityKind::AlphaC2;
    for (int i = -9; i <= 9; ++i) values.push_back(0.1 * i);
  } else if (kind == "diffusion_D0") {
    hk = epi::HeterogeneityKind::DiffusionD0;
    for (int i = 1; i <= 30; ++i) values.push_back(0.01 * i);
  } else if (kind == "diffusion_c3") {
    hk = epi::HeterogeneityKind::DiffusionC3;
    for (int i = 0; i <= 9; ++i) values.push_back(0.1 * i);
  } else {
    throw ValidationError(
        "unknown --kind (beta_c1 | alpha_c2 | diffusion_D0 | diffusion_c3)");
  }
  auto res = epi::heterogeneity_experiment(hk, values, nx);
  OutputTarget target(out_path, out);
  target.stream() << "kind,value,r0\n";
  for (const auto& row : res.rows)
    target.stream() << kind << ',' << fmt12(row.value) << ',' << fmt12(row.r0) << "\n";
  err << "property: " << res.property << ": " << (res.property_holds ? "holds" : "VIOLATED")
      << "\n";
  err << "note: baseline diffusion outside the D-panels is the vaccine-study value 0.1371\n";
  return res.property_holds ? 0 : 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rational Herglotz pencil toolkit"};
  app.require_subcommand(1);

  // preset list
  auto* preset_cmd = app.add_subcommand("preset", "preset utilities");
  bool preset_list = false;
  auto* list_cmd = preset_cmd->add_subcommand("list", "list preset names");
  list_cmd->callback([&preset_list] { preset_list = true; });

  // check-herglotz
  auto* check_cmd = app.add_subcommand("check-herglotz",
                                       "verify Herglotz sign conditions");
  ProblemSource check_src;
  check_src.add_options(check_cmd);
  std::vector<double> jac2, jac3, quad;
  check_cmd->add_option("--jacobian2", jac2, "f_u,f_v,g_u,g_v")->delimiter(',');
  check_cmd->add_option("--jacobian3", jac3, "nine partials f_u..h_w")->delimiter(',');
  check_cmd->add_option("--quad", quad, "alpha,beta,gamma,delta")->delimiter(',');

  // eigs
  auto* eigs_cmd = app.add_subcommand("eigs", "full spectrum via the linearization");
  ProblemSource eigs_src;
  eigs_src.add_options(eigs_cmd);
  int nx = 100;
  double reality_tol = 1e-8;
  std::string format = "csv", out_path, efunc_out;
  int efunc_j = 0, efunc_k = 0;
  eigs_cmd->add_option("--nx", nx, "grid resolution");
  eigs_cmd->add_option("--reality-tol", reality_tol, "reality tolerance");
  eigs_cmd->add_option("--format", format, "csv | json");
  eigs_cmd->add_option("--out", out_path, "output path (default stdout)");
  eigs_cmd->add_option("--efunc-out", efunc_out, "eigenfunction dump CSV path");
  eigs_cmd->add_option("--efunc-j", efunc_j, "interval index of the dump");
  eigs_cmd->add_option("--efunc-k", efunc_k, "oscillation index of the dump");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "re-check an eigs JSON file");
  std::string verify_in;
  verify_cmd->add_option("--in", verify_in, "eigs --format json output")->required();

  // shoot
  auto* shoot_cmd = app.add_subcommand("shoot", "single eigenvalue via the angle method");
  ProblemSource shoot_src;
  shoot_src.add_options(shoot_cmd);
  int shoot_j = 0, shoot_k = 0;
  double shoot_tol = 1e-9;
  std::string shoot_out;
  shoot_cmd->add_option("--j", shoot_j, "interval index")->required();
  shoot_cmd->add_option("--k", shoot_k, "oscillation index")->required();
  shoot_cmd->add_option("--tol", shoot_tol, "relative tolerance on lambda");
  shoot_cmd->add_option("--out", shoot_out, "output path");

  // wkb
  auto* wkb_cmd = app.add_subcommand("wkb", "quantization-condition eigenvalue");
  ProblemSource wkb_src;
  wkb_src.add_options(wkb_cmd);
  int wkb_j = 0, wkb_k = 1;
  double wkb_tol = 1e-10;
  std::string wkb_out;
  wkb_cmd->add_option("--j", wkb_j, "interval index")->required();
  wkb_cmd->add_option("--k", wkb_k, "oscillation index (mapped to the phase integer)")
      ->required();
  wkb_cmd->add_option("--tol", wkb_tol, "relative tolerance on lambda");
  wkb_cmd->add_option("--out", wkb_out, "output path");

  auto* accum_cmd = app.add_subcommand("wkb-accum", "pole accumulation constant");
  ProblemSource accum_src;
  accum_src.add_options(accum_cmd);
  int accum_pole = 1;
  std::string accum_out;
  accum_cmd->add_option("--pole", accum_pole, "1-based pole index")->required();
  accum_cmd->add_option("--out", accum_out, "output path");

  // rabies
  auto* rabies_cmd = app.add_subcommand("rabies", "epidemiology experiments");
  rabies_cmd->require_subcommand(1);
  std::string rabies_preset, rabies_out, rabies_format = "csv", het_kind;
  int rabies_nx = 200;
  double sweep_c0 = 0.44, sweep_a0_step = 0.01, sweep_L_step = 0.01;

  auto* r0_cmd = rabies_cmd->add_subcommand("r0", "reproduction number");
  auto* growth_cmd = rabies_cmd->add_subcommand("growth", "principal growth rate");
  auto* sweep_cmd = rabies_cmd->add_subcommand("vaccine-sweep",
                                               "lambda0 over (a0, L) at fixed c0");
  auto* het_cmd = rabies_cmd->add_subcommand("heterogeneity",
                                             "R0 under spatial heterogeneity");
  for (auto* c : {r0_cmd, growth_cmd, sweep_cmd, het_cmd}) {
    c->add_option("--preset", rabies_preset, "rabies-fig3 | rabies-vaccine");
    c->add_option("--nx", rabies_nx, "grid resolution");
    c->add_option("--out", rabies_out, "output path");
  }
  sweep_cmd->add_option("--c0", sweep_c0, "total vaccine quantity")->required();
  sweep_cmd->add_option("--a0-step", sweep_a0_step, "a0 grid step");
  sweep_cmd->add_option("--L-step", sweep_L_step, "L grid step");
  sweep_cmd->add_option("--format", rabies_format, "csv | json");
  het_cmd->add_option("--kind", het_kind,
                      "beta_c1 | alpha_c2 | diffusion_D0 | diffusion_c3")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (preset_list) {
      for (const auto& name : presets::preset_names()) out << name << "\n";
      return 0;
    }
    if (check_cmd->parsed()) return cmd_check(check_src, jac2, jac3, quad, out);
    if (eigs_cmd->parsed())
      return cmd_eigs(eigs_src, nx, reality_tol, format, out_path, efunc_out, efunc_j,
                      efunc_k, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_in, out);
    if (shoot_cmd->parsed())
      return cmd_shoot(shoot_src, shoot_j, shoot_k, shoot_tol, shoot_out, out);
    if (wkb_cmd->parsed()) return cmd_wkb(wkb_src, wkb_j, wkb_k, wkb_tol, wkb_out, out);
    if (accum_cmd->parsed()) return cmd_wkb_accum(accum_src, accum_pole, accum_out, out);
    if (rabies_cmd->parsed()) {
      if (r0_cmd->parsed())
        return cmd_rabies_scalar(rabies_preset, rabies_nx, false, rabies_out, out);
      if (growth_cmd->parsed())
        return cmd_rabies_scalar(rabies_preset, rabies_nx, true, rabies_out, out);
      if (sweep_cmd->parsed())
        return cmd_vaccine_sweep(rabies_preset, sweep_c0, sweep_a0_step, sweep_L_step,
                                 rabies_nx, rabies_format, rabies_out, out, err);
      if (het_cmd->parsed())
        return cmd_heterogeneity(het_kind, rabies_nx, rabies_out, out, err);
    }
    err << "usage error: no subcommand selected\n";
    return 1;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hpencil::cli
