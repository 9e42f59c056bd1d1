#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <ldspec/suites.hpp>

using namespace ldspec;
using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v && std::isfinite(*v) ? json(*v) : json(nullptr); }

json verdict_json(const MembershipVerdict& v) {
  json sums = json::array();
  for (const auto& p : v.partial_sums) sums.push_back({{"N", p.n}, {"S", detail::number_or_null(p.s)}});
  return {{"status", to_string(v.status)},
          {"norm", opt(v.norm_estimate)},
          {"slope", opt(v.divergence_exponent)},
          {"tail_slope", opt(v.tail_exponent)},
          {"diagnostic", v.diagnostic},
          {"partial_sums", sums}};
}

json norm_json(const NormResult& r) {
  json j = verdict_json(r.verdict);
  j["status"] = to_string(r.status);
  j["value"] = detail::number_or_null(r.value);
  j["method"] = r.method;
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Input, "'" + path + "': malformed JSON: " + e.what());
  }
}

/// {"atoms": [{"lambda": l, "weight": w}, ...]} or [[l, w], ...].
std::shared_ptr<const SpectralMeasure> measure_from_json(const json& j) {
  const json& list = j.is_object() ? j.at("atoms") : j;
  require(list.is_array() && !list.empty(), ErrorKind::Input, "measure: expected a non-empty atom list");
  std::vector<Atom> atoms;
  for (const auto& a : list) {
    if (a.is_array())
      atoms.push_back({a.at(0).get<double>(), a.size() > 1 ? a.at(1).get<double>() : 1.0});
    else
      atoms.push_back({a.at("lambda").get<double>(), a.value("weight", 1.0)});
  }
  return std::make_shared<const SpectralMeasure>(SpectralMeasure::discrete(std::move(atoms)));
}

/// {"coeffs": [...], "finite": bool} or a bare list; entries are numbers or [re, im].
CoefficientVector vector_from_json(const json& j, std::shared_ptr<const SpectralMeasure> mu) {
  const json& list = j.is_object() ? j.at("coeffs") : j;
  require(list.is_array(), ErrorKind::Input, "vector: expected a coefficient list");
  std::vector<cplx> c;
  for (const auto& v : list) {
    if (v.is_array())
      c.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    else
      c.emplace_back(v.get<double>(), 0.0);
  }
  CoefficientVector x = CoefficientVector::on(std::move(mu), std::move(c));
  if (j.is_object()) x.finitely_supported = j.value("finite", false);
  return x;
}

void emit(const Report& rep, const std::string& output) {
  const std::string text = serialize(rep);
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  require(out.good(), ErrorKind::Input, "cannot write '" + output + "'");
  out << text;
}

int exit_code(ErrorKind k) { return k == ErrorKind::Capability ? 3 : 2; }

void check_s(double s) { require(s >= 0 && std::isfinite(s), ErrorKind::Usage, "s must satisfy s >= 0"); }
void check_theta(double th) { require(th > 0 && th < 1, ErrorKind::Usage, "theta must lie in (0, 1)"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-power norms, domain membership and left-definite checks for model operators"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("-o,--output", output, "write the JSON report to this file instead of stdout");

  // norm
  auto* norm = app.add_subcommand("norm", "H^s norm of a catalog function on the line or an interval");
  std::string fn = "gauss";
  double s = 1.0;
  std::string method = "fourier";
  double a = 0, b = 1;
  norm->add_option("--function", fn, "catalog spec, e.g. gauss(mu=0,sigma=1)");
  norm->add_option("--s", s, "smoothness index (>= 0)");
  norm->add_option("--method", method, "fourier | interval | moment")->check(CLI::IsMember({"fourier", "interval", "moment"}));
  norm->add_option("--a", a, "interval left end (method interval)");
  norm->add_option("--b", b, "interval right end (method interval)");

  // membership
  auto* memb = app.add_subcommand("membership", "spectral domain membership with the boundary-rule prediction");
  std::string op = "periodic";
  double phi = 0, alpha = pi, gamma = 0.5;
  int N = 4096;
  std::string samples;
  memb->add_option("--operator", op, "periodic | halfline | bessel")
      ->check(CLI::IsMember({"periodic", "halfline", "bessel"}));
  memb->add_option("--phi", phi, "boundary phase in [0, 2 pi)");
  memb->add_option("--alpha", alpha, "half-line boundary angle in [pi/2, pi]");
  memb->add_option("--gamma", gamma, "Bessel order, gamma > 0");
  memb->add_option("--s", s, "fractional index (>= 0)");
  memb->add_option("--function", fn, "catalog spec");
  memb->add_option("--N", N, "coefficient truncation for the periodic operator");
  memb->add_option("--samples", samples, "half-line: write transform samples as CSV (lambda,re,im,density)");

  // mehler
  auto* mehler = app.add_subcommand("mehler", "heat kernel of the harmonic oscillator");
  mehler->alias("kernel");
  double t = 0.5, x = 0, y = 0, c = 1;
  std::string side = "oscillator";
  mehler->add_option("--t", t, "time, t > 0");
  mehler->add_option("--x", x);
  mehler->add_option("--y", y);
  mehler->add_option("--side", side, "oscillator | hermite")->check(CLI::IsMember({"oscillator", "hermite"}));
  mehler->add_option("--c", c, "shift of the Hermite operator (hermite side)");

  // interp
  auto* interp = app.add_subcommand("interp", "interpolation-space characterizations of a coefficient vector");
  double theta = 0.5;
  int k = 1;
  std::string measure_file, vector_file, imethod = "all";
  interp->add_option("--theta", theta, "interpolation parameter in (0, 1)");
  interp->add_option("--k", k, "integer power of the operator (>= 1)");
  interp->add_option("--measure", measure_file, "JSON atom list")->required();
  interp->add_option("--vector", vector_file, "JSON coefficient list")->required();
  interp->add_option("--method", imethod, "kfunc | semigroup | resolvent | all")
      ->check(CLI::IsMember({"kfunc", "semigroup", "resolvent", "all"}));

  // form-check
  auto* form = app.add_subcommand("form-check", "P^4k + X^4k <= a_k (P^2 + X^2)^2k + b_k on random states");
  int trials = 100;
  std::uint64_t seed = 42;
  form->add_option("--k", k, "1, 2 or 3");
  form->add_option("--trials", trials, "number of random 10-term combinations");
  form->add_option("--seed", seed, "splitmix64 seed");

  // hermite-norm
  auto* hnorm = app.add_subcommand("hermite-norm", "oscillator fractional norm from Hermite coefficients");
  int M = 4096;
  hnorm->add_option("--s", s, "index of (2m+1)^s weights (>= 0)");
  hnorm->add_option("--function", fn, "catalog spec");
  hnorm->add_option("--M", M, "highest Hermite degree");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all", csv;
  bool timing = false;
  verify->add_option("--suite", suite, "core | sobolev | periodic | halfline | hermite | interp | all");
  verify->add_option("--seed", seed, "splitmix64 seed for randomized checks");
  verify->add_option("--csv", csv, "also write the checks as CSV");
  verify->add_flag("--timing", timing, "record wall-clock time per check (breaks byte-identical output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Report rep;
    if (*norm) {
      check_s(s);
      const TestFunction f = parse_function(fn);
      rep.command = "norm";
      rep.inputs = {{"function", json::parse(f.spec())}, {"s", s}, {"method", method}};
      NormResult r;
      if (method == "fourier") {
        r = hs_norm_fourier(f, s);
      } else if (method == "moment") {
        r = weighted_moment_norm(f, s);
      } else {
        require(b > a, ErrorKind::Usage, "interval must satisfy a < b");
        rep.inputs["interval"] = {a, b};
        r = s == 0 ? finite_norm(std::pow(l2_norm_interval(f, {a, b}), 2), "interval") : hs_norm_interval(f, {a, b}, s);
      }
      rep.result = norm_json(r);
    } else if (*memb) {
      check_s(s);
      const TestFunction f = parse_function(fn);
      rep.command = "membership";
      rep.inputs = {{"operator", op}, {"s", s}, {"function", json::parse(f.spec())}};
      if (op == "periodic") {
        require(phi >= 0 && phi < 2 * pi, ErrorKind::Usage, "phi must lie in [0, 2 pi)");
        rep.inputs["phi"] = phi;
        rep.inputs["N"] = N;
        const MembershipVerdict v = fractional_membership(f, phi, s, N);
        rep.result = verdict_json(v);
        if (s > 0) {
          const CharacterizationResult p = higher_order_membership(f, phi, s);
          rep.result["prediction"] = {{"status", to_string(as_status(p.prediction))}, {"reason", p.reason}};
        }
      } else {
        HalflineFamily family = HalflineOperator(pi);
        if (op == "halfline") {
          require(alpha >= pi / 2 - 1e-15 && alpha <= pi + 1e-15, ErrorKind::Usage, "alpha must lie in [pi/2, pi]");
          family = HalflineOperator(alpha);
          rep.inputs["alpha"] = alpha;
        } else {
          require(gamma > 0, ErrorKind::Usage, "gamma must satisfy gamma > 0");
          family = BesselOperator(gamma);
          rep.inputs["gamma"] = gamma;
        }
        const HalflineTransform T(family, f);
        rep.result = norm_json(fractional_norm(T, s));
        if (s > 0 && s <= 1) {
          const HalflinePrediction p = boundary_predicate(family, f, s);
          rep.result["prediction"] = {{"status", to_string(as_status(p.prediction))}, {"reason", p.reason}};
        }
        if (!samples.empty()) {
          std::ofstream out(samples);
          require(out.good(), ErrorKind::Input, "cannot write '" + samples + "'");
          transform(family, f, geometric_grid(1e-2, 1e2)).write_csv(out);
        }
      }
    } else if (*mehler) {
      require(t > 0 && std::isfinite(t), ErrorKind::Usage, "t must satisfy t > 0");
      const MehlerSide ms = side == "hermite" ? MehlerSide::Hermite : MehlerSide::Oscillator;
      rep.command = "mehler";
      rep.inputs = {{"t", t}, {"x", x}, {"y", y}, {"side", side}, {"c", c}};
      const double v = mehler_kernel(t, x, y, ms, c);
      rep.result = {{"kernel", v}};
      if (t >= 0.1) {
        // the Hermite-side kernel is the oscillator one conjugated by e^{-x^2/2}, shifted by c - 1
        double sum = studies::mehler_eigen_sum(t, x, y);
        if (ms == MehlerSide::Hermite) sum *= std::exp(0.5 * (x * x + y * y) - t * (c - 1));
        rep.result["eigen_sum"] = sum;
        rep.add(check_abs("mehler/eigen-sum", v, sum, 1e-8 * std::max(1.0, std::abs(sum)),
                          "Mehler kernel equals its eigenfunction expansion"));
      }
    } else if (*interp) {
      check_theta(theta);
      require(k >= 1, ErrorKind::Usage, "k must satisfy k >= 1");
      auto mu = measure_from_json(read_json_file(measure_file));
      const CoefficientVector v = vector_from_json(read_json_file(vector_file), mu);
      const InterpolationPair pair(mu, k, theta);
      rep.command = "interp";
      rep.inputs = {{"theta", theta}, {"k", k}, {"measure", measure_file}, {"vector", vector_file}, {"method", imethod}};
      json res = json::object();
      std::vector<Status> verdicts;
      auto put = [&](const char* name, const SemigroupIntegralResult& r, double constant) {
        res[name] = {{"status", to_string(r.status)}, {"value", detail::number_or_null(r.value)}, {"constant", constant}};
        verdicts.push_back(r.status);
      };
      if (imethod == "kfunc" || imethod == "all")
        put("kfunc", interpolation_integral(v, pair), interpolation_constant(theta));
      if (imethod == "semigroup" || imethod == "all")
        put("semigroup", semigroup_characterization(v, pair), semigroup_constant(k, theta));
      if (imethod == "resolvent" || imethod == "all")
        put("resolvent", resolvent_characterization(v, pair), resolvent_constant(k, theta));
      const MembershipVerdict direct = membership(v, 2 * k * theta);
      res["direct"] = verdict_json(direct);
      bool agree = true;
      for (Status st : verdicts) agree = agree && st == direct.status;
      res["agree"] = agree;
      rep.result = res;
      rep.add(check_true("interp/finiteness-agreement", agree,
                         "characterizations agree with the fractional-power domain"));
    } else if (*form) {
      require(k >= 1 && k <= 3, ErrorKind::Usage, "k must lie in [1, 3]");
      require(trials >= 1, ErrorKind::Usage, "trials must be >= 1");
      rep.command = "form-check";
      rep.inputs = {{"k", k}, {"trials", trials}, {"seed", seed}};
      const studies::FormTrials r = studies::form_trials(seed, k, trials);
      const auto [ak, bk] = form_constants(k);
      rep.result = {{"a_k", ak}, {"b_k", bk}, {"violations", r.violations}, {"min_slack_ratio", r.min_slack_ratio}};
      rep.add(check_count("form-check/k" + std::to_string(k), trials - r.violations, trials,
                          "P^4k + X^4k <= a_k (P^2 + X^2)^2k + b_k"));
    } else if (*hnorm) {
      check_s(s);
      require(M >= 16 && M <= 16384, ErrorKind::Usage, "M must lie in [16, 16384]");
      const TestFunction f = parse_function(fn);
      rep.command = "hermite-norm";
      rep.inputs = {{"function", json::parse(f.spec())}, {"s", s}, {"M", M}};
      const OscillatorState st = oscillator_coefficients(f, M);
      rep.result = norm_json(oscillator_fractional_norm(st, s));
      rep.result["parseval_defect"] = detail::number_or_null(st.parseval_defect);
      if (s > 0) {
        // the oscillator domain at index s is H^s intersected with dom |X|^s
        try {
          const SobolevSideResult side_r = sobolev_side_membership(f, s / 2);
          rep.result["sobolev_side"] = {{"status", to_string(side_r.status)}, {"reason", side_r.reason}};
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Capability) throw;
          rep.result["sobolev_side"] = {{"status", "unavailable"}, {"reason", e.what()}};
        }
      }
    } else if (*verify) {
      rep = verify_suite(suite, seed, timing);
      if (!csv.empty()) {
        std::ofstream out(csv);
        require(out.good(), ErrorKind::Input, "cannot write '" + csv + "'");
        write_csv(out, rep);
      }
    }
    emit(rep, output);
    return rep.all_pass() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "ldspec: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ldspec: input error: " << e.what() << "\n";
    return 2;
  }
}
