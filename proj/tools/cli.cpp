#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "jspec/doubly.hpp"
#include "jspec/jacobi.hpp"
#include "jspec/meixner.hpp"
#include "jspec/qhyper.hpp"
#include "jspec/spectral.hpp"

namespace jspec::cli {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kOptionKeys = {
    "N",        "K",          "quad_nodes", "atom_cap", "eps_schedule", "threshold",
    "l_min",    "l_max",      "k_min",      "k_max",    "q_list",       "p",
    "window",   "samples",    "x_min",      "x_max",    "density_samples"};

const std::set<std::string> kModels = {"chebyshev", "stieltjes_wigert", "custom",
                                       "meixner",   "meixner_pollaczek", "qhyper"};

std::string s17(double v) { return fixed17(v); }

// Typed access to params and options with defaults.
class Fields {
 public:
  Fields(const json& obj, std::string what) : obj_(obj), what_(std::move(what)) {}

  double number(const std::string& key, double def) const {
    used_.insert(key);
    if (!obj_.contains(key)) return def;
    const json& v = obj_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      double out = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
      if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return out;
    }
    throw InvalidInput(what_ + " '" + key + "' must be a number");
  }

  long integer(const std::string& key, long def) const {
    const double v = number(key, static_cast<double>(def));
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw InvalidInput(what_ + " '" + key + "' must be an integer");
    }
    return static_cast<long>(v);
  }

  std::vector<double> list(const std::string& key, std::vector<double> def) const {
    used_.insert(key);
    if (!obj_.contains(key)) return def;
    const json& v = obj_.at(key);
    if (!v.is_array()) throw InvalidInput(what_ + " '" + key + "' must be a list of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw InvalidInput(what_ + " '" + key + "' must be a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) throw InvalidInput("unknown " + what_ + " '" + it.key() + "'");
    }
  }

 private:
  const json& obj_;
  std::string what_;
  mutable std::set<std::string> used_;
};

// Model construction -------------------------------------------------------

MeixnerParams meixner_params(const Fields& f) {
  MeixnerParams p;
  p.a = f.number("a", 2.0);
  p.lambda = Complex(f.number("lambda", -0.5), f.number("lambda_im", 0.0));
  p.eps = f.number("eps", 0.25);
  p.validate();
  return p;
}

PollaczekParams pollaczek_params(const Fields& f) {
  PollaczekParams p;
  p.psi = f.number("psi", kPi / 2.0);
  p.lambda = Complex(f.number("lambda", -0.5), f.number("lambda_im", 0.0));
  p.eps = f.number("eps", 0.25);
  p.validate();
  return p;
}

QParams q_params(const Fields& f) {
  QParams p;
  p.q = f.number("q", 0.5);
  p.r = f.number("r", -0.01);
  p.c = f.number("c", 0.1);
  p.d = f.number("d", 0.8);
  p.validate();
  return p;
}

JacobiCoefficients half_line_model(const RunConfig& cfg, const Fields& f) {
  if (cfg.model == "chebyshev") return chebyshev_coefficients();
  if (cfg.model == "stieltjes_wigert") {
    const double q = f.number("q", 0.5);
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("stieltjes_wigert needs 0 < q < 1");
    return stieltjes_wigert_coefficients(q);
  }
  // custom: a and b lists, continued by their last entries
  const std::vector<double> a = f.list("a", {});
  const std::vector<double> b = f.list("b", {});
  if (a.empty() || b.empty()) throw InvalidInput("custom model needs non-empty 'a' and 'b' lists");
  for (double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("custom model needs a_k > 0");
  }
  auto at = [](std::vector<double> v) {
    return [v](long k) { return v[std::min<std::size_t>(static_cast<std::size_t>(k), v.size() - 1)]; };
  };
  return JacobiCoefficients(at(a), at(b), IndexSet::HalfLine, "custom");
}

bool is_half_line(const std::string& model) {
  return model == "chebyshev" || model == "stieltjes_wigert" || model == "custom";
}

JacobiCoefficients full_line_model(const RunConfig& cfg, const Fields& f) {
  if (cfg.model == "meixner") return coefficients(meixner_params(f));
  if (cfg.model == "meixner_pollaczek") return pollaczek_coefficients(pollaczek_params(f));
  return q_coefficients(q_params(f));
}

json header_doc(const RunConfig& cfg) {
  json d;
  d["schema_version"] = 1;
  d["command"] = cfg.command;
  d["model"] = cfg.model;
  json params = json::object();
  for (auto it = cfg.params.begin(); it != cfg.params.end(); ++it) {
    params[it.key()] = it.value().is_number() ? json(s17(it.value().get<double>())) : it.value();
  }
  d["params"] = params;
  return d;
}

json criteria_json(const ClassificationReport& r) {
  json out = json::array();
  for (const Criterion& c : r.criteria) {
    json e;
    e["name"] = c.name;
    e["value"] = s17(c.value);
    e["fired"] = c.fired;
    e["conclusion"] = c.conclusion;
    out.push_back(e);
  }
  return out;
}

json report_json(const ClassificationReport& r) {
  json e;
  e["verdict"] = to_string(r.verdict);
  e["criteria"] = criteria_json(r);
  json ps = json::array();
  const std::size_t n = r.partial_sums.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 32);
  for (std::size_t i = 0; i < n; i += stride) ps.push_back({{"K", i}, {"sum", s17(r.partial_sums[i])}});
  if (n > 0 && (n - 1) % stride != 0) ps.push_back({{"K", n - 1}, {"sum", s17(r.partial_sums[n - 1])}});
  e["partial_sums"] = ps;
  e["note"] = r.note;
  return e;
}

std::string index_pair(std::optional<int> v) {
  if (!v) return "undecided";
  return "(" + std::to_string(*v) + "," + std::to_string(*v) + ")";
}

ClassificationOptions classification_options(const Fields& o) {
  ClassificationOptions c;
  c.poly_terms = o.integer("K", c.poly_terms);
  c.scan_terms = o.integer("N", c.scan_terms);
  if (c.poly_terms < 60 || c.scan_terms < 16) {
    throw InvalidInput("classify needs K >= 60 and N >= 16");
  }
  return c;
}

// Commands -----------------------------------------------------------------

CommandResult cmd_classify(const RunConfig& cfg, const Fields& f, const Fields& o) {
  CommandResult res;
  res.document = header_doc(cfg);
  const ClassificationOptions copts = classification_options(o);
  res.header = {"side", "criterion", "value", "fired", "conclusion"};
  auto rows = [&res](const std::string& side, const ClassificationReport& r) {
    for (const Criterion& c : r.criteria) {
      res.table.push_back({side, c.name, shortest(c.value), c.fired ? "true" : "false", c.conclusion});
    }
    res.table.push_back({side, "verdict", "", "", to_string(r.verdict)});
  };
  if (is_half_line(cfg.model)) {
    const JacobiCoefficients j = half_line_model(cfg, f);
    f.reject_unknown();
    o.reject_unknown();
    const ClassificationReport r = classify(j, copts);
    res.document["verdict"] = to_string(r.verdict);
    res.document["report"] = report_json(r);
    rows("half_line", r);
    res.exit_code = r.verdict == Verdict::Undecided ? kUndecided : kOk;
    return res;
  }
  const JacobiCoefficients L = full_line_model(cfg, f);
  f.reject_unknown();
  o.reject_unknown();
  const DeficiencyReport d = deficiency(L, copts);
  res.document["plus"] = index_pair(d.plus);
  res.document["minus"] = index_pair(d.minus);
  res.document["total"] = index_pair(d.total);
  res.document["plus_evidence"] = report_json(d.plus_evidence);
  res.document["minus_evidence"] = report_json(d.minus_evidence);
  rows("plus", d.plus_evidence);
  rows("minus", d.minus_evidence);
  res.table.push_back({"total", "deficiency", "", "", index_pair(d.total)});
  res.exit_code = d.total ? kOk : kUndecided;
  return res;
}

CommandResult cmd_spectrum(const RunConfig& cfg, const Fields& f, const Fields& o) {
  CommandResult res;
  res.document = header_doc(cfg);
  res.header = {"kind", "x", "mass", "density"};
  json atoms = json::array();
  json density = json::array();
  json meta;

  auto add_atom = [&](double x, double m, json extra) {
    json a;
    a["location"] = s17(x);
    a["mass"] = s17(m);
    for (auto it = extra.begin(); it != extra.end(); ++it) a[it.key()] = it.value();
    atoms.push_back(a);
    res.table.push_back({"atom", shortest(x), shortest(m), ""});
  };
  auto add_density = [&](double x, double d) {
    density.push_back({{"x", s17(x)}, {"density", s17(d)}});
    res.table.push_back({"density", shortest(x), "", shortest(d)});
  };

  if (is_half_line(cfg.model)) {
    const JacobiCoefficients j = half_line_model(cfg, f);
    const long n = o.integer("N", 50);
    const long ds = o.integer("density_samples", 0);
    const std::vector<double> eps = o.list("eps_schedule", {1e-2, 1e-3, 1e-4});
    const double lo = o.number("x_min", -0.9), hi = o.number("x_max", 0.9);
    f.reject_unknown();
    o.reject_unknown();
    if (n < 0) throw InvalidInput("N must be non-negative");
    const SpectralMeasure m = measure_from_truncation(j, n);
    for (const Atom& a : m.atoms) add_atom(a.location, a.mass, json::object());
    meta["truncation"] = n;
    meta["total_mass"] = s17(m.total_mass_estimate);
    if (ds > 0) {
      const StieltjesTransform w(j);
      if (w.classification().verdict != Verdict::Determinate) {
        throw InvalidInput("density samples need a determinate operator");
      }
      const PerronResult pr = perron_invert([&w](Complex z) { return w(z); }, lo, hi,
                                            static_cast<int>(ds), eps);
      for (const DensitySample& s : pr.samples) add_density(s.x, s.density);
      json e = json::array();
      for (double v : eps) e.push_back(s17(v));
      meta["eps_schedule"] = e;
    }
  } else if (cfg.model == "meixner") {
    const MeixnerParams p = meixner_params(f);
    const long lmin = o.integer("l_min", -2), lmax = o.integer("l_max", 2);
    f.reject_unknown();
    o.reject_unknown();
    if (lmin > lmax) throw InvalidInput("l_min must not exceed l_max");
    if (!(p.a > 1.0)) throw InvalidInput("meixner spectrum needs a > 1");
    for (long l = lmin; l <= lmax; ++l) {
      const SpectrumPoint sp = spectrum(p, l);
      const double u0 = std::norm(solution_u(p, Sign::Minus, sp.x, 0));
      add_atom(sp.x, u0 / sp.norm_sq, {{"l", l}, {"norm_sq", s17(sp.norm_sq)}});
    }
    meta["note"] = "mass is the weight of e_0 at each eigenvalue";
  } else if (cfg.model == "meixner_pollaczek") {
    const PollaczekParams p = pollaczek_params(f);
    const long ns = o.integer("samples", 41);
    const double lo = o.number("x_min", -10.0), hi = o.number("x_max", 10.0);
    f.reject_unknown();
    o.reject_unknown();
    if (ns < 2 || !(hi > lo)) throw InvalidInput("need samples >= 2 and x_max > x_min");
    res.header = {"kind", "x", "weight_u", "weight_v"};
    for (long i = 0; i < ns; ++i) {
      const double x = lo + (hi - lo) * i / (ns - 1);
      const PollaczekDensity d = pollaczek_density(p, x);
      density.push_back({{"x", s17(x)}, {"weight_u", s17(d.weight_u)}, {"weight_v", s17(d.weight_v)}});
      res.table.push_back({"density", shortest(x), shortest(d.weight_u), shortest(d.weight_v)});
    }
  } else {
    const QParams p = q_params(f);
    QSpectralOptions so;
    so.atom_cap = o.integer("atom_cap", so.atom_cap);
    so.quad_nodes = static_cast<int>(o.integer("quad_nodes", so.quad_nodes));
    const long ns = o.integer("samples", 41);
    f.reject_unknown();
    o.reject_unknown();
    if (ns < 1 || so.atom_cap < 1 || so.quad_nodes < 1) {
      throw InvalidInput("samples, atom_cap and quad_nodes must be positive");
    }
    if (!p.theorem_regime()) throw InvalidInput("qhyper spectrum needs |d| < 1 and |c/d| < 1");
    const QSpectralResult r = spectral_measure(p, so);
    for (std::size_t i = 0; i < r.measure.atoms.size(); ++i) {
      add_atom(r.measure.atoms[i].location, r.measure.atoms[i].mass,
               {{"p", r.atoms[i].p}, {"residue", s17(r.atoms[i].mass)}});
    }
    for (long i = 0; i < ns; ++i) {
      const double x = -1.0 + 2.0 * (i + 0.5) / ns;
      add_density(x, r.measure.continuous->density(x));
    }
    meta["continuous_mass"] = s17(r.continuous_mass);
    meta["total_mass"] = s17(r.measure.total_mass_estimate);
    meta["quad_nodes"] = so.quad_nodes;
    meta["atom_cap"] = so.atom_cap;
    meta["extension_dependent"] = r.extension_dependent;
    meta["note"] = r.measure.note;
  }
  res.document["atoms"] = atoms;
  res.document["density"] = density;
  res.document["metadata"] = meta;
  return res;
}

struct Gram {
  std::vector<long> idx;
  std::vector<std::vector<double>> value, target, defect;
};

json gram_json(const Gram& g, const std::string& label, CommandResult& res) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.idx.size(); ++i) {
    for (std::size_t j = 0; j < g.idx.size(); ++j) {
      rows.push_back({{"i", g.idx[i]},
                      {"j", g.idx[j]},
                      {"value", s17(g.value[i][j])},
                      {"target", s17(g.target[i][j])},
                      {"defect", s17(g.defect[i][j])}});
      res.table.push_back({label, std::to_string(g.idx[i]), std::to_string(g.idx[j]),
                           shortest(g.value[i][j]), shortest(g.target[i][j]),
                           shortest(g.defect[i][j])});
    }
  }
  return rows;
}

double max_defect(const Gram& g) {
  double m = 0.0;
  for (const auto& row : g.defect) {
    for (double d : row) m = std::max(m, d);
  }
  return m;
}

Gram make_gram(long lo, long hi) {
  Gram g;
  for (long i = lo; i <= hi; ++i) g.idx.push_back(i);
  const std::size_t n = g.idx.size();
  g.value.assign(n, std::vector<double>(n));
  g.target = g.value;
  g.defect = g.value;
  return g;
}

CommandResult cmd_verify(const RunConfig& cfg, const Fields& f, const Fields& o) {
  CommandResult res;
  res.document = header_doc(cfg);
  res.header = {"relation", "i", "j", "value", "target", "defect"};
  json meta;
  std::vector<std::pair<std::string, Gram>> grams;
  double threshold = 0.0;

  if (cfg.model == "meixner") {
    const MeixnerParams p = meixner_params(f);
    OrthogonalityOptions oo;
    oo.k_max = o.integer("K", oo.k_max);
    const long lmin = o.integer("l_min", -2), lmax = o.integer("l_max", 2);
    threshold = o.number("threshold", 1e-6);
    f.reject_unknown();
    o.reject_unknown();
    if (!(p.a > 1.0)) throw InvalidInput("meixner verify needs a > 1");
    if (lmin > lmax || oo.k_max < 1) throw InvalidInput("need l_min <= l_max and K >= 1");
    Gram prim = make_gram(lmin, lmax), dual = make_gram(lmin, lmax);
    const std::size_t n = prim.idx.size();
    std::vector<double> np(n), nd(n);
    for (std::size_t i = 0; i < n; ++i) {
      np[i] = verify_orthogonality(p, prim.idx[i], prim.idx[i], oo).target;
      nd[i] = verify_dual_orthogonality(p, prim.idx[i], prim.idx[i], oo).target;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const OrthogonalityResult a = verify_orthogonality(p, prim.idx[i], prim.idx[j], oo);
        const OrthogonalityResult b = verify_dual_orthogonality(p, prim.idx[i], prim.idx[j], oo);
        prim.value[i][j] = a.value;
        prim.target[i][j] = a.target;
        prim.defect[i][j] = std::abs(a.value - a.target) / std::sqrt(np[i] * np[j]);
        dual.value[i][j] = b.value;
        dual.target[i][j] = b.target;
        dual.defect[i][j] = std::abs(b.value - b.target) / std::sqrt(nd[i] * nd[j]);
      }
    }
    grams = {{"primary", prim}, {"dual", dual}};
    meta["k_max"] = oo.k_max;
    meta["tail_tol"] = s17(oo.tail_tol);
  } else if (cfg.model == "qhyper") {
    const QParams p = q_params(f);
    const long nodes = o.integer("quad_nodes", 400), cap = o.integer("atom_cap", 40);
    const long kmin = o.integer("k_min", -3), kmax = o.integer("k_max", 3);
    threshold = o.number("threshold", 1e-5);
    f.reject_unknown();
    o.reject_unknown();
    if (!p.theorem_regime()) throw InvalidInput("qhyper verify needs |d| < 1 and |c/d| < 1");
    if (kmin > kmax || nodes < 1 || cap < 1) {
      throw InvalidInput("need k_min <= k_max and positive quad_nodes, atom_cap");
    }
    Gram g = make_gram(kmin, kmax);
    const std::size_t n = g.idx.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const long k = g.idx[i], l = g.idx[j];
        const QOrthogonalityResult r =
            verify_q_orthogonality(p, k, l, static_cast<int>(nodes), cap);
        g.value[i][j] = r.value;
        g.target[i][j] = r.target;
        g.defect[i][j] = std::abs(r.value * weight_w(p, k) * weight_w(p, l) - (k == l ? 1.0 : 0.0));
      }
    }
    json ratios = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      ratios.push_back({{"k", g.idx[i]}, {"ratio", s17(g.value[i][i] / g.target[i][i])}});
    }
    res.document["diagonal_ratios"] = ratios;
    grams = {{"orthogonality", g}};
    meta["quad_nodes"] = nodes;
    meta["atom_cap"] = cap;
  } else if (is_half_line(cfg.model)) {
    const JacobiCoefficients j = half_line_model(cfg, f);
    const long n = o.integer("N", 40), kmax = o.integer("k_max", 10);
    threshold = o.number("threshold", 1e-10);
    f.reject_unknown();
    o.reject_unknown();
    if (n < 1 || kmax < 0 || kmax > n) throw InvalidInput("need N >= 1 and 0 <= k_max <= N");
    // Gram matrix of p_0..p_kmax under the Gaussian quadrature of J_N.
    const SpectralMeasure m = measure_from_truncation(j, n);
    Gram g = make_gram(0, kmax);
    std::vector<PolynomialSequence> ps;
    for (const Atom& a : m.atoms) ps.push_back(eval_p(j, a.location, kmax));
    for (long a = 0; a <= kmax; ++a) {
      for (long b = 0; b <= kmax; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.atoms.size(); ++i) {
          s += m.atoms[i].mass * (ps[i].value(a) * ps[i].value(b)).real();
        }
        g.value[a][b] = s;
        g.target[a][b] = a == b ? 1.0 : 0.0;
        g.defect[a][b] = std::abs(s - g.target[a][b]);
      }
    }
    grams = {{"quadrature", g}};
    meta["truncation"] = n;
  } else {
    const PollaczekParams p = pollaczek_params(f);
    const long kmin = o.integer("k_min", 0), kmax = o.integer("k_max", 1);
    const long ns = o.integer("samples", 6000);
    const double xmax = o.number("x_max", 60.0);
    threshold = o.number("threshold", 1e-8);
    f.reject_unknown();
    o.reject_unknown();
    if (kmin > kmax || ns < 2 || !(xmax > 0.0)) throw InvalidInput("bad verify options");
    Gram g = make_gram(kmin, kmax);
    const std::size_t n = g.idx.size();
    const double h = 2.0 * xmax / ns;
    for (long s = 0; s < ns; ++s) {
      const double x = -xmax + h * (s + 0.5);
      const PollaczekDensity d = pollaczek_density(p, x);
      std::vector<Complex> u(n), v(n);
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = pollaczek_u(p, Sign::Minus, x, g.idx[i]);
        v[i] = pollaczek_v(p, Sign::Minus, x, g.idx[i]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          g.value[i][j] +=
              h * (d.weight_u * u[i] * std::conj(u[j]) + d.weight_v * v[i] * std::conj(v[j])).real();
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        g.target[i][j] = i == j ? 1.0 : 0.0;
        g.defect[i][j] = std::abs(g.value[i][j] - g.target[i][j]);
      }
    }
    grams = {{"density", g}};
    meta["samples"] = ns;
    meta["x_max"] = s17(xmax);
  }

  double worst = 0.0;
  json rel = json::object();
  for (auto& [name, g] : grams) {
    rel[name] = gram_json(g, name, res);
    worst = std::max(worst, max_defect(g));
  }
  res.document["relations"] = rel;
  res.document["max_defect"] = s17(worst);
  res.document["threshold"] = s17(threshold);
  res.document["metadata"] = meta;
  res.document["passed"] = worst < threshold;
  res.exit_code = worst < threshold ? kOk : kVerificationFailed;
  return res;
}

CommandResult cmd_limit(const RunConfig& cfg, const Fields& f, const Fields& o) {
  if (cfg.model != "qhyper" && cfg.model != "meixner") {
    throw InvalidInput("limit applies to the qhyper -> meixner transition");
  }
  CommandResult res;
  res.document = header_doc(cfg);
  // s from a = (s + 1/s)/2 unless s is given.
  const double a = f.number("a", 2.0);
  double s = f.number("s", std::nan(""));
  if (std::isnan(s)) {
    if (!(a > 1.0)) throw InvalidInput("limit needs s + 1/s > 2 (a > 1); other regimes are not implemented");
    s = a + std::sqrt(a * a - 1.0);
  }
  const double eps = f.number("eps", 0.25);
  const double lambda = f.number("lambda", -0.5);
  const long p = o.integer("p", 1);
  const std::vector<double> qs = o.list("q_list", {0.9, 0.95, 0.99});
  const long window = o.integer("window", 200);
  f.reject_unknown();
  o.reject_unknown();
  if (!(s > 1.0)) throw InvalidInput("limit needs s + 1/s > 2; other regimes are not implemented");
  if (qs.empty() || window < 1) throw InvalidInput("need a non-empty q_list and window >= 1");
  for (double q : qs) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("q_list entries must lie in (0, 1)");
  }
  const std::vector<LimitPoint> pts = limit_scan(s, eps, lambda, qs, p, window);
  res.header = {"q", "eigenvalue", "predicted_limit", "exact_point", "gap"};
  json rows = json::array();
  for (const LimitPoint& lp : pts) {
    rows.push_back({{"q", s17(lp.q)},
                    {"eigenvalue", s17(lp.eigenvalue)},
                    {"predicted_limit", s17(lp.predicted_limit)},
                    {"exact_point", s17(lp.exact_point)},
                    {"gap", s17(lp.gap)}});
    res.table.push_back({shortest(lp.q), shortest(lp.eigenvalue), shortest(lp.predicted_limit),
                         shortest(lp.exact_point), shortest(lp.gap)});
  }
  bool monotone = true;
  const std::size_t n = pts.size();
  for (std::size_t i = n >= 3 ? n - 2 : 1; i < n; ++i) monotone = monotone && pts[i].gap < pts[i - 1].gap;
  res.document["rows"] = rows;
  res.document["s"] = s17(s);
  res.document["window"] = window;
  res.document["gap_decreasing"] = monotone;
  res.document["note"] =
      "formal limit: the substitution makes r > 0, outside the r < 0 regime of the measure";
  res.exit_code = monotone ? kOk : kVerificationFailed;
  return res;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

}  // namespace

std::string fixed17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidInput("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  if (key == "model") {
    cfg.model = value;
  } else if (key == "format") {
    cfg.format = value;
  } else if (key == "output_path") {
    cfg.out = value;
  } else if (kOptionKeys.count(key)) {
    cfg.options[key] = parse_value(value);
  } else {
    cfg.params[key] = parse_value(value);
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  RunConfig cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    if (k == "model") {
      if (!it.value().is_string()) throw InvalidInput("'model' must be a string");
      cfg.model = it.value().get<std::string>();
    } else if (k == "params" || k == "options") {
      if (!it.value().is_object()) throw InvalidInput("'" + k + "' must be an object");
      (k == "params" ? cfg.params : cfg.options) = it.value();
    } else if (k == "format") {
      cfg.format = it.value().get<std::string>();
    } else if (k == "schema_version") {
      if (it.value() != 1) throw InvalidInput("unsupported schema_version");
    } else {
      throw InvalidInput("unknown config field '" + k + "'");
    }
  }
  for (const char* key : {"format", "output_path"}) {
    if (!cfg.options.contains(key)) continue;
    if (!cfg.options[key].is_string()) throw InvalidInput(std::string("'") + key + "' must be a string");
    (std::string(key) == "format" ? cfg.format : cfg.out) = cfg.options[key].get<std::string>();
    cfg.options.erase(key);
  }
  return cfg;
}

CommandResult run_command(const RunConfig& cfg) {
  if (!kModels.count(cfg.model)) throw InvalidInput("unknown model '" + cfg.model + "'");
  const Fields f(cfg.params, "parameter");
  const Fields o(cfg.options, "option");
  try {
    if (cfg.command == "classify") return cmd_classify(cfg, f, o);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, f, o);
    if (cfg.command == "verify") return cmd_verify(cfg, f, o);
    if (cfg.command == "limit") return cmd_limit(cfg, f, o);
  } catch (const DomainError& e) {
    throw InvalidInput(e.what());
  } catch (const CoefficientError& e) {
    throw InvalidInput(e.what());
  }
  throw InvalidInput("unknown command '" + cfg.command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"jspec: spectral analysis of Jacobi operators"};
  app.require_subcommand(1);
  std::string config_path, out_path, format;
  std::vector<std::string> sets;
  for (const char* name : {"classify", "spectrum", "verify", "limit"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--set", sets, "key=value override (repeatable)");
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "json or csv");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  CommandResult res;
  try {
    RunConfig cfg = load_config(config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    for (const std::string& s : sets) apply_override(cfg, s);
    if (!format.empty()) cfg.format = format;
    if (cfg.format != "json" && cfg.format != "csv") {
      throw InvalidInput("format must be json or csv");
    }
    if (!out_path.empty()) cfg.out = out_path;
    res = run_command(cfg);

    std::ostringstream text;
    if (cfg.format == "json") {
      text << res.document.dump(2) << "\n";
    } else {
      for (std::size_t i = 0; i < res.header.size(); ++i) {
        text << (i ? "," : "") << res.header[i];
      }
      text << "\n";
      for (const auto& row : res.table) {
        for (std::size_t i = 0; i < row.size(); ++i) text << (i ? "," : "") << csv_escape(row[i]);
        text << "\n";
      }
    }
    if (cfg.out.empty()) {
      out << text.str();
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw InvalidInput("cannot write '" + cfg.out + "'");
      file << text.str();
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NoConvergence& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (res.exit_code == kUndecided) err << "verdict undecided\n";
  if (res.exit_code == kVerificationFailed) err << "verification failed\n";
  return res.exit_code;
}

}  // namespace jspec::cli
