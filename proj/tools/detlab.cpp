#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "detlab/detlab.hpp"

using namespace detlab;

namespace {

enum Exit { ok = 0, verification_failed = 1, input_error = 2, not_converged = 3 };

struct RunConfig {
  std::string spec;
  std::string xrange = "1..10";
  int m = 0;
  double tol = 1e-10;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 20240601;
  std::string only;
  std::string method;
  int order = 8;
  int L = 16;
  int N = -1;
  int trunc = 48;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::pair<int, int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      int a = std::stoi(s);
      return {a, a};
    }
    int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
    if (a <= b) return {a, b};
  } catch (const std::exception&) {
  }
  fail(ErrorCode::InvalidSpec, "--x expects A..B with A <= B");
}

std::vector<int> x_values(const RunConfig& c) {
  auto [a, b] = parse_range(c.xrange);
  if (a < 0) fail(ErrorCode::InvalidSpec, "x must be nonnegative");
  std::vector<int> v;
  for (int x = a; x <= b; ++x) v.push_back(x);
  return v;
}

// a path, or a fixture name looked up in the fixture directory
SymbolSpec resolve_spec(const std::string& s) {
  if (s.empty()) fail(ErrorCode::InvalidSpec, "--spec is required");
  if (std::filesystem::exists(s)) return load_spec(s);
  auto p = fixture_dir() / (s + ".json");
  if (std::filesystem::exists(p)) return load_spec(p);
  fail(ErrorCode::InvalidSpec, "cannot open spec file " + s);
}

// rows computed concurrently, assembled in x order
template <class F>
auto per_x(const std::vector<int>& xs, F f) {
  std::vector<std::future<decltype(f(0))>> jobs;
  for (int x : xs) jobs.push_back(std::async(std::launch::async, f, x));
  std::vector<decltype(f(0))> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidSpec, "cannot write " + c.out);
  f << text;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream o;
  for (std::size_t k = 0; k < header.size(); ++k) o << (k ? "," : "") << header[k];
  o << "\n";
  for (auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) o << (k ? "," : "") << r[k];
    o << "\n";
  }
  return o.str();
}

double gap(cplx v, cplx ref) { return std::abs(ref) > 0.0 ? std::abs(v - ref) / std::abs(ref) : std::abs(v - ref); }

cplx finite_or_fail(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(ErrorCode::NotConverged, "non-finite value");
  return v;
}

// ---------------------------------------------------------------- analyze

json analysis_json(const SymbolSpec& spec) {
  SymbolAnalysis a = analyze(spec);
  json j;
  j["winding"] = a.winding;
  j["winding_quadrature"] = a.winding_quadrature;
  auto list = [](const cvec& v) {
    json l = json::array();
    for (auto& z : v) l.push_back(to_json(z));
    return l;
  };
  j["zeros"] = list(a.zeros);
  j["z_list"] = list(a.z_list);
  j["w_list"] = list(a.w_list);
  j["poles"] = json::array();
  for (auto& p : a.poles) j["poles"].push_back({{"value", to_json(p.value)}, {"multiplicity", p.multiplicity}});
  j["contour"] = to_json(select_contour(a));
  // annuli free of zeros and poles, by modulus
  std::vector<double> r{0.0};
  for (auto& z : a.zeros) r.push_back(std::abs(z));
  for (auto& p : a.poles) r.push_back(std::abs(p.value));
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end(), [](double u, double v) { return std::abs(u - v) < 1e-12; }), r.end());
  r.push_back(INFINITY);
  j["annuli"] = json::array();
  for (std::size_t k = 0; k + 1 < r.size(); ++k)
    j["annuli"].push_back(json::array({r[k], std::isfinite(r[k + 1]) ? json(r[k + 1]) : json("inf")}));
  return j;
}

int cmd_analyze(const RunConfig& c) {
  json j = analysis_json(resolve_spec(c.spec));
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
    return ok;
  }
  std::ostringstream o;
  auto cl = [](const json& l) {
    std::string s;
    for (auto& z : l) {
      double im = z[1].get<double>();
      s += (s.empty() ? "" : " ") + num(z[0].get<double>()) + (im == 0.0 ? "" : (im > 0.0 ? "+" : "") + num(im) + "i");
    }
    return s;
  };
  o << "winding," << j["winding"].get<int>() << "\n";
  o << "zeros," << cl(j["zeros"]) << "\n";
  std::string poles;
  for (auto& p : j["poles"])
    poles += (poles.empty() ? "" : " ") + num(p["value"][0].get<double>()) + "^" + std::to_string(p["multiplicity"].get<int>());
  o << "poles," << poles << "\n";
  o << "z_list," << cl(j["z_list"]) << "\n";
  o << "w_list," << cl(j["w_list"]) << "\n";
  std::string comps;
  for (auto& k : j["contour"]["components"])
    comps += (comps.empty() ? "" : " ") + std::string("center=") + num(k["center"][0].get<double>()) +
             " radius=" + num(k["radius"].get<double>()) + " orientation=" + std::to_string(k["orientation"].get<int>());
  o << "contour," << comps << "\n";
  std::string ann;
  for (auto& a : j["annuli"])
    ann += (ann.empty() ? "" : " ") + std::string("[") + num(a[0].get<double>()) + "," +
           (a[1].is_string() ? std::string("inf") : num(a[1].get<double>())) + ")";
  o << "annuli," << ann << "\n";
  emit(c, o.str());
  return ok;
}

// ---------------------------------------------------------------- value tables

struct Row {
  int x;
  cplx value;
  std::vector<std::string> extra;
};

int value_table(const RunConfig& c, const std::vector<std::string>& extra_names, std::function<Row(int)> f) {
  auto rows = per_x(x_values(c), f);
  if (c.format == "json") {
    json j = json::array();
    for (auto& r : rows) {
      json e{{"x", r.x}, {"value", to_json(r.value)}};
      for (std::size_t k = 0; k < extra_names.size(); ++k) e[extra_names[k]] = r.extra[k];
      j.push_back(e);
    }
    emit(c, j.dump(2) + "\n");
    return ok;
  }
  std::vector<std::string> header{"x", "re", "im"};
  header.insert(header.end(), extra_names.begin(), extra_names.end());
  std::vector<std::vector<std::string>> cells;
  for (auto& r : rows) {
    std::vector<std::string> line{std::to_string(r.x), num(r.value.real()), num(r.value.imag())};
    line.insert(line.end(), r.extra.begin(), r.extra.end());
    cells.push_back(line);
  }
  emit(c, csv(header, cells));
  return ok;
}

int cmd_toeplitz(const RunConfig& c) {
  SymbolSpec spec = resolve_spec(c.spec);
  return value_table(c, {}, [&](int x) { return Row{x, finite_or_fail(toeplitz_det(spec, x)), {}}; });
}

DetResult fredholm_value(const SymbolSpec& spec, const std::string& method, int x, int m, double tol) {
  Contour C = select_contour(analyze(spec));
  KernelOnContour k;
  Contour where = C;
  if (method == "S") {
    k = kernel_S(spec, x);
  } else if (method == "V") {
    k = kernel_V(spec, C, x);
  } else if (method == "V_unit") {
    where = unit_circle();
    k = kernel_V(spec, where, x);
  } else if (method == "Q") {
    where = unit_circle();
    k = kernel_Q(spec, x);
  } else {
    fail(ErrorCode::InvalidSpec, "fredholm --method must be S, V, V_unit or Q");
  }
  if (m > 0) {
    DetResult r;
    r.value = nystrom_det_fixed(k, where.with_m(m));
    r.m_used = m;
    r.method = "nystrom_fixed";
    return r;
  }
  return nystrom_det(k, where, tol, 32, 1024);
}

int cmd_fredholm(const RunConfig& c) {
  SymbolSpec spec = resolve_spec(c.spec);
  std::string method = c.method.empty() ? "S" : c.method;
  return value_table(c, {"m_used", "err_estimate", "rel_gap_vs_oracle"}, [&](int x) {
    DetResult d = fredholm_value(spec, method, x, c.m, c.tol);
    cplx t = toeplitz_det(spec, x);
    return Row{x, finite_or_fail(d.value), {std::to_string(d.m_used), num(d.err_estimate), num(gap(d.value, t))}};
  });
}

cplx method_value(const SymbolSpec& spec, const std::string& method, int x, const RunConfig& c) {
  auto colon = method.find(':');
  std::string base = method.substr(0, colon);
  int arg = 0;
  if (colon != std::string::npos) {
    try {
      arg = std::stoi(method.substr(colon + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidSpec, "bad method argument in " + method);
    }
  }
  if (base == "toeplitz") return toeplitz_det(spec, x);
  if (base == "fredholm_S") return fredholm_value(spec, "S", x, c.m, c.tol).value;
  if (base == "fredholm_V") return fredholm_value(spec, "V", x, c.m, c.tol).value;
  if (base == "leading") return tau_leading(spec, select_contour(analyze(spec)), x).value;
  if (base == "szego") return szego(spec, x);
  if (base == "hf") return hartwig_fisher(spec, x);
  if (base == "hf_leading" || base == "hf-leading") return hf_leading(spec, x);
  if (base == "bo") return borodin_okounkov(spec, x, c.trunc);
  if (base == "slavnov") return slavnov_series(spec, x, colon == std::string::npos ? c.order : arg).value;
  if (base == "ff") {
    int L = colon == std::string::npos ? c.L : arg;
    return tau_eff_finite(spec, L, c.N < 0 ? L : c.N, x).value;
  }
  fail(ErrorCode::InvalidSpec, "unknown method " + method);
}

int cmd_asym(const RunConfig& c) {
  SymbolSpec spec = resolve_spec(c.spec);
  std::string method = c.method.empty() ? "leading" : c.method;
  method_value(spec, method, x_values(c).front(), c);  // surface precondition errors once
  return value_table(c, {"abs_err_vs_oracle"}, [&](int x) {
    cplx v = finite_or_fail(method_value(spec, method, x, c));
    return Row{x, v, {num(std::abs(v - toeplitz_det(spec, x)))}};
  });
}

int cmd_ff(const RunConfig& c) {
  SymbolSpec spec = resolve_spec(c.spec);
  const int N = c.N < 0 ? c.L : c.N;
  RootSystem rs = solve_shifted(spec, c.L, N);
  auto rows = per_x(x_values(c), [&](int x) {
    FormFactorSum s = tau_eff_finite(rs, x);
    cplx ref = nystrom_det(kernel_V(spec, unit_circle(), x), unit_circle(), 1e-13, 32, 1024).value;
    return std::make_tuple(x, finite_or_fail(s.value), s.terms, std::abs(s.value - ref));
  });
  if (c.format == "json") {
    json j = json::array();
    for (auto& [x, v, terms, g] : rows)
      j.push_back({{"x", x}, {"L", c.L}, {"N", N}, {"value", to_json(v)}, {"terms", terms}, {"oracle_gap", g}});
    emit(c, (rows.size() == 1 ? j[0] : j).dump(2) + "\n");
    return ok;
  }
  std::vector<std::vector<std::string>> cells;
  for (auto& [x, v, terms, g] : rows)
    cells.push_back({std::to_string(x), std::to_string(c.L), std::to_string(N), num(v.real()), num(v.imag()),
                     std::to_string(terms), num(g)});
  emit(c, csv({"x", "L", "N", "re", "im", "terms", "oracle_gap"}, cells));
  return ok;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, sep);)
    if (!t.empty()) v.push_back(t);
  return v;
}

int cmd_compare(const RunConfig& c) {
  SymbolSpec spec = resolve_spec(c.spec);
  auto methods = split(c.method.empty() ? "toeplitz,fredholm_S,leading" : c.method, ',');
  auto rows = per_x(x_values(c), [&](int x) {
    std::vector<std::string> line{std::to_string(x)};
    std::optional<cplx> oracle;
    try {
      oracle = toeplitz_det(spec, x);
    } catch (const Error&) {
    }
    for (auto& m : methods) {
      try {
        cplx v = finite_or_fail(method_value(spec, m, x, c));
        line.push_back(num(v.real()));
        line.push_back(num(v.imag()));
        line.push_back(oracle ? num(gap(v, *oracle)) : "n/a(no oracle)");
      } catch (const Error& e) {
        std::string cell = std::string("n/a(") + to_string(e.code()) + ")";
        line.insert(line.end(), {cell, cell, cell});
      }
    }
    return line;
  });
  if (c.format == "json") {
    json j = json::array();
    for (auto& r : rows) {
      json e{{"x", std::stoi(r[0])}};
      for (std::size_t k = 0; k < methods.size(); ++k) {
        auto& re = r[1 + 3 * k];
        if (re.rfind("n/a", 0) == 0)
          e[methods[k]] = re;
        else
          e[methods[k]] = {{"value", {std::stod(re), std::stod(r[2 + 3 * k])}}, {"gap", r[3 + 3 * k]}};
      }
      j.push_back(e);
    }
    emit(c, j.dump(2) + "\n");
    return ok;
  }
  std::vector<std::string> header{"x"};
  for (auto& m : methods) header.insert(header.end(), {m + "_re", m + "_im", m + "_gap"});
  emit(c, csv(header, rows));
  return ok;
}

int cmd_verify(const RunConfig& c) {
  Verifier v(c.only, c.seed);
  if (!c.spec.empty()) {
    std::filesystem::path p = c.spec;
    if (!std::filesystem::exists(p)) p = fixture_dir() / (c.spec + ".json");
    if (!std::filesystem::exists(p)) fail(ErrorCode::InvalidSpec, "cannot open spec file " + c.spec);
    v.run_file(p.stem().string(), p);
  } else {
    auto files = fixture_files();
    if (files.empty()) fail(ErrorCode::InvalidSpec, "no fixtures found in " + fixture_dir().string());
    for (auto& [name, path] : files) v.run_file(name, path);
  }
  json rep = v.report();
  if (!c.out.empty() && c.out != "json" && c.out != "csv") {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidSpec, "cannot write " + c.out);
    f << rep.dump(2) << "\n";
  }
  if (c.format == "json" && (c.out.empty() || c.out == "json")) {
    std::cout << rep.dump(2) << "\n";
  } else {
    for (auto& r : v.results())
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.group << "." << r.name << " [" << r.fixture
                << "] residual=" << num(r.residual) << " tol=" << num(r.tolerance)
                << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
    std::cout << rep["passed"].get<int>() << " passed, " << rep["failed"].get<int>() << " failed\n";
  }
  if (!v.all_passed()) {
    for (auto& r : v.results())
      if (!r.passed) std::cerr << "failed: " << r.group << "." << r.name << " [" << r.fixture << "]\n";
    return verification_failed;
  }
  return ok;
}

int exit_code(const Error& e) {
  if (e.is_input_error()) return input_error;
  switch (e.code()) {
    case ErrorCode::NotConverged:
    case ErrorCode::TruncationFailure:
    case ErrorCode::TailNotConverged:
    case ErrorCode::NewtonDiverged:
    case ErrorCode::RootFindFailure:
    case ErrorCode::AliasingSuspected:
    case ErrorCode::InversionCheckFailed:
      return not_converged;
    default:
      return input_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"detlab: Fredholm and Toeplitz determinants of integrable kernels"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s, bool needs_spec) {
    auto* o = s->add_option("--spec", c.spec, "symbol JSON file or fixture name");
    if (needs_spec) o->required();
    s->add_option("--x", c.xrange, "x range A..B");
    s->add_option("--m", c.m, "fixed Nystrom node count (0 = adaptive)");
    s->add_option("--tol", c.tol, "convergence tolerance");
    s->add_option("--out", c.out, "output path (or csv|json)");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--seed", c.seed, "probe seed");
    s->add_option("--method", c.method, "method or comma-separated method list");
    s->add_option("--order", c.order, "Slavnov order");
    s->add_option("--trunc", c.trunc, "Borodin-Okounkov truncation");
    s->add_option("--L", c.L, "form-factor system size");
    s->add_option("--N", c.N, "form-factor particle number (default L)");
  };
  std::map<std::string, std::function<int(const RunConfig&)>> cmds{
      {"analyze", cmd_analyze}, {"toeplitz", cmd_toeplitz}, {"fredholm", cmd_fredholm}, {"asym", cmd_asym},
      {"ff", cmd_ff},           {"compare", cmd_compare},   {"verify", cmd_verify}};
  for (auto& [name, f] : cmds) {
    auto* s = app.add_subcommand(name);
    common(s, name != "verify");
    if (name == "verify") s->add_option("--only", c.only, "group, tag or group.check to run");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? ok : input_error;
  }
  if (c.out == "csv" || c.out == "json") {
    c.format = c.out;
    if (app.get_subcommands().front()->get_name() != "verify") c.out.clear();
  }
  try {
    return cmds.at(app.get_subcommands().front()->get_name())(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  }
}
