#include "crsing/report.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "crsing/errors.hpp"
#include "crsing/frame.hpp"
#include "crsing/series_parse.hpp"
#include "json.hpp"

namespace crs {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// key = value files

namespace {

bool is_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
  return i;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    std::size_t i = skip_ws(line, 0);
    if (i == line.size() || line[i] == '#') {
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t key_start = i;
    while (i < line.size() && is_key_char(line[i])) ++i;
    if (i == key_start) throw ParseError("expected a key", line_no, key_start + 1);
    std::string key(line.substr(key_start, i - key_start));
    i = skip_ws(line, i);
    if (i == line.size() || line[i] != '=') throw ParseError("expected '=' after key '" + key + "'", line_no, i + 1);
    i = skip_ws(line, i + 1);

    KeyValue kv{key, {}, line_no, i + 1};
    if (i < line.size() && line[i] == '"') {
      const std::size_t close = line.find('"', i + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated string", line_no, i + 1);
      kv.value = std::string(line.substr(i + 1, close - i - 1));
      kv.column = i + 2;
      i = skip_ws(line, close + 1);
    } else {
      const std::size_t start = i;
      while (i < line.size() && line[i] != '#' && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      kv.value = std::string(line.substr(start, i - start));
      i = skip_ws(line, i);
    }
    if (kv.value.empty()) throw ParseError("missing value for key '" + key + "'", line_no, kv.column);
    if (i < line.size() && line[i] != '#') throw ParseError("unexpected text after value", line_no, i + 1);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no, key_start + 1);
    out.push_back(std::move(kv));
    if (eol == text.size()) break;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

class Fields {
 public:
  explicit Fields(std::string_view text) {
    for (auto& kv : parse_key_values(text)) kv_.emplace(kv.key, std::move(kv));
  }

  const KeyValue* find(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  const KeyValue& require(const std::string& key) {
    const KeyValue* kv = find(key);
    if (!kv) throw ValidationError("missing key '" + key + "'");
    return *kv;
  }

  std::optional<int> integer(const std::string& key) {
    const KeyValue* kv = find(key);
    if (!kv) return std::nullopt;
    return to_int(*kv);
  }

  int require_integer(const std::string& key) { return to_int(require(key)); }

  std::vector<const KeyValue*> with_prefix(const std::string& prefix) {
    std::vector<const KeyValue*> out;
    for (auto& [k, v] : kv_)
      if (k.rfind(prefix, 0) == 0) {
        used_.insert(k);
        out.push_back(&v);
      }
    return out;
  }

  /// Every key must have been consumed.
  void finish() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) throw ParseError("unknown key '" + k + "'", v.line, 1);
  }

  static int to_int(const KeyValue& kv) {
    const std::string& s = kv.value;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size() || !std::all_of(s.begin() + static_cast<long>(i), s.end(),
                                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("expected an integer for '" + kv.key + "'", kv.line, kv.column);
    if (s.size() > 9) throw ParseError("integer out of range for '" + kv.key + "'", kv.line, kv.column);
    return std::stoi(s);
  }

 private:
  std::map<std::string, KeyValue> kv_;
  std::set<std::string> used_;
};

Series parse_at(const KeyValue& kv, SpacePtr space, int trunc) {
  return parse_series(kv.value, std::move(space), trunc, kv.line, kv.column);
}

std::string quoted(const Series& s) { return "\"" + s.to_string() + "\""; }

int positive(const KeyValue& kv, int v, int min = 1) {
  if (v < min)
    throw ValidationError("'" + kv.key + "' must be at least " + std::to_string(min) + " (line " +
                          std::to_string(kv.line) + ")");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hypersurfaces

HypersurfaceSpec parse_hypersurface_spec(std::string_view text, std::optional<int> trunc_override) {
  Fields f(text);
  const KeyValue& nkv = f.require("n");
  const int n = positive(nkv, Fields::to_int(nkv));
  const KeyValue& tkv = f.require("trunc");
  int trunc = positive(tkv, Fields::to_int(tkv));
  if (trunc_override) trunc = *trunc_override;
  const KeyValue& phi = f.require("phi");
  std::optional<int> m;
  if (const KeyValue* mkv = f.find("m")) m = positive(*mkv, Fields::to_int(*mkv));
  f.finish();
  return HypersurfaceSpec{Hypersurface(parse_at(phi, VarSpace::cr(n), trunc)), m};
}

std::string to_text(const HypersurfaceSpec& spec) {
  std::string out = "n = " + std::to_string(spec.surface.n()) + "\n";
  out += "trunc = " + std::to_string(spec.surface.trunc()) + "\n";
  out += "phi = " + quoted(spec.surface.phi()) + "\n";
  if (spec.m) out += "m = " + std::to_string(*spec.m) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Maps

HoloMap MapSpec::map() const { return HoloMap(components, source.surface, target.surface); }

MapSpec parse_map_spec(std::string_view text, const std::filesystem::path& base_dir,
                       std::optional<int> trunc_override) {
  Fields f(text);
  MapSpec spec{f.require("source").value, f.require("target").value,
               parse_hypersurface_spec(read_text_file(base_dir / f.require("source").value), trunc_override),
               parse_hypersurface_spec(read_text_file(base_dir / f.require("target").value), trunc_override),
               {}};
  const int n = spec.source.surface.n();
  const int trunc = spec.source.surface.trunc();
  const SpacePtr sp = VarSpace::holomorphic(n);
  for (int j = 1; j <= n + 1; ++j) spec.components.push_back(parse_at(f.require("F" + std::to_string(j)), sp, trunc));
  f.finish();
  return spec;
}

std::string to_text(const MapSpec& spec) {
  std::string out = "source = \"" + spec.source_path + "\"\n";
  out += "target = \"" + spec.target_path + "\"\n";
  for (std::size_t j = 0; j < spec.components.size(); ++j)
    out += "F" + std::to_string(j + 1) + " = " + quoted(spec.components[j]) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Briot-Bouquet systems

BBSystem parse_bb_system(std::string_view text, std::optional<int> trunc_override,
                         std::optional<int> order_override) {
  Fields f(text);
  const KeyValue& nkv = f.require("N");
  const int dim = positive(nkv, Fields::to_int(nkv));
  const KeyValue& okv = f.require("order");
  int order = positive(okv, Fields::to_int(okv));
  if (order_override) order = *order_override;
  int trunc = kExact;
  if (const KeyValue* tkv = f.find("trunc")) trunc = positive(*tkv, Fields::to_int(*tkv));
  if (trunc_override) trunc = *trunc_override;
  const SpacePtr sp = VarSpace::briot_bouquet(dim);
  std::vector<Series> comps;
  for (int j = 1; j <= dim; ++j) comps.push_back(parse_at(f.require("f" + std::to_string(j)), sp, trunc));
  f.finish();
  return BBSystem(std::move(comps), order);
}

std::string to_text(const BBSystem& sys) {
  std::string out = "N = " + std::to_string(sys.dim()) + "\n";
  out += "order = " + std::to_string(sys.order()) + "\n";
  int trunc = kExact;
  for (const auto& c : sys.f()) trunc = std::min(trunc, c.trunc());
  if (trunc < kExact) out += "trunc = " + std::to_string(trunc) + "\n";
  for (int j = 0; j < sys.dim(); ++j) out += "f" + std::to_string(j + 1) + " = " + quoted(sys.f()[j]) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Prolonged systems

namespace {

std::string slot_key(const JetVariable& v) {
  std::string a;
  for (std::size_t j = 0; j < v.slot.alpha.size(); ++j) a += (j ? "_" : "") + std::to_string(v.slot.alpha[j]);
  return std::to_string(v.component + 1) + "." + a + "." + std::to_string(v.slot.p);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ProlongedSystem parse_prolonged_system(std::string_view text, std::optional<int> trunc_override,
                                       std::optional<int> order_override) {
  Fields f(text);
  const KeyValue& nkv = f.require("n");
  const int n = positive(nkv, Fields::to_int(nkv));
  const KeyValue& kkv = f.require("k");
  const int k = positive(kkv, Fields::to_int(kkv), 0);
  int components = 2 * n + 1;
  if (const KeyValue* c = f.find("components")) components = positive(*c, Fields::to_int(*c));
  SlotPolicy policy = SlotPolicy::PureS;
  if (const KeyValue* p = f.find("slots")) {
    auto parsed = slot_policy_from_string(p->value);
    if (!parsed) throw ParseError("slots must be top-order or pure-s", p->line, p->column);
    policy = *parsed;
  }
  int order = 8;
  if (const KeyValue* o = f.find("order")) order = positive(*o, Fields::to_int(*o));
  if (order_override) order = *order_override;
  int trunc = kExact;
  if (const KeyValue* t = f.find("trunc")) trunc = positive(*t, Fields::to_int(*t));
  if (trunc_override) trunc = *trunc_override;

  JetSpace js(n, k, components, policy);
  std::map<std::string, int> by_key;
  for (std::size_t v = 0; v < js.variables().size(); ++v) by_key[slot_key(js.variables()[v])] = static_cast<int>(v);

  std::vector<Series> closure;
  for (int v : js.closure_slots())
    closure.push_back(parse_at(f.require("r." + slot_key(js.variables()[v])), js.closure_space(), trunc));

  std::vector<GaussRational> base;
  const auto base_kv = f.with_prefix("base.");
  if (!base_kv.empty()) base.assign(js.variables().size(), GaussRational());
  for (const KeyValue* kv : base_kv) {
    auto it = by_key.find(kv->key.substr(5));
    if (it == by_key.end()) throw ParseError("unknown jet slot '" + kv->key + "'", kv->line, 1);
    base[it->second] = parse_constant(kv->value, kv->line, kv->column);
  }

  std::vector<std::vector<GaussRational>> samples;
  const KeyValue& skv = f.require("samples");
  for (const auto& point : split(skv.value, ';')) {
    std::vector<GaussRational> x;
    for (const auto& coord : split(point, ',')) x.push_back(parse_constant(coord, skv.line, skv.column));
    samples.push_back(std::move(x));
  }
  f.finish();
  return ProlongedSystem{std::move(js), std::move(closure), std::move(samples), std::move(base), order};
}

std::string to_text(const ProlongedSystem& ps) {
  const JetSpace& js = ps.jets;
  std::string out = "n = " + std::to_string(js.n()) + "\nk = " + std::to_string(js.k()) + "\n";
  out += "components = " + std::to_string(js.components()) + "\n";
  out += "slots = " + to_string(js.policy()) + "\n";
  out += "order = " + std::to_string(ps.order) + "\n";
  int trunc = kExact;
  for (const auto& r : ps.closure) trunc = std::min(trunc, r.trunc());
  if (trunc < kExact) out += "trunc = " + std::to_string(trunc) + "\n";
  std::string samples;
  for (std::size_t i = 0; i < ps.samples.size(); ++i) {
    if (i) samples += "; ";
    for (std::size_t j = 0; j < ps.samples[i].size(); ++j) samples += (j ? ", " : "") + ps.samples[i][j].to_string();
  }
  out += "samples = \"" + samples + "\"\n";
  for (std::size_t c = 0; c < ps.closure.size(); ++c)
    out += "r." + slot_key(js.variables()[js.closure_slots()[c]]) + " = " + quoted(ps.closure[c]) + "\n";
  for (std::size_t v = 0; v < ps.base.size(); ++v)
    if (!ps.base[v].is_zero())
      out += "base." + slot_key(js.variables()[v]) + " = \"" + ps.base[v].to_string() + "\"\n";
  return out;
}

// ---------------------------------------------------------------------------
// Reports

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const InvariantViolation*>(&e) || dynamic_cast<const ArithmeticError*>(&e)) return kExitInvariant;
  if (dynamic_cast<const Error*>(&e)) return kExitValidation;
  return kExitInvariant;
}

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json series_matrix(const SeriesMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& e : row) r.push_back(e.to_string());
    out.push_back(std::move(r));
  }
  return out;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(q.to_string());
  return out;
}

std::string essential_text(const Essentiality& e) {
  if (e.verdict == Essentiality::Verdict::Inconclusive) return to_string(e.verdict);
  return to_string(e.verdict) + "(" + std::to_string(e.degree) + ")";
}

// Word lengths beyond this are not explored by default.
constexpr int kEllCap = 4;

struct HypersurfaceFacts {
  json report;
  InfiniteType type;
  std::optional<std::string> essential;
  std::optional<int> ell;
  std::vector<int> ranks;
  bool divisible = false;
  bool matches_hessian = false;
  bool nonvanishing_on_E = false;
  bool ell_agrees = true;
};

HypersurfaceFacts hypersurface_facts(const HypersurfaceSpec& spec) {
  const Hypersurface& h = spec.surface;
  require_valid(h);
  HypersurfaceFacts out{json::object(), compute_infinite_type(h), {}, {}, {}, false, false, false, true};
  json& r = out.report;
  r["schema_version"] = kSchemaVersion;
  r["command"] = "report";
  r["input"] = {{"n", h.n()}, {"trunc", h.trunc()}, {"phi", h.phi().to_string()}};

  json inv = json::object();
  const InfiniteType& type = out.type;
  if (type.levi_flat()) {
    if (spec.m) throw InvariantViolation("declared m = " + std::to_string(*spec.m) + " but phi is Levi-flat");
    inv["levi_flat"] = true;
    inv["m"] = nullptr;
    r["invariants"] = inv;
    return out;
  }
  const int m = spec.m.value_or(*type.m);
  const Frame frame = build_frame(h);
  const SeriesMatrix lev = levi_matrix(frame);
  const Desingularized des = desingularize(frame, lev, m);
  if (m != *type.m)
    throw InvariantViolation("declared m = " + std::to_string(m) + " but phi has m = " + std::to_string(*type.m));
  const LeadingTermCheck lt = check_leading_term(frame, lev, m);
  out.divisible = lt.divisible;
  out.matches_hessian = lt.matches_hessian;
  out.nonvanishing_on_E = lt.nonvanishing_on_E;

  const Essentiality ess = essentiality_check(h, std::max(1, h.trunc() - m));
  out.essential = essential_text(ess);

  inv["levi_flat"] = false;
  inv["m"] = m;
  inv["r"] = *type.r;
  inv["type2"] = type.type2();
  inv["phi_m"] = type.phi_m->to_string();
  inv["essential"] = *out.essential;

  json diag = json::object();
  const int flt_max = std::min(kEllCap, max_filtration_length(frame, m));
  const int nd_max = std::min(kEllCap, max_supported_ell(h));
  if (flt_max >= 1 && nd_max >= 1) {
    const Filtration flt = filtration(frame, m, flt_max);
    const Nondegeneracy nd = nondegeneracy_ell(h, nd_max);
    out.ranks = flt.ranks;
    if (flt.nondegenerate) out.ell = flt.ell;
    out.ell_agrees = (flt.nondegenerate ? std::optional<int>(flt.ell) : std::nullopt) == nd.ell ||
                     (!nd.ell && !flt.nondegenerate);
    if (out.ell)
      inv["ell"] = *out.ell;
    else
      inv["ell"] = "degenerate-up-to(" + std::to_string(flt.ell_max) + ")";
    inv["filtration_ranks"] = flt.ranks;
    diag["filtration"] = {{"lower_levels_vanish", flt.lower_levels_vanish},
                          {"kernel_refinement_holds", flt.kernel_refinement_holds},
                          {"basis_change", [&] {
                             json rows = json::array();
                             for (std::size_t i = 0; i < flt.basis_change.rows(); ++i)
                               rows.push_back(vector_json(flt.basis_change.row(i)));
                             return rows;
                           }()}};
    diag["nondegeneracy_span_ranks"] = nd.span_ranks;
    diag["ell_agrees"] = out.ell_agrees;
  } else {
    inv["ell"] = nullptr;
    inv["filtration_ranks"] = json::array();
    diag["ell"] = "truncation too low for the filtration";
  }
  inv["psi"] = type.psi->to_string();
  r["invariants"] = inv;
  r["levi"] = {{"h", series_matrix(lev)}, {"h0_leading", series_matrix(lt.leading)},
               {"hessian", series_matrix(lt.hessian)}};
  diag["leading_term"] = {{"divisible", lt.divisible},
                          {"nonvanishing_on_E", lt.nonvanishing_on_E},
                          {"matches_hessian", lt.matches_hessian}};
  diag["essential_generators"] = ess.generator_count;
  r["diagnostics"] = diag;
  return out;
}

std::string hypersurface_summary(const HypersurfaceFacts& f) {
  if (f.type.levi_flat()) return "Levi-flat\n";
  std::string s = "m = " + std::to_string(*f.type.m) + ", r = " + std::to_string(*f.type.r);
  s += ", ell = " + (f.ell ? std::to_string(*f.ell) : std::string("-"));
  s += ", " + f.essential.value_or("-") + "\n";
  return s;
}

json map_json(const MapSpec& spec, const ResidualReport& rep) {
  json r = json::object();
  r["schema_version"] = kSchemaVersion;
  r["command"] = "check-map";
  json comps = json::array();
  for (const auto& c : spec.components) comps.push_back(c.to_string());
  r["input"] = {{"source", spec.source_path}, {"target", spec.target_path}, {"components", comps}};
  json ids = json::array();
  for (const auto& id : rep.identities)
    ids.push_back({{"name", id.name}, {"value", id.value.to_string()}, {"diagnostic", id.diagnostic}});
  r["residuals"] = {{"maps_into", rep.map_residual.to_string()},
                    {"all_zero", rep.all_zero()},
                    {"xi_smooth", rep.xi_smooth},
                    {"xi", rep.xi ? json(rep.xi->to_string()) : json(nullptr)},
                    {"identities", ids}};
  r["diagnostics"] = {{"certificate", rep.certificate}};
  return r;
}

json bb_json(const BBSystem& sys, const LinearPart& lp, const FormalLogSolution& sol, const DulacReport& dr) {
  json r = json::object();
  r["schema_version"] = kSchemaVersion;
  r["command"] = "bb-solve";
  json f = json::array();
  for (const auto& c : sys.f()) f.push_back(c.to_string());
  r["input"] = {{"N", sys.dim()}, {"order", sys.order()}, {"f", f}};
  json a = json::array();
  for (std::size_t i = 0; i < lp.a.rows(); ++i) a.push_back(vector_json(lp.a.row(i)));
  json res = json::array();
  for (const auto& rr : sol.resonances) res.push_back({{"k", rr.k}, {"kernel_dim", rr.kernel_dim}});
  json coeffs = json::array();
  for (const auto& [key, v] : sol.coeffs)
    coeffs.push_back({{"k", key.first}, {"log_power", key.second}, {"value", vector_json(v)}});
  r["bb"] = {{"linear_part", {{"p", vector_json(lp.p)}, {"a", a}, {"char_poly", vector_json(lp.char_poly)}}},
             {"resonances", res},
             {"dulac_p", dr.p},
             {"dulac", {{"nonpositive_real", dr.nonpositive_real}, {"positive_real", dr.positive_real},
                        {"nonreal", dr.nonreal}}},
             {"family_dim", sol.family_dim},
             {"has_logs", sol.has_logs()},
             {"residual_zero", sol.residual_zero},
             {"coefficients", coeffs}};
  return r;
}

json solution_json(const FormalLogSolution& sol) {
  json res = json::array();
  for (const auto& rr : sol.resonances) res.push_back({{"k", rr.k}, {"kernel_dim", rr.kernel_dim}});
  json coeffs = json::array();
  for (const auto& [key, v] : sol.coeffs)
    coeffs.push_back({{"k", key.first}, {"log_power", key.second}, {"value", vector_json(v)}});
  return {{"resonances", res},
          {"family_dim", sol.family_dim},
          {"has_logs", sol.has_logs()},
          {"residual_zero", sol.residual_zero},
          {"coefficients", coeffs}};
}

json prolong_json(const ProlongedSystem& ps, const ProlongationResult& res) {
  const JetSpace& js = ps.jets;
  json r = json::object();
  r["schema_version"] = kSchemaVersion;
  r["command"] = "prolong";
  r["input"] = {{"n", js.n()}, {"k", js.k()}, {"components", js.components()},
                {"slots", to_string(js.policy())}, {"order", ps.order}};
  int chain = 0, transport = 0;
  for (const auto& c : js.contact()) (c.kind == ContactEquation::Kind::Chain ? chain : transport)++;
  json solved = json::array();
  for (int v : res.solved) solved.push_back(js.variables()[v].name);
  r["jets"] = {{"variables", js.variables().size()},
               {"contact", js.contact().size()},
               {"chain", chain},
               {"x_transport", transport},
               {"closure_slots", js.closure_slots().size()},
               {"solved", solved}};
  json samples = json::array();
  for (const auto& s : res.samples) {
    json item = {{"x", vector_json(s.x)}};
    item.update(solution_json(s.solution));
    item["coefficient_norms"] = s.coefficient_norms;
    item["radius_proxy"] = s.radius_proxy ? json(*s.radius_proxy) : json(nullptr);
    samples.push_back(std::move(item));
  }
  r["samples"] = samples;
  r["diagnostics"] = {{"radius", "empirical per-sample proxy from coefficient growth; not a uniform bound"}};
  return r;
}

}  // namespace

RunOutcome report_hypersurface(const HypersurfaceSpec& spec) {
  const HypersurfaceFacts f = hypersurface_facts(spec);
  return {kExitOk, dump(f.report), hypersurface_summary(f)};
}

RunOutcome report_map(const MapSpec& spec) {
  const ResidualReport rep = check_identities(spec.map());
  const bool ok = rep.all_zero();
  std::string summary = ok ? "all residuals vanish" : "nonzero residuals";
  if (rep.xi) summary += ", xi = " + rep.xi->to_string();
  if (!rep.xi_smooth) summary += ", xi not smooth";
  return {ok ? kExitOk : kExitInvariant, dump(map_json(spec, rep)), summary + "\n"};
}

RunOutcome report_bb(const BBSystem& sys, std::optional<double> oracle_t0) {
  const LinearPart lp = linear_part(sys);
  const FormalLogSolution sol = formal_solve(sys);
  const DulacReport dr = dulac_classify(lp);
  json r = bb_json(sys, lp, sol, dr);
  if (oracle_t0) {
    const OracleResult o = numeric_oracle(sys, sol, *oracle_t0);
    r["oracle"] = {{"t0", *oracle_t0}, {"max_deviation", o.max_deviation}, {"t_min", o.t_min}, {"t_max", o.t_max}};
  }
  std::string summary = "resonances:";
  for (const auto& rr : sol.resonances) summary += " " + std::to_string(rr.k);
  if (sol.resonances.empty()) summary += " none";
  summary += ", dulac p = " + std::to_string(dr.p) + ", family_dim = " + std::to_string(sol.family_dim);
  summary += sol.residual_zero ? ", residual zero\n" : ", residual nonzero\n";
  return {sol.residual_zero ? kExitOk : kExitInvariant, dump(r), summary};
}

RunOutcome report_prolongation(const ProlongedSystem& ps) {
  const ProlongationResult res = assemble_and_solve(ps);
  bool ok = true;
  for (const auto& s : res.samples) ok = ok && s.solution.residual_zero;
  std::string summary = std::to_string(ps.jets.variables().size()) + " jet variables, " +
                        std::to_string(ps.jets.closure_slots().size()) + " closure slots, " +
                        std::to_string(res.samples.size()) + " samples solved\n";
  return {ok ? kExitOk : kExitInvariant, dump(prolong_json(ps, res)), summary};
}

// ---------------------------------------------------------------------------
// Corpus

Hypersurface arctan_implicit_surface(int trunc) {
  const SpacePtr sp = VarSpace::make({"z1", "c1", "s", "t"});
  const Series u = Series::variable(sp, trunc, 0) * Series::variable(sp, trunc, 1);
  const Series xi = compose(arctan_series(VarSpace::univariate("u"), trunc), u);
  const Series s = Series::variable(sp, trunc, 2);
  const Series t = Series::variable(sp, trunc, 3);
  const Series g = xi * (s * s + t * t);
  return Hypersurface(implicit_solve(g, VarSpace::cr(1)).with_space(VarSpace::cr(1)));
}

std::vector<std::pair<std::string, HypersurfaceSpec>> corpus_hypersurfaces() {
  std::vector<std::pair<std::string, HypersurfaceSpec>> out;
  out.emplace_back("sz1c1", HypersurfaceSpec{Hypersurface(parse_series("s*z1*c1", VarSpace::cr(1), 8)), {}});
  for (int k = 2; k <= 4; ++k)
    out.emplace_back("power-k" + std::to_string(k), HypersurfaceSpec{power_map_target(k, 2 * k + 4), {}});
  out.emplace_back("arctan-implicit", HypersurfaceSpec{arctan_implicit_surface(8), {}});
  return out;
}

namespace {

struct Checks {
  json list = json::array();
  bool pass = true;

  template <class A, class B>
  void expect(const std::string& name, const A& expected, const B& actual) {
    const json e(expected), a(actual);
    const bool ok = e == a;
    pass = pass && ok;
    list.push_back({{"name", name}, {"expected", e}, {"actual", a}, {"pass", ok}});
  }
};

struct Entry {
  std::string name;
  std::string kind;
  Checks checks;
  json report;
};

Entry hypersurface_entry(const std::string& name, const HypersurfaceSpec& spec, int m, int r,
                         std::optional<int> ell, std::optional<std::string> essential,
                         std::optional<std::vector<int>> ranks) {
  Entry e{name, "hypersurface", {}, {}};
  const HypersurfaceFacts f = hypersurface_facts(spec);
  e.checks.expect("m", m, f.type.m.value_or(-1));
  e.checks.expect("r", r, f.type.r.value_or(-1));
  e.checks.expect("type2", r == 2, f.type.type2());
  e.checks.expect("levi_divisible", true, f.divisible);
  e.checks.expect("leading_term_is_hessian", true, f.matches_hessian);
  e.checks.expect("ell_agrees", true, f.ell_agrees);
  if (ell) e.checks.expect("ell", *ell, f.ell.value_or(-1));
  if (essential) e.checks.expect("essential", *essential, f.essential.value_or(""));
  if (ranks) e.checks.expect("filtration_ranks", *ranks, f.ranks);
  e.report = f.report;
  return e;
}

Entry map_entry(const std::string& name, const HoloMap& f, const std::string& xi) {
  Entry e{name, "map", {}, {}};
  const ResidualReport rep = check_identities(f);
  e.checks.expect("maps_into", "0", rep.map_residual.to_string());
  e.checks.expect("all_zero", true, rep.all_zero());
  e.checks.expect("xi_smooth", true, rep.xi_smooth);
  e.checks.expect("xi", xi, rep.xi ? rep.xi->to_string() : std::string());
  json ids = json::array();
  for (const auto& id : rep.identities)
    if (!id.diagnostic) ids.push_back({{"name", id.name}, {"value", id.value.to_string()}});
  e.report = {{"residuals", ids}};
  return e;
}

BBSystem bb_of(std::initializer_list<const char*> f, int order) {
  const SpacePtr sp = VarSpace::briot_bouquet(static_cast<int>(f.size()));
  std::vector<Series> comps;
  for (const char* s : f) comps.push_back(parse_series(s, sp, kExact));
  return BBSystem(std::move(comps), order);
}

}  // namespace

RunOutcome run_examples() {
  std::vector<Entry> entries;
  const auto hs = corpus_hypersurfaces();

  entries.push_back(hypersurface_entry(hs[0].first, hs[0].second, 1, 2, 1, "certified-essential(1)",
                                       std::vector<int>{0, 1}));
  for (int k = 2; k <= 4; ++k) {
    const auto& [name, spec] = hs[static_cast<std::size_t>(k - 1)];
    entries.push_back(hypersurface_entry(name, spec, 1, 2, 1, "certified-essential(1)", std::nullopt));
  }
  entries.push_back(hypersurface_entry(hs[4].first, hs[4].second, 2, 2, std::nullopt, std::nullopt, std::nullopt));

  const Hypersurface& src = hs[0].second.surface;
  entries.push_back(map_entry("identity-sz1c1", HoloMap::identity(src, src.trunc()), "1"));
  for (int k = 2; k <= 4; ++k) {
    const Hypersurface& tgt = hs[static_cast<std::size_t>(k - 1)].second.surface;
    const Hypersurface widened(parse_series("s*z1*c1", VarSpace::cr(1), tgt.trunc()));
    const SpacePtr hol = VarSpace::holomorphic(1);
    std::vector<Series> comps{parse_series("z1", hol, tgt.trunc()),
                              parse_series("w^" + std::to_string(k), hol, tgt.trunc())};
    entries.push_back(map_entry("power-map-k" + std::to_string(k), HoloMap(comps, widened, tgt), std::to_string(k)));
  }

  {
    Entry e{"bb-half", "briot-bouquet", {}, {}};
    const BBSystem sys = bb_of({"1/2*y1 + t"}, 10);
    const FormalLogSolution sol = formal_solve(sys);
    e.checks.expect("resonances", 0, sol.resonances.size());
    e.checks.expect("c1", "2", sol.coefficient(1)[0].to_string());
    e.checks.expect("has_logs", false, sol.has_logs());
    e.checks.expect("residual_zero", true, sol.residual_zero);
    e.report = solution_json(sol);
    entries.push_back(std::move(e));
  }
  {
    Entry e{"bb-resonant", "briot-bouquet", {}, {}};
    const BBSystem sys = bb_of({"y1 + t"}, 6);
    const FormalLogSolution sol = formal_solve(sys);
    e.checks.expect("resonance_k", std::vector<int>{1}, [&] {
      std::vector<int> ks;
      for (const auto& r : sol.resonances) ks.push_back(r.k);
      return ks;
    }());
    e.checks.expect("t_log_t", "1", sol.coefficient(1, 1)[0].to_string());
    e.checks.expect("family_dim", 1, sol.family_dim);
    e.checks.expect("residual_zero", true, sol.residual_zero);
    e.report = solution_json(sol);
    entries.push_back(std::move(e));
  }
  {
    Entry e{"dulac", "briot-bouquet", {}, {}};
    e.checks.expect("p_plus_one", 1, dulac_classify(linear_part(bb_of({"y1 + t"}, 1))).p);
    e.checks.expect("p_minus_two", 0, dulac_classify(linear_part(bb_of({"-2*y1 + t"}, 1))).p);
    e.checks.expect("p_rotation", 2, dulac_classify(linear_part(bb_of({"-y2 + t", "y1"}, 1))).p);
    e.report = json::object();
    entries.push_back(std::move(e));
  }
  {
    Entry e{"prolong-counts", "prolongation", {}, {}};
    const JetSpace js = contact_prolong(1, 3, SlotPolicy::PureS);
    e.checks.expect("variables", 60, js.variables().size());
    e.checks.expect("contact", 57, js.contact().size());
    e.checks.expect("closure_slots", 3, js.closure_slots().size());
    const JetSpace top = contact_prolong(1, 3, SlotPolicy::TopOrder);
    e.checks.expect("top_order_closure_slots", 30, top.closure_slots().size());
    e.report = json::object();
    entries.push_back(std::move(e));
  }
  {
    Entry e{"prolong-toy", "prolongation", {}, {}};
    const JetSpace js = contact_prolong(1, 0, SlotPolicy::TopOrder, 1);
    ProlongedSystem ps{js, {parse_series("2*u1_0_0_0 + s", js.closure_space(), kExact)}, {{0, 0}}, {}, 6};
    const ProlongationResult res = assemble_and_solve(ps);
    const FormalLogSolution& sol = res.samples[0].solution;
    std::string u;
    for (const auto& [key, v] : sol.coeffs) {
      if (v[0].is_zero()) continue;
      u += (u.empty() ? "" : " + ") + v[0].to_string() + "*s^" + std::to_string(key.first);
    }
    e.checks.expect("u", "-1*s^1", u);
    e.checks.expect("residual_zero", true, sol.residual_zero);
    e.report = prolong_json(ps, res);
    entries.push_back(std::move(e));
  }

  json r = json::object();
  r["schema_version"] = kSchemaVersion;
  r["command"] = "examples";
  json list = json::array();
  bool all = true;
  std::string summary;
  for (auto& e : entries) {
    all = all && e.checks.pass;
    int passed = 0;
    for (const auto& c : e.checks.list) passed += c["pass"].get<bool>() ? 1 : 0;
    std::string line = e.name;
    line.resize(std::max<std::size_t>(line.size() + 1, 20), ' ');
    std::string kind = e.kind;
    kind.resize(std::max<std::size_t>(kind.size() + 1, 15), ' ');
    summary += line + kind + std::to_string(passed) + "/" + std::to_string(e.checks.list.size()) + "  " +
               (e.checks.pass ? "ok" : "FAILED") + "\n";
    list.push_back({{"name", e.name}, {"kind", e.kind}, {"pass", e.checks.pass}, {"checks", e.checks.list},
                    {"report", e.report}});
  }
  r["entries"] = list;
  r["all_pass"] = all;
  return {all ? kExitOk : kExitInvariant, dump(r), summary};
}

}  // namespace crs
