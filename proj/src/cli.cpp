#include "sumrank/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

namespace sumrank {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kClaims = {"distance", "covering_radius", "optimality", "defect", "classification", "density"};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, path + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ConfigError, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(Errc::ConfigError, "'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

std::vector<std::string> parse_claims(const Json& j) {
  if (!j.is_array()) throw Error(Errc::ConfigError, "'claims' must be a list");
  std::vector<std::string> out;
  for (const auto& c : j) {
    if (!c.is_string()) throw Error(Errc::ConfigError, "claims must be strings");
    out.push_back(c.get<std::string>());
  }
  return out;
}

void check_claims(const std::vector<std::string>& claims) {
  for (const auto& c : claims)
    if (std::find(kClaims.begin(), kClaims.end(), c) == kClaims.end()) throw Error(Errc::ConfigError, "unknown claim '" + c + "'");
}

}  // namespace

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigError, "config must be an object");
  static const std::vector<std::string> keys = {"schema_version", "family", "params", "claims", "budget",
                                                "cap",            "mode",   "descriptor", "input_code"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw Error(Errc::ConfigError, "unknown config key '" + k + "'");
  if (!j.contains("schema_version") || j["schema_version"] != 1) throw Error(Errc::ConfigError, "schema_version must be 1");
  RunConfig cfg;
  if (j.contains("family")) {
    Json p = j.value("params", Json::object());
    if (!p.is_object()) throw Error(Errc::ConfigError, "'params' must be an object");
    p["family"] = j["family"];
    if (j.contains("input_code")) p["input_code"] = j["input_code"];
    cfg.params = params_from_json(p);
  } else if (j.contains("params") || j.contains("input_code")) {
    throw Error(Errc::ConfigError, "'params' given without 'family'");
  }
  if (j.contains("claims")) {
    cfg.claims = parse_claims(j["claims"]);
    check_claims(cfg.claims);
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw Error(Errc::ConfigError, "'mode' must be a string");
    cfg.mode = mode_from_name(j["mode"].get<std::string>());
  }
  if (j.contains("cap")) {
    if (!j["cap"].is_number_integer()) throw Error(Errc::ConfigError, "'cap' must be an integer");
    cfg.cap = j["cap"].get<int>();
  }
  if (j.contains("descriptor")) {
    if (!j["descriptor"].is_string()) throw Error(Errc::ConfigError, "'descriptor' must be a path");
    cfg.descriptor = j["descriptor"].get<std::string>();
  }
  if (j.contains("budget")) {
    const auto& b = j["budget"];
    if (!b.is_object()) throw Error(Errc::ConfigError, "'budget' must be an object");
    for (const auto& [k, v] : b.items()) {
      if (!v.is_number_unsigned()) throw Error(Errc::ConfigError, "budget '" + k + "' must be a non-negative integer");
      if (k == "membership_tests") cfg.budget.membership_tests = v.get<std::uint64_t>();
      else if (k == "syndrome_cap") cfg.budget.syndrome_cap = v.get<std::uint64_t>();
      else if (k == "workers") cfg.budget.workers = v.get<unsigned>();
      else throw Error(Errc::ConfigError, "unknown budget key '" + k + "'");
    }
  }
  return cfg;
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& pairs) {
  static const std::vector<std::string> family_keys = {"q", "s", "s1", "s2", "m", "u", "lambda"};
  Json pending = Json::object();
  std::optional<std::string> family;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::ConfigError, "expected key=value, got '" + pair + "'");
    const std::string key = pair.substr(0, eq), value = pair.substr(eq + 1);
    if (value.empty()) throw Error(Errc::ConfigError, "empty value for '" + key + "'");
    if (key == "family") {
      family = value;
    } else if (std::find(family_keys.begin(), family_keys.end(), key) != family_keys.end()) {
      pending[key] = parse_uint(key, value);
    } else if (key == "epsilon") {
      try {
        pending[key] = std::stod(value);
      } catch (const std::exception&) {
        throw Error(Errc::ConfigError, "'epsilon' expects a number");
      }
    } else if (key == "claims") {
      cfg.claims = split(value, ',');
      check_claims(cfg.claims);
    } else if (key == "mode") {
      cfg.mode = mode_from_name(value);
    } else if (key == "cap") {
      cfg.cap = static_cast<int>(parse_uint(key, value));
    } else if (key == "descriptor") {
      cfg.descriptor = value;
    } else if (key == "membership_tests") {
      cfg.budget.membership_tests = parse_uint(key, value);
    } else if (key == "syndrome_cap") {
      cfg.budget.syndrome_cap = parse_uint(key, value);
    } else if (key == "workers") {
      cfg.budget.workers = static_cast<unsigned>(parse_uint(key, value));
    } else {
      throw Error(Errc::ConfigError, "unknown key '" + key + "'");
    }
  }
  if (!family && pending.empty()) return;
  Json base = Json::object();
  if (cfg.params && (!family || *family == family_name(cfg.params->family))) base = params_to_json(*cfg.params);
  if (family) base["family"] = *family;
  if (!base.contains("family")) throw Error(Errc::ConfigError, "family parameters given without 'family'");
  for (const auto& [k, v] : pending.items()) base[k] = v;
  cfg.params = params_from_json(base);
}

// ---------------------------------------------------------------------------
// Report

namespace {

std::string cell(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string params_text(const Json& p) {
  std::string out;
  for (const auto& [k, v] : p.items()) {
    if (k == "family" || k == "epsilon") continue;
    if (!out.empty()) out += " ";
    if (k == "input_code") {
      out += "n=" + v.at("length").dump();
      if (v.contains("defining_set")) {
        out += " T=";
        bool first = true;
        for (const auto& x : v["defining_set"]) {
          out += (first ? "" : ",") + x.dump();
          first = false;
        }
      }
    } else if (k == "first" || k == "second") {
      out += k + "=" + family_id(params_from_json(v));
    } else {
      out += (k == "lambda" ? std::string("l") : k) + "=" + cell(v);
    }
  }
  return out;
}

struct SortKey {
  std::string family;
  std::uint64_t q, s, m, lambda;
  std::string id;
  auto operator<=>(const SortKey&) const = default;
};

SortKey sort_key(const ReportRow& r) {
  auto num = [&](const char* k) -> std::uint64_t {
    return r.params.is_object() && r.params.contains(k) && r.params[k].is_number_unsigned() ? r.params[k].get<std::uint64_t>() : 0;
  };
  return {r.family, num("q"), std::max(num("s"), num("s1")), num("m"), num("lambda"), r.id};
}

const Json* find_claim(const ReportRow& r, const std::string& claim) {
  for (const auto& [name, cert] : r.claims)
    if (name == claim) return &cert;
  return nullptr;
}

std::vector<std::string> header() {
  std::vector<std::string> h = {"family", "params", "block_length", "block", "codim_claimed", "codim_computed"};
  for (const auto& c : kClaims) {
    h.push_back(c + "_claimed");
    h.push_back(c + "_computed");
    h.push_back(c + "_verdict");
  }
  h.push_back("runtime_s");
  return h;
}

std::vector<std::string> row_cells(const ReportRow& r) {
  std::vector<std::string> cells = {r.family, params_text(r.params)};
  if (r.error) {
    cells[0] = r.family.empty() ? "ERROR" : r.family;
    cells[1] = "ERROR: " + r.error_text;
    while (cells.size() < header().size()) cells.push_back("-");
    return cells;
  }
  cells.push_back(cell(r.code.value("block_length", Json())));
  cells.push_back(r.code.is_object() ? r.code.value("n", Json()).dump() + "x" + r.code.value("m", Json()).dump() + " over F_" +
                                           r.code.value("q", Json()).dump()
                                     : "-");
  cells.push_back(cell(r.code.value("claimed_codimension_fq", Json())));
  cells.push_back(cell(r.code.value("codimension_fq", Json())));
  for (const auto& c : kClaims) {
    const Json* cert = find_claim(r, c);
    if (!cert) {
      cells.insert(cells.end(), {"-", "-", "-"});
      continue;
    }
    cells.push_back(cell(cert->value("claimed", Json())));
    cells.push_back(cell(cert->value("computed", Json())));
    cells.push_back(cell(cert->value("verdict", Json())));
  }
  if (r.seconds) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << *r.seconds;
    cells.push_back(os.str());
  } else {
    cells.push_back("-");
  }
  return cells;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::vector<ReportRow> load_report(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::ConfigError, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, ReportRow> rows;
  std::map<std::string, double> timing;
  std::vector<ReportRow> errors;
  for (const auto& path : files) {
    Json j;
    try {
      std::ifstream in(path);
      j = Json::parse(in);
      if (!j.is_object() || !j.contains("kind")) throw std::runtime_error("missing 'kind'");
    } catch (const std::exception& e) {
      ReportRow r;
      r.id = path.filename().string();
      r.error = true;
      r.error_text = path.filename().string() + ": unreadable";
      errors.push_back(std::move(r));
      continue;
    }
    try {
      const auto kind = j["kind"].get<std::string>();
      if (kind == "timing") {
        timing[j.at("id").get<std::string>()] = j.at("seconds").get<double>();
      } else if (kind == "certificate") {
        const auto id = j.at("id").get<std::string>();
        auto& r = rows[id];
        r.id = id;
        r.family = j.at("params").at("family").get<std::string>();
        r.params = j.at("params");
        r.code = j.at("code");
        if (j.at("fingerprint").get<std::string>() != certificate_fingerprint(j)) {
          r.error = true;
          r.error_text = path.filename().string() + ": fingerprint mismatch";
        }
        r.claims.emplace_back(j.at("claim").get<std::string>(), j);
      }
    } catch (const std::exception& e) {
      ReportRow r;
      r.id = path.filename().string();
      r.error = true;
      r.error_text = path.filename().string() + ": malformed";
      errors.push_back(std::move(r));
    }
  }
  std::vector<ReportRow> out;
  for (auto& [id, r] : rows) {
    if (auto it = timing.find(id); it != timing.end()) r.seconds = it->second;
    out.push_back(std::move(r));
  }
  for (auto& r : errors) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), [](const ReportRow& a, const ReportRow& b) { return sort_key(a) < sort_key(b); });
  return out;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  const auto h = header();
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
  os << "\n";
  for (const auto& r : rows) {
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << "\n";
  }
  return os.str();
}

std::string report_text(const std::vector<ReportRow>& rows) {
  // Compact view: claimed/computed pairs with the verdict.
  std::vector<std::string> h = {"family", "params", "t", "block", "codim"};
  for (const auto& c : kClaims) h.push_back(c);
  h.push_back("time");
  std::vector<std::vector<std::string>> table = {h};
  for (const auto& r : rows) {
    const auto cells = row_cells(r);
    std::vector<std::string> line = {cells[0], cells[1], cells[2], cells[3], cells[4] + " -> " + cells[5]};
    for (std::size_t i = 0; i < kClaims.size(); ++i) {
      const std::size_t b = 6 + 3 * i;
      line.push_back(cells[b + 2] == "-" ? "-" : cells[b] + " -> " + cells[b + 1] + " " + cells[b + 2]);
    }
    line.push_back(cells.back());
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> width(h.size(), 0);
  for (const auto& line : table)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::ostringstream os;
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << std::left << std::setw(static_cast<int>(width[i])) << line[i];
      if (i + 1 < line.size()) os << "  ";
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> pairs;
  std::string out_dir;
  std::optional<std::uint64_t> budget;
  bool serial = false;
  std::optional<int> cap;
};

RunConfig load_config(const CommonArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) cfg = config_from_json(read_json(a.config));
  apply_overrides(cfg, a.pairs);
  if (a.budget) cfg.budget.membership_tests = *a.budget;
  if (a.serial) cfg.budget.workers = 1;
  if (a.cap) cfg.cap = *a.cap;
  return cfg;
}

FamilyCode obtain_code(const RunConfig& cfg) {
  if (cfg.descriptor) return descriptor_from_json(read_json(*cfg.descriptor));
  if (!cfg.params) throw Error(Errc::ConfigError, "no family given (use --config, family=..., or descriptor=...)");
  return build_family(*cfg.params);
}

void print_summary(const FamilyCode& fc, std::ostream& out) {
  const auto& code = *fc.code;
  out << "id: " << family_id(fc.params) << "\n";
  out << "block length: " << code.positions() << "\n";
  out << "blocks: " << code.codec()->n() << "x" << code.codec()->m() << " over F_" << code.codec()->base()->size() << "\n";
  out << "codimension over F_q: " << code.codimension_fq() << "\n";
  out << "dimension over F_q: " << code.dimension_fq() << "\n";
  const auto bound = code.analytic_distance_bound();
  out << "analytic distance bound: " << (bound ? std::to_string(*bound) : std::string("none")) << "\n";
  if (const auto* sr = dynamic_cast<const SRCode*>(fc.code.get())) {
    for (std::size_t j = 0; j < sr->components().size(); ++j) {
      const auto& c = sr->components()[j];
      out << "component " << j << ": " << c.label << " [" << c.code.length << ", " << c.code.dimension() << ", "
          << (c.distance >= kInfiniteDistance ? std::string("inf") : std::to_string(c.distance)) << (c.distance_exact ? "" : "+")
          << "] over F_" << c.code.field->size() << "\n";
    }
  }
  for (const auto& a : fc.annotations)
    out << (a.pass ? "PASS " : "WARN ") << a.name << ": " << a.detail << "\n";
}

int cmd_build(const CommonArgs& a, std::ostream& out) {
  const RunConfig cfg = load_config(a);
  const FamilyCode fc = obtain_code(cfg);
  print_summary(fc, out);
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    const auto path = fs::path(a.out_dir) / (family_id(fc.params) + ".descriptor.json");
    write_json(path, descriptor_to_json(fc));
    out << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_certify(const CommonArgs& a, std::ostream& out) {
  const RunConfig cfg = load_config(a);
  const FamilyCode fc = obtain_code(cfg);
  CertifyOptions opt;
  opt.claims = cfg.claims;
  opt.mode = cfg.mode;
  opt.budget = cfg.budget;
  opt.cap = cfg.cap;
  const CertifyRun run = certify_family(fc, opt);
  std::vector<Verdict> verdicts;
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    write_json(fs::path(a.out_dir) / (run.id + ".descriptor.json"), descriptor_to_json(fc));
  }
  for (const auto& r : run.results) {
    verdicts.push_back(r.verdict);
    out << run.id << "  " << std::left << std::setw(16) << r.claim << " claimed=" << cell(r.claimed)
        << " computed=" << cell(r.computed) << "  " << verdict_name(r.verdict) << "\n";
    if (!a.out_dir.empty()) write_json(fs::path(a.out_dir) / (run.id + "." + r.claim + ".json"), certificate_json(fc, r));
  }
  if (!a.out_dir.empty()) {
    Json t;
    t["kind"] = "timing";
    t["id"] = run.id;
    t["seconds"] = run.seconds;
    write_json(fs::path(a.out_dir) / (run.id + ".timing.json"), t);
  }
  return exit_code(verdicts);
}

std::map<std::string, std::string> pair_map(const std::vector<std::string>& pairs, const std::vector<std::string>& allowed) {
  std::map<std::string, std::string> m;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw Error(Errc::ConfigError, "expected key=value, got '" + p + "'");
    const auto key = p.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) throw Error(Errc::ConfigError, "unknown key '" + key + "'");
    m[key] = p.substr(eq + 1);
  }
  return m;
}

int cmd_volumes(const std::vector<std::string>& pairs, std::ostream& out) {
  auto m = pair_map(pairs, {"q", "n", "m", "t", "r", "blocks", "metric"});
  if (!m.count("q") || !m.count("r")) throw Error(Errc::ConfigError, "volumes needs q and r");
  const std::uint64_t q = parse_uint("q", m["q"]);
  const int r = static_cast<int>(parse_uint("r", m["r"]));
  const std::string metric = m.count("metric") ? m["metric"] : "sum-rank";
  if (metric == "hamming") {
    if (!m.count("t")) throw Error(Errc::ConfigError, "hamming volume needs t");
    const std::uint64_t t = parse_uint("t", m["t"]);
    for (int k = 0; k <= r; ++k) out << "V_H(q=" << q << ", t=" << t << ", r=" << k << ") = " << vol_hamming(q, t, static_cast<std::uint64_t>(k)) << "\n";
    return 0;
  }
  if (metric != "sum-rank") throw Error(Errc::ConfigError, "metric must be sum-rank or hamming");
  VolumeQuery query;
  query.q = q;
  if (m.count("blocks")) {
    for (const auto& b : split(m["blocks"], ',')) {
      const auto x = b.find('x');
      if (x == std::string::npos) throw Error(Errc::ConfigError, "block '" + b + "' must look like NxM");
      query.blocks.push_back({static_cast<int>(parse_uint("n", b.substr(0, x))), static_cast<int>(parse_uint("m", b.substr(x + 1)))});
    }
  } else {
    if (!m.count("t")) throw Error(Errc::ConfigError, "volumes needs t (with n, m) or blocks");
    const int n = m.count("n") ? static_cast<int>(parse_uint("n", m["n"])) : 1;
    const int mm = m.count("m") ? static_cast<int>(parse_uint("m", m["m"])) : 1;
    query.blocks.assign(parse_uint("t", m["t"]), BlockSize{n, mm});
  }
  for (int k = 0; k <= r; ++k) {
    query.radius = k;
    out << "V_sr(q=" << q << ", " << query.blocks.size() << " blocks, r=" << k << ") = " << vol_sr(query) << "\n";
  }
  return 0;
}

int cmd_cosets(const std::vector<std::string>& pairs, std::ostream& out) {
  auto m = pair_map(pairs, {"n", "q"});
  if (!m.count("n") || !m.count("q")) throw Error(Errc::ConfigError, "cosets needs n and q");
  const auto table = coset_table(parse_uint("n", m["n"]), parse_uint("q", m["q"]));
  for (const auto& c : table.cosets) {
    out << "C_" << c.front() << " = {";
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? ", " : "") << c[i];
    out << "}\n";
  }
  out << table.cosets.size() << " cosets\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sum-rank metric code builder and certifier"};
  app.require_subcommand(1);
  CommonArgs common;
  std::string report_dir, csv_path, format = "text";
  std::vector<std::string> tool_pairs;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file");
    sub->add_option("pairs", common.pairs, "key=value parameters");
    sub->add_option("--out", common.out_dir, "output directory");
  };
  auto* build = app.add_subcommand("build", "build a family and write its descriptor");
  add_common(build);
  auto* certify = app.add_subcommand("certify", "certify claims and write certificates");
  add_common(certify);
  certify->add_option("--budget", common.budget, "membership tests per certification");
  certify->add_flag("--serial", common.serial, "single worker");
  certify->add_option("--cap", common.cap, "covering radius weight cap");
  auto* report = app.add_subcommand("report", "tabulate a certificate directory");
  report->add_option("dir", report_dir, "certificate directory")->required();
  report->add_option("--csv", csv_path, "also write CSV to this path");
  report->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  auto* volumes = app.add_subcommand("volumes", "ball volumes: q= r= and t= [n= m=] or blocks=2x2,1x3; metric=hamming");
  volumes->add_option("pairs", tool_pairs, "key=value parameters");
  auto* cosets = app.add_subcommand("cosets", "cyclotomic cosets: n= q=");
  cosets->add_option("pairs", tool_pairs, "key=value parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(common, out);
    if (certify->parsed()) return cmd_certify(common, out);
    if (report->parsed()) {
      const auto rows = load_report(report_dir);
      if (format == "csv") out << report_csv(rows);
      else out << report_text(rows);
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw Error(Errc::ConfigError, "cannot write " + csv_path);
        f << report_csv(rows);
      }
      return 0;
    }
    if (volumes->parsed()) return cmd_volumes(tool_pairs, out);
    if (cosets->parsed()) return cmd_cosets(tool_pairs, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace sumrank
