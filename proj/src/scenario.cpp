#include "jscc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace jscc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(int code, const std::string& msg) { throw scenario_error(code, msg); }

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  if (!obj.is_object()) fail(exit_schema, where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      fail(exit_schema, where + ": unknown key '" + it.key() + "'");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(exit_schema, where + ": missing key '" + key + "'");
  return *it;
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(exit_schema, where + " must be an integer");
  return v.get<int>();
}

double get_num(const json& v, const std::string& where) {
  if (!v.is_number()) fail(exit_schema, where + " must be a number");
  return v.get<double>();
}

int get_size(const json& obj, const std::string& key, const std::string& where) {
  const int n = get_int(require(obj, key, where), where + "." + key);
  if (n < 1) fail(exit_schema, where + "." + key + " must be >= 1");
  return n;
}

std::vector<double> get_row(const json& v, std::size_t width, const std::string& where) {
  if (!v.is_array() || v.size() != width) {
    fail(exit_schema, where + " must be an array of " + std::to_string(width) + " numbers");
  }
  std::vector<double> row;
  row.reserve(width);
  for (const auto& x : v) row.push_back(get_num(x, where + " entry"));
  return row;
}

std::vector<std::vector<double>> get_rows(const json& v, std::size_t count,
                                          std::size_t width, const std::string& where) {
  if (!v.is_array() || v.size() != count) {
    fail(exit_schema, where + " must be an array of " + std::to_string(count) + " rows");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(count);
  for (std::size_t r = 0; r < v.size(); ++r) {
    rows.push_back(get_row(v[r], width, where + "[" + std::to_string(r) + "]"));
  }
  return rows;
}

// Flat tensor from a list of ([symbols...], probability) pairs; absent cells
// are zero, duplicates are rejected.
std::vector<double> get_pmf_table(const json& v, const std::vector<Variable>& vars,
                                  const std::string& where) {
  if (!v.is_array()) fail(exit_schema, where + " must be an array of [symbols, p] pairs");
  std::size_t cells = 1;
  for (const auto& var : vars) cells *= static_cast<std::size_t>(var.size);
  std::vector<double> probs(cells, 0.0);
  std::vector<char> seen(cells, 0);
  for (const auto& entry : v) {
    if (!entry.is_array() || entry.size() != 2) {
      fail(exit_schema, where + " entries must be [symbols, probability] pairs");
    }
    const json& syms = entry[0];
    if (!syms.is_array() || syms.size() != vars.size()) {
      fail(exit_schema, where + " symbol tuples must list " +
                            std::to_string(vars.size()) + " symbols");
    }
    std::size_t cell = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const int s = get_int(syms[i], where + " symbol");
      if (s < 0 || s >= vars[i].size) {
        fail(exit_schema, where + ": symbol " + std::to_string(s) + " out of range for " +
                              vars[i].name);
      }
      cell = cell * static_cast<std::size_t>(vars[i].size) + static_cast<std::size_t>(s);
    }
    if (seen[cell]) fail(exit_schema, where + ": duplicate symbol tuple");
    seen[cell] = 1;
    probs[cell] = get_num(entry[1], where + " probability");
  }
  return probs;
}

JointPmf make_pmf(std::vector<Variable> vars, std::vector<double> probs,
                  const std::string& where) {
  try {
    return JointPmf(std::move(vars), std::move(probs));
  } catch (const std::domain_error& e) {
    fail(exit_normalization, where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    fail(exit_schema, where + ": " + e.what());
  }
}

Kernel make_kernel(std::vector<Variable> given, std::vector<Variable> outputs,
                   std::vector<std::vector<double>> rows, const std::string& where) {
  try {
    return Kernel(std::move(given), std::move(outputs), std::move(rows));
  } catch (const std::domain_error& e) {
    fail(exit_normalization, where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    fail(exit_schema, where + ": " + e.what());
  }
}

SourceModel parse_source(const json& sec) {
  if (sec.contains("preset")) {
    expect_keys(sec, {"preset"}, "source");
    const std::string p = require(sec, "preset", "source").get<std::string>();
    if (p == "somarc-eq3") return somarc_example_source();
    fail(exit_unknown_preset, "source: unknown preset '" + p + "'");
  }
  expect_keys(sec, {"s1_size", "s2_size", "w_size", "w3_size", "pmf"}, "source");
  std::vector<Variable> vars = {{"S1", get_size(sec, "s1_size", "source")},
                                {"S2", get_size(sec, "s2_size", "source")},
                                {"W", get_size(sec, "w_size", "source")},
                                {"W3", get_size(sec, "w3_size", "source")}};
  std::vector<double> probs = get_pmf_table(require(sec, "pmf", "source"), vars, "source.pmf");
  return SourceModel(make_pmf(std::move(vars), std::move(probs), "source.pmf"));
}

ChannelModel parse_channel(const json& sec) {
  if (sec.contains("preset")) {
    expect_keys(sec, {"preset"}, "channel");
    const std::string p = require(sec, "preset", "channel").get<std::string>();
    if (p == "somarc-eq3") return somarc_example_channel();
    fail(exit_unknown_preset, "channel: unknown preset '" + p + "'");
  }
  expect_keys(sec,
              {"x1_size", "x2_size", "x3_size", "y_size", "y3_size", "rows", "y_map",
               "y3_map", "somarc"},
              "channel");
  const int nx1 = get_size(sec, "x1_size", "channel");
  const int nx2 = get_size(sec, "x2_size", "channel");
  const int nx3 = get_size(sec, "x3_size", "channel");
  const int ny = get_size(sec, "y_size", "channel");
  const int ny3 = get_size(sec, "y3_size", "channel");
  const std::size_t row_count = static_cast<std::size_t>(nx1) * nx2 * nx3;
  const std::size_t width = static_cast<std::size_t>(ny) * ny3;

  std::vector<std::vector<double>> rows;
  if (sec.contains("rows")) {
    if (sec.contains("y_map") || sec.contains("y3_map")) {
      fail(exit_schema, "channel: give either rows or y_map/y3_map, not both");
    }
    rows = get_rows(sec["rows"], row_count, width, "channel.rows");
  } else {
    const json& ym = require(sec, "y_map", "channel");
    const json& y3m = require(sec, "y3_map", "channel");
    if (!ym.is_array() || ym.size() != row_count || !y3m.is_array() ||
        y3m.size() != row_count) {
      fail(exit_schema, "channel maps must list one output per (x1,x2,x3) tuple, " +
                            std::to_string(row_count) + " entries");
    }
    rows.assign(row_count, std::vector<double>(width, 0.0));
    for (std::size_t r = 0; r < row_count; ++r) {
      const int y = get_int(ym[r], "channel.y_map entry");
      const int y3 = get_int(y3m[r], "channel.y3_map entry");
      if (y < 0 || y >= ny || y3 < 0 || y3 >= ny3) {
        fail(exit_schema, "channel map output out of range");
      }
      rows[r][static_cast<std::size_t>(y) * ny3 + y3] = 1.0;
    }
  }

  std::optional<SomarcSplit> split;
  if (sec.contains("somarc")) {
    const json& sm = sec["somarc"];
    expect_keys(sm, {"yr_size", "ys_size"}, "channel.somarc");
    split = SomarcSplit{get_size(sm, "yr_size", "channel.somarc"),
                        get_size(sm, "ys_size", "channel.somarc")};
  }

  Kernel k = make_kernel({{"X1", nx1}, {"X2", nx2}, {"X3", nx3}},
                         {{"Y", ny}, {"Y3", ny3}}, std::move(rows), "channel.rows");
  try {
    return ChannelModel(std::move(k), split);
  } catch (const std::domain_error& e) {
    fail(exit_schema, std::string("channel: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(exit_schema, std::string("channel: ") + e.what());
  }
}

ChainFamily parse_family(const std::string& f, const std::string& where) {
  if (f == "thm1") return ChainFamily::thm1;
  if (f == "thm2") return ChainFamily::thm2;
  if (f == "separation") return ChainFamily::separation;
  fail(exit_schema, where + ": unknown family '" + f + "'");
}

void parse_chain(const json& sec, ScenarioFile& out) {
  out.has_chain = true;
  if (sec.is_string()) {
    if (sec.get<std::string>() != "optimize") {
      fail(exit_schema, "chain: the only string form is \"optimize\"");
    }
    out.chain_optimize = true;
    return;
  }
  expect_keys(sec,
              {"family", "preset", "optimize", "v1_size", "v2_size", "p_v1", "p_v2",
               "x1_given_s1", "x2_given_s2", "x3_given_s1s2", "x1_given_s1v1",
               "x2_given_s2v2", "x1_given_v1", "x2_given_v2", "x3_given_v1v2"},
              "chain");
  out.family = parse_family(require(sec, "family", "chain").get<std::string>(), "chain.family");
  if (sec.contains("optimize")) {
    if (!sec["optimize"].is_boolean()) fail(exit_schema, "chain.optimize must be a boolean");
    out.chain_optimize = sec["optimize"].get<bool>();
  }
  if (sec.contains("v1_size")) out.v1_size = get_size(sec, "v1_size", "chain");
  if (sec.contains("v2_size")) out.v2_size = get_size(sec, "v2_size", "chain");
  if (out.chain_optimize) return;

  const SourceModel& src = out.source;
  const ChannelModel& ch = out.channel;
  if (sec.contains("preset")) {
    const std::string p = sec["preset"].get<std::string>();
    if (p != "cpm-identity") fail(exit_unknown_preset, "chain: unknown preset '" + p + "'");
    if (out.family != ChainFamily::thm2) {
      fail(exit_schema, "chain: preset cpm-identity is a thm2 chain");
    }
    try {
      out.chain_thm2 = cpm_identity_chain(src, ch);
    } catch (const std::invalid_argument& e) {
      fail(exit_schema, std::string("chain: ") + e.what());
    }
    return;
  }

  const Variable S1{"S1", src.s1_size()}, S2{"S2", src.s2_size()};
  const Variable X1{"X1", ch.x1_size()}, X2{"X2", ch.x2_size()}, X3{"X3", ch.x3_size()};
  const std::size_t w1 = static_cast<std::size_t>(ch.x1_size());
  const std::size_t w2 = static_cast<std::size_t>(ch.x2_size());
  const std::size_t w3 = static_cast<std::size_t>(ch.x3_size());

  if (out.family == ChainFamily::thm2) {
    InputChainThm2 c;
    c.x1_given_s1 = make_kernel(
        {S1}, {X1},
        get_rows(require(sec, "x1_given_s1", "chain"), src.s1_size(), w1, "chain.x1_given_s1"),
        "chain.x1_given_s1");
    c.x2_given_s2 = make_kernel(
        {S2}, {X2},
        get_rows(require(sec, "x2_given_s2", "chain"), src.s2_size(), w2, "chain.x2_given_s2"),
        "chain.x2_given_s2");
    c.x3_given_s1s2 = make_kernel(
        {S1, S2}, {X3},
        get_rows(require(sec, "x3_given_s1s2", "chain"),
                 static_cast<std::size_t>(src.s1_size()) * src.s2_size(), w3,
                 "chain.x3_given_s1s2"),
        "chain.x3_given_s1s2");
    out.chain_thm2 = std::move(c);
    return;
  }

  const Variable V1{"V1", out.v1_size}, V2{"V2", out.v2_size};
  auto pv = [&](const char* key, const Variable& v) {
    return make_pmf({v},
                    get_row(require(sec, key, "chain"), static_cast<std::size_t>(v.size),
                            std::string("chain.") + key),
                    std::string("chain.") + key);
  };
  Kernel x3 = make_kernel(
      {V1, V2}, {X3},
      get_rows(require(sec, "x3_given_v1v2", "chain"),
               static_cast<std::size_t>(out.v1_size) * out.v2_size, w3, "chain.x3_given_v1v2"),
      "chain.x3_given_v1v2");

  if (out.family == ChainFamily::thm1) {
    InputChainThm1 c;
    c.p_v1 = pv("p_v1", V1);
    c.p_v2 = pv("p_v2", V2);
    c.x1_given_s1v1 = make_kernel(
        {S1, V1}, {X1},
        get_rows(require(sec, "x1_given_s1v1", "chain"),
                 static_cast<std::size_t>(src.s1_size()) * out.v1_size, w1,
                 "chain.x1_given_s1v1"),
        "chain.x1_given_s1v1");
    c.x2_given_s2v2 = make_kernel(
        {S2, V2}, {X2},
        get_rows(require(sec, "x2_given_s2v2", "chain"),
                 static_cast<std::size_t>(src.s2_size()) * out.v2_size, w2,
                 "chain.x2_given_s2v2"),
        "chain.x2_given_s2v2");
    c.x3_given_v1v2 = std::move(x3);
    out.chain_thm1 = std::move(c);
    return;
  }

  InputChainSeparation c;
  c.p_v1 = pv("p_v1", V1);
  c.p_v2 = pv("p_v2", V2);
  c.x1_given_v1 = make_kernel({V1}, {X1},
                              get_rows(require(sec, "x1_given_v1", "chain"),
                                       static_cast<std::size_t>(out.v1_size), w1,
                                       "chain.x1_given_v1"),
                              "chain.x1_given_v1");
  c.x2_given_v2 = make_kernel({V2}, {X2},
                              get_rows(require(sec, "x2_given_v2", "chain"),
                                       static_cast<std::size_t>(out.v2_size), w2,
                                       "chain.x2_given_v2"),
                              "chain.x2_given_v2");
  c.x3_given_v1v2 = std::move(x3);
  out.chain_separation = std::move(c);
}

void parse_sim(const json& sec, SimConfig& cfg) {
  expect_keys(sec, {"n", "blocks", "rate1", "rate2", "epsilon", "trials", "seed"}, "sim");
  if (sec.contains("n")) cfg.n = get_int(sec["n"], "sim.n");
  if (sec.contains("blocks")) cfg.blocks = get_int(sec["blocks"], "sim.blocks");
  if (sec.contains("rate1")) cfg.rate1 = get_num(sec["rate1"], "sim.rate1");
  if (sec.contains("rate2")) cfg.rate2 = get_num(sec["rate2"], "sim.rate2");
  if (sec.contains("epsilon")) cfg.epsilon = get_num(sec["epsilon"], "sim.epsilon");
  if (sec.contains("trials")) {
    if (!sec["trials"].is_number_integer()) fail(exit_schema, "sim.trials must be an integer");
    cfg.trials = sec["trials"].get<std::int64_t>();
  }
  if (sec.contains("seed")) {
    if (!sec["seed"].is_number_integer()) fail(exit_schema, "sim.seed must be an integer");
    cfg.seed = sec["seed"].get<std::uint64_t>();
  }
}

json kernel_rows_json(const Kernel& k) { return json(k.rows()); }

// Semantic content only, presets resolved; object keys serialize sorted, so
// the digest ignores file-level key order.
json canonical_form(const ScenarioFile& sc) {
  json c;
  c["source"] = {{"sizes",
                  {sc.source.s1_size(), sc.source.s2_size(), sc.source.w_size(),
                   sc.source.w3_size()}},
                 {"pmf", sc.source.pmf.probs()}};
  json ch = {{"sizes",
              {sc.channel.x1_size(), sc.channel.x2_size(), sc.channel.x3_size(),
               sc.channel.y_size(), sc.channel.y3_size()}},
             {"rows", kernel_rows_json(sc.channel.kernel)}};
  if (sc.channel.somarc) {
    ch["somarc"] = {sc.channel.somarc->yr_size, sc.channel.somarc->ys_size};
  }
  c["channel"] = ch;

  if (!sc.has_chain) {
    c["chain"] = nullptr;
  } else if (sc.chain_optimize) {
    c["chain"] = {{"family", chain_family_name(sc.family)},
                  {"optimize", true},
                  {"v1_size", sc.v1_size},
                  {"v2_size", sc.v2_size}};
  } else if (sc.chain_thm2) {
    c["chain"] = {{"family", "thm2"},
                  {"x1_given_s1", kernel_rows_json(sc.chain_thm2->x1_given_s1)},
                  {"x2_given_s2", kernel_rows_json(sc.chain_thm2->x2_given_s2)},
                  {"x3_given_s1s2", kernel_rows_json(sc.chain_thm2->x3_given_s1s2)}};
  } else if (sc.chain_thm1) {
    c["chain"] = {{"family", "thm1"},
                  {"p_v1", sc.chain_thm1->p_v1.probs()},
                  {"p_v2", sc.chain_thm1->p_v2.probs()},
                  {"x1_given_s1v1", kernel_rows_json(sc.chain_thm1->x1_given_s1v1)},
                  {"x2_given_s2v2", kernel_rows_json(sc.chain_thm1->x2_given_s2v2)},
                  {"x3_given_v1v2", kernel_rows_json(sc.chain_thm1->x3_given_v1v2)}};
  } else {
    c["chain"] = {{"family", "separation"},
                  {"p_v1", sc.chain_separation->p_v1.probs()},
                  {"p_v2", sc.chain_separation->p_v2.probs()},
                  {"x1_given_v1", kernel_rows_json(sc.chain_separation->x1_given_v1)},
                  {"x2_given_v2", kernel_rows_json(sc.chain_separation->x2_given_v2)},
                  {"x3_given_v1v2", kernel_rows_json(sc.chain_separation->x3_given_v1v2)}};
  }

  c["sim"] = {{"n", sc.sim.n},         {"blocks", sc.sim.blocks},
              {"rate1", sc.sim.rate1}, {"rate2", sc.sim.rate2},
              {"epsilon", sc.sim.epsilon}, {"trials", sc.sim.trials},
              {"seed", sc.sim.seed}};
  return c;
}

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(exit_schema, std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) fail(exit_schema, "scenario: top level must be an object");
  expect_keys(doc, {"name", "notes", "preset", "source", "channel", "chain", "sim"},
              "scenario");

  ScenarioFile sc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail(exit_schema, "scenario.name must be a string");
    sc.name = doc["name"].get<std::string>();
  }

  bool have_source = false, have_channel = false;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) fail(exit_schema, "scenario.preset must be a string");
    const std::string p = doc["preset"].get<std::string>();
    if (p != "somarc-eq3") fail(exit_unknown_preset, "scenario: unknown preset '" + p + "'");
    sc.source = somarc_example_source();
    sc.channel = somarc_example_channel();
    have_source = have_channel = true;
  }
  if (doc.contains("source")) {
    sc.source = parse_source(doc["source"]);
    have_source = true;
  }
  if (doc.contains("channel")) {
    sc.channel = parse_channel(doc["channel"]);
    have_channel = true;
  }
  if (!have_source) fail(exit_schema, "scenario: no source section and no preset");
  if (!have_channel) fail(exit_schema, "scenario: no channel section and no preset");

  if (doc.contains("chain")) {
    try {
      parse_chain(doc["chain"], sc);
    } catch (const json::type_error& e) {
      fail(exit_schema, std::string("chain: ") + e.what());
    }
  }
  if (doc.contains("sim")) parse_sim(doc["sim"], sc.sim);

  sc.canonical = canonical_form(sc);
  return sc;
}

ScenarioFile parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(exit_io, "cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::uint64_t scenario_digest(const ScenarioFile& sc) {
  const std::string bytes = sc.canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

JointPmf assemble_scenario_joint(const ScenarioFile& sc) {
  if (sc.chain_thm2) return assemble_joint(sc.source, *sc.chain_thm2, sc.channel);
  if (sc.chain_thm1) return assemble_joint(sc.source, *sc.chain_thm1, sc.channel);
  if (sc.chain_separation) return assemble_joint(sc.source, *sc.chain_separation, sc.channel);
  fail(exit_command_mismatch, "scenario carries no chain tables (chain is absent or set to optimize)");
}

}  // namespace jscc
