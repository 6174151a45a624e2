#include "jscc/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace jscc {

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// One aligned table: rows of cells, first row is the header.
std::string align_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return yes_no(v.get<bool>());
  if (v.is_number_float()) return fmt_bits(v.get<double>());
  return v.dump();
}

void render_feasibility(std::ostringstream& out, const json& fe) {
  out << "feasibility [" << fe.at("scheme").get<std::string>() << "]\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"id", "lhs_bits", "rhs_bits", "margin_bits", "satisfied", "boundary"});
  for (const auto& c : fe.at("conditions")) {
    rows.push_back({c.at("id").get<std::string>(), fmt_bits(c.at("lhs_bits").get<double>()),
                    fmt_bits(c.at("rhs_bits").get<double>()),
                    fmt_bits(c.at("margin_bits").get<double>()),
                    yes_no(c.at("satisfied").get<bool>()),
                    yes_no(c.at("boundary").get<bool>())});
  }
  out << align_table(rows);
  out << "overall: " << (fe.at("overall").get<bool>() ? "feasible" : "not feasible")
      << "   min_margin_bits: " << fmt_bits(fe.at("min_margin_bits").get<double>()) << '\n';
  const std::string note = fe.at("note").get<std::string>();
  if (!note.empty()) out << "note: " << note << '\n';
}

void render_plain_object(std::ostringstream& out, const std::string& name, const json& obj) {
  out << name << '\n';
  std::vector<std::vector<std::string>> rows;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it.value().is_structured()) {
      rows.push_back({it.key(), it.value().dump()});
    } else {
      rows.push_back({it.key(), scalar_text(it.value())});
    }
  }
  out << align_table(rows);
}

void render_optimizer(std::ostringstream& out, const json& op) {
  out << "optimizer\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"best_value_bits", fmt_bits(op.at("best_value_bits").get<double>())});
  rows.push_back({"starts", op.at("starts").dump()});
  rows.push_back({"evaluations", op.at("evaluations").dump()});
  rows.push_back({"family", op.at("best_chain").at("family").get<std::string>()});
  out << align_table(rows);
  out << "best_chain blocks:\n";
  for (const auto& block : op.at("best_chain").at("blocks")) {
    out << " ";
    for (const auto& p : block) out << ' ' << fmt_bits(p.get<double>());
    out << '\n';
  }
}

void render_sim(std::ostringstream& out, const json& sim) {
  render_plain_object(out, "simulation config", sim.at("config"));
  json rest = sim;
  rest.erase("config");
  render_plain_object(out, "simulation results", rest);
}

}  // namespace

std::string fmt_bits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json to_json(const Condition& c) {
  return {{"id", c.id},
          {"lhs_bits", c.lhs_bits},
          {"rhs_bits", c.rhs_bits},
          {"margin_bits", c.margin_bits},
          {"satisfied", c.satisfied},
          {"boundary", c.boundary}};
}

json to_json(const ConditionReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back(to_json(c));
  return {{"scheme", scheme_name(r.scheme)},
          {"conditions", conds},
          {"overall", r.overall},
          {"min_margin_bits", r.min_margin_bits},
          {"note", r.note}};
}

json to_json(const SumBound& b) {
  return {{"bound_bits", b.bound_bits},
          {"direct_cut_bits", b.direct_cut_bits},
          {"coop_cut_bits", b.coop_cut_bits}};
}

json to_json(const ParamChain& c) {
  return {{"family", chain_family_name(c.family)}, {"blocks", c.blocks}};
}

json to_json(const OptResult& r) {
  return {{"best_value_bits", r.best_value_bits},
          {"best_chain", to_json(r.best_chain)},
          {"trace", r.trace},
          {"evaluations", r.evaluations},
          {"starts", r.starts}};
}

json to_json(const GridResult& r) {
  return {{"best_value_bits", r.best_value_bits},
          {"best_chain", to_json(r.best_chain)},
          {"points", r.points}};
}

json to_json(const SimConfig& c) {
  return {{"n", c.n},     {"blocks", c.blocks},   {"rate1", c.rate1}, {"rate2", c.rate2},
          {"epsilon", c.epsilon}, {"trials", c.trials}, {"seed", c.seed}};
}

json to_json(const SimReport& r) {
  return {{"config", to_json(r.config)},
          {"bins1", r.bins1},
          {"bins2", r.bins2},
          {"relay_block_errors", r.relay_block_errors},
          {"dest_block_errors", r.dest_block_errors},
          {"session_errors", r.session_errors},
          {"blocks_total", r.blocks_total},
          {"relay_block_error_rate", r.relay_block_error_rate},
          {"dest_block_error_rate", r.dest_block_error_rate},
          {"session_error_rate", r.session_error_rate},
          {"wilson_low", r.wilson_low},
          {"wilson_high", r.wilson_high}};
}

json to_json(const TraceRow& t) {
  return {{"trial", t.trial}, {"block", t.block}, {"stage", t.stage}, {"verdict", t.verdict}};
}

json to_json(const RateHint& h) {
  return {{"r1", h.r1},
          {"r2", h.r2},
          {"delta", h.delta},
          {"sum_floor_bits", h.sum_floor_bits},
          {"sum_ok", h.sum_ok}};
}

json to_json(const UncodedReport& r) {
  return {{"trials", r.trials}, {"errors", r.errors}, {"error_rate", r.error_rate}};
}

std::string emit_text(const Report& rep) {
  std::ostringstream out;
  out << "command: " << rep.command << '\n';
  out << "digest:  " << hex64(rep.digest) << '\n';
  out << "version: " << tool_version << '\n';
  if (!rep.flags.empty()) {
    out << "flags:  ";
    for (auto it = rep.flags.begin(); it != rep.flags.end(); ++it) {
      out << ' ' << it.key() << '=' << scalar_text(it.value());
    }
    out << '\n';
  }
  out << '\n';
  for (auto it = rep.results.begin(); it != rep.results.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "feasibility") {
      render_feasibility(out, v);
    } else if (key == "optimizer") {
      render_optimizer(out, v);
    } else if (key == "sim") {
      render_sim(out, v);
    } else if (key == "trace") {
      out << "trace rows: " << v.size() << " (use --format csv to export)\n";
    } else if (v.is_object()) {
      render_plain_object(out, key, v);
    } else if (v.is_array()) {
      out << key << ":";
      for (const auto& x : v) out << ' ' << scalar_text(x);
      out << '\n';
    } else {
      out << key << ": " << scalar_text(v) << '\n';
    }
    out << '\n';
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", rep.elapsed_seconds);
  out << "elapsed_seconds: " << buf << '\n';
  return out.str();
}

std::string emit_structured(const Report& rep) {
  json doc = {{"command", rep.command},
              {"digest", hex64(rep.digest)},
              {"version", tool_version},
              {"flags", rep.flags},
              {"results", rep.results}};
  return doc.dump(2) + "\n";
}

std::string emit_csv(const Report& rep) {
  std::ostringstream out;
  const json& res = rep.results;
  if (res.contains("trace")) {
    out << "trial,block,stage,verdict\n";
    for (const auto& t : res["trace"]) {
      out << t.at("trial").get<std::int64_t>() << ',' << t.at("block").get<int>() << ','
          << t.at("stage").get<std::string>() << ',' << t.at("verdict").get<std::string>()
          << '\n';
    }
    return out.str();
  }
  if (res.contains("feasibility")) {
    const json& fe = res["feasibility"];
    out << "scheme,id,lhs_bits,rhs_bits,margin_bits,satisfied,boundary\n";
    const std::string scheme = fe.at("scheme").get<std::string>();
    for (const auto& c : fe.at("conditions")) {
      out << scheme << ',' << c.at("id").get<std::string>() << ','
          << fmt_bits(c.at("lhs_bits").get<double>()) << ','
          << fmt_bits(c.at("rhs_bits").get<double>()) << ','
          << fmt_bits(c.at("margin_bits").get<double>()) << ','
          << (c.at("satisfied").get<bool>() ? 1 : 0) << ','
          << (c.at("boundary").get<bool>() ? 1 : 0) << '\n';
    }
    return out.str();
  }
  if (res.contains("sim")) {
    const json& s = res["sim"];
    const json& c = s.at("config");
    out << "n,blocks,trials,bins1,bins2,relay_block_errors,dest_block_errors,"
           "session_errors,relay_block_error_rate,dest_block_error_rate,"
           "session_error_rate,wilson_low,wilson_high\n";
    out << c.at("n").get<int>() << ',' << c.at("blocks").get<int>() << ','
        << c.at("trials").get<std::int64_t>() << ',' << s.at("bins1").get<int>() << ','
        << s.at("bins2").get<int>() << ',' << s.at("relay_block_errors").get<std::int64_t>()
        << ',' << s.at("dest_block_errors").get<std::int64_t>() << ','
        << s.at("session_errors").get<std::int64_t>() << ','
        << fmt_bits(s.at("relay_block_error_rate").get<double>()) << ','
        << fmt_bits(s.at("dest_block_error_rate").get<double>()) << ','
        << fmt_bits(s.at("session_error_rate").get<double>()) << ','
        << fmt_bits(s.at("wilson_low").get<double>()) << ','
        << fmt_bits(s.at("wilson_high").get<double>()) << '\n';
    return out.str();
  }
  if (res.contains("optimizer")) {
    out << "start,best_value_bits\n";
    const json& tr = res["optimizer"].at("trace");
    for (std::size_t i = 0; i < tr.size(); ++i) {
      out << i << ',' << fmt_bits(tr[i].get<double>()) << '\n';
    }
    return out.str();
  }
  if (res.contains("sum_bound")) {
    const json& b = res["sum_bound"];
    out << "bound_bits,direct_cut_bits,coop_cut_bits\n";
    out << fmt_bits(b.at("bound_bits").get<double>()) << ','
        << fmt_bits(b.at("direct_cut_bits").get<double>()) << ','
        << fmt_bits(b.at("coop_cut_bits").get<double>()) << '\n';
    return out.str();
  }
  // fallback: flat quantity,value rows; one level of object nesting, arrays skipped
  out << "quantity,value\n";
  for (auto it = res.begin(); it != res.end(); ++it) {
    if (it.value().is_object()) {
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
        if (!jt.value().is_structured()) {
          out << it.key() << '.' << jt.key() << ',' << scalar_text(jt.value()) << '\n';
        }
      }
    } else if (!it.value().is_array()) {
      out << it.key() << ',' << scalar_text(it.value()) << '\n';
    }
  }
  return out.str();
}

std::string emit(const Report& rep, const std::string& format) {
  if (format == "text") return emit_text(rep);
  if (format == "structured") return emit_structured(rep);
  if (format == "csv") return emit_csv(rep);
  throw std::invalid_argument("unknown format '" + format + "'");
}

}  // namespace jscc
