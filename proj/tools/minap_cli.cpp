#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "minap/constructions.hpp"
#include "minap/decompose.hpp"
#include "minap/dsl.hpp"
#include "minap/radical.hpp"
#include "minap/tseq.hpp"

#ifndef MINAP_VERSION
#define MINAP_VERSION "0.0.0"
#endif

using nlohmann::json;
using namespace minap;

namespace {

// Everything a subcommand reports. The text form goes to stdout without
// --json; the json fields form the stable schema.
struct Report {
  std::string command;
  json inputs = json::object();
  json verdict;
  json certificate = json::array();
  json window = nullptr;
  std::string text;
  int exit_code = 0;
};

std::string classes_text(const PrimaryClasses& c) {
  if (c.empty()) return "trivial";
  std::string s;
  for (const auto& [key, card] : c) {
    if (!s.empty()) s += " + ";
    s += "Z(" + key.first.get_str() + "^" + std::to_string(key.second) + ")^" + card.to_string();
  }
  return s;
}

json decomposition_json(const Decomposition& d) {
  json parts = json::array();
  for (const auto& part : d.parts) {
    json gens = json::array();
    for (const auto& x : part.gens) gens.push_back(d.ambient.format(x));
    parts.push_back({{"name", part.name}, {"gens", gens}, {"rule", part.rule}, {"classes", classes_text(part.classes)}});
  }
  return {{"label", d.label()},
          {"relation", d.relation == Decomposition::Relation::DirectSum ? "DIRECT_SUM" : "SUM"},
          {"verified", d.verified},
          {"parts", parts},
          {"certificate", d.certificate}};
}

std::string decomposition_text(const Decomposition& d, const std::string& indent) {
  std::ostringstream os;
  os << indent << d.label() << (d.relation == Decomposition::Relation::DirectSum ? " direct sum" : " sum")
     << (d.verified ? ", verified" : ", NOT verified") << "\n";
  for (const auto& part : d.parts) {
    os << indent << "  " << part.name;
    if (!part.classes.empty()) os << " [" << classes_text(part.classes) << "]";
    if (!part.rule.empty()) os << " rule: " << part.rule;
    os << "\n";
    for (const auto& x : part.gens) os << indent << "    " << d.ambient.format(x) << "\n";
  }
  return os.str();
}

Report run_construct(const std::string& group_file, std::size_t index) {
  Report r;
  r.command = "construct";
  r.inputs = {{"group", group_file}, {"index", index}};
  const BlockGroup g = parse_group(read_text_file(group_file));
  const auto p = TriangularParams::from_group(g);
  std::ostringstream os;
  os << "case " << p.case_name() << "\n";
  json terms = json::array();
  for (std::size_t n = 0; n <= index; ++n) {
    const Element d = triangular_term(p, n);
    std::string note;
    if (n % 2 == 0) {
      const auto [block, coeff] = even_position(p, n / 2);
      note = coeff.get_str() + "*e_" + std::to_string(block);
    } else {
      const std::size_t half = n / 2;
      note = "b_" + std::to_string(odd_b_index(p, half));
      if (const auto range = odd_e_range(p, half)) {
        note += " + e_" + std::to_string(range->first) + ".." + std::to_string(range->second);
      }
    }
    os << "d_" << n << " = " << to_string(d) << "    (" << note << ")\n";
    terms.push_back({{"n", n}, {"term", to_string(d)}, {"shape", note}});
  }
  r.verdict = {{"case", p.case_name()}, {"terms", terms}};
  r.certificate.push_back("sequence: " + triangular_sequence(p).describe());
  r.window = index;
  r.text = os.str();
  return r;
}

Report run_tseq_check(const std::string& group_file, const std::string& expr, unsigned k, std::size_t m_max,
                      std::size_t prefix) {
  Report r;
  r.command = "tseq-check";
  r.inputs = {{"group", group_file}, {"element", expr}, {"k", k}, {"mmax", m_max}, {"prefix", prefix}};
  const BlockGroup g = parse_group(read_text_file(group_file));
  const Element x = parse_element(g, expr);
  if (x.is_zero()) throw Error(ErrorCode::ZeroElement, "g must be nonzero");
  const auto p = TriangularParams::from_group(g);
  const Verdict v = check_criterion(triangular_sequence(p), x, k, m_max, prefix);
  json witnesses = json::array();
  for (const auto& [m, w] : v.witnesses) witnesses.push_back({{"m", m}, {"representation", w.to_string()}});
  r.verdict = {{"kind", verdict_kind_name(v.kind)}, {"m", v.m}, {"n_prefix", v.n_prefix}};
  r.certificate.push_back({{"tail", v.certificate.kind},
                           {"sound", v.certificate.sound},
                           {"detail", v.certificate.detail},
                           {"witnesses", witnesses},
                           {"report", v.report}});
  r.window = v.n_prefix;
  switch (v.kind) {
    case Verdict::Kind::Excluded: r.exit_code = 0; break;
    case Verdict::Kind::MemberUpTo: r.exit_code = 2; break;
    case Verdict::Kind::Inconclusive: r.exit_code = 3; break;
  }
  std::ostringstream os;
  os << verdict_kind_name(v.kind) << " m=" << v.m << " prefix=" << v.n_prefix << "\n"
     << "tail: " << (v.certificate.kind.empty() ? "none" : v.certificate.kind) << (v.certificate.sound ? " (sound) " : " ") << v.certificate.detail << "\n";
  for (const auto& [m, w] : v.witnesses) os << "  m=" << m << ": " << w.to_string() << "\n";
  if (!v.report.empty()) os << v.report << "\n";
  r.text = os.str();
  return r;
}

Report run_radical(const std::string& group_file, std::size_t bound, std::size_t window) {
  Report r;
  r.command = "radical";
  r.inputs = {{"group", group_file}, {"support", bound}, {"window", window}};
  const BlockGroup g = parse_group(read_text_file(group_file));
  const auto p = TriangularParams::from_group(g);
  const RadicalResult res = radical_of(p, bound, window);
  json blocks = json::object();
  std::ostringstream os;
  os << radical_tag_name(res.tag) << ": " << res.description << "\n";
  for (const auto& [j, gens] : res.blocks) {
    json list = json::array();
    os << "  block " << j << ":";
    for (const auto& x : gens) {
      list.push_back(to_string(x));
      os << " " << to_string(x);
    }
    if (gens.empty()) os << " 0";
    os << "\n";
    blocks[std::to_string(j)] = list;
  }
  r.verdict = {{"tag", radical_tag_name(res.tag)}, {"blocks", blocks}};
  r.certificate.push_back(res.description);
  r.certificate.push_back("characters checked: " + std::to_string(res.characters_checked));
  r.certificate.push_back(res.enumerated ? "block duals enumerated" : "block duals from annihilators");
  r.window = window;
  r.text = os.str();
  return r;
}

Report run_decompose(const std::string& group_file, const std::string& subgroup_file, std::size_t window) {
  Report r;
  r.command = "decompose";
  r.inputs = {{"group", group_file}, {"subgroup", subgroup_file}, {"window", window}};
  const BlockGroup g = parse_group(read_text_file(group_file));
  const SubgroupSpec h = parse_subgroup(g, read_text_file(subgroup_file));
  const CaseDispatch c = dispatch_case(g, h, window);
  json blocks = json::array();
  for (const auto& [e, hs] : c.blocks) {
    json hj = json::array();
    for (const auto& x : hs) hj.push_back(c.g0.ambient.format(x));
    blocks.push_back({{"e", c.g0.ambient.format(e)}, {"H", hj}});
  }
  r.verdict = {{"case", c.case_tag}, {"decomposition", decomposition_json(c.g0)}, {"blocks", blocks}};
  for (const auto& line : c.certificate) r.certificate.push_back(line);
  r.window = c.g0.window ? json(*c.g0.window) : json(nullptr);
  std::ostringstream os;
  os << "case " << c.case_tag << "\n" << decomposition_text(c.g0, "");
  os << "blocks (e_i; H_i):\n";
  for (const auto& [e, hs] : c.blocks) {
    os << "  " << c.g0.ambient.format(e) << ";";
    for (const auto& x : hs) os << " " << c.g0.ambient.format(x);
    os << "\n";
  }
  for (const auto& line : c.certificate) os << "  " << line << "\n";
  r.text = os.str();
  return r;
}

Report run_minap(const std::string& group_file) {
  Report r;
  r.command = "minap";
  r.inputs = {{"group", group_file}};
  const BlockGroup g = parse_group(read_text_file(group_file));
  const AdmissibleReport a = minap_admissible(g);
  r.verdict = {{"admissible", a.admissible}};
  if (!a.admissible) {
    r.verdict["witness"] = {{"p", a.p ? a.p->get_str() : ""},
                            {"m", a.m ? a.m->get_str() : ""},
                            {"image_order", a.image_order ? a.image_order->get_str() : ""}};
  }
  r.certificate.push_back(a.detail);
  std::ostringstream os;
  os << "admissible=" << (a.admissible ? "true" : "false") << "\n";
  if (!a.admissible && a.m) {
    os << "witness: g -> " << a.m->get_str() << "g has finite image of order "
       << (a.image_order ? a.image_order->get_str() : "?") << "\n";
  }
  os << a.detail << "\n";
  r.text = os.str();
  return r;
}

Report run_circle(const std::string& rule_text, const std::string& x_text) {
  Report r;
  r.command = "circle";
  r.inputs = {{"rule", rule_text}, {"x", x_text}};
  const ResidueSeqRule rule = parse_residue_rule(rule_text);
  Rational x;
  if (x.set_str(x_text, 10) != 0 || x.get_den() == 0) throw Error(ErrorCode::ParseError, "bad rational " + x_text);
  x.canonicalize();
  const CircleResult c = circle_membership(rule, x);
  json head = json::array(), cycle = json::array();
  for (const auto& v : c.head) head.push_back(v.get_str());
  for (const auto& v : c.cycle) cycle.push_back(v.get_str());
  r.verdict = {{"membership", c.in ? "IN" : "NOT_IN"}, {"preperiod", c.preperiod}, {"period", c.period}};
  r.certificate.push_back({{"head", head}, {"cycle", cycle}});
  std::ostringstream os;
  os << (c.in ? "IN" : "NOT_IN") << " preperiod=" << c.preperiod << " period=" << c.period << "\n";
  os << "residues u_n*a mod b: head [";
  for (std::size_t i = 0; i < c.head.size(); ++i) os << (i ? " " : "") << c.head[i].get_str();
  os << "] cycle [";
  for (std::size_t i = 0; i < c.cycle.size(); ++i) os << (i ? " " : "") << c.cycle[i].get_str();
  os << "]\n";
  r.text = os.str();
  return r;
}

json envelope(const Report& r) {
  return {{"command", r.command},
          {"version", MINAP_VERSION},
          {"inputs", r.inputs},
          {"verdict", r.verdict},
          {"certificate", r.certificate},
          {"window", r.window}};
}

int emit_error(const std::string& command, bool as_json, const std::string& code, const std::string& message,
               std::optional<std::pair<std::size_t, std::size_t>> pos = std::nullopt) {
  if (as_json) {
    json err = {{"code", code}, {"message", message}};
    if (pos) {
      err["line"] = pos->first;
      err["column"] = pos->second;
    }
    std::cout << json{{"command", command}, {"version", MINAP_VERSION}, {"error", err}}.dump(2) << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact T-sequence, radical and decomposition toolkit for countable abelian groups"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit the machine-readable report");

  std::string group_file, subgroup_file, element, rule, x_text;
  std::size_t index = 8, m_max = 16, prefix = 256, bound = 4, window = kDefaultWindow;
  unsigned k = 1;

  auto* construct = app.add_subcommand("construct", "Print d_0..d_N of the triangular T-sequence");
  construct->add_option("--group", group_file, "Group file")->required();
  construct->add_option("--index", index, "Last index N");

  auto* tseq = app.add_subcommand("tseq-check", "Bounded T-sequence criterion check");
  tseq->add_option("--group", group_file, "Group file")->required();
  tseq->add_option("--element", element, "Element expression, e.g. 3*e[5] + h[2,1]")->required();
  tseq->add_option("--k", k, "Coefficient bound k");
  tseq->add_option("--mmax", m_max, "Largest tail start m");
  tseq->add_option("--prefix", prefix, "Prefix length N");

  auto* radical = app.add_subcommand("radical", "Radical of the triangular T-sequence topology");
  radical->add_option("--group", group_file, "Group file")->required();
  radical->add_option("--support", bound, "Block bound B");
  radical->add_option("--window", window, "Prefix window");

  auto* decompose = app.add_subcommand("decompose", "Structural decomposition of (G, H)");
  decompose->add_option("--group", group_file, "Group file")->required();
  decompose->add_option("--subgroup", subgroup_file, "Subgroup file")->required();
  decompose->add_option("--window", window, "Window W");

  auto* minap = app.add_subcommand("minap", "Admissibility of a bounded group");
  minap->add_option("--group", group_file, "Group file")->required();

  auto* circle = app.add_subcommand("circle", "Membership of a rational in a characterized subgroup of the circle");
  circle->add_option("--rule", rule, "geom(q), affine(a,b[,u0]), list(...) or factorial")->required();
  circle->add_option("--x", x_text, "Rational A/B")->required();

  for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", as_json, "Emit the machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const std::string name = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    return emit_error(name, as_json, "USAGE", e.what());
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Report r;
    if (construct->parsed()) r = run_construct(group_file, index);
    if (tseq->parsed()) r = run_tseq_check(group_file, element, k, m_max, prefix);
    if (radical->parsed()) r = run_radical(group_file, bound, window);
    if (decompose->parsed()) r = run_decompose(group_file, subgroup_file, window);
    if (minap->parsed()) r = run_minap(group_file);
    if (circle->parsed()) r = run_circle(rule, x_text);
    if (as_json) {
      std::cout << envelope(r).dump(2) << "\n";
    } else {
      std::cout << r.text;
    }
    return r.exit_code;
  } catch (const ParseError& e) {
    return emit_error(name, as_json, error_code_name(e.code()), e.what(), std::make_pair(e.line(), e.column()));
  } catch (const Error& e) {
    return emit_error(name, as_json, error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return emit_error(name, as_json, "INTERNAL", e.what());
  }
}
