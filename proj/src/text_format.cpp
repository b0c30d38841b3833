#include "pcpnet/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace pcpnet {

const Structure& ParsedModel::structure() const {
  return std::visit([](const auto& m) -> const Structure& { return m.structure(); },
                    model_);
}

const StructurePtr& ParsedModel::structure_ptr() const {
  return std::visit(
      [](const auto& m) -> const StructurePtr& { return m.structure_ptr(); },
      model_);
}

namespace {

bool name_head(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool name_tail(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// One source line with the comment stripped; fail() reports 1-based columns.
struct Cursor {
  std::string_view text;
  int line = 0;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line, static_cast<int>(pos) + 1, msg);
  }
  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool at_end() { return peek() == '\0'; }
  bool try_consume(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c, const char* what) {
    if (!try_consume(c)) fail(std::string("expected ") + what);
  }
  std::string ident() {
    if (!name_head(peek())) fail("expected a name");
    const std::size_t start = pos;
    while (pos < text.size() && name_tail(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }
  int bit() {
    const char c = peek();
    if (c != '0' && c != '1') fail("expected 0 or 1");
    ++pos;
    return c - '0';
  }
  double number() {
    skip_ws();
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    double value = 0.0;
    auto [next, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || next == begin) fail("expected a number");
    pos += static_cast<std::size_t>(next - begin);
    return value;
  }
};

std::vector<std::pair<int, std::string_view>> significant_lines(
    std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line;
    std::size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(
        start, nl == std::string_view::npos ? text.size() - start : nl - start);
    if (std::size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    std::size_t last = raw.find_last_not_of(" \t\r");
    raw = last == std::string_view::npos ? std::string_view{} : raw.substr(0, last + 1);
    if (!raw.empty()) out.emplace_back(line, raw);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

std::string slot_label(const Structure& s, int slot_id) {
  const RuleSlot slot = s.slot(slot_id);
  std::string label = s.name(slot.var);
  const auto& ps = s.parents(slot.var);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    label += j == 0 ? " | " : ", ";
    label += s.name(ps[j]);
    label += '=';
    label += char('0' + ((slot.ctx >> (ps.size() - 1 - j)) & 1u));
  }
  return label;
}

}  // namespace

NetDocument parse_net_document(std::string_view text) {
  NetDocument doc;
  const auto lines = significant_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing header line");

  {
    Cursor c{lines[0].second, lines[0].first};
    const std::string head = c.ident();
    if (head == "pcpnet") {
      doc.kind = NetKind::pcp;
    } else if (head == "cpnet") {
      doc.kind = NetKind::det;
      if (!c.at_end()) {
        if (c.ident() != "incomplete")
          c.fail("expected 'incomplete' or end of line");
        doc.kind = NetKind::incomplete;
      }
    } else {
      c.fail("expected header 'pcpnet', 'cpnet' or 'cpnet incomplete'");
    }
    if (!c.at_end()) c.fail("unexpected text after header");
  }

  bool rules_started = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Cursor c{lines[i].second, lines[i].first};
    const std::size_t mark = c.pos;
    std::string first = c.ident();
    if (first == "var") {
      if (rules_started) c.fail("variable declared after the first rule");
      NetDocument::VarDecl decl;
      decl.line = c.line;
      decl.name = c.ident();
      if (c.try_consume('<')) {
        c.expect('-', "'<-'");
        decl.parents.push_back(c.ident());
        while (c.try_consume(',')) decl.parents.push_back(c.ident());
      }
      if (!c.at_end()) c.fail("unexpected text after variable declaration");
      doc.vars.push_back(std::move(decl));
      continue;
    }

    rules_started = true;
    NetDocument::TableLine row;
    row.line = c.line;
    row.column = static_cast<int>(mark) + 1;
    row.var = std::move(first);
    if (c.try_consume('|')) {
      do {
        std::string p = c.ident();
        c.expect('=', "'='");
        row.context.emplace_back(std::move(p), c.bit());
      } while (c.try_consume(','));
    }
    c.expect(':', "':'");
    const int hi = c.bit();
    c.expect('>', "'>'");
    const int lo = c.bit();
    if (hi == lo) c.fail("preference must order the two values");
    row.orient = hi == 1 ? Orientation::prefers_one : Orientation::prefers_zero;
    if (c.peek() == '(') {
      if (doc.kind != NetKind::pcp)
        c.fail("probability annotations belong to pcpnet files only");
      c.expect('(', "'('");
      row.prob = c.number();
      c.expect(')', "')'");
    } else if (doc.kind == NetKind::pcp) {
      c.fail("pcpnet rules need a probability, e.g. 1>0 (0.8)");
    }
    if (!c.at_end()) c.fail("unexpected text after rule");
    doc.table.push_back(std::move(row));
  }
  return doc;
}

ParsedModel document_to_model(const NetDocument& doc) {
  if (doc.vars.empty()) throw SemanticError("net declares no variables");

  std::vector<std::string> names;
  names.reserve(doc.vars.size());
  std::unordered_map<std::string, VarIndex> index;
  for (const auto& v : doc.vars) {
    index.emplace(v.name, static_cast<VarIndex>(names.size()));
    names.push_back(v.name);
  }
  auto resolve = [&](const std::string& name, int line) {
    auto it = index.find(name);
    if (it == index.end())
      throw SemanticError("line " + std::to_string(line) + ": unknown variable '" +
                          name + "'");
    return it->second;
  };

  std::vector<std::vector<VarIndex>> parents(names.size());
  for (std::size_t i = 0; i < doc.vars.size(); ++i)
    for (const std::string& p : doc.vars[i].parents)
      parents[i].push_back(resolve(p, doc.vars[i].line));
  StructurePtr s = Structure::make(std::move(names), std::move(parents));

  std::vector<std::optional<Orientation>> table(
      static_cast<std::size_t>(s->slot_count()));
  std::vector<std::optional<double>> probs(
      static_cast<std::size_t>(s->slot_count()));
  for (const auto& row : doc.table) {
    const VarIndex v = resolve(row.var, row.line);
    const auto& ps = s->parents(v);
    std::uint32_t ctx = 0;
    std::vector<bool> seen(ps.size(), false);
    for (const auto& [pname, value] : row.context) {
      const VarIndex p = resolve(pname, row.line);
      const auto it = std::find(ps.begin(), ps.end(), p);
      if (it == ps.end())
        throw SemanticError("line " + std::to_string(row.line) + ": '" + pname +
                            "' is not a parent of '" + row.var + "'");
      const std::size_t j = static_cast<std::size_t>(it - ps.begin());
      if (seen[j])
        throw SemanticError("line " + std::to_string(row.line) +
                            ": parent '" + pname + "' assigned twice");
      seen[j] = true;
      if (value)
        ctx |= 1u << (ps.size() - 1 - j);
    }
    if (row.context.size() != ps.size())
      throw SemanticError("line " + std::to_string(row.line) +
                          ": rule must assign every parent of '" + row.var +
                          "'");
    const int slot = s->slot_id(v, ctx);
    if (table[static_cast<std::size_t>(slot)].has_value())
      throw SemanticError("line " + std::to_string(row.line) +
                          ": duplicate rule for " + slot_label(*s, slot));
    table[static_cast<std::size_t>(slot)] = row.orient;
    if (row.prob.has_value()) {
      if (!(*row.prob >= 0.0 && *row.prob <= 1.0))
        throw SemanticError("line " + std::to_string(row.line) +
                            ": probability outside [0, 1]");
      probs[static_cast<std::size_t>(slot)] = row.prob;
    }
  }

  if (doc.kind != NetKind::incomplete) {
    for (int sl = 0; sl < s->slot_count(); ++sl)
      if (!table[static_cast<std::size_t>(sl)].has_value())
        throw SemanticError("missing rule for " + slot_label(*s, sl));
  }

  switch (doc.kind) {
    case NetKind::det: {
      std::vector<Orientation> t;
      t.reserve(table.size());
      for (const auto& e : table) t.push_back(*e);
      return ParsedModel(CPNet(s, std::move(t)));
    }
    case NetKind::pcp: {
      // Normalize to the probability of the value-1 orientation.
      std::vector<double> p(table.size());
      for (std::size_t i = 0; i < table.size(); ++i)
        p[i] = *table[i] == Orientation::prefers_one ? *probs[i]
                                                     : 1.0 - *probs[i];
      return ParsedModel(PCPNet(s, std::move(p)));
    }
    case NetKind::incomplete:
      return ParsedModel(IncompleteCPNet(s, std::move(table)));
  }
  throw SemanticError("unreachable");
}

ParsedModel parse_net(std::string_view text) {
  return document_to_model(parse_net_document(text));
}

std::string format_probability(double p) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), p);
  (void)ec;
  return std::string(buf, end);
}

namespace {

std::string serialize_common(const Structure& s, NetKind kind) {
  std::string out;
  switch (kind) {
    case NetKind::det: out = "cpnet\n"; break;
    case NetKind::pcp: out = "pcpnet\n"; break;
    case NetKind::incomplete: out = "cpnet incomplete\n"; break;
  }
  for (VarIndex v = 0; v < s.var_count(); ++v) {
    out += "var ";
    out += s.name(v);
    const auto& ps = s.parents(v);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      out += j == 0 ? " <- " : ", ";
      out += s.name(ps[j]);
    }
    out += '\n';
  }
  return out;
}

std::string rule_line(const Structure& s, int slot_id, Orientation o) {
  std::string line = slot_label(s, slot_id);
  line += o == Orientation::prefers_one ? " : 1>0" : " : 0>1";
  return line;
}

}  // namespace

std::string serialize(const CPNet& n) {
  const Structure& s = n.structure();
  std::string out = serialize_common(s, NetKind::det);
  for (int sl = 0; sl < s.slot_count(); ++sl) {
    out += rule_line(s, sl, n.orientation(sl));
    out += '\n';
  }
  return out;
}

std::string serialize(const IncompleteCPNet& n) {
  const Structure& s = n.structure();
  std::string out = serialize_common(s, NetKind::incomplete);
  for (int sl = 0; sl < s.slot_count(); ++sl) {
    if (!n.orientation(sl).has_value()) continue;
    out += rule_line(s, sl, *n.orientation(sl));
    out += '\n';
  }
  return out;
}

std::string serialize(const PCPNet& n) {
  const Structure& s = n.structure();
  std::string out = serialize_common(s, NetKind::pcp);
  for (int sl = 0; sl < s.slot_count(); ++sl) {
    out += rule_line(s, sl, Orientation::prefers_one);
    out += " (";
    out += format_probability(n.prob_one(sl));
    out += ")\n";
  }
  return out;
}

std::string serialize(const ParsedModel& m) {
  switch (m.kind()) {
    case NetKind::det: return serialize(m.det());
    case NetKind::pcp: return serialize(m.pcp());
    case NetKind::incomplete: return serialize(m.incomplete());
  }
  return {};
}

Outcome parse_outcome(std::string_view text, const Structure& s) {
  Outcome o;
  o.values.assign(static_cast<std::size_t>(s.var_count()), 0);
  std::vector<bool> seen(static_cast<std::size_t>(s.var_count()), false);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(
        start, comma == std::string_view::npos ? text.size() - start
                                               : comma - start);
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos)
      throw SemanticError("outcome entries look like NAME=0 or NAME=1");
    auto trim = [](std::string_view v) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
      while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
      return v;
    };
    const std::string_view name = trim(part.substr(0, eq));
    const std::string_view val = trim(part.substr(eq + 1));
    const auto idx = s.index_of(name);
    if (!idx)
      throw SemanticError("unknown variable '" + std::string(name) + "' in outcome");
    if (seen[static_cast<std::size_t>(*idx)])
      throw SemanticError("variable '" + std::string(name) + "' assigned twice");
    seen[static_cast<std::size_t>(*idx)] = true;
    if (val != "0" && val != "1")
      throw SemanticError("variable '" + std::string(name) + "' must be 0 or 1");
    o.set(*idx, val == "1" ? 1 : 0);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (VarIndex v = 0; v < s.var_count(); ++v)
    if (!seen[static_cast<std::size_t>(v)])
      throw SemanticError("outcome misses variable '" + s.name(v) + "'");
  return o;
}

std::string format_outcome(const Outcome& o, const Structure& s) {
  detail::require_outcome(s, o);
  std::string out;
  for (VarIndex v = 0; v < s.var_count(); ++v) {
    if (v) out += ',';
    out += s.name(v);
    out += '=';
    out += char('0' + o.value(v));
  }
  return out;
}

}  // namespace pcpnet
