#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pcpnet/model.hpp"

namespace pcpnet {

enum class NetKind { det, pcp, incomplete };

// Syntactic form of a net file, before name resolution and completeness
// checks. Line/column positions are 1-based and point into the source text.
struct NetDocument {
  struct VarDecl {
    std::string name;
    std::vector<std::string> parents;
    int line = 0;
  };
  struct TableLine {
    std::string var;
    std::vector<std::pair<std::string, int>> context;  // parent name, value
    Orientation orient = Orientation::prefers_one;
    std::optional<double> prob;
    int line = 0;
    int column = 0;
  };

  NetKind kind = NetKind::det;
  std::vector<VarDecl> vars;
  std::vector<TableLine> table;
};

// One parsed model of any kind.
class ParsedModel {
 public:
  explicit ParsedModel(CPNet n) : model_(std::move(n)) {}
  explicit ParsedModel(PCPNet n) : model_(std::move(n)) {}
  explicit ParsedModel(IncompleteCPNet n) : model_(std::move(n)) {}

  NetKind kind() const {
    if (std::holds_alternative<CPNet>(model_)) return NetKind::det;
    if (std::holds_alternative<PCPNet>(model_)) return NetKind::pcp;
    return NetKind::incomplete;
  }
  const CPNet& det() const { return std::get<CPNet>(model_); }
  const PCPNet& pcp() const { return std::get<PCPNet>(model_); }
  const IncompleteCPNet& incomplete() const {
    return std::get<IncompleteCPNet>(model_);
  }
  const Structure& structure() const;
  const StructurePtr& structure_ptr() const;

 private:
  std::variant<CPNet, PCPNet, IncompleteCPNet> model_;
};

// Grammar, line oriented; '#' starts a comment anywhere:
//   header:  "pcpnet" | "cpnet" | "cpnet incomplete"
//   var:     "var NAME" | "var NAME <- P1, P2"
//   rule:    "NAME : 1>0"                  (det/incomplete)
//            "NAME | P=0, Q=1 : 0>1"
//            "NAME : 1>0 (0.8)"            (pcpnet: probability required)
// Variable lines precede rule lines. Rules may be omitted only in
// "cpnet incomplete" files. Throws ParseError with position info.
NetDocument parse_net_document(std::string_view text);

// Resolves names, checks rule coverage and probability ranges, builds the
// model. Throws SemanticError or CycleDetected.
ParsedModel document_to_model(const NetDocument& doc);

// Both stages.
ParsedModel parse_net(std::string_view text);

// Inverse of parsing, in the fixed slot order. Probabilities print in the
// shortest form that parses back to the identical double, so
// parse(serialize(m)) == m for every model m.
std::string serialize(const CPNet& n);
std::string serialize(const PCPNet& n);
std::string serialize(const IncompleteCPNet& n);
std::string serialize(const ParsedModel& m);

// "A=1,B=0" with every variable exactly once. Throws SemanticError.
Outcome parse_outcome(std::string_view text, const Structure& s);
std::string format_outcome(const Outcome& o, const Structure& s);

std::string format_probability(double p);  // shortest round-trip form

}  // namespace pcpnet
