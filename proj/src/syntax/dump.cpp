#include "cop/dump.hpp"

#include <json.hpp>

namespace cop {
namespace {

using Json = nlohmann::ordered_json;

Json loc_of(SourceLoc loc) { return Json::array({loc.line, loc.column}); }

Json dump_expr(const Expr& e);
Json dump_stmt(const Stmt& s);

Json dump_args(const std::vector<ExprPtr>& args) {
  Json out = Json::array();
  for (const auto& a : args) out.push_back(dump_expr(*a));
  return out;
}

Json dump_block(const Block& b) {
  Json out = Json::array();
  for (const auto& s : b.stmts) out.push_back(dump_stmt(*s));
  return out;
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

Json dump_expr(const Expr& e) {
  Json j = std::visit(
      Overloaded{
          [](const IntLit& n) { return Json{{"kind", "int"}, {"value", n.value}}; },
          [](const FloatLit& n) {
            return Json{{"kind", "double"}, {"value", n.value}};
          },
          [](const BoolLit& n) { return Json{{"kind", "bool"}, {"value", n.value}}; },
          [](const StringLit& n) {
            return Json{{"kind", "string"}, {"value", n.value}};
          },
          [](const NameRef& n) { return Json{{"kind", "name"}, {"name", n.name}}; },
          [](const ThisRef&) { return Json{{"kind", "this"}}; },
          [](const ValueRef&) { return Json{{"kind", "value"}}; },
          [](const MemberAccess& n) {
            return Json{{"kind", "member"},
                        {"name", n.name},
                        {"object", dump_expr(*n.object)}};
          },
          [](const Call& n) {
            return Json{{"kind", "call"},
                        {"name", n.callee},
                        {"args", dump_args(n.args)}};
          },
          [](const MethodCall& n) {
            return Json{{"kind", "method-call"},
                        {"name", n.name},
                        {"object", dump_expr(*n.object)},
                        {"args", dump_args(n.args)}};
          },
          [](const SuperAccess& n) {
            Json j{{"kind", n.is_call ? "super-call" : "super-member"},
                   {"name", n.name}};
            if (n.is_call) j["args"] = dump_args(n.args);
            return j;
          },
          [](const SubCall& n) {
            return Json{{"kind", "sub-call"},
                        {"name", n.name},
                        {"args", dump_args(n.args)}};
          },
          [](const Unary& n) {
            return Json{{"kind", "unary"},
                        {"op", to_string(n.op)},
                        {"operand", dump_expr(*n.operand)}};
          },
          [](const Binary& n) {
            return Json{{"kind", "binary"},
                        {"op", to_string(n.op)},
                        {"lhs", dump_expr(*n.lhs)},
                        {"rhs", dump_expr(*n.rhs)}};
          },
      },
      e.node);
  j["loc"] = loc_of(e.loc);
  return j;
}

Json dump_stmt(const Stmt& s) {
  Json j = std::visit(
      Overloaded{
          [](const VarDecl& n) {
            return Json{{"kind", "var"},
                        {"type", n.type.to_string()},
                        {"name", n.name},
                        {"init", dump_expr(*n.init)}};
          },
          [](const Assign& n) {
            return Json{{"kind", "assign"},
                        {"target", dump_expr(*n.target)},
                        {"value", dump_expr(*n.value)}};
          },
          [](const ExprStmt& n) {
            return Json{{"kind", "expr"}, {"expr", dump_expr(*n.expr)}};
          },
          [](const If& n) {
            Json j{{"kind", "if"},
                   {"cond", dump_expr(*n.cond)},
                   {"then", dump_stmt(*n.then_branch)}};
            j["else"] = n.else_branch ? dump_stmt(*n.else_branch) : Json();
            return j;
          },
          [](const While& n) {
            return Json{{"kind", "while"},
                        {"cond", dump_expr(*n.cond)},
                        {"body", dump_stmt(*n.body)}};
          },
          [](const Return& n) {
            return Json{{"kind", "return"},
                        {"value", n.value ? dump_expr(*n.value) : Json()}};
          },
          [](const Block& n) {
            return Json{{"kind", "block"}, {"body", dump_block(n)}};
          },
      },
      s.node);
  j["loc"] = loc_of(s.loc);
  return j;
}

Json dump_params(const std::vector<Param>& params) {
  Json out = Json::array();
  for (const auto& p : params) {
    out.push_back(Json{{"name", p.name}, {"type", p.type.to_string()}});
  }
  return out;
}

Json dump_member(const MemberDecl& m) {
  Json j{{"kind", to_string(m.kind)},
         {"name", m.name},
         {"direction", to_string(m.direction)},
         {"visibility", to_string(m.visibility)},
         {"type", m.type.to_string()}};
  if (m.kind == MemberKind::Method) {
    j["params"] = dump_params(m.params);
    j["body"] = dump_block(*m.body);
  } else if (m.kind == MemberKind::Property) {
    j["get"] = m.getter ? dump_block(*m.getter) : Json();
    j["set"] = m.setter ? dump_block(*m.setter) : Json();
  }
  j["loc"] = loc_of(m.loc);
  return j;
}

}  // namespace

std::string dump_tree(const SyntaxTree& tree) {
  Json concepts = Json::array();
  for (const auto& c : tree.concepts) {
    Json members = Json::array();
    for (const auto& m : c.members) members.push_back(dump_member(m));
    concepts.push_back(Json{{"kind", "concept"},
                            {"name", c.name},
                            {"parent", c.parent ? Json(*c.parent) : Json()},
                            {"members", std::move(members)},
                            {"loc", loc_of(c.loc)}});
  }
  Json functions = Json::array();
  for (const auto& f : tree.functions) {
    functions.push_back(Json{{"kind", "function"},
                             {"name", f.name},
                             {"type", f.return_type.to_string()},
                             {"params", dump_params(f.params)},
                             {"body", dump_block(f.body)},
                             {"loc", loc_of(f.loc)}});
  }
  Json root{{"kind", "program"},
            {"concepts", std::move(concepts)},
            {"functions", std::move(functions)}};
  return root.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace cop
