#include "qverify/pctl.hpp"

#include <algorithm>
#include <cctype>

#include "qverify/errors.hpp"

namespace qverify {

PredPtr Pred::always_true() {
  auto p = std::make_shared<Pred>();
  p->kind = Kind::True;
  return p;
}

PredPtr Pred::label(std::string name) {
  auto p = std::make_shared<Pred>();
  p->kind = Kind::Label;
  p->name = std::move(name);
  return p;
}

PredPtr Pred::cmp(std::string feature, CmpOp op, long long value) {
  auto p = std::make_shared<Pred>();
  p->kind = Kind::Cmp;
  p->name = std::move(feature);
  p->op = op;
  p->value = value;
  return p;
}

PredPtr Pred::conj(PredPtr l, PredPtr r) {
  auto p = std::make_shared<Pred>();
  p->kind = Kind::And;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

PredPtr Pred::disj(PredPtr l, PredPtr r) {
  auto p = std::make_shared<Pred>();
  p->kind = Kind::Or;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

bool operator==(const Pred& a, const Pred& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Pred::Kind::True:
      return true;
    case Pred::Kind::Label:
      return a.name == b.name;
    case Pred::Kind::Cmp:
      return a.name == b.name && a.op == b.op && a.value == b.value;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
  return false;
}

bool operator==(const PctlProperty& a, const PctlProperty& b) {
  if (a.form != b.form) return false;
  if (a.form == PctlProperty::Form::Until && !(*a.left == *b.left)) {
    return false;
  }
  return *a.right == *b.right;
}

namespace {

struct Token {
  enum class Type { PQuery, LBracket, RBracket, LParen, RParen, Amp, Pipe,
                    KeywordF, KeywordU, Ident, Op, Int, End } type;
  std::string text;
  long long value = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.type = Token::Type::End;
      return;
    }
    const char c = text_[pos_];
    if (c == '[') { current_ = {Token::Type::LBracket, "[", 0, pos_++}; return; }
    if (c == ']') { current_ = {Token::Type::RBracket, "]", 0, pos_++}; return; }
    if (c == '(') { current_ = {Token::Type::LParen, "(", 0, pos_++}; return; }
    if (c == ')') { current_ = {Token::Type::RParen, ")", 0, pos_++}; return; }
    if (c == '&') { current_ = {Token::Type::Amp, "&", 0, pos_++}; return; }
    if (c == '|') { current_ = {Token::Type::Pipe, "|", 0, pos_++}; return; }
    if (c == '<' || c == '>') {
      std::string op(1, c);
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '=') {
        op += '=';
        ++pos_;
      }
      current_ = {Token::Type::Op, op, 0, current_.pos};
      return;
    }
    if (c == '=') {
      current_ = {Token::Type::Op, "=", 0, pos_++};
      return;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      if (c == '-') ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError("expected digits after '-'", start);
      }
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      current_ = {Token::Type::Int, text_.substr(start, pos_ - start), 0, start};
      current_.value = std::stoll(current_.text);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string word = text_.substr(start, pos_ - start);
      if (word == "P") {
        // the query prefix 'P=?'
        if (pos_ + 1 < text_.size() && text_[pos_] == '=' && text_[pos_ + 1] == '?') {
          pos_ += 2;
          current_ = {Token::Type::PQuery, "P=?", 0, start};
          return;
        }
        throw ParseError("expected 'P=?'", start);
      }
      if (word == "F") { current_ = {Token::Type::KeywordF, word, 0, start}; return; }
      if (word == "U") { current_ = {Token::Type::KeywordU, word, 0, start}; return; }
      current_ = {Token::Type::Ident, word, 0, start};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token current_;
};

CmpOp parse_op(const std::string& text, std::size_t pos) {
  if (text == "=") return CmpOp::Eq;
  if (text == "<") return CmpOp::Lt;
  if (text == "<=") return CmpOp::Le;
  if (text == ">") return CmpOp::Gt;
  if (text == ">=") return CmpOp::Ge;
  throw ParseError("unknown comparison '" + text + "'", pos);
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  PctlProperty parse() {
    expect(Token::Type::PQuery, "'P=?'");
    expect(Token::Type::LBracket, "'['");
    PctlProperty prop;
    if (lex_.peek().type == Token::Type::KeywordF) {
      lex_.take();
      prop.form = PctlProperty::Form::Eventually;
      prop.left = Pred::always_true();
      prop.right = parse_pred();
    } else {
      prop.form = PctlProperty::Form::Until;
      prop.left = parse_pred();
      expect(Token::Type::KeywordU, "'U'");
      prop.right = parse_pred();
    }
    expect(Token::Type::RBracket, "']'");
    if (lex_.peek().type != Token::Type::End) {
      throw ParseError("trailing input after property", lex_.peek().pos);
    }
    return prop;
  }

 private:
  Token expect(Token::Type type, const std::string& what) {
    if (lex_.peek().type != type) {
      throw ParseError("expected " + what, lex_.peek().pos);
    }
    return lex_.take();
  }

  PredPtr parse_pred() {
    PredPtr lhs = parse_term();
    while (lex_.peek().type == Token::Type::Pipe) {
      lex_.take();
      lhs = Pred::disj(std::move(lhs), parse_term());
    }
    return lhs;
  }

  PredPtr parse_term() {
    PredPtr lhs = parse_atom();
    while (lex_.peek().type == Token::Type::Amp) {
      lex_.take();
      lhs = Pred::conj(std::move(lhs), parse_atom());
    }
    return lhs;
  }

  PredPtr parse_atom() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::LParen) {
      lex_.take();
      PredPtr inner = parse_pred();
      expect(Token::Type::RParen, "')'");
      return inner;
    }
    if (t.type == Token::Type::Ident) {
      const Token ident = lex_.take();
      if (lex_.peek().type == Token::Type::Op) {
        const Token op = lex_.take();
        const Token num = expect(Token::Type::Int, "integer constant");
        return Pred::cmp(ident.text, parse_op(op.text, op.pos), num.value);
      }
      return Pred::label(ident.text);
    }
    throw ParseError("expected predicate", t.pos);
  }

  Lexer lex_;
};

std::string op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "=";
}

// parenthesize Or under And so printing round-trips
std::string pred_text(const Pred& p, bool parent_is_and) {
  switch (p.kind) {
    case Pred::Kind::True:
      return "true";
    case Pred::Kind::Label:
      return p.name;
    case Pred::Kind::Cmp:
      return p.name + op_text(p.op) + std::to_string(p.value);
    case Pred::Kind::And:
      return pred_text(*p.lhs, true) + " & " + pred_text(*p.rhs, true);
    case Pred::Kind::Or: {
      const std::string body =
          pred_text(*p.lhs, false) + " | " + pred_text(*p.rhs, false);
      return parent_is_and ? "(" + body + ")" : body;
    }
  }
  return "";
}

}  // namespace

PctlProperty parse_property(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const Pred& pred) { return pred_text(pred, false); }

std::string to_string(const PctlProperty& prop) {
  if (prop.form == PctlProperty::Form::Eventually) {
    return "P=? [ F " + to_string(*prop.right) + " ]";
  }
  return "P=? [ " + to_string(*prop.left) + " U " + to_string(*prop.right) + " ]";
}

BoundPred BoundPred::always_true() {
  BoundPred bp;
  bp.nodes_.push_back({Pred::Kind::True, "", -1, CmpOp::Eq, 0, -1, -1});
  return bp;
}

BoundPred BoundPred::bind(const PredPtr& pred,
                          const std::vector<std::string>& features) {
  BoundPred bp;
  bp.build(pred, features);
  return bp;
}

int BoundPred::build(const PredPtr& pred,
                     const std::vector<std::string>& features) {
  Node node;
  node.kind = pred->kind;
  switch (pred->kind) {
    case Pred::Kind::True:
      break;
    case Pred::Kind::Label: {
      const auto it = std::find(features.begin(), features.end(), pred->name);
      if (it != features.end()) {
        throw BindError("'" + pred->name +
                        "' is a feature; compare it with a constant");
      }
      node.label = pred->name;
      break;
    }
    case Pred::Kind::Cmp: {
      const auto it = std::find(features.begin(), features.end(), pred->name);
      if (it == features.end()) {
        throw BindError("unknown feature '" + pred->name + "'");
      }
      node.feature_index = static_cast<int>(it - features.begin());
      node.op = pred->op;
      node.value = pred->value;
      break;
    }
    case Pred::Kind::And:
    case Pred::Kind::Or:
      node.lhs = build(pred->lhs, features);
      node.rhs = build(pred->rhs, features);
      break;
  }
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

bool BoundPred::eval_node(int index, const FeatureState& s,
                          const std::vector<std::string>& labels) const {
  const Node& node = nodes_[static_cast<std::size_t>(index)];
  switch (node.kind) {
    case Pred::Kind::True:
      return true;
    case Pred::Kind::Label:
      return std::find(labels.begin(), labels.end(), node.label) != labels.end();
    case Pred::Kind::Cmp: {
      const long long v = s.values.at(static_cast<std::size_t>(node.feature_index));
      switch (node.op) {
        case CmpOp::Eq: return v == node.value;
        case CmpOp::Lt: return v < node.value;
        case CmpOp::Le: return v <= node.value;
        case CmpOp::Gt: return v > node.value;
        case CmpOp::Ge: return v >= node.value;
      }
      return false;
    }
    case Pred::Kind::And:
      return eval_node(node.lhs, s, labels) && eval_node(node.rhs, s, labels);
    case Pred::Kind::Or:
      return eval_node(node.lhs, s, labels) || eval_node(node.rhs, s, labels);
  }
  return false;
}

bool BoundPred::eval(const FeatureState& s,
                     const std::vector<std::string>& labels) const {
  return eval_node(static_cast<int>(nodes_.size()) - 1, s, labels);
}

}  // namespace qverify
