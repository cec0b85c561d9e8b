#ifndef QVERIFY_PCTL_HPP
#define QVERIFY_PCTL_HPP

#include <memory>
#include <string>
#include <vector>

#include "qverify/mdp.hpp"

namespace qverify {

// Boolean state predicate over atomic label names and integer feature
// comparisons.
struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

enum class CmpOp { Eq, Lt, Le, Gt, Ge };

struct Pred {
  enum class Kind { True, Label, Cmp, And, Or } kind = Kind::True;
  std::string name;            // Label: label name; Cmp: feature name
  CmpOp op = CmpOp::Eq;        // Cmp only
  long long value = 0;         // Cmp only
  PredPtr lhs, rhs;            // And/Or only

  static PredPtr always_true();
  static PredPtr label(std::string name);
  static PredPtr cmp(std::string feature, CmpOp op, long long value);
  static PredPtr conj(PredPtr l, PredPtr r);
  static PredPtr disj(PredPtr l, PredPtr r);
};

bool operator==(const Pred& a, const Pred& b);

// `P=? [ F <pred> ]` or `P=? [ <pred> U <pred> ]`. For Eventually, left is
// the constant-true predicate.
struct PctlProperty {
  enum class Form { Eventually, Until } form = Form::Eventually;
  PredPtr left;
  PredPtr right;
};

bool operator==(const PctlProperty& a, const PctlProperty& b);

// Grammar (whitespace-insensitive; & binds tighter than |):
//   property := 'P=?' '[' 'F' pred ']' | 'P=?' '[' pred 'U' pred ']'
//   pred     := term ('|' term)*
//   term     := atom ('&' atom)*
//   atom     := '(' pred ')' | IDENT | IDENT op INT
//   op       := '=' | '<' | '<=' | '>' | '>='
// Bare identifiers are label atoms; 'F' and 'U' are reserved.
PctlProperty parse_property(const std::string& text);

std::string to_string(const PctlProperty& prop);
std::string to_string(const Pred& pred);

// Predicate with feature names resolved to indices. Comparison atoms must
// name schema features (BindError otherwise); a bare identifier that names
// a feature is rejected as a likely mistake. Unknown labels simply never
// hold.
class BoundPred {
 public:
  static BoundPred bind(const PredPtr& pred,
                        const std::vector<std::string>& features);
  static BoundPred always_true();

  bool eval(const FeatureState& s, const std::vector<std::string>& labels) const;

 private:
  struct Node {
    Pred::Kind kind;
    std::string label;
    int feature_index = -1;
    CmpOp op = CmpOp::Eq;
    long long value = 0;
    int lhs = -1, rhs = -1;
  };
  std::vector<Node> nodes_;  // root is the last node
  bool eval_node(int index, const FeatureState& s,
                 const std::vector<std::string>& labels) const;
  int build(const PredPtr& pred, const std::vector<std::string>& features);
};

}  // namespace qverify

#endif
