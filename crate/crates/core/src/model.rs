//! Terms, rules, programs, interpretations and examples.
//!
//! Everything here is an immutable value type. Rules are kept in the
//! surface syntax the task files use; [`Rule::canonicalize`] gives the
//! normal form used to deduplicate hypotheses.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::bias::{ModeBias, SearchConfig};
use crate::error::{Error, Result};

/// Interned-by-refcount name of a predicate, constant or variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Integers sort before symbolic constants, which is also the order used
/// by comparison literals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Int(i64),
    Sym(Symbol),
    Var(Symbol),
    /// `lo..hi`, only meaningful inside facts before range expansion.
    Range(i64, i64),
}

impl Term {
    pub fn sym(s: &str) -> Self {
        Term::Sym(Symbol::new(s))
    }

    pub fn var(s: &str) -> Self {
        Term::Var(Symbol::new(s))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Int(_) | Term::Sym(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) | Term::Var(s) => write!(f, "{s}"),
            Term::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: Symbol::new(pred), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(&mut f).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne];

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
        }
    }

    /// The operator `op'` with `a op b <=> b op' a`.
    pub fn flipped(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Ge => CmpOp::Le,
            op => op,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }

    pub fn parse(s: &str) -> Option<CmpOp> {
        CmpOp::ALL.into_iter().find(|op| op.symbol() == s)
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Body literal. Comparisons are built-ins and are evaluated away by the
/// grounder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
    Cmp(Term, CmpOp, Term),
}

impl Literal {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => Some(a),
            Literal::Cmp(..) => None,
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Literal {
        match self {
            Literal::Pos(a) => Literal::Pos(a.map_terms(f)),
            Literal::Neg(a) => Literal::Neg(a.map_terms(f)),
            Literal::Cmp(l, op, r) => Literal::Cmp(f(l), *op, f(r)),
        }
    }

    fn terms(&self) -> Box<dyn Iterator<Item = &Term> + '_> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => Box::new(a.args.iter()),
            Literal::Cmp(l, _, r) => Box::new([l, r].into_iter()),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::Cmp(l, op, r) => write!(f, "{l} {op} {r}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RuleKind {
    Normal,
    Choice,
    Hard,
    Weak,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rule {
    Normal { head: Atom, body: Vec<Literal> },
    Choice { lower: u32, upper: u32, heads: Vec<Atom>, body: Vec<Literal> },
    Hard { body: Vec<Literal> },
    Weak { body: Vec<Literal>, weight: Term, level: i64, terms: Vec<Term> },
}

impl Rule {
    pub fn fact(head: Atom) -> Rule {
        Rule::Normal { head, body: Vec::new() }
    }

    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Normal { .. } => RuleKind::Normal,
            Rule::Choice { .. } => RuleKind::Choice,
            Rule::Hard { .. } => RuleKind::Hard,
            Rule::Weak { .. } => RuleKind::Weak,
        }
    }

    pub fn body(&self) -> &[Literal] {
        match self {
            Rule::Normal { body, .. } | Rule::Choice { body, .. } | Rule::Hard { body } | Rule::Weak { body, .. } => {
                body
            }
        }
    }

    /// Atoms the rule can derive.
    pub fn head_atoms(&self) -> &[Atom] {
        match self {
            Rule::Normal { head, .. } => std::slice::from_ref(head),
            Rule::Choice { heads, .. } => heads,
            _ => &[],
        }
    }

    /// Number of literals: heads plus body literals. The weak-constraint
    /// tuple is not counted.
    pub fn length(&self) -> usize {
        match self {
            Rule::Normal { body, .. } => 1 + body.len(),
            Rule::Choice { heads, body, .. } => heads.len() + body.len(),
            Rule::Hard { body } | Rule::Weak { body, .. } => body.len(),
        }
    }

    pub fn is_fact(&self) -> bool {
        matches!(self, Rule::Normal { body, .. } if body.is_empty())
    }

    pub fn is_ground(&self) -> bool {
        self.all_terms().all(|t| !t.is_var())
    }

    /// All terms in textual order: heads, body, then the weak tuple.
    fn all_terms(&self) -> impl Iterator<Item = &Term> {
        let heads = self.head_atoms().iter().flat_map(|a| a.args.iter());
        let body = self.body().iter().flat_map(|l| l.terms());
        let tail: Vec<&Term> = match self {
            Rule::Weak { weight, terms, .. } => std::iter::once(weight).chain(terms).collect(),
            _ => Vec::new(),
        };
        heads.chain(body).chain(tail)
    }

    /// Variables in order of first textual occurrence.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut seen = Vec::new();
        for t in self.all_terms() {
            if let Term::Var(v) = t {
                if !seen.contains(v) {
                    seen.push(v.clone());
                }
            }
        }
        seen
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Rule {
        let body: Vec<Literal> = self.body().iter().map(|l| l.map_terms(&mut f)).collect();
        match self {
            Rule::Normal { head, .. } => Rule::Normal { head: head.map_terms(&mut f), body },
            Rule::Choice { lower, upper, heads, .. } => Rule::Choice {
                lower: *lower,
                upper: *upper,
                heads: heads.iter().map(|a| a.map_terms(&mut f)).collect(),
                body,
            },
            Rule::Hard { .. } => Rule::Hard { body },
            Rule::Weak { weight, level, terms, .. } => {
                Rule::Weak { body, weight: f(weight), level: *level, terms: terms.iter().map(&mut f).collect() }
            }
        }
    }

    /// Every variable must occur in a positive body atom.
    pub fn check_safety(&self) -> Result<()> {
        let mut bound = BTreeSet::new();
        for lit in self.body() {
            if let Literal::Pos(a) = lit {
                for t in &a.args {
                    if let Term::Var(v) = t {
                        bound.insert(v.clone());
                    }
                }
            }
        }
        match self.variables().into_iter().find(|v| !bound.contains(v)) {
            Some(var) => Err(Error::Safety { rule: self.to_string(), var: var.to_string() }),
            None => Ok(()),
        }
    }

    /// Safety plus the structural invariants of each rule kind.
    pub fn validate(&self) -> Result<()> {
        self.check_safety()?;
        match self {
            Rule::Choice { lower, upper, heads, .. }
                if heads.is_empty() || lower > upper || *upper as usize > heads.len() =>
            {
                Err(Error::ChoiceBounds(self.to_string()))
            }
            Rule::Hard { body } | Rule::Weak { body, .. } if body.is_empty() => {
                Err(Error::Safety { rule: self.to_string(), var: String::from("<empty body>") })
            }
            _ => Ok(()),
        }
    }

    /// Canonical form: positive literals, then negated ones, then
    /// comparisons, each group sorted; variables renamed `V1, V2, ...` by
    /// first occurrence. Alpha-equivalent rules get the same form.
    pub fn canonicalize(&self) -> Result<Rule> {
        self.check_safety()?;
        let anon = |t: &Term| if t.is_var() { Term::var("_") } else { t.clone() };

        let mut pos: Vec<&Literal> = Vec::new();
        let mut neg: Vec<&Literal> = Vec::new();
        let mut cmp: Vec<&Literal> = Vec::new();
        for lit in self.body() {
            match lit {
                Literal::Pos(_) => pos.push(lit),
                Literal::Neg(_) => neg.push(lit),
                Literal::Cmp(..) => cmp.push(lit),
            }
        }
        pos.sort_by_cached_key(|l| l.map_terms(anon));

        // Positive literals that look identical up to variable names may be
        // permuted; every permutation is tried and the smallest result kept.
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let keys: Vec<Literal> = pos.iter().map(|l| l.map_terms(anon)).collect();
        let mut i = 0;
        while i < keys.len() {
            let mut j = i + 1;
            while j < keys.len() && keys[j] == keys[i] {
                j += 1;
            }
            groups.push((i, j));
            i = j;
        }
        let mut heads: Vec<&Atom> = self.head_atoms().iter().collect();
        heads.sort_by_cached_key(|a| a.map_terms(anon));

        let mut best: Option<(String, Rule)> = None;
        let mut order: Vec<&Literal> = pos.clone();
        let mut budget = 5040usize;
        permute_groups(&mut order, &groups, 0, &mut budget, &mut |order| {
            let candidate = self.rename_with(&heads, order, &neg, &cmp);
            let text = candidate.to_string();
            if best.as_ref().map_or(true, |(b, _)| text < *b) {
                best = Some((text, candidate));
            }
        });
        Ok(best.map(|(_, r)| r).expect("at least one ordering"))
    }

    fn rename_with(&self, heads: &[&Atom], pos: &[&Literal], neg: &[&Literal], cmp: &[&Literal]) -> Rule {
        let mut names: HashMap<Symbol, Term> = HashMap::new();
        let visit = |t: &Term, names: &mut HashMap<Symbol, Term>| {
            if let Term::Var(v) = t {
                let n = names.len() + 1;
                names.entry(v.clone()).or_insert_with(|| Term::var(&format!("V{n}")));
            }
        };
        for a in heads {
            a.args.iter().for_each(|t| visit(t, &mut names));
        }
        for l in pos {
            l.terms().for_each(|t| visit(t, &mut names));
        }
        let rename = |t: &Term| match t {
            Term::Var(v) => names[v].clone(),
            other => other.clone(),
        };
        let pos_r: Vec<Literal> = pos.iter().map(|l| l.map_terms(rename)).collect();
        let mut neg_r: Vec<Literal> = neg.iter().map(|l| l.map_terms(rename)).collect();
        let mut cmp_r: Vec<Literal> = cmp.iter().map(|l| normalize_cmp(l.map_terms(rename))).collect();
        neg_r.sort();
        cmp_r.sort();
        let mut body = pos_r;
        body.extend(neg_r);
        body.extend(cmp_r);
        match self {
            Rule::Normal { .. } => Rule::Normal { head: heads[0].map_terms(rename), body },
            Rule::Choice { lower, upper, .. } => Rule::Choice {
                lower: *lower,
                upper: *upper,
                heads: heads.iter().map(|a| a.map_terms(rename)).collect(),
                body,
            },
            Rule::Hard { .. } => Rule::Hard { body },
            Rule::Weak { weight, level, terms, .. } => {
                Rule::Weak { body, weight: rename(weight), level: *level, terms: terms.iter().map(rename).collect() }
            }
        }
    }
}

fn permute_groups<'a>(
    order: &mut Vec<&'a Literal>,
    groups: &[(usize, usize)],
    g: usize,
    budget: &mut usize,
    visit: &mut dyn FnMut(&[&'a Literal]),
) {
    if *budget == 0 {
        return;
    }
    if g == groups.len() {
        *budget -= 1;
        visit(order);
        return;
    }
    let (lo, hi) = groups[g];
    permute_range(order, lo, hi, lo, &mut |order: &mut Vec<&'a Literal>| {
        permute_groups(order, groups, g + 1, budget, visit)
    });
}

fn permute_range<'a>(
    order: &mut Vec<&'a Literal>,
    lo: usize,
    hi: usize,
    k: usize,
    f: &mut dyn FnMut(&mut Vec<&'a Literal>),
) {
    if k + 1 >= hi {
        f(order);
        return;
    }
    for i in k..hi {
        order.swap(k, i);
        permute_range(order, lo, hi, k + 1, f);
        order.swap(k, i);
    }
}

/// `>`/`>=` become `<`/`<=`; symmetric operators put the smaller term first.
fn normalize_cmp(lit: Literal) -> Literal {
    match lit {
        Literal::Cmp(l, op @ (CmpOp::Gt | CmpOp::Ge), r) => Literal::Cmp(r, op.flipped(), l),
        Literal::Cmp(l, op @ (CmpOp::Eq | CmpOp::Ne), r) if r < l => Literal::Cmp(r, op, l),
        other => other,
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_body = |f: &mut fmt::Formatter<'_>, body: &[Literal]| -> fmt::Result {
            for (i, l) in body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
            Ok(())
        };
        match self {
            Rule::Normal { head, body } => {
                write!(f, "{head}")?;
                if !body.is_empty() {
                    f.write_str(" :- ")?;
                    write_body(f, body)?;
                }
                f.write_str(".")
            }
            Rule::Choice { lower, upper, heads, body } => {
                write!(f, "{lower} {{ ")?;
                for (i, a) in heads.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, " }} {upper}")?;
                if !body.is_empty() {
                    f.write_str(" :- ")?;
                    write_body(f, body)?;
                }
                f.write_str(".")
            }
            Rule::Hard { body } => {
                f.write_str(":- ")?;
                write_body(f, body)?;
                f.write_str(".")
            }
            Rule::Weak { body, weight, level, terms } => {
                f.write_str(":~ ")?;
                write_body(f, body)?;
                write!(f, ".[{weight}@{level}")?;
                for t in terms {
                    write!(f, ", {t}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Finite ordered set of rules. Insertion order is kept for output only;
/// alpha-equivalent duplicates are dropped on insert.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Program {
    rules: Vec<Rule>,
}

impl Program {
    pub fn new() -> Self {
        Program::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut p = Program::new();
        for r in rules {
            p.push(r);
        }
        p
    }

    /// Returns false when an equivalent rule was already present.
    pub fn push(&mut self, rule: Rule) -> bool {
        let key = rule.canonicalize().ok();
        let dup = self.rules.iter().any(|r| match (&key, r.canonicalize().ok()) {
            (Some(k), Some(c)) => *k == c,
            _ => *r == rule,
        });
        if !dup {
            self.rules.push(rule);
        }
        !dup
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Sum of rule lengths.
    pub fn length(&self) -> usize {
        self.rules.iter().map(Rule::length).sum()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rule> {
        self.rules.iter()
    }

    pub fn extend(&mut self, other: &Program) {
        for r in other.iter() {
            self.push(r.clone());
        }
    }

    /// Concatenation without deduplication, used when assembling B ∪ H ∪ C.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a Program>) -> Program {
        Program { rules: parts.into_iter().flat_map(|p| p.rules.iter().cloned()).collect() }
    }

    pub fn has_weak(&self) -> bool {
        self.rules.iter().any(|r| r.kind() == RuleKind::Weak)
    }

    /// Canonical rules in sorted order; equal for programs that differ only
    /// by rule order and variable names.
    pub fn canonical(&self) -> Result<Vec<Rule>> {
        let mut rules = self.rules.iter().map(Rule::canonicalize).collect::<Result<Vec<_>>>()?;
        rules.sort();
        rules.dedup();
        Ok(rules)
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        Program::from_rules(iter)
    }
}

impl<'a> IntoIterator for &'a Program {
    type Item = &'a Rule;
    type IntoIter = std::slice::Iter<'a, Rule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Program text, one rule per line.
pub fn render(p: &Program) -> String {
    p.to_string()
}

pub type Interpretation = BTreeSet<Atom>;

#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct PartialInterpretation {
    pub inclusions: BTreeSet<Atom>,
    pub exclusions: BTreeSet<Atom>,
}

impl PartialInterpretation {
    pub fn new(inclusions: impl IntoIterator<Item = Atom>, exclusions: impl IntoIterator<Item = Atom>) -> Self {
        PartialInterpretation {
            inclusions: inclusions.into_iter().collect(),
            exclusions: exclusions.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.inclusions.is_empty() && self.exclusions.is_empty()
    }

    /// `i` contains every inclusion and no exclusion.
    pub fn accepts(&self, i: &Interpretation) -> bool {
        self.inclusions.iter().all(|a| i.contains(a)) && !self.exclusions.iter().any(|a| i.contains(a))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub enum Penalty {
    Finite(u64),
    #[default]
    Infinite,
}

impl Penalty {
    pub fn is_infinite(self) -> bool {
        self == Penalty::Infinite
    }
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Penalty::Finite(p) => write!(f, "{p}"),
            Penalty::Infinite => f.write_str("inf"),
        }
    }
}

/// Hypothesis score: program length plus the penalties of uncovered
/// examples. Any uncovered example with infinite penalty makes it infinite.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Score {
    Finite(u64),
    Infinite,
}

impl Score {
    pub fn finite(self) -> Option<u64> {
        match self {
            Score::Finite(s) => Some(s),
            Score::Infinite => None,
        }
    }

    pub fn add(self, p: Penalty) -> Score {
        match (self, p) {
            (Score::Finite(s), Penalty::Finite(p)) => Score::Finite(s + p),
            _ => Score::Infinite,
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Finite(s) => write!(f, "{s}"),
            Score::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Context-dependent partial interpretation example.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Example {
    pub id: String,
    pub polarity: Polarity,
    pub pi: PartialInterpretation,
    pub context: Program,
    pub penalty: Penalty,
}

impl Example {
    pub fn positive(id: &str, pi: PartialInterpretation) -> Self {
        Example { id: id.into(), polarity: Polarity::Positive, pi, context: Program::new(), penalty: Penalty::Infinite }
    }

    pub fn negative(id: &str, pi: PartialInterpretation) -> Self {
        Example { id: id.into(), polarity: Polarity::Negative, ..Example::positive(id, pi) }
    }

    pub fn with_context(mut self, context: Program) -> Self {
        self.context = context;
        self
    }

    pub fn with_penalty(mut self, penalty: Penalty) -> Self {
        self.penalty = penalty;
        self
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrderingMode {
    Brave,
    Cautious,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderingExample {
    pub id: String,
    pub lo: String,
    pub hi: String,
    pub op: CmpOp,
    pub mode: OrderingMode,
    pub penalty: Penalty,
}

/// Weak-constraint cost per priority level; zero levels are not stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct CostVector(BTreeMap<i64, i64>);

impl CostVector {
    pub fn new() -> Self {
        CostVector::default()
    }

    pub fn from_levels(levels: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut c = CostVector::new();
        for (l, w) in levels {
            c.add(l, w);
        }
        c
    }

    pub fn add(&mut self, level: i64, weight: i64) {
        let e = self.0.entry(level).or_insert(0);
        *e += weight;
        if *e == 0 {
            self.0.remove(&level);
        }
    }

    pub fn at(&self, level: i64) -> i64 {
        self.0.get(&level).copied().unwrap_or(0)
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(l, w)| (*l, *w))
    }

    /// Lexicographic comparison, highest level first. `Less` means `self`
    /// is strictly preferred.
    pub fn compare(&self, other: &CostVector) -> std::cmp::Ordering {
        let levels: BTreeSet<i64> = self.0.keys().chain(other.0.keys()).copied().collect();
        for l in levels.into_iter().rev() {
            match self.at(l).cmp(&other.at(l)) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Whether `self op other` holds in the preference order.
    pub fn dominates(&self, other: &CostVector, op: CmpOp) -> bool {
        op.holds(&self.compare(other), &std::cmp::Ordering::Equal)
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, w)) in self.0.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}:{w}")?;
        }
        f.write_str("}")
    }
}

/// Free-function form of [`CostVector::dominates`].
pub fn dominates(c1: &CostVector, c2: &CostVector, op: CmpOp) -> bool {
    c1.dominates(c2, op)
}

#[derive(Clone, Debug, Default)]
pub struct LearningTask {
    pub background: Program,
    pub mode_bias: ModeBias,
    pub examples: Vec<Example>,
    pub orderings: Vec<OrderingExample>,
    pub config: SearchConfig,
}

impl LearningTask {
    pub fn example(&self, id: &str) -> Option<&Example> {
        self.examples.iter().find(|e| e.id == id)
    }

    pub fn ordering(&self, id: &str) -> Option<&OrderingExample> {
        self.orderings.iter().find(|o| o.id == id)
    }

    /// True when every example and ordering must be covered.
    pub fn is_noise_free(&self) -> bool {
        self.examples.iter().all(|e| e.penalty.is_infinite()) && self.orderings.iter().all(|o| o.penalty.is_infinite())
    }
}
