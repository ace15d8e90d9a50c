//! Mode declarations and generation of the rule space.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Atom, CmpOp, Literal, Rule, RuleKind, Symbol, Term};

/// One argument position of a mode declaration.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ModeArg {
    /// `var(type)`
    Var(Symbol),
    /// `const(type)`
    Const(Symbol),
    /// A fixed symbol or integer.
    Fixed(Term),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModeSchema {
    pub pred: Symbol,
    pub args: Vec<ModeArg>,
}

impl fmt::Display for ModeSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                match a {
                    ModeArg::Var(t) => write!(f, "var({t})")?,
                    ModeArg::Const(t) => write!(f, "const({t})")?,
                    ModeArg::Fixed(t) => write!(f, "{t}")?,
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModeBias {
    pub modeh: Vec<ModeSchema>,
    pub modeb: Vec<ModeSchema>,
    pub constants: BTreeMap<Symbol, Vec<Term>>,
    pub max_variables: usize,
}

impl Default for ModeBias {
    fn default() -> Self {
        ModeBias { modeh: Vec::new(), modeb: Vec::new(), constants: BTreeMap::new(), max_variables: 3 }
    }
}

impl ModeBias {
    pub fn add_constant(&mut self, ty: &str, value: Term) {
        let list = self.constants.entry(Symbol::new(ty)).or_default();
        if !list.contains(&value) {
            list.push(value);
        }
    }

    /// Every `const(type)` placeholder needs at least one declared constant.
    pub fn validate(&self) -> Result<()> {
        for schema in self.modeh.iter().chain(&self.modeb) {
            for arg in &schema.args {
                if let ModeArg::Const(ty) = arg {
                    if self.constants.get(ty).map_or(true, Vec::is_empty) {
                        return Err(Error::Bias(format!(
                            "`{schema}` uses const({ty}) but no constant of type {ty} is declared"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Hypothesis-space conventions that mode declarations do not express.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub max_body_literals: usize,
    pub enable_normal: bool,
    pub enable_constraints: bool,
    pub enable_choice: bool,
    /// `(lower, upper)` pairs for single-atom choice heads.
    pub choice_bounds: Vec<(u32, u32)>,
    pub enable_weak: bool,
    pub weak_levels: Vec<i64>,
    /// Allow weight `1` in learned weak constraints.
    pub weak_weight_one: bool,
    /// Allow any body variable as the weight.
    pub weak_weight_vars: bool,
    pub max_rule_length: Option<usize>,
    pub allow_comparisons: bool,
    /// Operators used for generated comparison literals.
    pub comparison_ops: Vec<CmpOp>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_body_literals: 3,
            enable_normal: true,
            enable_constraints: false,
            enable_choice: false,
            choice_bounds: vec![(0, 1)],
            enable_weak: false,
            weak_levels: vec![1],
            weak_weight_one: true,
            weak_weight_vars: true,
            max_rule_length: None,
            allow_comparisons: false,
            comparison_ops: vec![CmpOp::Ne],
        }
    }
}

/// Indexed, deduplicated candidate rules. The index of a rule is its
/// selector id.
#[derive(Clone, Debug, Default)]
pub struct RuleSpace {
    rules: Vec<Rule>,
    lengths: Vec<usize>,
    index: HashMap<Rule, usize>,
}

impl RuleSpace {
    /// Builds a space from explicit rules, keeping their order after
    /// canonicalization and deduplication.
    pub fn from_rules(rules: impl IntoIterator<Item = Rule>) -> Result<Self> {
        let mut space = RuleSpace::default();
        for r in rules {
            r.validate()?;
            let c = r.canonicalize()?;
            if !space.index.contains_key(&c) {
                space.index.insert(c.clone(), space.rules.len());
                space.lengths.push(c.length());
                space.rules.push(c);
            }
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: usize) -> &Rule {
        &self.rules[id]
    }

    pub fn length(&self, id: usize) -> usize {
        self.lengths[id]
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Selector id of `r` or of any alpha-variant of it.
    pub fn contains(&self, r: &Rule) -> Option<usize> {
        let c = r.canonicalize().ok()?;
        self.index.get(&c).copied()
    }

    pub fn program(&self, selection: &[usize]) -> crate::model::Program {
        selection.iter().map(|&i| self.rules[i].clone()).collect()
    }
}

/// Argument of a literal template: a typed variable slot or a term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum TArg {
    Slot(Symbol),
    Term(Term),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Template {
    pred: Symbol,
    args: Vec<TArg>,
}

impl Template {
    fn slots(&self) -> impl Iterator<Item = &Symbol> {
        self.args.iter().filter_map(|a| match a {
            TArg::Slot(t) => Some(t),
            TArg::Term(_) => None,
        })
    }

    /// Fills the slots in order from `vars`.
    fn instantiate(&self, vars: &mut impl Iterator<Item = usize>) -> Atom {
        let args = self
            .args
            .iter()
            .map(|a| match a {
                TArg::Slot(_) => var_term(vars.next().expect("slot count")),
                TArg::Term(t) => t.clone(),
            })
            .collect();
        Atom { pred: self.pred.clone(), args }
    }
}

fn var_term(i: usize) -> Term {
    Term::var(&format!("V{}", i + 1))
}

fn expand_schema(schema: &ModeSchema, bias: &ModeBias) -> Vec<Template> {
    let mut out = vec![Template { pred: schema.pred.clone(), args: Vec::new() }];
    for arg in &schema.args {
        let choices: Vec<TArg> = match arg {
            ModeArg::Var(ty) => vec![TArg::Slot(ty.clone())],
            ModeArg::Fixed(t) => vec![TArg::Term(t.clone())],
            ModeArg::Const(ty) => bias.constants.get(ty).into_iter().flatten().cloned().map(TArg::Term).collect(),
        };
        out = out
            .into_iter()
            .flat_map(|t| {
                choices.iter().map(move |c| {
                    let mut t = t.clone();
                    t.args.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug)]
enum HeadShape {
    Normal(Template),
    Choice(Template, u32, u32),
    Hard,
    Weak,
}

/// Generates every rule compatible with the bias and configuration.
///
/// Rules whose body contains both an atom and its negation, and normal or
/// choice rules whose head also occurs positively in the body, are left out:
/// they can never change which interpretations are answer sets.
pub fn build_rule_space(bias: &ModeBias, cfg: &SearchConfig) -> Result<RuleSpace> {
    bias.validate()?;
    let mut heads = Vec::new();
    let head_templates: Vec<Template> = bias.modeh.iter().flat_map(|s| expand_schema(s, bias)).collect();
    if cfg.enable_normal {
        heads.extend(head_templates.iter().cloned().map(HeadShape::Normal));
    }
    if cfg.enable_choice {
        for t in &head_templates {
            for &(lo, hi) in &cfg.choice_bounds {
                if lo <= hi && hi <= 1 {
                    heads.push(HeadShape::Choice(t.clone(), lo, hi));
                }
            }
        }
    }
    if cfg.enable_constraints {
        heads.push(HeadShape::Hard);
    }
    if cfg.enable_weak {
        heads.push(HeadShape::Weak);
    }

    let body_templates: Vec<(Template, bool)> =
        bias.modeb.iter().flat_map(|s| expand_schema(s, bias)).flat_map(|t| [(t.clone(), true), (t, false)]).collect();

    let constants: Vec<(Symbol, Term)> =
        bias.constants.iter().flat_map(|(ty, cs)| cs.iter().map(move |c| (ty.clone(), c.clone()))).collect();

    let mut gen = Generator { cfg, bias, constants, seen: HashSet::new(), out: Vec::new() };
    let mut body: Vec<usize> = Vec::new();
    for head in &heads {
        gen.bodies(head, &body_templates, &mut body, 0);
    }

    let mut rules = gen.out;
    rules.sort_by_cached_key(|r| (r.length(), r.kind(), r.to_string()));
    RuleSpace::from_rules(rules)
}

struct Generator<'a> {
    cfg: &'a SearchConfig,
    bias: &'a ModeBias,
    constants: Vec<(Symbol, Term)>,
    seen: HashSet<Rule>,
    out: Vec<Rule>,
}

impl Generator<'_> {
    /// Multisets of body templates (non-decreasing indices).
    fn bodies(&mut self, head: &HeadShape, templates: &[(Template, bool)], body: &mut Vec<usize>, from: usize) {
        self.assign(head, templates, body);
        if body.len() == self.cfg.max_body_literals {
            return;
        }
        for i in from..templates.len() {
            body.push(i);
            self.bodies(head, templates, body, i);
            body.pop();
        }
    }

    fn assign(&mut self, head: &HeadShape, templates: &[(Template, bool)], body: &[usize]) {
        let head_tpl = match head {
            HeadShape::Normal(t) | HeadShape::Choice(t, _, _) => Some(t),
            _ => None,
        };
        if matches!(head, HeadShape::Hard | HeadShape::Weak) && body.is_empty() {
            return;
        }
        let mut slot_types: Vec<&Symbol> = Vec::new();
        if let Some(t) = head_tpl {
            slot_types.extend(t.slots());
        }
        for &b in body {
            slot_types.extend(templates[b].0.slots());
        }
        // Slots bound by a positive literal; safety needs every variable to
        // hit one of them.
        let mut positive = vec![false; slot_types.len()];
        let mut k = head_tpl.map_or(0, |t| t.slots().count());
        for &b in body {
            let n = templates[b].0.slots().count();
            if templates[b].1 {
                positive[k..k + n].iter_mut().for_each(|p| *p = true);
            }
            k += n;
        }
        let mut assignment = Vec::with_capacity(slot_types.len());
        let mut var_types: Vec<&Symbol> = Vec::new();
        self.assign_slots(head, templates, body, &slot_types, &positive, &mut assignment, &mut var_types);
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_slots<'t>(
        &mut self,
        head: &HeadShape,
        templates: &[(Template, bool)],
        body: &[usize],
        slot_types: &[&'t Symbol],
        positive: &[bool],
        assignment: &mut Vec<usize>,
        var_types: &mut Vec<&'t Symbol>,
    ) {
        let i = assignment.len();
        if i == slot_types.len() {
            let mut bound = vec![false; var_types.len()];
            for (slot, &v) in assignment.iter().enumerate() {
                if positive[slot] {
                    bound[v] = true;
                }
            }
            if bound.iter().all(|b| *b) {
                self.emit(head, templates, body, assignment, var_types);
            }
            return;
        }
        let n = var_types.len();
        for v in 0..=n {
            let fresh = v == n;
            if fresh {
                if n >= self.bias.max_variables {
                    break;
                }
                var_types.push(slot_types[i]);
            } else if var_types[v] != slot_types[i] {
                continue;
            }
            assignment.push(v);
            self.assign_slots(head, templates, body, slot_types, positive, assignment, var_types);
            assignment.pop();
            if fresh {
                var_types.pop();
            }
        }
    }

    fn emit(
        &mut self,
        head: &HeadShape,
        templates: &[(Template, bool)],
        body: &[usize],
        assignment: &[usize],
        var_types: &[&Symbol],
    ) {
        let mut vars = assignment.iter().copied();
        let head_atom = match head {
            HeadShape::Normal(t) | HeadShape::Choice(t, _, _) => Some(t.instantiate(&mut vars)),
            _ => None,
        };
        let mut lits: Vec<Literal> = Vec::with_capacity(body.len());
        for &b in body {
            let (t, positive) = &templates[b];
            let atom = t.instantiate(&mut vars);
            lits.push(if *positive { Literal::Pos(atom) } else { Literal::Neg(atom) });
        }
        let mut sorted = lits.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        for l in &lits {
            if let Literal::Pos(a) = l {
                if lits.contains(&Literal::Neg(a.clone())) || head_atom.as_ref() == Some(a) {
                    return;
                }
            }
        }

        let room = self.cfg.max_body_literals - lits.len();
        let comparisons = if self.cfg.allow_comparisons && room > 0 { self.comparisons(var_types) } else { Vec::new() };
        let mut chosen: Vec<usize> = Vec::new();
        self.with_comparisons(head, &head_atom, &lits, &comparisons, &mut chosen, 0, room, var_types.len());
    }

    fn comparisons(&self, var_types: &[&Symbol]) -> Vec<Literal> {
        let mut out = Vec::new();
        for i in 0..var_types.len() {
            for j in i + 1..var_types.len() {
                if var_types[i] == var_types[j] {
                    for &op in &self.cfg.comparison_ops {
                        out.push(Literal::Cmp(var_term(i), op, var_term(j)));
                    }
                }
            }
            for (ty, c) in &self.constants {
                if ty == var_types[i] {
                    for &op in &self.cfg.comparison_ops {
                        out.push(Literal::Cmp(var_term(i), op, c.clone()));
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn with_comparisons(
        &mut self,
        head: &HeadShape,
        head_atom: &Option<Atom>,
        lits: &[Literal],
        comparisons: &[Literal],
        chosen: &mut Vec<usize>,
        from: usize,
        room: usize,
        n_vars: usize,
    ) {
        let mut body = lits.to_vec();
        body.extend(chosen.iter().map(|&c| comparisons[c].clone()));
        self.finish(head, head_atom, body, n_vars);
        if chosen.len() == room {
            return;
        }
        for c in from..comparisons.len() {
            chosen.push(c);
            self.with_comparisons(head, head_atom, lits, comparisons, chosen, c + 1, room, n_vars);
            chosen.pop();
        }
    }

    fn finish(&mut self, head: &HeadShape, head_atom: &Option<Atom>, body: Vec<Literal>, n_vars: usize) {
        let rules: Vec<Rule> = match head {
            HeadShape::Normal(_) => vec![Rule::Normal { head: head_atom.clone().unwrap(), body }],
            HeadShape::Choice(_, lo, hi) => {
                vec![Rule::Choice { lower: *lo, upper: *hi, heads: vec![head_atom.clone().unwrap()], body }]
            }
            HeadShape::Hard => vec![Rule::Hard { body }],
            HeadShape::Weak => {
                // Weight and tuple refer to canonical variable names, so the
                // body is canonicalized first.
                let Ok(Rule::Hard { body }) = (Rule::Hard { body }).canonicalize() else { return };
                let terms: Vec<Term> = (0..n_vars).map(var_term).collect();
                let mut weights = Vec::new();
                if self.cfg.weak_weight_one {
                    weights.push(Term::Int(1));
                }
                if self.cfg.weak_weight_vars {
                    weights.extend(terms.iter().cloned());
                }
                let mut out = Vec::new();
                for &level in &self.cfg.weak_levels {
                    for w in &weights {
                        out.push(Rule::Weak { body: body.clone(), weight: w.clone(), level, terms: terms.clone() });
                    }
                }
                out
            }
        };
        for r in rules {
            if self.cfg.max_rule_length.is_some_and(|m| r.length() > m) {
                continue;
            }
            if r.validate().is_err() {
                continue;
            }
            let Ok(c) = r.canonicalize() else { continue };
            if self.seen.insert(c.clone()) {
                self.out.push(c);
            }
        }
    }
}

/// Kind filter used by callers that want, e.g., only weak rules.
pub fn rules_of_kind(space: &RuleSpace, kind: RuleKind) -> Vec<usize> {
    (0..space.len()).filter(|&i| space.rule(i).kind() == kind).collect()
}
