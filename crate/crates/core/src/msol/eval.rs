//! Direct evaluation of formulas over a finite structure.
//!
//! Formulas are lowered to a slot-indexed form first. A run of existential
//! quantifiers becomes one block: its variables are assigned in order and each
//! conjunct is checked as soon as everything it mentions is bound. Candidate
//! values are narrowed using conjuncts that already fix part of the answer
//! (`x ∈ S`, `NoIntersect(S, T)`, `Bipartition(Z, P, Q)`, ...). Narrowing never
//! changes the truth value, because every conjunct is still checked in full.
//! Universal quantifiers are evaluated as `¬∃¬`.

use std::collections::{BTreeSet, HashMap};

use super::formula::{Binder, Formula, Kind, Term};
use super::library::{self, family};
use super::structure::{MsoStructure, Sort};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Element(usize),
    Set(u64),
}

impl Value {
    fn raw(self) -> u64 {
        match self {
            Value::Element(x) => x as u64,
            Value::Set(m) => m,
        }
    }

    fn kind(self) -> Kind {
        match self {
            Value::Element(_) => Kind::Element,
            Value::Set(_) => Kind::Set,
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 20_000_000_000;

/// Which predicate families run their compiled procedure instead of their
/// definition, plus the step budget and trace depth.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub compiled: BTreeSet<String>,
    pub budget: u64,
    pub trace_depth: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::generic()
    }
}

impl EvalConfig {
    /// Every predicate is evaluated from its definition.
    pub fn generic() -> Self {
        EvalConfig {
            compiled: BTreeSet::new(),
            budget: DEFAULT_BUDGET,
            trace_depth: None,
        }
    }

    pub fn with_compiled<'a>(families: impl IntoIterator<Item = &'a str>) -> Self {
        EvalConfig {
            compiled: families.into_iter().map(str::to_string).collect(),
            ..EvalConfig::generic()
        }
    }

    /// Basic set predicates and the path predicates compiled; everything
    /// built on top of them evaluated from its definition.
    pub fn leaves() -> Self {
        EvalConfig::with_compiled(LEAF_FAMILIES.iter().copied())
    }

    pub fn all_compiled() -> Self {
        EvalConfig::with_compiled(library::COMPILED_FAMILIES.iter().copied())
    }

    pub fn budget(mut self, steps: u64) -> Self {
        self.budget = steps;
        self
    }

    pub fn trace(mut self, depth: usize) -> Self {
        self.trace_depth = Some(depth);
        self
    }
}

pub const LEAF_FAMILIES: &[&str] = &[
    "Union",
    "NoIntersect",
    "Intersect",
    "Bipartition",
    "allDiff3",
    "allDiff4",
    "adj",
    "Partition",
    "PAC",
    "PACe",
    "path",
    "pathSurvivesVertexCut",
];

#[derive(Clone, Copy, Debug)]
enum Val {
    Slot(usize),
    Rho,
    Sort(Sort),
}

#[derive(Debug)]
enum Op {
    Const(bool),
    Not(Box<Op>),
    And(Vec<Op>),
    Or(Vec<Op>),
    Iff(Box<Op>, Box<Op>),
    Block(Box<Block>),
    Member(Val, Val),
    Eq(Val, Val),
    Incident(Val, Val),
    CardEq(Val, usize),
    Subset(Val, Val),
    Call(usize, Vec<Val>),
}

#[derive(Debug)]
enum Hint {
    In(Val),
    NotIn(Val),
    Is(Val),
    IsNot(Val),
    EndpointOf(Val),
    EdgeAt(Val),
    Has(Val),
    Lacks(Val),
    Within(Val),
    Contains(Val),
    Disjoint(Val),
    /// `S ∩ T ⊆ {v}` and `v ∈ S`.
    MeetsAt(Val, Val),
    Card(usize),
    /// `S ⊇ Z ∖ ⋃ others`.
    Remainder(Val, Vec<Val>),
}

#[derive(Debug)]
struct BlockVar {
    slot: usize,
    kind: Kind,
    domain: Val,
    hints: Vec<Hint>,
    /// Conjuncts whose last variable is this one.
    checks: Vec<usize>,
}

#[derive(Debug)]
struct Block {
    vars: Vec<BlockVar>,
    conj: Vec<Op>,
    ground: Vec<usize>,
}

#[derive(Debug)]
struct Def {
    name: String,
    params: Vec<Kind>,
    body: Op,
    frame: usize,
    compiled: bool,
}

#[derive(Debug, Default)]
struct Program {
    defs: Vec<Def>,
    index: HashMap<String, usize>,
}

struct Scope {
    names: Vec<(String, usize, Kind)>,
    next: usize,
}

impl Scope {
    fn lookup(&self, name: &str) -> Result<(usize, Kind)> {
        self.names
            .iter()
            .rev()
            .find(|(n, _, _)| n == name)
            .map(|&(_, s, k)| (s, k))
            .ok_or_else(|| Error::Mso(format!("unbound variable `{name}`")))
    }

    fn bind(&mut self, name: &str, kind: Kind) -> usize {
        let slot = self.next;
        self.next += 1;
        self.names.push((name.to_string(), slot, kind));
        slot
    }
}

fn negate(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True => False,
        False => True,
        Not(a) => (**a).clone(),
        And(fs) => Or(fs.iter().map(negate).collect()),
        Or(fs) => And(fs.iter().map(negate).collect()),
        Implies(a, b) => And(vec![(**a).clone(), negate(b)]),
        Forall(b, body) => Exists(b.clone(), Box::new(negate(body))),
        other => Not(Box::new(other.clone())),
    }
}

impl Program {
    fn define(&mut self, name: &str, config: &EvalConfig) -> Result<usize> {
        let name = library::resolve_alias(name);
        if let Some(&id) = self.index.get(&name) {
            return Ok(id);
        }
        let def = library::definition(&name).ok_or_else(|| Error::Mso(format!("unknown predicate `{name}`")))?;
        let compiled = config.compiled.contains(family(&name).0) && library::has_compiled(&name);
        let id = self.defs.len();
        self.defs.push(Def {
            name: name.clone(),
            params: def.params.iter().map(|p| p.1).collect(),
            body: Op::Const(false),
            frame: def.params.len(),
            compiled,
        });
        self.index.insert(name, id);
        if !compiled {
            let mut scope = Scope { names: vec![], next: 0 };
            for (p, k) in &def.params {
                scope.bind(p, *k);
            }
            let body = self.lower(&def.body, &mut scope, config)?;
            self.defs[id].body = body;
            self.defs[id].frame = scope.next;
        }
        Ok(id)
    }

    fn term(&self, t: &Term, want: Kind, scope: &Scope) -> Result<Val> {
        match t {
            Term::Var(n) => {
                let (slot, kind) = scope.lookup(n)?;
                if kind != want {
                    return Err(Error::Mso(format!("`{n}` used as {want:?} but bound as {kind:?}")));
                }
                Ok(Val::Slot(slot))
            }
            Term::Rho if want == Kind::Element => Ok(Val::Rho),
            Term::Sort(s) if want == Kind::Set => Ok(Val::Sort(*s)),
            _ => Err(Error::Mso(format!("`{t}` cannot be used as {want:?}"))),
        }
    }

    fn lower(&mut self, f: &Formula, scope: &mut Scope, config: &EvalConfig) -> Result<Op> {
        use Kind::{Element as E, Set as S};
        Ok(match f {
            Formula::True => Op::Const(true),
            Formula::False => Op::Const(false),
            Formula::Not(a) => Op::Not(Box::new(self.lower(a, scope, config)?)),
            Formula::And(fs) => Op::And(fs.iter().map(|x| self.lower(x, scope, config)).collect::<Result<_>>()?),
            Formula::Or(fs) => Op::Or(fs.iter().map(|x| self.lower(x, scope, config)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Op::Or(vec![
                Op::Not(Box::new(self.lower(a, scope, config)?)),
                self.lower(b, scope, config)?,
            ]),
            Formula::Iff(a, b) => Op::Iff(
                Box::new(self.lower(a, scope, config)?),
                Box::new(self.lower(b, scope, config)?),
            ),
            Formula::Exists(..) => Op::Block(Box::new(self.block(f, scope, config)?)),
            Formula::Forall(b, body) => {
                let inner = Formula::Exists(b.clone(), Box::new(negate(body)));
                Op::Not(Box::new(Op::Block(Box::new(self.block(&inner, scope, config)?))))
            }
            Formula::Member(x, s) => Op::Member(self.term(x, E, scope)?, self.term(s, S, scope)?),
            Formula::Eq(x, y) => Op::Eq(self.term(x, E, scope)?, self.term(y, E, scope)?),
            Formula::Incident(e, v) => Op::Incident(self.term(e, E, scope)?, self.term(v, E, scope)?),
            Formula::CardEq(s, c) => Op::CardEq(self.term(s, S, scope)?, *c),
            Formula::Subset(a, b) => Op::Subset(self.term(a, S, scope)?, self.term(b, S, scope)?),
            Formula::Call(name, args) => {
                let id = self.define(name, config)?;
                let params = self.defs[id].params.clone();
                if params.len() != args.len() {
                    return Err(Error::Mso(format!(
                        "`{name}` takes {} arguments, got {}",
                        params.len(),
                        args.len()
                    )));
                }
                let vals = args
                    .iter()
                    .zip(&params)
                    .map(|(a, k)| self.term(a, *k, scope))
                    .collect::<Result<_>>()?;
                Op::Call(id, vals)
            }
        })
    }

    fn collect(
        &mut self,
        f: &Formula,
        scope: &mut Scope,
        config: &EvalConfig,
        vars: &mut Vec<(usize, Kind, Val)>,
        conj: &mut Vec<Op>,
    ) -> Result<()> {
        match f {
            Formula::Exists(Binder { name, kind, domain }, body) => {
                let d = self.term(domain, Kind::Set, scope)?;
                let slot = scope.bind(name, *kind);
                vars.push((slot, *kind, d));
                let r = self.collect(body, scope, config, vars, conj);
                scope.names.pop();
                r
            }
            Formula::And(fs) => fs.iter().try_for_each(|x| self.collect(x, scope, config, vars, conj)),
            other => {
                conj.push(self.lower(other, scope, config)?);
                Ok(())
            }
        }
    }

    fn block(&mut self, f: &Formula, scope: &mut Scope, config: &EvalConfig) -> Result<Block> {
        let mut vars = Vec::new();
        let mut conj = Vec::new();
        self.collect(f, scope, config, &mut vars, &mut conj)?;
        let position: HashMap<usize, usize> = vars.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
        let mut block_vars: Vec<BlockVar> = vars
            .iter()
            .map(|&(slot, kind, domain)| BlockVar {
                slot,
                kind,
                domain,
                hints: vec![],
                checks: vec![],
            })
            .collect();
        let mut ground = Vec::new();
        for (c, op) in conj.iter().enumerate() {
            let mut slots = Vec::new();
            slots_of(op, &mut slots);
            match slots.iter().filter_map(|s| position.get(s)).max() {
                Some(&i) => block_vars[i].checks.push(c),
                None => ground.push(c),
            }
        }
        for i in 0..block_vars.len() {
            let target = block_vars[i].slot;
            let bound = |v: &Val| match v {
                Val::Slot(s) => position.get(s).is_none_or(|&j| j < i),
                _ => true,
            };
            let mut hints = Vec::new();
            for op in &conj {
                self.hints(op, target, block_vars[i].kind, &bound, &mut hints);
            }
            block_vars[i].hints = hints;
        }
        Ok(Block {
            vars: block_vars,
            conj,
            ground,
        })
    }

    fn hints(&self, op: &Op, t: usize, kind: Kind, bound: &dyn Fn(&Val) -> bool, out: &mut Vec<Hint>) {
        let is_t = |v: &Val| matches!(v, Val::Slot(s) if *s == t);
        let ok = |v: &Val| !is_t(v) && bound(v);
        match (kind, op) {
            (Kind::Element, Op::Member(x, s)) if is_t(x) && ok(s) => out.push(Hint::In(*s)),
            (Kind::Element, Op::Eq(x, y)) if is_t(x) && ok(y) => out.push(Hint::Is(*y)),
            (Kind::Element, Op::Eq(y, x)) if is_t(x) && ok(y) => out.push(Hint::Is(*y)),
            (Kind::Element, Op::Incident(e, x)) if is_t(x) && ok(e) => out.push(Hint::EndpointOf(*e)),
            (Kind::Element, Op::Incident(x, v)) if is_t(x) && ok(v) => out.push(Hint::EdgeAt(*v)),
            (Kind::Element, Op::Not(inner)) => match &**inner {
                Op::Member(x, s) if is_t(x) && ok(s) => out.push(Hint::NotIn(*s)),
                Op::Eq(x, y) if is_t(x) && ok(y) => out.push(Hint::IsNot(*y)),
                Op::Eq(y, x) if is_t(x) && ok(y) => out.push(Hint::IsNot(*y)),
                _ => {}
            },
            (Kind::Set, Op::Member(x, s)) if is_t(s) && ok(x) => out.push(Hint::Has(*x)),
            (Kind::Set, Op::Not(inner)) => {
                if let Op::Member(x, s) = &**inner {
                    if is_t(s) && ok(x) {
                        out.push(Hint::Lacks(*x));
                    }
                }
            }
            (Kind::Set, Op::Subset(a, b)) if is_t(a) && ok(b) => out.push(Hint::Within(*b)),
            (Kind::Set, Op::Subset(a, b)) if is_t(b) && ok(a) => out.push(Hint::Contains(*a)),
            (Kind::Set, Op::CardEq(s, c)) if is_t(s) => out.push(Hint::Card(*c)),
            (Kind::Set, Op::Call(id, a)) => match family(&self.defs[*id].name).0 {
                "NoIntersect" => {
                    if is_t(&a[0]) && ok(&a[1]) {
                        out.push(Hint::Disjoint(a[1]));
                    } else if is_t(&a[1]) && ok(&a[0]) {
                        out.push(Hint::Disjoint(a[0]));
                    }
                }
                "Intersect" if ok(&a[2]) => {
                    if is_t(&a[0]) && ok(&a[1]) {
                        out.push(Hint::MeetsAt(a[1], a[2]));
                    } else if is_t(&a[1]) && ok(&a[0]) {
                        out.push(Hint::MeetsAt(a[0], a[2]));
                    }
                }
                name @ ("Union" | "Bipartition") => {
                    let (z, p, q) = (&a[0], &a[1], &a[2]);
                    for (me, other) in [(p, q), (q, p)] {
                        if is_t(me) && !is_t(other) && ok(z) {
                            out.push(Hint::Within(*z));
                            if ok(other) {
                                out.push(Hint::Remainder(*z, vec![*other]));
                                if name == "Bipartition" {
                                    out.push(Hint::Disjoint(*other));
                                }
                            }
                        }
                    }
                }
                "Partition" => {
                    let (s, cs) = (&a[0], &a[1..]);
                    if cs.iter().filter(|c| is_t(c)).count() == 1 && ok(s) {
                        out.push(Hint::Within(*s));
                        let others: Vec<Val> = cs.iter().filter(|c| !is_t(c)).copied().collect();
                        for o in others.iter().filter(|o| ok(o)) {
                            out.push(Hint::Disjoint(*o));
                        }
                        if others.iter().all(ok) {
                            out.push(Hint::Remainder(*s, others));
                        }
                    }
                }
                _ => {}
            },
            _ => {}
        }
    }
}

fn slots_of(op: &Op, out: &mut Vec<usize>) {
    let val = |v: &Val, out: &mut Vec<usize>| {
        if let Val::Slot(s) = v {
            out.push(*s);
        }
    };
    match op {
        Op::Const(_) => {}
        Op::Not(a) => slots_of(a, out),
        Op::And(xs) | Op::Or(xs) => xs.iter().for_each(|x| slots_of(x, out)),
        Op::Iff(a, b) => {
            slots_of(a, out);
            slots_of(b, out);
        }
        Op::Block(b) => {
            for v in &b.vars {
                val(&v.domain, out);
            }
            b.conj.iter().for_each(|x| slots_of(x, out));
        }
        Op::Member(a, b) | Op::Eq(a, b) | Op::Incident(a, b) | Op::Subset(a, b) => {
            val(a, out);
            val(b, out);
        }
        Op::CardEq(a, _) => val(a, out),
        Op::Call(_, args) => args.iter().for_each(|a| val(a, out)),
    }
}

struct State {
    steps: u64,
    budget: u64,
    depth: usize,
    calls: usize,
    memo: HashMap<(usize, Vec<u64>), bool>,
    trace_depth: Option<usize>,
    trace: Vec<String>,
}

impl State {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded { depth: self.depth });
        }
        Ok(())
    }
}

struct Machine<'a> {
    prog: &'a Program,
    s: &'a MsoStructure,
}

fn bit(x: u64, i: usize) -> bool {
    i < 64 && x >> i & 1 == 1
}

impl Machine<'_> {
    fn val(&self, v: Val, frame: &[u64]) -> Result<u64> {
        Ok(match v {
            Val::Slot(i) => frame[i],
            Val::Rho => self.s.rho().ok_or_else(|| Error::Mso("the structure has no ρ".into()))? as u64,
            Val::Sort(s) => self.s.sort(s),
        })
    }

    fn eval(&self, st: &mut State, op: &Op, frame: &mut [u64]) -> Result<bool> {
        Ok(match op {
            Op::Const(b) => *b,
            Op::Not(a) => !self.eval(st, a, frame)?,
            Op::And(xs) => {
                for x in xs {
                    if !self.eval(st, x, frame)? {
                        return Ok(false);
                    }
                }
                true
            }
            Op::Or(xs) => {
                for x in xs {
                    if self.eval(st, x, frame)? {
                        return Ok(true);
                    }
                }
                false
            }
            Op::Iff(a, b) => self.eval(st, a, frame)? == self.eval(st, b, frame)?,
            Op::Block(b) => self.block(st, b, frame)?,
            Op::Member(x, s) => bit(self.val(*s, frame)?, self.val(*x, frame)? as usize),
            Op::Eq(x, y) => self.val(*x, frame)? == self.val(*y, frame)?,
            Op::Incident(e, v) => self.s.incident(self.val(*e, frame)? as usize, self.val(*v, frame)? as usize),
            Op::CardEq(s, c) => self.val(*s, frame)?.count_ones() as usize == *c,
            Op::Subset(a, b) => self.val(*a, frame)? & !self.val(*b, frame)? == 0,
            Op::Call(id, args) => {
                let vals = args.iter().map(|a| self.val(*a, frame)).collect::<Result<Vec<u64>>>()?;
                self.call(st, *id, vals)?
            }
        })
    }

    fn call(&self, st: &mut State, id: usize, vals: Vec<u64>) -> Result<bool> {
        let def = &self.prog.defs[id];
        let traced = st.trace_depth.is_some_and(|d| st.calls < d);
        let key = (id, vals);
        let r = if def.compiled {
            st.tick()?;
            library::run_compiled(self.s, &def.name, &key.1).expect("compiled procedure registered")?
        } else if let Some(&r) = st.memo.get(&key) {
            r
        } else {
            let mut frame = vec![0u64; def.frame];
            frame[..key.1.len()].copy_from_slice(&key.1);
            st.calls += 1;
            let r = self.eval(st, &def.body, &mut frame);
            st.calls -= 1;
            let r = r?;
            st.memo.insert(key.clone(), r);
            r
        };
        if traced {
            let args: Vec<String> = key
                .1
                .iter()
                .zip(&def.params)
                .map(|(&v, k)| match k {
                    Kind::Element => self.s.name(v as usize).to_string(),
                    Kind::Set => self.s.render_set(v),
                })
                .collect();
            let tag = if def.compiled { " [compiled]" } else { "" };
            st.trace
                .push(format!("{}{}({}) = {r}{tag}", "  ".repeat(st.calls), def.name, args.join(",")));
        }
        Ok(r)
    }

    fn block(&self, st: &mut State, b: &Block, frame: &mut [u64]) -> Result<bool> {
        for &c in &b.ground {
            if !self.eval(st, &b.conj[c], frame)? {
                return Ok(false);
            }
        }
        self.search(st, b, 0, frame)
    }

    fn search(&self, st: &mut State, b: &Block, i: usize, frame: &mut [u64]) -> Result<bool> {
        let Some(var) = b.vars.get(i) else {
            return Ok(true);
        };
        st.depth += 1;
        let found = match var.kind {
            Kind::Element => self.search_element(st, b, i, frame)?,
            Kind::Set => self.search_set(st, b, i, frame)?,
        };
        st.depth -= 1;
        Ok(found)
    }

    fn accept(&self, st: &mut State, b: &Block, i: usize, frame: &mut [u64]) -> Result<bool> {
        st.tick()?;
        for &c in &b.vars[i].checks {
            if !self.eval(st, &b.conj[c], frame)? {
                return Ok(false);
            }
        }
        self.search(st, b, i + 1, frame)
    }

    fn search_element(&self, st: &mut State, b: &Block, i: usize, frame: &mut [u64]) -> Result<bool> {
        let var = &b.vars[i];
        let s = self.s;
        let mut allowed = self.val(var.domain, frame)? & s.all();
        for h in &var.hints {
            allowed &= match *h {
                Hint::In(v) => self.val(v, frame)?,
                Hint::NotIn(v) => !self.val(v, frame)?,
                Hint::Is(v) => 1u64.checked_shl(self.val(v, frame)? as u32).unwrap_or(0),
                Hint::IsNot(v) => !1u64.checked_shl(self.val(v, frame)? as u32).unwrap_or(0),
                Hint::EndpointOf(v) => {
                    let e = self.val(v, frame)? as usize;
                    if s.is_edge(e) {
                        let (a, c) = s.endpoints(e);
                        1 << a | 1 << c
                    } else {
                        0
                    }
                }
                Hint::EdgeAt(v) => {
                    let x = self.val(v, frame)? as usize;
                    if s.is_vertex(x) {
                        s.edges_at(x)
                    } else {
                        0
                    }
                }
                _ => u64::MAX,
            };
        }
        while allowed != 0 {
            let x = allowed.trailing_zeros() as usize;
            allowed &= allowed - 1;
            frame[var.slot] = x as u64;
            if self.accept(st, b, i, frame)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn search_set(&self, st: &mut State, b: &Block, i: usize, frame: &mut [u64]) -> Result<bool> {
        let var = &b.vars[i];
        let mut allowed = self.val(var.domain, frame)? & self.s.all();
        let mut must = 0u64;
        let mut card = None;
        for h in &var.hints {
            match *h {
                Hint::Has(v) => must |= 1u64.checked_shl(self.val(v, frame)? as u32).unwrap_or(u64::MAX),
                Hint::Lacks(v) => allowed &= !1u64.checked_shl(self.val(v, frame)? as u32).unwrap_or(0),
                Hint::Within(v) => allowed &= self.val(v, frame)?,
                Hint::Contains(v) => must |= self.val(v, frame)?,
                Hint::Disjoint(v) => allowed &= !self.val(v, frame)?,
                Hint::MeetsAt(t, v) => {
                    let x = 1u64.checked_shl(self.val(v, frame)? as u32).unwrap_or(0);
                    if x == 0 {
                        return Ok(false);
                    }
                    allowed &= !(self.val(t, frame)? & !x);
                    must |= x;
                }
                Hint::Card(c) => card = Some(c),
                Hint::Remainder(z, ref others) => {
                    let mut rest = self.val(z, frame)?;
                    for o in others {
                        rest &= !self.val(*o, frame)?;
                    }
                    must |= rest;
                }
                _ => {}
            }
        }
        if must & !allowed != 0 {
            return Ok(false);
        }
        let free = allowed & !must;
        let mut sub = 0u64;
        loop {
            let m = must | sub;
            st.tick()?;
            if card.is_none_or(|c| m.count_ones() as usize == c) {
                frame[var.slot] = m;
                if self.accept(st, b, i, frame)? {
                    return Ok(true);
                }
            }
            if sub == free {
                break;
            }
            sub = (sub | !free).wrapping_add(1) & free;
        }
        Ok(false)
    }
}

/// Evaluates formulas and library predicates over one structure. The call
/// memo lives as long as the evaluator.
pub struct Evaluator<'s> {
    s: &'s MsoStructure,
    config: EvalConfig,
    prog: Program,
    st: State,
}

impl<'s> Evaluator<'s> {
    pub fn new(s: &'s MsoStructure, config: EvalConfig) -> Self {
        let st = State {
            steps: 0,
            budget: config.budget,
            depth: 0,
            calls: 0,
            memo: HashMap::new(),
            trace_depth: config.trace_depth,
            trace: vec![],
        };
        Evaluator {
            s,
            config,
            prog: Program::default(),
            st,
        }
    }

    pub fn structure(&self) -> &MsoStructure {
        self.s
    }

    /// Truth value of `f` with its free variables bound by `env`.
    pub fn evaluate(&mut self, f: &Formula, env: &[(&str, Value)]) -> Result<bool> {
        let mut scope = Scope { names: vec![], next: 0 };
        for (name, v) in env {
            self.check_value(*v)?;
            scope.bind(name, v.kind());
        }
        let op = self.prog.lower(f, &mut scope, &self.config)?;
        let mut frame = vec![0u64; scope.next];
        for (i, (_, v)) in env.iter().enumerate() {
            frame[i] = v.raw();
        }
        self.st.depth = 0;
        let m = Machine {
            prog: &self.prog,
            s: self.s,
        };
        m.eval(&mut self.st, &op, &mut frame)
    }

    /// Truth value of the library predicate `name` on `args`.
    pub fn call(&mut self, name: &str, args: &[Value]) -> Result<bool> {
        let id = self.prog.define(name, &self.config)?;
        let params = &self.prog.defs[id].params;
        if params.len() != args.len() || params.iter().zip(args).any(|(k, a)| *k != a.kind()) {
            return Err(Error::Mso(format!("bad arguments for `{name}`")));
        }
        for a in args {
            self.check_value(*a)?;
        }
        self.st.depth = 0;
        let m = Machine {
            prog: &self.prog,
            s: self.s,
        };
        m.call(&mut self.st, id, args.iter().map(|a| a.raw()).collect())
    }

    fn check_value(&self, v: Value) -> Result<()> {
        match v {
            Value::Element(x) if x >= self.s.size() => Err(Error::Mso(format!("element {x} outside the universe"))),
            Value::Set(m) if m & !self.s.all() != 0 => Err(Error::Mso("set outside the universe".into())),
            _ => Ok(()),
        }
    }

    pub fn steps(&self) -> u64 {
        self.st.steps
    }

    pub fn trace(&self) -> &[String] {
        &self.st.trace
    }
}

/// Generic evaluation of `f` (no compiled predicates) under `env`.
pub fn evaluate(s: &MsoStructure, f: &Formula, env: &[(&str, Value)]) -> Result<bool> {
    Evaluator::new(s, EvalConfig::generic()).evaluate(f, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displaygraph::build_display;
    use crate::msol::formula::*;
    use crate::msol::structure::structure_from_display;
    use crate::treeio::parse_newick;

    fn quartet_pair() -> MsoStructure {
        let d = build_display(
            &parse_newick("(u,v,(w,y));").unwrap(),
            &parse_newick("(u,w,(v,y));").unwrap(),
        )
        .unwrap();
        structure_from_display(&d).unwrap()
    }

    fn el(s: &MsoStructure, n: &str) -> Value {
        Value::Element(s.element(n).unwrap())
    }

    #[test]
    fn leading_disjunct_of_pac() {
        let s = quartet_pair();
        let a = el(&s, "u");
        assert!(evaluate(&s, &eq("x1", "x2"), &[("x1", a), ("x2", a)]).unwrap());
    }

    #[test]
    fn quartets_of_quartet_pair() {
        let s = quartet_pair();
        let args = |names: [&str; 4]| names.map(|n| el(&s, n));
        for config in [EvalConfig::leaves(), EvalConfig::all_compiled()] {
            let mut ev = Evaluator::new(&s, config);
            assert!(ev.call("Quartet1", &args(["u", "v", "w", "y"])).unwrap());
            assert!(!ev.call("Quartet1", &args(["u", "w", "v", "y"])).unwrap());
            assert!(ev.call("Quartet2", &args(["u", "w", "v", "y"])).unwrap());
        }
    }

    #[test]
    fn budget_reports_depth() {
        let s = quartet_pair();
        let mut ev = Evaluator::new(&s, EvalConfig::generic().budget(50));
        let f = exists_sets(&["A", "B"], Sort::Universe, and([card_eq("A", 9), card_eq("B", 9), neq("A", "B")]));
        // `neq` on sets is ill-kinded
        assert!(matches!(ev.evaluate(&f, &[]), Err(Error::Mso(_))));
        let f = exists_sets(&["A", "B"], Sort::Universe, and([subset("B", "A"), card_eq("B", 30)]));
        assert!(matches!(ev.evaluate(&f, &[]), Err(Error::BudgetExceeded { depth }) if depth >= 1));
    }

    #[test]
    fn forall_is_dual_of_exists() {
        let s = quartet_pair();
        let x = Sort::Taxa;
        let f = forall("x", x, exists("e", Sort::E1, incident("e", "x")));
        assert!(evaluate(&s, &f, &[]).unwrap());
        let g = forall("x", Sort::Vertices, mem("x", x));
        assert!(!evaluate(&s, &g, &[]).unwrap());
        assert!(!evaluate(&s, &g.reversed(), &[]).unwrap());
    }

    #[test]
    fn trace_is_depth_limited() {
        let s = quartet_pair();
        let mut ev = Evaluator::new(&s, EvalConfig::leaves().trace(1));
        let v1 = Value::Set(s.sort(Sort::V1));
        ev.call("PAC", &[v1, el(&s, "u"), el(&s, "y"), Value::Set(0)]).unwrap();
        assert_eq!(ev.trace().len(), 1);
        assert!(ev.trace()[0].starts_with("PAC("), "{:?}", ev.trace());
    }
}
