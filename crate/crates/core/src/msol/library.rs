//! The predicate library. Every definition is written as a formula; most
//! also have a compiled procedure that decides the same relation directly.
//! Macro families carry their list length in brackets: `Clade1[2]`,
//! `CPS[1]`, `Partition[5]`, `HybNum[3]`, `PhiUMAF[2]`.

use super::formula::*;
use super::structure::{MsoStructure, Sort};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<(String, Kind)>,
    pub body: Formula,
}

impl Definition {
    fn new(name: &str, params: &[(&str, Kind)], body: Formula) -> Definition {
        Definition {
            name: name.to_string(),
            params: params.iter().map(|(n, k)| (n.to_string(), *k)).collect(),
            body,
        }
    }
}

impl std::fmt::Display for Definition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ps: Vec<&str> = self.params.iter().map(|(n, _)| n.as_str()).collect();
        write!(f, "{}({}) := {}", self.name, ps.join(","), self.body)
    }
}

use Kind::{Element as El, Set as St};

/// Splits `Name[t]` into `("Name", Some(t))`.
pub fn family(name: &str) -> (&str, Option<usize>) {
    match name.find('[') {
        Some(i) if name.ends_with(']') => (&name[..i], name[i + 1..name.len() - 1].parse().ok()),
        _ => (name, None),
    }
}

/// Tree index of a name ending in `1` or `2`.
fn tree_suffix(base: &str, stem: &str) -> Option<usize> {
    let rest = base.strip_prefix(stem)?;
    match rest {
        "1" => Some(1),
        "2" => Some(2),
        _ => None,
    }
}

fn bipartition_cut(cross_ok: Formula) -> Formula {
    not(exists_sets(
        &["P", "Q"],
        Sort::Universe,
        and([
            call("Bipartition", ["Z", "P", "Q"]),
            mem("x1", "P"),
            mem("x2", "Q"),
            forall_many(
                &["p", "q"],
                Sort::Universe,
                implies(and([mem("p", "P"), mem("q", "Q")]), or([not(call("adj", ["p", "q"])), cross_ok])),
            ),
        ]),
    ))
}

/// The common skeleton of QAC, Quartet and TAC: an embedding of the quartet
/// `xa xb | xc xd` in `V_i`, whose five arms satisfy `arm(set, from, to)`.
fn embedding(i: usize, xd: Term, arm: &dyn Fn(&str, &str, Term) -> Formula, d_arm: &dyn Fn(Term) -> Formula) -> Formula {
    let vi = Sort::vertices_of(i);
    exists_many(
        &["u", "v"],
        vi,
        and([
            neq("u", "v"),
            exists_sets(
                &["A", "B", "C", "D", "P"],
                vi,
                and([
                    mem("xa", "A"),
                    mem("u", "A"),
                    mem("xb", "B"),
                    mem("u", "B"),
                    mem("xc", "C"),
                    mem("v", "C"),
                    mem(xd.clone(), "D"),
                    mem("v", "D"),
                    mem("u", "P"),
                    mem("v", "P"),
                    call("Intersect", ["A", "B", "u"]),
                    call("Intersect", ["A", "P", "u"]),
                    call("Intersect", ["B", "P", "u"]),
                    call("Intersect", ["C", "D", "v"]),
                    call("Intersect", ["C", "P", "v"]),
                    call("Intersect", ["D", "P", "v"]),
                    call("NoIntersect", ["A", "C"]),
                    call("NoIntersect", ["B", "C"]),
                    call("NoIntersect", ["A", "D"]),
                    call("NoIntersect", ["B", "D"]),
                    arm("A", "u", "xa".into()),
                    arm("B", "u", "xb".into()),
                    arm("C", "v", "xc".into()),
                    d_arm(xd),
                    arm("P", "u", "v".into()),
                ]),
            ),
        ]),
    )
}

fn pac(set: &str, from: &str, to: Term) -> Formula {
    Formula::Call("PAC".into(), vec![set.into(), from.into(), to, "K".into()])
}

fn path(set: &str, from: &str, to: Term) -> Formula {
    Formula::Call("path".into(), vec![set.into(), from.into(), to])
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("{prefix}{j}")).collect()
}

fn clade_macro(i: usize, t: usize) -> Definition {
    let zs = names("Z", t);
    let mut conj: Vec<Formula> = zs.iter().map(|z| call("NoIntersect", ["C", z.as_str()])).collect();
    let icu = format!("InCladeUnder{i}");
    let mut covered = vec![mem("x", "C")];
    covered.extend(zs.iter().map(|z| mem("x", z)));
    conj.push(exists(
        "u",
        Sort::vertices_of(i),
        and([
            forall("x", Sort::Taxa, implies(mem("x", "C"), call(&icu, ["u", "x"]))),
            forall("x", Sort::Taxa, implies(call(&icu, ["u", "x"]), or(covered))),
        ]),
    ));
    let mut params = vec![("C".to_string(), St)];
    params.extend(zs.into_iter().map(|z| (z, St)));
    Definition {
        name: format!("Clade{i}[{t}]"),
        params,
        body: and(conj),
    }
}

fn triplets_agree() -> Formula {
    forall_many(
        &["x", "y", "z"],
        Sort::Universe,
        implies(
            and([
                mem("x", "C"),
                mem("y", "C"),
                mem("z", "C"),
                call("allDiff3", ["x", "y", "z"]),
            ]),
            iff(call("Triplet1", ["x", "y", "z"]), call("Triplet2", ["x", "y", "z"])),
        ),
    )
}

fn cps_macro(t: usize) -> Definition {
    let zs = names("Z", t);
    let mut args: Vec<Term> = vec!["C".into()];
    args.extend(zs.iter().map(Term::from));
    let mut params = vec![("C".to_string(), St)];
    params.extend(zs.iter().map(|z| (z.clone(), St)));
    Definition {
        name: format!("CPS[{t}]"),
        params,
        body: and([
            Formula::Call(format!("Clade1[{t}]"), args.clone()),
            Formula::Call(format!("Clade2[{t}]"), args),
            triplets_agree(),
        ]),
    }
}

fn partition_macro(n: usize) -> Definition {
    let cs = names("C", n);
    let mut conj = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            conj.push(call("NoIntersect", [cs[i].as_str(), cs[j].as_str()]));
        }
    }
    conj.push(forall(
        "u",
        Sort::Universe,
        iff(mem("u", "S"), or(cs.iter().map(|c| mem("u", c)))),
    ));
    let mut params = vec![("S".to_string(), St)];
    params.extend(cs.into_iter().map(|c| (c, St)));
    Definition {
        name: format!("Partition[{n}]"),
        params,
        body: and(conj),
    }
}

/// Upper bound on the number of predicate calls in `HybNum[k]`.
pub fn hybnum_call_bound(k: usize) -> usize {
    2 * k + 4
}

fn hybnum_macro(k: usize) -> Definition {
    let cs = names("C", k + 1);
    let mut part: Vec<Term> = vec![Term::Sort(Sort::Taxa)];
    part.extend(cs.iter().map(Term::from));
    let mut conj = vec![Formula::Call(format!("Partition[{}]", k + 1), part)];
    conj.push(call("CPS", [cs[0].as_str()]));
    for j in 1..=k {
        // CPS(C_{j+1}, [C_1 .. C_j])
        let mut args = vec![Term::from(&cs[j])];
        args.extend(cs[..j].iter().map(Term::from));
        conj.push(Formula::Call(format!("CPS[{j}]"), args));
    }
    let refs: Vec<&str> = cs.iter().map(String::as_str).collect();
    let body = exists_sets(&refs, Sort::Taxa, and(conj));
    debug_assert!(body.call_count() <= hybnum_call_bound(k));
    Definition {
        name: format!("HybNum[{k}]"),
        params: vec![],
        body,
    }
}

fn phi_macro(k: usize, rooted: bool) -> Definition {
    let card = k.saturating_sub(1);
    let pairs = if rooted { Sort::TaxaRho } else { Sort::Taxa };
    let mut conj = vec![
        card_eq("K1", card),
        card_eq("K2", card),
        subset("K1", Sort::E1),
        subset("K2", Sort::E2),
        forall_many(
            &["x1", "x2"],
            pairs,
            iff(
                call("PAC", [Term::Sort(Sort::V1), "x1".into(), "x2".into(), "K1".into()]),
                call("PAC", [Term::Sort(Sort::V2), "x1".into(), "x2".into(), "K2".into()]),
            ),
        ),
    ];
    let both = |p: &str, args: &[&str]| {
        let mut a1: Vec<Term> = args.iter().map(|&x| x.into()).collect();
        let mut a2 = a1.clone();
        a1.push("K1".into());
        a2.push("K2".into());
        iff(Formula::Call(format!("{p}1"), a1), Formula::Call(format!("{p}2"), a2))
    };
    if rooted {
        conj.push(forall_many(
            &["x1", "x2", "x3"],
            Sort::Taxa,
            implies(
                call("allDiff3", ["x1", "x2", "x3"]),
                and([
                    both("TAC", &["x1", "x2", "x3"]),
                    both("TAC", &["x1", "x3", "x2"]),
                    both("TAC", &["x2", "x3", "x1"]),
                ]),
            ),
        ));
    } else {
        conj.push(forall_many(
            &["x1", "x2", "x3", "x4"],
            Sort::Taxa,
            implies(
                call("allDiff4", ["x1", "x2", "x3", "x4"]),
                and([
                    both("QAC", &["x1", "x2", "x3", "x4"]),
                    both("QAC", &["x1", "x3", "x2", "x4"]),
                    both("QAC", &["x1", "x4", "x2", "x3"]),
                ]),
            ),
        ));
    }
    Definition {
        name: format!("{}[{k}]", if rooted { "PhiRSPR" } else { "PhiUMAF" }),
        params: vec![("K1".into(), St), ("K2".into(), St)],
        body: and(conj),
    }
}

fn fitch_rule(i: usize, target: &str, cond: Formula) -> Formula {
    let child = format!("child{i}");
    forall(
        "u",
        Sort::core_of(i),
        implies(
            not(mem("u", Sort::Taxa)),
            iff(
                mem("u", target),
                exists_many(
                    &["c1", "c2"],
                    Sort::vertices_of(i),
                    and([
                        neq("c1", "c2"),
                        call(&child, ["u", "c1"]),
                        call(&child, ["u", "c2"]),
                        cond,
                    ]),
                ),
            ),
        ),
    )
}

fn fitch_block(i: usize) -> Definition {
    let core = Term::Sort(Sort::core_of(i));
    let nm = |a: &str, s: &str| not(mem(a, s));
    let body = and([
        Formula::Call(
            "Partition[4]".into(),
            vec![core, "R".into(), "B".into(), "RBI".into(), "RBU".into()],
        ),
        forall("x", Sort::Taxa, and([nm("x", "RBI"), nm("x", "RBU")])),
        fitch_rule(i, "R", and([mem("c1", "R"), nm("c2", "B")])),
        fitch_rule(i, "B", and([mem("c1", "B"), nm("c2", "R")])),
        fitch_rule(i, "RBI", and([nm("c1", "R"), nm("c1", "B"), nm("c2", "R"), nm("c2", "B")])),
        fitch_rule(i, "RBU", and([mem("c1", "R"), mem("c2", "B")])),
    ]);
    Definition::new(
        &format!("Fitch{i}"),
        &[("R", St), ("B", St), ("RBI", St), ("RBU", St)],
        body,
    )
}

/// Looks up a definition, expanding macro families on demand.
pub fn definition(name: &str) -> Option<Definition> {
    let (base, param) = family(name);
    if let Some(t) = param {
        return match base {
            "Clade1" => Some(clade_macro(1, t)),
            "Clade2" => Some(clade_macro(2, t)),
            "CPS" => Some(cps_macro(t)),
            "Partition" if t > 0 => Some(partition_macro(t)),
            "HybNum" if t > 0 => Some(hybnum_macro(t)),
            "PhiUMAF" => Some(phi_macro(t, false)),
            "PhiRSPR" => Some(phi_macro(t, true)),
            _ => None,
        };
    }
    let def = match name {
        "Union" => Definition::new(
            name,
            &[("Z", St), ("P", St), ("Q", St)],
            and([
                forall("z", Sort::Universe, implies(mem("z", "Z"), or([mem("z", "P"), mem("z", "Q")]))),
                forall("z", Sort::Universe, implies(mem("z", "P"), mem("z", "Z"))),
                forall("z", Sort::Universe, implies(mem("z", "Q"), mem("z", "Z"))),
            ]),
        ),
        "NoIntersect" => Definition::new(name, &[("P", St), ("Q", St)], forall("u", "P", not(mem("u", "Q")))),
        "Intersect" => Definition::new(
            name,
            &[("P", St), ("Q", St), ("v", El)],
            and([
                mem("v", "P"),
                mem("v", "Q"),
                forall("u", "P", implies(mem("u", "Q"), eq("u", "v"))),
            ]),
        ),
        "Bipartition" => Definition::new(
            name,
            &[("Z", St), ("P", St), ("Q", St)],
            and([call("Union", ["Z", "P", "Q"]), call("NoIntersect", ["P", "Q"])]),
        ),
        "allDiff3" => Definition::new(
            name,
            &[("x1", El), ("x2", El), ("x3", El)],
            and([neq("x1", "x2"), neq("x1", "x3"), neq("x2", "x3")]),
        ),
        "allDiff4" => Definition::new(
            name,
            &[("x1", El), ("x2", El), ("x3", El), ("x4", El)],
            and([
                neq("x1", "x2"),
                neq("x1", "x3"),
                neq("x1", "x4"),
                neq("x2", "x3"),
                neq("x2", "x4"),
                neq("x3", "x4"),
            ]),
        ),
        "adj" => Definition::new(
            name,
            &[("p", El), ("q", El)],
            exists("e", Sort::Edges, and([incident("e", "p"), incident("e", "q")])),
        ),
        "PAC" => Definition::new(
            name,
            &[("Z", St), ("x1", El), ("x2", El), ("K", St)],
            or([
                eq("x1", "x2"),
                bipartition_cut(exists("g", "K", and([incident("g", "p"), incident("g", "q")]))),
            ]),
        ),
        // PAC specialised to a single cut edge
        "PACe" => Definition::new(
            name,
            &[("Z", St), ("x1", El), ("x2", El), ("e", El)],
            or([eq("x1", "x2"), bipartition_cut(and([incident("e", "p"), incident("e", "q")]))]),
        ),
        "path" => Definition::new(
            name,
            &[("Z", St), ("x1", El), ("x2", El)],
            or([eq("x1", "x2"), bipartition_cut(Formula::False)]),
        ),
        "pathSurvivesVertexCut" => Definition::new(
            name,
            &[("Z", St), ("x1", El), ("x2", El), ("u", El)],
            and([
                neq("u", "x1"),
                neq("u", "x2"),
                or([eq("x1", "x2"), bipartition_cut(or([eq("p", "u"), eq("q", "u")]))]),
            ]),
        ),
        _ => {
            let (stem, i) = ["QAC", "Quartet", "Triplet", "TAC", "InCladeUnder", "Clade", "child", "Fitch"]
                .iter()
                .find_map(|s| tree_suffix(name, s).map(|i| (*s, i)))?;
            let vi = Sort::vertices_of(i);
            match stem {
                "QAC" => Definition::new(
                    name,
                    &[("xa", El), ("xb", El), ("xc", El), ("xd", El), ("K", St)],
                    embedding(i, "xd".into(), &pac, &|xd| pac("D", "v", xd)),
                ),
                "Quartet" => Definition::new(
                    name,
                    &[("xa", El), ("xb", El), ("xc", El), ("xd", El)],
                    embedding(i, "xd".into(), &path, &|xd| path("D", "v", xd)),
                ),
                "Triplet" => Definition::new(
                    name,
                    &[("xa", El), ("xb", El), ("xc", El)],
                    Formula::Call(
                        format!("Quartet{i}"),
                        vec!["xa".into(), "xb".into(), "xc".into(), Term::Rho],
                    ),
                ),
                "TAC" => Definition::new(
                    name,
                    &[("xa", El), ("xb", El), ("xc", El), ("K", St)],
                    and([
                        call(&format!("Triplet{i}"), ["xa", "xb", "xc"]),
                        embedding(i, Term::Rho, &pac, &|xd| path("D", "v", xd)),
                    ]),
                ),
                "InCladeUnder" => Definition::new(
                    name,
                    &[("u", El), ("x", El)],
                    or([
                        eq("u", "x"),
                        not(Formula::Call(
                            "pathSurvivesVertexCut".into(),
                            vec![Term::Sort(vi), Term::Rho, "x".into(), "u".into()],
                        )),
                    ]),
                ),
                "Clade" => Definition::new(
                    name,
                    &[("C", St)],
                    exists(
                        "u",
                        vi,
                        forall(
                            "x",
                            Sort::Taxa,
                            iff(mem("x", "C"), call(&format!("InCladeUnder{i}"), ["u", "x"])),
                        ),
                    ),
                ),
                "child" => Definition::new(
                    name,
                    &[("u", El), ("v", El)],
                    and([
                        neq("u", "v"),
                        exists(
                            "e",
                            Sort::edges_of(i),
                            and([
                                incident("e", "u"),
                                incident("e", "v"),
                                not(Formula::Call(
                                    "PACe".into(),
                                    vec![Term::Sort(vi), Term::Rho, "v".into(), "e".into()],
                                )),
                            ]),
                        ),
                    ]),
                ),
                "Fitch" => fitch_block(i),
                _ => return None,
            }
        }
    };
    Some(def)
}

/// Plain `CPS(C)` shares the definition of `CPS[0]`.
pub fn resolve_alias(name: &str) -> String {
    if name == "CPS" {
        "CPS[0]".to_string()
    } else {
        name.to_string()
    }
}

/// Names of the fixed (non-macro) definitions, for inspection.
pub const BASE_NAMES: &[&str] = &[
    "Union",
    "NoIntersect",
    "Intersect",
    "Bipartition",
    "allDiff3",
    "allDiff4",
    "adj",
    "PAC",
    "PACe",
    "path",
    "pathSurvivesVertexCut",
    "QAC1",
    "QAC2",
    "Quartet1",
    "Quartet2",
    "Triplet1",
    "Triplet2",
    "TAC1",
    "TAC2",
    "InCladeUnder1",
    "InCladeUnder2",
    "Clade1",
    "Clade2",
    "child1",
    "child2",
    "Fitch1",
    "Fitch2",
];

// ---------------------------------------------------------------------------
// compiled procedures

fn bit(x: u64, i: usize) -> bool {
    x >> i & 1 == 1
}

fn elem(x: u64) -> usize {
    x as usize
}

fn rho(s: &MsoStructure) -> Result<usize> {
    s.rho().ok_or_else(|| Error::Mso("the structure has no ρ".into()))
}

/// Whether `x2` is reachable from `x1` inside `z`, stepping between adjacent
/// vertices that are not joined by any edge of `k` and avoiding `avoid`.
fn reach(s: &MsoStructure, z: u64, x1: usize, x2: usize, k: u64, avoid: u64) -> bool {
    let z = z & !avoid & s.sort(Sort::Vertices);
    if !bit(z, x1) || !bit(z, x2) {
        return false;
    }
    let mut seen = 1u64 << x1;
    let mut stack = vec![x1];
    while let Some(p) = stack.pop() {
        if p == x2 {
            return true;
        }
        let mut nb = s.neighbors(p) & z & !seen;
        while nb != 0 {
            let q = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if s.edges_between(p, q) & k == 0 {
                seen |= 1 << q;
                stack.push(q);
            }
        }
    }
    false
}

fn compiled_pac(s: &MsoStructure, z: u64, x1: usize, x2: usize, k: u64) -> bool {
    x1 == x2 || !bit(z, x1) || !bit(z, x2) || reach(s, z, x1, x2, k, 0)
}

fn compiled_psvc(s: &MsoStructure, z: u64, x1: usize, x2: usize, u: usize) -> bool {
    u != x1 && u != x2 && (x1 == x2 || !bit(z, x1) || !bit(z, x2) || reach(s, z, x1, x2, 0, 1 << u))
}

/// Vertex set of the path from `a` to `b` inside `within`, if one exists.
fn path_set(s: &MsoStructure, within: u64, a: usize, b: usize) -> Option<u64> {
    if !bit(within, a) || !bit(within, b) {
        return None;
    }
    let mut prev = vec![usize::MAX; s.vertex_count()];
    prev[a] = a;
    let mut queue = std::collections::VecDeque::from([a]);
    while let Some(p) = queue.pop_front() {
        if p == b {
            break;
        }
        let mut nb = s.neighbors(p) & within;
        while nb != 0 {
            let q = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if prev[q] == usize::MAX {
                prev[q] = p;
                queue.push_back(q);
            }
        }
    }
    if prev[b] == usize::MAX {
        return None;
    }
    let mut mask = 1u64 << b;
    let mut x = b;
    while x != a {
        x = prev[x];
        mask |= 1 << x;
    }
    Some(mask)
}

/// Whether consecutive vertices of the path `a → b` inside `within` are never joined by an edge of `k`.
fn path_avoids(s: &MsoStructure, within: u64, a: usize, b: usize, k: u64) -> bool {
    match path_set(s, within, a, b) {
        Some(p) => reach(s, p, a, b, k, 0),
        None => false,
    }
}

/// Arms are `(set index, endpoint, taxon, cut set)`; `None` cut means a plain path.
/// In a tree the minimal arm sets are the tree paths themselves, so the
/// embedding exists iff the tree paths satisfy the intersection pattern.
fn compiled_embedding(s: &MsoStructure, i: usize, x: [usize; 4], cuts: [Option<u64>; 5]) -> bool {
    let vi = s.sort(Sort::vertices_of(i));
    if x.iter().any(|&t| !bit(vi, t)) {
        return false;
    }
    let verts: Vec<usize> = (0..s.vertex_count()).filter(|&v| bit(vi, v)).collect();
    for &u in &verts {
        for &v in &verts {
            if u == v {
                continue;
            }
            let ends = [(u, x[0]), (u, x[1]), (v, x[2]), (v, x[3]), (u, v)];
            let mut sets = [0u64; 5];
            let mut ok = true;
            for (j, &(a, b)) in ends.iter().enumerate() {
                match path_set(s, vi, a, b) {
                    Some(p) => sets[j] = p,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let [a, b, c, d, p] = sets;
            let (bu, bv) = (1u64 << u, 1u64 << v);
            if a & b != bu || a & p != bu || b & p != bu || c & d != bv || c & p != bv || d & p != bv {
                continue;
            }
            if a & c != 0 || b & c != 0 || a & d != 0 || b & d != 0 {
                continue;
            }
            if ends
                .iter()
                .zip(cuts)
                .all(|(&(from, to), k)| k.is_none_or(|k| path_avoids(s, vi, from, to, k)))
            {
                return true;
            }
        }
    }
    false
}

fn compiled_icu_mask(s: &MsoStructure, i: usize, u: usize) -> Result<u64> {
    let r = rho(s)?;
    let vi = s.sort(Sort::vertices_of(i));
    let taxa = s.sort(Sort::Taxa);
    let mut mask = 0;
    for x in 0..s.size() {
        if bit(taxa, x) && (u == x || !compiled_psvc(s, vi, r, x, u)) {
            mask |= 1 << x;
        }
    }
    Ok(mask)
}

fn compiled_clade(s: &MsoStructure, i: usize, c: u64, zs: &[u64], exact: bool) -> Result<bool> {
    if zs.iter().any(|z| c & z != 0) {
        return Ok(false);
    }
    let vi = s.sort(Sort::vertices_of(i));
    let cx = c & s.sort(Sort::Taxa);
    let allowed = zs.iter().fold(c, |acc, z| acc | z);
    for u in 0..s.vertex_count() {
        if !bit(vi, u) {
            continue;
        }
        let m = compiled_icu_mask(s, i, u)?;
        let hit = if exact { m == cx } else { cx & !m == 0 && m & !allowed == 0 };
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

fn compiled_triplet(s: &MsoStructure, i: usize, a: usize, b: usize, c: usize) -> Result<bool> {
    Ok(compiled_embedding(s, i, [a, b, c, rho(s)?], [None; 5]))
}

fn compiled_cps(s: &MsoStructure, c: u64, zs: &[u64], plain: bool) -> Result<bool> {
    for i in 1..=2 {
        if !compiled_clade(s, i, c, zs, plain)? {
            return Ok(false);
        }
    }
    let members: Vec<usize> = (0..s.size()).filter(|&x| bit(c, x)).collect();
    for &x in &members {
        for &y in &members {
            for &z in &members {
                if x != y && x != z && y != z && compiled_triplet(s, 1, x, y, z)? != compiled_triplet(s, 2, x, y, z)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn compiled_child(s: &MsoStructure, i: usize, u: usize, v: usize) -> Result<bool> {
    let r = rho(s)?;
    if u == v {
        return Ok(false);
    }
    let vi = s.sort(Sort::vertices_of(i));
    let ei = s.sort(Sort::edges_of(i));
    Ok((0..s.size())
        .filter(|&e| bit(ei, e) && s.incident(e, u) && s.incident(e, v))
        .any(|e| !compiled_pac(s, vi, r, v, 1 << e)))
}

/// Families that have a compiled procedure.
pub const COMPILED_FAMILIES: &[&str] = &[
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
    "QAC1",
    "QAC2",
    "Quartet1",
    "Quartet2",
    "Triplet1",
    "Triplet2",
    "TAC1",
    "TAC2",
    "InCladeUnder1",
    "InCladeUnder2",
    "Clade1",
    "Clade2",
    "CPS",
    "child1",
    "child2",
];

/// Runs the compiled procedure for `name`; `None` if there is none.
/// Element arguments are element ids, set arguments bitmasks.
pub fn run_compiled(s: &MsoStructure, name: &str, a: &[u64]) -> Option<Result<bool>> {
    let (base, param) = family(name);
    let tree = |stem: &str| tree_suffix(base, stem);
    let e = |j: usize| elem(a[j]);
    let r = match base {
        "Union" => Ok(a[1] | a[2] == a[0]),
        "NoIntersect" => Ok(a[0] & a[1] == 0),
        "Intersect" => Ok(a[0] & a[1] == 1 << e(2)),
        "Bipartition" => Ok(a[1] | a[2] == a[0] && a[1] & a[2] == 0),
        "allDiff3" => Ok(a[0] != a[1] && a[0] != a[2] && a[1] != a[2]),
        "allDiff4" => Ok((0..4).all(|i| (i + 1..4).all(|j| a[i] != a[j]))),
        "adj" => Ok(s.edges_between(e(0), e(1)) != 0),
        "Partition" => {
            param?;
            let cs = &a[1..];
            let disjoint = (0..cs.len()).all(|i| (i + 1..cs.len()).all(|j| cs[i] & cs[j] == 0));
            Ok(disjoint && cs.iter().fold(0, |x, c| x | c) == a[0])
        }
        "PAC" => Ok(compiled_pac(s, a[0], e(1), e(2), a[3])),
        "PACe" => Ok(compiled_pac(s, a[0], e(1), e(2), 1 << e(3))),
        "path" => Ok(compiled_pac(s, a[0], e(1), e(2), 0)),
        "pathSurvivesVertexCut" => Ok(compiled_psvc(s, a[0], e(1), e(2), e(3))),
        "CPS" => {
            let t = param.unwrap_or(0);
            compiled_cps(s, a[0], &a[1..=t], false)
        }
        _ => {
            if let Some(i) = tree("QAC") {
                let k = Some(a[4]);
                Ok(compiled_embedding(s, i, [e(0), e(1), e(2), e(3)], [k; 5]))
            } else if let Some(i) = tree("Quartet") {
                Ok(compiled_embedding(s, i, [e(0), e(1), e(2), e(3)], [None; 5]))
            } else if let Some(i) = tree("Triplet") {
                compiled_triplet(s, i, e(0), e(1), e(2))
            } else if let Some(i) = tree("TAC") {
                let k = Some(a[3]);
                let inner = |r| compiled_embedding(s, i, [e(0), e(1), e(2), r], [k, k, k, None, k]);
                rho(s).and_then(|r| Ok(compiled_triplet(s, i, e(0), e(1), e(2))? && inner(r)))
            } else if let Some(i) = tree("InCladeUnder") {
                rho(s).map(|r| e(0) == e(1) || !compiled_psvc(s, s.sort(Sort::vertices_of(i)), r, e(1), e(0)))
            } else if let Some(i) = tree("Clade") {
                match param {
                    None => compiled_clade(s, i, a[0], &[], true),
                    Some(t) => compiled_clade(s, i, a[0], &a[1..=t], false),
                }
            } else {
                let i = tree("child")?;
                compiled_child(s, i, e(0), e(1))
            }
        }
    };
    Some(r)
}

pub fn has_compiled(name: &str) -> bool {
    let (base, _) = family(name);
    COMPILED_FAMILIES.contains(&base)
}
