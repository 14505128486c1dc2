use crate::error::{Error, Result};
use crate::model::{Fact, LabeledExamples, PointedInstance, Schema};

/// Parametrized families and named example collections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureFamily {
    DirectedCycle(usize),
    Clique(usize),
    /// Directed path with the given number of edges.
    DirectedPath(usize),
    TransitiveTournament(usize),
    /// Cycles of the first `n` primes: the first is negative, the rest positive.
    PrimeCycleExamples(usize),
    /// Family forcing large fitting tree queries over `{A, L, R}`.
    TreeLowerBound(usize),
    Unit(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    Instance(PointedInstance),
    Examples(LabeledExamples),
}

impl Fixture {
    pub fn instance(self) -> Option<PointedInstance> {
        match self {
            Fixture::Instance(e) => Some(e),
            Fixture::Examples(_) => None,
        }
    }

    pub fn examples(self) -> Option<LabeledExamples> {
        match self {
            Fixture::Examples(e) => Some(e),
            Fixture::Instance(_) => None,
        }
    }
}

/// Names accepted by [`FixtureFamily::Unit`].
pub const UNIT_EXAMPLES: &[&str] = &[
    "ternary-most-specific",
    "edge-basis",
    "two-unary-basis",
    "odd-cycle",
    "odd-cycle-unary",
    "unique-loop",
    "unary-ucq",
    "tree-selfloop",
    "tree-no-wmg",
    "tree-p-only",
    "path-tournament",
];

impl FixtureFamily {
    /// Parses `cycle:N`, `clique:N`, `path:N`, `tournament:N`,
    /// `prime-cycles:N`, `tree-lower-bound:N` or a unit example name.
    pub fn parse(name: &str) -> Result<FixtureFamily> {
        if let Some((family, n)) = name.split_once(':') {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad fixture size in {name:?}")))?;
            return match family {
                "cycle" => Ok(FixtureFamily::DirectedCycle(n)),
                "clique" => Ok(FixtureFamily::Clique(n)),
                "path" => Ok(FixtureFamily::DirectedPath(n)),
                "tournament" => Ok(FixtureFamily::TransitiveTournament(n)),
                "prime-cycles" => Ok(FixtureFamily::PrimeCycleExamples(n)),
                "tree-lower-bound" => Ok(FixtureFamily::TreeLowerBound(n)),
                _ => Err(Error::InvalidParameter(format!("unknown fixture family {family:?}"))),
            };
        }
        if UNIT_EXAMPLES.contains(&name) {
            Ok(FixtureFamily::Unit(name.to_string()))
        } else {
            Err(Error::InvalidParameter(format!("unknown fixture {name:?}")))
        }
    }
}

fn graph() -> Schema {
    Schema::new([("R", 2)])
}

fn boolean(schema: &Schema, facts: Vec<Fact>) -> PointedInstance {
    PointedInstance::new(schema.clone(), facts, Vec::<String>::new()).expect("fixture is well typed")
}

fn pointed(schema: &Schema, facts: &[(&str, &[&str])], dist: &[&str]) -> PointedInstance {
    PointedInstance::from_tuples(schema, facts, dist).expect("fixture is well typed")
}

fn edge(a: impl Into<String>, b: impl Into<String>) -> Fact {
    Fact::new("R", [a.into(), b.into()])
}

pub(crate) fn cycle(n: usize) -> PointedInstance {
    boolean(&graph(), (0..n).map(|i| edge(format!("c{i}"), format!("c{}", (i + 1) % n))).collect())
}

pub(crate) fn clique(n: usize) -> PointedInstance {
    let mut facts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                facts.push(edge(format!("k{i}"), format!("k{j}")));
            }
        }
    }
    boolean(&graph(), facts)
}

pub(crate) fn path(n: usize) -> PointedInstance {
    boolean(&graph(), (0..n).map(|i| edge(format!("p{i}"), format!("p{}", i + 1))).collect())
}

pub(crate) fn tournament(n: usize) -> PointedInstance {
    let mut facts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            facts.push(edge(format!("t{i}"), format!("t{j}")));
        }
    }
    boolean(&graph(), facts)
}

fn primes(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = 2;
    while out.len() < n {
        if (2..c).take_while(|d| d * d <= c).all(|d| c % d != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn examples(schema: Schema, arity: usize, pos: Vec<PointedInstance>, neg: Vec<PointedInstance>) -> LabeledExamples {
    LabeledExamples::new(schema, arity, pos, neg).expect("fixture examples are consistent")
}

fn lower_bound_cycle(j: usize) -> PointedInstance {
    let s = Schema::new([("A", 1), ("L", 2), ("R", 2)]);
    let mut facts = Vec::new();
    for k in 0..j {
        let next = (k + 1) % j;
        facts.push(Fact::new("R", [k.to_string(), next.to_string()]));
        facts.push(Fact::new("L", [k.to_string(), next.to_string()]));
    }
    facts.push(Fact::new("A", [(j - 1).to_string()]));
    PointedInstance::new(s, facts, ["0".to_string()]).expect("fixture is well typed")
}

fn lower_bound_trap() -> Vec<Fact> {
    let low = ["00", "01", "10"];
    let mut facts = Vec::new();
    for a in low {
        facts.push(Fact::new("R", ["00", a]));
        facts.push(Fact::new("L", ["00", a]));
        facts.push(Fact::new("R", ["10", a]));
        facts.push(Fact::new("L", ["01", a]));
        facts.push(Fact::new("R", ["b", a]));
        facts.push(Fact::new("L", ["b", a]));
    }
    facts.push(Fact::new("L", ["10", "11"]));
    facts.push(Fact::new("R", ["01", "11"]));
    for v in ["b", "11"] {
        facts.push(Fact::new("R", [v, v]));
        facts.push(Fact::new("L", [v, v]));
        facts.push(Fact::new("A", [v]));
    }
    facts
}

fn unit(name: &str) -> Result<LabeledExamples> {
    let rpq = Schema::new([("P", 1), ("Q", 1), ("R", 2)]);
    let rp = Schema::new([("P", 1), ("R", 2)]);
    let k2 = pointed(&rpq, &[("R", &["a", "b"]), ("R", &["b", "a"])], &[]);
    let ip = pointed(&rpq, &[("P", &["a"])], &[]);
    let iq = pointed(&rpq, &[("Q", &["a"])], &[]);
    let ipq = pointed(&rpq, &[("P", &["a"]), ("Q", &["a"])], &[]);
    Ok(match name {
        "ternary-most-specific" => {
            let s = Schema::new([("P", 1), ("R", 3)]);
            examples(
                s.clone(),
                0,
                vec![
                    pointed(&s, &[("R", &["a", "a", "b"]), ("P", &["a"])], &[]),
                    pointed(&s, &[("R", &["c", "d", "d"]), ("P", &["c"])], &[]),
                ],
                vec![pointed(&s, &[], &[])],
            )
        }
        "edge-basis" => examples(rpq, 0, vec![], vec![ipq]),
        "two-unary-basis" => examples(rpq, 0, vec![], vec![ip, iq]),
        "odd-cycle" => {
            let k2 = pointed(&graph(), &[("R", &["a", "b"]), ("R", &["b", "a"])], &[]);
            examples(graph(), 0, vec![], vec![k2])
        }
        "odd-cycle-unary" => examples(rpq, 0, vec![], vec![k2, ip, iq]),
        "unique-loop" => {
            let facts: &[(&str, &[&str])] = &[("R", &["a", "b"]), ("R", &["b", "a"]), ("R", &["b", "b"])];
            examples(graph(), 1, vec![pointed(&graph(), facts, &["b"])], vec![pointed(&graph(), facts, &["a"])])
        }
        "unary-ucq" => {
            let s = Schema::new([("P", 1), ("Q", 1), ("R", 1)]);
            examples(
                s.clone(),
                0,
                vec![
                    pointed(&s, &[("P", &["a"]), ("Q", &["a"])], &[]),
                    pointed(&s, &[("P", &["a"]), ("R", &["a"])], &[]),
                ],
                vec![
                    pointed(&s, &[("P", &["a"])], &[]),
                    pointed(&s, &[("Q", &["a"]), ("R", &["a"])], &[]),
                ],
            )
        }
        "tree-selfloop" => examples(graph(), 1, vec![pointed(&graph(), &[("R", &["a", "a"])], &["a"])], vec![]),
        "tree-no-wmg" => examples(
            rp.clone(),
            1,
            vec![],
            vec![
                pointed(&rp, &[("P", &["a0"])], &["a0"]),
                pointed(&rp, &[("R", &["a0", "a0"])], &["a0"]),
            ],
        ),
        "tree-p-only" => examples(rp.clone(), 1, vec![], vec![pointed(&rp, &[("P", &["a"])], &["a"])]),
        "path-tournament" => examples(graph(), 0, vec![path(3)], vec![tournament(3)]),
        other => return Err(Error::InvalidParameter(format!("unknown fixture {other:?}"))),
    })
}

pub fn gen_fixture(family: &FixtureFamily) -> Result<Fixture> {
    Ok(match family {
        FixtureFamily::DirectedCycle(n) => Fixture::Instance(cycle(*n)),
        FixtureFamily::Clique(n) => Fixture::Instance(clique(*n)),
        FixtureFamily::DirectedPath(n) => Fixture::Instance(path(*n)),
        FixtureFamily::TransitiveTournament(n) => Fixture::Instance(tournament(*n)),
        FixtureFamily::PrimeCycleExamples(n) => {
            if *n < 2 {
                return Err(Error::InvalidParameter("prime-cycles needs at least two primes".into()));
            }
            let ps = primes(*n);
            Fixture::Examples(examples(graph(), 0, ps[1..].iter().map(|&p| cycle(p)).collect(), vec![cycle(ps[0])]))
        }
        FixtureFamily::TreeLowerBound(n) => {
            if *n < 1 {
                return Err(Error::InvalidParameter("tree-lower-bound needs n >= 1".into()));
            }
            let s = Schema::new([("A", 1), ("L", 2), ("R", 2)]);
            let trap = lower_bound_trap();
            let negatives = ["00", "01", "10"]
                .iter()
                .map(|d| PointedInstance::new(s.clone(), trap.clone(), [d.to_string()]).expect("well typed"))
                .collect();
            Fixture::Examples(examples(s, 1, primes(*n).into_iter().map(lower_bound_cycle).collect(), negatives))
        }
        FixtureFamily::Unit(name) => Fixture::Examples(unit(name)?),
    })
}
