use std::io::Read;
use std::path::Path;

use exfit_core::cqfit::{self, FittingKind};
use exfit_core::frontier_duality::{self as fd, ConstructOptions, DualitySide};
use exfit_core::oracle::{gen_fixture, Fixture, FixtureFamily};
use exfit_core::treefit::{self, TreeWitness};
use exfit_core::ucqfit::{self, UcqKind};
use exfit_core::{
    canonical_cq, homcore, Budget, ConjunctiveQuery, Document, Error, Format, LabeledExamples, PointedInstance,
    SearchOutcome, UnionOfCQs,
};
use serde_json::Value;

use crate::config::Settings;
use crate::{Command, DualCommand, FitCommand, FitTarget, Kind, Lang};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_CAP: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    NotUpToCap(usize),
}

/// What is written to standard output.
pub enum Output {
    Document(Document),
    Json(Value),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Document(d) => d.render(format),
            Output::Json(v) => match format {
                Format::Compact => v.to_string(),
                Format::Pretty => serde_json::to_string_pretty(v).expect("json values serialize"),
            },
        }
    }
}

pub struct CommandResult {
    pub outcome: std::result::Result<Verdict, Error>,
    pub output: Option<Output>,
    pub diagnostics: String,
}

impl CommandResult {
    fn verdict(verdict: Verdict) -> Self {
        CommandResult {
            outcome: Ok(verdict),
            output: None,
            diagnostics: String::new(),
        }
    }

    fn yes(output: Output) -> Self {
        CommandResult {
            outcome: Ok(Verdict::Yes),
            output: Some(output),
            diagnostics: String::new(),
        }
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.diagnostics = text.into();
        self
    }

    pub fn exit_code(&self) -> u8 {
        match &self.outcome {
            Ok(Verdict::Yes) => EXIT_YES,
            Ok(Verdict::No) => EXIT_NO,
            Ok(Verdict::NotUpToCap(_)) => EXIT_CAP,
            Err(Error::BudgetExceeded(_)) => EXIT_BUDGET,
            Err(Error::CapTooSmall(_)) => EXIT_CAP,
            Err(_) => EXIT_INPUT,
        }
    }
}

type Result<T> = std::result::Result<T, Error>;

pub fn execute(command: &Command, settings: &Settings) -> CommandResult {
    let budget = Budget::new(settings.budget);
    let mut result = match dispatch(command, settings.cap, &budget) {
        Ok(r) => r,
        Err(e) => CommandResult {
            diagnostics: format!("error: {e}"),
            outcome: Err(e),
            output: None,
        },
    };
    if result.diagnostics.is_empty() {
        if let Ok(v) = result.outcome {
            result.diagnostics = match v {
                Verdict::Yes => "yes".into(),
                Verdict::No => "no".into(),
                Verdict::NotUpToCap(cap) => format!("not up to cap {cap}"),
            };
        }
    }
    result
}

fn dispatch(command: &Command, cap: usize, budget: &Budget) -> Result<CommandResult> {
    match command {
        Command::Hom { src, dst } => {
            let (a, b) = (instance(src)?, instance(dst)?);
            Ok(match homcore::find_homomorphism(&a, &b, budget)? {
                Some(h) => CommandResult::yes(Output::Json(serde_json::to_value(h).expect("maps serialize"))),
                None => CommandResult::verdict(Verdict::No),
            })
        }
        Command::Core { file } => {
            let e = instance(file)?;
            Ok(CommandResult::yes(Output::Document(Document::Instance(homcore::compute_core(&e, budget)?))))
        }
        Command::Product { files } => {
            let es = files.iter().map(|f| instance(f)).collect::<Result<Vec<_>>>()?;
            let p = homcore::direct_product(es[0].schema(), es[0].arity(), &es)?;
            Ok(CommandResult::yes(Output::Document(Document::Instance(p))))
        }
        Command::Union { left, right } => {
            let u = homcore::disjoint_union(&instance(left)?, &instance(right)?)?;
            Ok(CommandResult::yes(Output::Document(Document::Instance(u))))
        }
        Command::Cacyclic { file } => Ok(CommandResult::verdict(yes_no(fd::is_c_acyclic(&instance(file)?)))),
        Command::Frontier { file, lang } => {
            let q = query(file)?;
            let members = match lang {
                Lang::Tree => treefit::tree_frontier(&q),
                _ => fd::frontier(&q, budget),
            };
            match members {
                Ok(f) => {
                    let n = f.len();
                    Ok(CommandResult::yes(list(f.members.into_iter().map(Document::Cq))).note(format!("yes: {n} members")))
                }
                Err(Error::FrontierNotExists) => {
                    Ok(CommandResult::verdict(Verdict::No).note("no: the core of the query is not c-acyclic"))
                }
                Err(e) => Err(e),
            }
        }
        Command::Dual(d) => dual(d, cap, budget),
        Command::Fit(f) => fit(f, cap, budget),
        Command::Sim { src, dst } => {
            let (a, b) = (instance(src)?, instance(dst)?);
            let rel = treefit::max_simulation(&a, &b, budget)?;
            let pairs = Value::Array(
                rel.pairs
                    .iter()
                    .map(|(u, w)| Value::Array(vec![Value::String(u.clone()), Value::String(w.clone())]))
                    .collect(),
            );
            let verdict = yes_no(treefit::simulates(&a, &b, budget)?);
            Ok(CommandResult {
                outcome: Ok(verdict),
                output: Some(Output::Json(pairs)),
                diagnostics: String::new(),
            })
        }
        Command::Unravel { file, depth } => {
            let u = treefit::unravel(&instance(file)?, *depth)?;
            Ok(CommandResult::yes(Output::Document(Document::Instance(u))))
        }
        Command::Fixture { name } => {
            let doc = match gen_fixture(&FixtureFamily::parse(name)?)? {
                Fixture::Instance(e) => Document::Instance(e),
                Fixture::Examples(e) => Document::Examples(e),
            };
            Ok(CommandResult::yes(Output::Document(doc)))
        }
    }
}

fn dual(command: &DualCommand, cap: usize, budget: &Budget) -> Result<CommandResult> {
    match command {
        DualCommand::Single { file } => {
            let d = fd::single_obstruction_dual(&instance(file)?, budget)?;
            Ok(CommandResult::yes(list(d.into_examples().into_iter().map(Document::Instance))))
        }
        DualCommand::Check { f, d } => {
            let (fs, ds) = (instances(f)?, instances(d)?);
            let first = fs.first().or(ds.first()).ok_or_else(|| {
                Error::InvalidParameter("cannot infer schema and arity from two empty lists".into())
            })?;
            let (schema, arity) = (first.schema().clone(), first.arity());
            let f = DualitySide::new(schema.clone(), arity, fs)?;
            let d = DualitySide::new(schema, arity, ds)?;
            Ok(CommandResult::verdict(yes_no(fd::check_hom_duality(&f, &d, budget)?)))
        }
        DualCommand::RelativeExists { d, p } => {
            let (d, p) = side_and_instance(d, p)?;
            Ok(CommandResult::verdict(yes_no(fd::relativized_duality_exists(&d, &p, budget)?)))
        }
        DualCommand::RelativeConstruct { d, p } => {
            let (d, p) = side_and_instance(d, p)?;
            if !fd::relativized_duality_exists(&d, &p, budget)? {
                return Ok(CommandResult::verdict(Verdict::No));
            }
            match fd::relativized_duality_construct(&d, &p, ConstructOptions::new(cap), budget) {
                Ok(f) => Ok(CommandResult::yes(list(f.into_examples().into_iter().map(Document::Instance)))),
                Err(Error::CapTooSmall(c)) => Ok(CommandResult::verdict(Verdict::NotUpToCap(c))),
                Err(e) => Err(e),
            }
        }
    }
}

fn side_and_instance(d: &Path, p: &Path) -> Result<(DualitySide, PointedInstance)> {
    let p = instance(p)?;
    let d = DualitySide::new(p.schema().clone(), p.arity(), instances(d)?)?;
    Ok((d, p))
}

fn fit(command: &FitCommand, cap: usize, budget: &Budget) -> Result<CommandResult> {
    match command {
        FitCommand::Verify { target, query } => verify(target, query, budget),
        FitCommand::Exists { target } => search(target, false, cap, budget),
        FitCommand::Construct { target } => search(target, true, cap, budget),
    }
}

fn cq_kind(kind: Kind) -> Option<FittingKind> {
    match kind {
        Kind::Any => Some(FittingKind::Any),
        Kind::MostSpecific => Some(FittingKind::MostSpecific),
        Kind::WeaklyMostGeneral => Some(FittingKind::WeaklyMostGeneral),
        Kind::Unique => Some(FittingKind::Unique),
        Kind::Basis | Kind::MostGeneral => None,
    }
}

fn unsupported(lang: &str, kind: &str) -> Error {
    Error::InvalidParameter(format!("--kind {kind} is not available for --lang {lang}"))
}

fn verify(target: &FitTarget, q: &Path, budget: &Budget) -> Result<CommandResult> {
    let e = examples(&target.examples)?;
    let ok = match target.lang {
        Lang::Cq => match cq_kind(target.kind) {
            Some(k) => cqfit::verify_extremal_cq(k, &query(q)?, &e, budget)?,
            // A single most-general fitting is a one-member basis.
            None if target.kind == Kind::MostGeneral => cqfit::verify_basis_cq(&[query(q)?], &e, budget)?,
            None => cqfit::verify_basis_cq(&queries(q)?, &e, budget)?,
        },
        Lang::Tree => match cq_kind(target.kind) {
            Some(k) => treefit::verify_tree_fitting(k, &query(q)?, &e, budget)?,
            None if target.kind == Kind::MostGeneral => return Err(unsupported("tree", "most-general")),
            None => treefit::verify_tree_basis(&queries(q)?, &e, budget)?,
        },
        Lang::Ucq => {
            let k = match target.kind {
                Kind::Any => UcqKind::Any,
                Kind::MostSpecific => UcqKind::MostSpecific,
                Kind::WeaklyMostGeneral | Kind::MostGeneral | Kind::Basis => UcqKind::MostGeneral,
                Kind::Unique => UcqKind::Unique,
            };
            ucqfit::verify_extremal_ucq(k, &union(q)?, &e, budget)?
        }
    };
    Ok(CommandResult::verdict(yes_no(ok)))
}

fn search(target: &FitTarget, construct: bool, cap: usize, budget: &Budget) -> Result<CommandResult> {
    let e = examples(&target.examples)?;
    match target.lang {
        Lang::Cq => search_cq(target.kind, &e, construct, cap, budget),
        Lang::Ucq => search_ucq(target.kind, &e, cap, budget),
        Lang::Tree => search_tree(target.kind, &e, cap, budget),
    }
}

fn search_cq(kind: Kind, e: &LabeledExamples, construct: bool, cap: usize, budget: &Budget) -> Result<CommandResult> {
    let outcome = match kind {
        Kind::Any => cqfit::exists_fitting_cq(e, budget)?,
        Kind::MostSpecific => cqfit::construct_most_specific_cq(e, budget)?,
        Kind::Unique => cqfit::exists_unique_cq(e, budget)?,
        Kind::WeaklyMostGeneral => cqfit::search_weakly_most_general_cq(e, cap, budget)?,
        Kind::Basis if !construct => {
            return Ok(CommandResult::verdict(yes_no(cqfit::exists_basis_cq(e, budget)?)));
        }
        Kind::Basis => return Ok(queries_outcome(cqfit::construct_basis_cq(e, cap, budget)?)),
        Kind::MostGeneral => {
            if !cqfit::exists_basis_cq(e, budget)? {
                return Ok(CommandResult::verdict(Verdict::No));
            }
            // Minimal bases are unique up to equivalence, so a most-general
            // fitting exists iff the basis has a single member.
            match cqfit::construct_basis_cq(e, cap, budget)? {
                SearchOutcome::Found(mut qs) if qs.len() == 1 => SearchOutcome::Found(qs.remove(0)),
                SearchOutcome::Found(qs) => {
                    return Ok(CommandResult::verdict(Verdict::No)
                        .note(format!("no: the basis has {} incomparable members", qs.len())));
                }
                SearchOutcome::NotExists => SearchOutcome::NotExists,
                SearchOutcome::NotUpToCap { cap, .. } => SearchOutcome::NotUpToCap { cap, partial: None },
            }
        }
    };
    Ok(query_outcome(outcome))
}

fn search_ucq(kind: Kind, e: &LabeledExamples, cap: usize, budget: &Budget) -> Result<CommandResult> {
    let outcome = match kind {
        Kind::Any | Kind::MostSpecific => ucqfit::construct_most_specific_ucq(e, budget)?,
        Kind::WeaklyMostGeneral | Kind::MostGeneral | Kind::Basis => {
            ucqfit::construct_most_general_ucq(e, cap, budget)?
        }
        Kind::Unique => match ucqfit::construct_most_specific_ucq(e, budget)? {
            SearchOutcome::Found(u) => {
                if ucqfit::verify_extremal_ucq(UcqKind::Unique, &u, e, budget)? {
                    SearchOutcome::Found(u)
                } else {
                    SearchOutcome::NotExists
                }
            }
            other => other,
        },
    };
    Ok(match outcome {
        SearchOutcome::Found(u) => CommandResult::yes(Output::Document(Document::Ucq(u))),
        other => not_found(&other),
    })
}

fn search_tree(kind: Kind, e: &LabeledExamples, cap: usize, budget: &Budget) -> Result<CommandResult> {
    let witness = |o: SearchOutcome<TreeWitness>| match o {
        SearchOutcome::Found(w) => {
            CommandResult::yes(Output::Document(Document::Cq(w.query))).note(format!("yes: unraveling depth {}", w.depth))
        }
        other => not_found(&other),
    };
    match kind {
        Kind::Any => Ok(witness(treefit::exists_tree_fitting(e, cap, budget)?)),
        Kind::MostSpecific => Ok(witness(treefit::exists_most_specific_tree(e, cap, budget)?)),
        Kind::Unique => match treefit::exists_most_specific_tree(e, cap, budget)? {
            SearchOutcome::Found(w) => {
                if treefit::verify_tree_fitting(FittingKind::Unique, &w.query, e, budget)? {
                    Ok(witness(SearchOutcome::Found(w)))
                } else {
                    Ok(CommandResult::verdict(Verdict::No))
                }
            }
            other => Ok(witness(other)),
        },
        Kind::WeaklyMostGeneral => Ok(query_outcome(treefit::search_weakly_most_general_tree(e, cap, budget)?)),
        Kind::Basis => Ok(queries_outcome(treefit::search_tree_basis(e, cap, budget)?)),
        Kind::MostGeneral => Err(unsupported("tree", "most-general")),
    }
}

fn query_outcome(o: SearchOutcome<ConjunctiveQuery>) -> CommandResult {
    match o {
        SearchOutcome::Found(q) => CommandResult::yes(Output::Document(Document::Cq(q))),
        other => not_found(&other),
    }
}

fn queries_outcome(o: SearchOutcome<Vec<ConjunctiveQuery>>) -> CommandResult {
    match o {
        SearchOutcome::Found(qs) => {
            let n = qs.len();
            CommandResult::yes(list(qs.into_iter().map(Document::Cq))).note(format!("yes: {n} members"))
        }
        other => not_found(&other),
    }
}

fn not_found<W>(o: &SearchOutcome<W>) -> CommandResult {
    match o {
        SearchOutcome::NotUpToCap { cap, .. } => CommandResult::verdict(Verdict::NotUpToCap(*cap)),
        _ => CommandResult::verdict(Verdict::No),
    }
}

fn yes_no(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn list(docs: impl Iterator<Item = Document>) -> Output {
    Output::Document(Document::List(docs.collect()))
}

fn load(path: &Path) -> Result<Document> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Document(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?
    };
    Document::parse(&text).map_err(|e| match e {
        Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn wrong_kind(path: &Path, expected: &str) -> Error {
    Error::Document(format!("{}: expected {expected}", path.display()))
}

/// An instance, or the canonical instance of a query.
fn instance(path: &Path) -> Result<PointedInstance> {
    to_instance(load(path)?, path)
}

fn to_instance(doc: Document, path: &Path) -> Result<PointedInstance> {
    match doc {
        Document::Instance(e) => Ok(e),
        Document::Cq(q) => Ok(q.into_body()),
        _ => Err(wrong_kind(path, "an instance or a cq")),
    }
}

/// A list of instances, or a single one.
fn instances(path: &Path) -> Result<Vec<PointedInstance>> {
    match load(path)? {
        Document::List(items) => items.into_iter().map(|d| to_instance(d, path)).collect(),
        doc => Ok(vec![to_instance(doc, path)?]),
    }
}

fn to_query(doc: Document, path: &Path) -> Result<ConjunctiveQuery> {
    match doc {
        Document::Cq(q) => ConjunctiveQuery::new(q.into_body()),
        Document::Instance(e) => canonical_cq(&e),
        _ => Err(wrong_kind(path, "a cq")),
    }
}

fn query(path: &Path) -> Result<ConjunctiveQuery> {
    to_query(load(path)?, path)
}

/// A list of queries, or a single one.
fn queries(path: &Path) -> Result<Vec<ConjunctiveQuery>> {
    match load(path)? {
        Document::List(items) => items.into_iter().map(|d| to_query(d, path)).collect(),
        doc => Ok(vec![to_query(doc, path)?]),
    }
}

fn union(path: &Path) -> Result<UnionOfCQs> {
    match load(path)? {
        Document::Ucq(u) => Ok(u),
        doc => UnionOfCQs::new(vec![to_query(doc, path)?]),
    }
}

fn examples(path: &Path) -> Result<LabeledExamples> {
    match load(path)? {
        Document::Examples(e) => Ok(e),
        _ => Err(wrong_kind(path, "an examples document")),
    }
}
