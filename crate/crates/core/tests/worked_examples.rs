use exfit_core::cqfit;
use exfit_core::homcore::{disjoint_union, hom_exists};
use exfit_core::oracle::{gen_fixture, FixtureFamily};
use exfit_core::treefit::{
    exists_most_specific_tree, exists_tree_fitting, max_simulation, search_tree_basis, TreeWitness,
};
use exfit_core::{Budget, LabeledExamples, PointedInstance, Schema, SearchOutcome};

fn instance(f: FixtureFamily) -> PointedInstance {
    gen_fixture(&f).unwrap().instance().unwrap()
}

fn unit(name: &str) -> LabeledExamples {
    gen_fixture(&FixtureFamily::Unit(name.into())).unwrap().examples().unwrap()
}

fn graph() -> Schema {
    Schema::new([("R", 2)])
}

fn pointed(e: &PointedInstance, at: &str) -> PointedInstance {
    e.with_distinguished(vec![at.to_string()])
}

#[test]
fn union_of_cliques_maps_where_both_do() {
    let b = Budget::default();
    let (k3, k4) = (instance(FixtureFamily::Clique(3)), instance(FixtureFamily::Clique(4)));
    let u = disjoint_union(&k3, &k4).unwrap();
    assert!(hom_exists(&u, &k4, &b).unwrap());
    assert!(!hom_exists(&u, &k3, &b).unwrap());
}

#[test]
fn odd_cycle_simulates_fully_into_two_cycle() {
    let b = Budget::default();
    let c3 = instance(FixtureFamily::DirectedCycle(3));
    let c2 = instance(FixtureFamily::DirectedCycle(2));
    let src = pointed(&c3, c3.values().into_iter().next().unwrap());
    let dst = pointed(&c2, c2.values().into_iter().next().unwrap());
    let rel = max_simulation(&src, &dst, &b).unwrap();
    assert_eq!(rel.len(), c3.num_values() * c2.num_values());
}

#[test]
fn tree_searches_stop_at_the_cap() {
    let b = Budget::default();
    let c3 = instance(FixtureFamily::DirectedCycle(3));
    let c2 = instance(FixtureFamily::DirectedCycle(2));
    let pos = pointed(&c3, c3.values().into_iter().next().unwrap());
    let neg = pointed(&c2, c2.values().into_iter().next().unwrap());
    let e = LabeledExamples::new(graph(), 1, vec![pos], vec![neg.clone()]).unwrap();
    assert!(matches!(exists_tree_fitting(&e, 8, &b).unwrap(), SearchOutcome::NotUpToCap { cap: 8, .. }));

    let e = LabeledExamples::new(graph(), 1, vec![neg], vec![]).unwrap();
    assert!(matches!(exists_most_specific_tree(&e, 8, &b).unwrap(), SearchOutcome::NotUpToCap { cap: 8, .. }));
}

#[test]
fn ternary_example_has_no_unique_fitting() {
    let b = Budget::default();
    let e = unit("ternary-most-specific");
    assert!(cqfit::construct_most_specific_cq(&e, &b).unwrap().is_found());
    assert_eq!(cqfit::exists_unique_cq(&e, &b).unwrap(), SearchOutcome::NotExists);
}

#[test]
fn lower_bound_family_has_a_full_binary_tree_witness() {
    let b = Budget::default();
    let e = gen_fixture(&FixtureFamily::TreeLowerBound(1)).unwrap().examples().unwrap();
    let SearchOutcome::Found(TreeWitness { query, .. }) = exists_tree_fitting(&e, 8, &b).unwrap() else {
        panic!("no fitting tree found")
    };
    let body = query.body();
    let count = |rel: &str| body.facts().iter().filter(|f| f.relation == rel).count();
    assert!(count("L") >= 1 && count("R") >= 1 && count("A") >= 2);
}

#[test]
fn tree_basis_search_without_a_basis_collects_criticals() {
    let b = Budget::default();
    let e = unit("tree-no-wmg");
    match search_tree_basis(&e, 6, &b).unwrap() {
        SearchOutcome::NotUpToCap { cap, partial } => {
            assert_eq!(cap, 6);
            assert!(partial.map_or(0, |p| p.len()) >= 3);
        }
        other => panic!("unexpected outcome {other:?}"),
    }
}
