//! Index-based representation used by the search procedures.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::model::{Fact, PointedInstance, Schema};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Relation {
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
    pub set: HashSet<Vec<usize>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity,
            tuples: Vec::new(),
            set: HashSet::new(),
        }
    }

    pub fn insert(&mut self, t: Vec<usize>) -> bool {
        if self.set.insert(t.clone()) {
            self.tuples.push(t);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.set.contains(t)
    }
}

/// Values are `0..names.len()`; relations follow the schema order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Structure {
    pub names: Vec<String>,
    pub rels: Vec<Relation>,
    pub dist: Vec<usize>,
}

impl Structure {
    pub fn empty(schema: &Schema, n: usize, names: Vec<String>, dist: Vec<usize>) -> Self {
        debug_assert_eq!(names.len(), n);
        Structure {
            names,
            rels: schema.relations().map(|(_, a)| Relation::new(a)).collect(),
            dist,
        }
    }

    pub fn from_instance(e: &PointedInstance) -> Self {
        let names: Vec<String> = e.values().into_iter().map(str::to_string).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let schema = e.schema();
        let mut rels: Vec<Relation> = schema.relations().map(|(_, a)| Relation::new(a)).collect();
        for f in e.facts() {
            let r = schema.index_of(&f.relation).expect("facts are well typed");
            rels[r].insert(f.args.iter().map(|a| index[a.as_str()]).collect());
        }
        let dist = e.distinguished().iter().map(|d| index[d.as_str()]).collect();
        Structure { names, rels, dist }
    }

    pub fn to_instance(&self, schema: &Schema) -> PointedInstance {
        let rel_names: Vec<&str> = schema.relations().map(|(n, _)| n).collect();
        let mut facts = BTreeSet::new();
        for (r, rel) in self.rels.iter().enumerate() {
            for t in &rel.tuples {
                facts.insert(Fact {
                    relation: rel_names[r].to_string(),
                    args: t.iter().map(|&v| self.names[v].clone()).collect(),
                });
            }
        }
        let dist = self.dist.iter().map(|&d| self.names[d].clone()).collect();
        PointedInstance::from_parts(schema.clone(), facts, dist)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn num_facts(&self) -> usize {
        self.rels.iter().map(|r| r.tuples.len()).sum()
    }

    pub fn facts(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> + '_ {
        self.rels
            .iter()
            .enumerate()
            .flat_map(|(r, rel)| rel.tuples.iter().map(move |t| (r, t)))
    }

    pub fn in_adom(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        for (_, t) in self.facts() {
            for &v in t {
                seen[v] = true;
            }
        }
        seen
    }

    /// True when every distinguished value occurs in some fact.
    pub fn is_data_example(&self) -> bool {
        let seen = self.in_adom();
        self.dist.iter().all(|&d| seen[d])
    }

    pub fn is_distinguished(&self) -> Vec<bool> {
        let mut marks = vec![false; self.len()];
        for &d in &self.dist {
            marks[d] = true;
        }
        marks
    }

    /// Number of fact positions occupied by each value.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for (_, t) in self.facts() {
            for &v in t {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Keeps the marked values and the facts among them, renumbering densely.
    pub fn restrict(&self, keep: &[bool]) -> Structure {
        let mut map = vec![usize::MAX; self.len()];
        let mut names = Vec::new();
        for v in 0..self.len() {
            if keep[v] {
                map[v] = names.len();
                names.push(self.names[v].clone());
            }
        }
        let rels = self
            .rels
            .iter()
            .map(|rel| {
                let mut out = Relation::new(rel.arity);
                for t in &rel.tuples {
                    if t.iter().all(|&v| keep[v]) {
                        out.insert(t.iter().map(|&v| map[v]).collect());
                    }
                }
                out
            })
            .collect();
        let dist = self.dist.iter().map(|&d| map[d]).collect();
        Structure { names, rels, dist }
    }

    /// Image of a homomorphism into `self`'s own values: keeps only the
    /// facts hit by `h` and the values they use, plus the distinguished ones.
    pub fn image_of(&self, src: &Structure, h: &[usize]) -> Structure {
        let mut keep = vec![false; self.len()];
        let mut rels: Vec<Relation> = self.rels.iter().map(|r| Relation::new(r.arity)).collect();
        for (r, t) in src.facts() {
            let img: Vec<usize> = t.iter().map(|&v| h[v]).collect();
            for &v in &img {
                keep[v] = true;
            }
            rels[r].insert(img);
        }
        for &d in &self.dist {
            keep[d] = true;
        }
        let only_image = Structure {
            names: self.names.clone(),
            rels,
            dist: self.dist.clone(),
        };
        only_image.restrict(&keep)
    }

    /// Drops values that are neither in a fact nor distinguished.
    pub fn trim(&self) -> Structure {
        let mut keep = self.in_adom();
        for &d in &self.dist {
            keep[d] = true;
        }
        if keep.iter().all(|k| *k) {
            self.clone()
        } else {
            self.restrict(&keep)
        }
    }
}
